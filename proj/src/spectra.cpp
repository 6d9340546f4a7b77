#include "qk/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "qk/errors.hpp"

namespace qk {

namespace {

using cd = std::complex<double>;

std::array<cd, 6> phi_spectrum(const HMat3& A) {
    Eigen::ComplexEigenSolver<Mat6c> es(phi_embed(A), /*computeEigenvectors=*/false);
    std::array<cd, 6> ev;
    for (int i = 0; i < 6; ++i) ev[static_cast<size_t>(i)] = es.eigenvalues()(i);

    // Computed eigenvalues of a defective block scatter like eps^(1/k) around
    // the true value, far beyond the pairing tolerance. The scatter of a
    // Jordan cloud cancels to first order, so collapsing near-coincident
    // eigenvalues (single linkage, 1e-4 relative) onto their centroid
    // restores the accuracy the pairing needs. Distinct classes of the
    // canonical families sit orders of magnitude farther apart.
    double scale = 0.0;
    for (const auto& e : ev) scale = std::max(scale, std::abs(e));
    const double radius = 1e-4 * std::max(scale, 1e-300);
    std::array<int, 6> group{};
    for (int i = 0; i < 6; ++i) group[static_cast<size_t>(i)] = i;
    auto root = [&](int i) {
        while (group[static_cast<size_t>(i)] != i) i = group[static_cast<size_t>(i)];
        return i;
    };
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            if (std::abs(ev[static_cast<size_t>(i)] - ev[static_cast<size_t>(j)]) <= radius)
                group[static_cast<size_t>(root(j))] = root(i);
    std::array<cd, 6> sum{};
    std::array<int, 6> count{};
    for (int i = 0; i < 6; ++i) {
        const int r = root(i);
        sum[static_cast<size_t>(r)] += ev[static_cast<size_t>(i)];
        count[static_cast<size_t>(r)] += 1;
    }
    for (int i = 0; i < 6; ++i) {
        const int r = root(i);
        ev[static_cast<size_t>(i)] = sum[static_cast<size_t>(r)] / static_cast<double>(count[static_cast<size_t>(r)]);
    }
    return ev;
}

/// Rank of M against an absolute threshold. The caller supplies the scale the
/// threshold is relative to: the power (phi(A) - lambda I)^k is judged against
/// scale^k of the base matrix, so that a numerically vanishing power reads as
/// rank zero instead of full-rank noise.
int svd_rank(const Mat6c& M, double threshold, const cd& lambda, int k) {
    Eigen::JacobiSVD<Mat6c> svd(M);
    const auto& sv = svd.singularValues();
    constexpr double band = 8.0;  // ambiguity band around the threshold
    int r = 0;
    for (int i = 0; i < 6; ++i) {
        if (sv(i) > threshold / band && sv(i) < threshold * band) {
            std::ostringstream os;
            os << "ambiguous rank: singular value " << sv(i) << " within the tolerance band at lambda="
               << lambda << ", power k=" << k;
            throw DiagnosticError(os.str(), sv(i));
        }
        if (sv(i) > threshold) ++r;
    }
    return r;
}

bool class_is_real(const EigenClass& c, double tol) {
    return c.representative.imag() <= tol * (1.0 + c.modulus);
}

/// Complex kernel basis of (phi(A) - lambda I), pulled back to H^3.
std::vector<HVec3> eigenspace_basis(const Mat6c& P, const cd& lambda, double rank_tol) {
    Mat6c M = P - lambda * Mat6c::Identity();
    Eigen::JacobiSVD<Mat6c> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = std::max(sv(0), 1e-300);
    std::vector<HVec3> out;
    for (int i = 0; i < 6; ++i)
        if (sv(i) <= rank_tol * scale) out.push_back(chi_pullback(svd.matrixV().col(i)));
    if (out.empty()) {
        // lambda came from a computed spectrum, so the least singular direction
        // is the eigenvector even if it sits above the relative threshold.
        out.push_back(chi_pullback(svd.matrixV().col(5)));
    }
    return out;
}

} // namespace

int JordanStructure::total_size() const {
    int t = 0;
    for (const auto& b : blocks) t += b.size;
    return t;
}

std::vector<EigenClass> eigen_classes(const HMat3& A, double pair_tol, double merge_tol) {
    auto ev = phi_spectrum(A);
    double scale = 0.0;
    for (const auto& e : ev) scale = std::max(scale, std::abs(e));
    scale = std::max(scale, 1.0);

    // Greedy conjugate pairing: nearest conjugate wins; anything farther than
    // pair_tol aborts rather than guessing.
    std::array<bool, 6> used{};
    std::vector<cd> reps;
    for (int i = 0; i < 6; ++i) {
        if (used[static_cast<size_t>(i)]) continue;
        used[static_cast<size_t>(i)] = true;
        int best = -1;
        double best_d = 0.0;
        for (int m = i + 1; m < 6; ++m) {
            if (used[static_cast<size_t>(m)]) continue;
            const double d = std::abs(std::conj(ev[static_cast<size_t>(i)]) - ev[static_cast<size_t>(m)]);
            if (best < 0 || d < best_d) {
                best = m;
                best_d = d;
            }
        }
        if (best < 0 || best_d > pair_tol * scale) {
            std::ostringstream os;
            os << "conjugate pairing of the adjoint spectrum failed at " << ev[static_cast<size_t>(i)]
               << " (best mismatch " << best_d << ")";
            throw InternalError(os.str());
        }
        used[static_cast<size_t>(best)] = true;
        const cd a = ev[static_cast<size_t>(i)];
        const cd b = ev[static_cast<size_t>(best)];
        reps.push_back(a.imag() >= b.imag() ? a : b);
    }

    // Merge equal representatives.
    std::vector<EigenClass> classes;
    for (const cd& r : reps) {
        bool merged = false;
        for (auto& c : classes) {
            if (std::abs(c.representative - r) <= merge_tol * (1.0 + std::abs(r))) {
                // running centroid keeps merging order-independent enough
                c.representative =
                    (c.representative * static_cast<double>(c.multiplicity) + r) /
                    static_cast<double>(c.multiplicity + 1);
                c.multiplicity += 1;
                merged = true;
                break;
            }
        }
        if (!merged) classes.push_back({r, 0.0, 0.0, 1});
    }
    int total = 0;
    for (auto& c : classes) {
        if (c.representative.imag() < 0.0)  // centroid may dip below zero for real classes
            c.representative = cd(c.representative.real(), 0.0);
        c.modulus = std::abs(c.representative);
        c.argument = std::arg(c.representative);
        total += c.multiplicity;
    }
    if (total != 3) throw InternalError("eigen_classes: total multiplicity is not 3");

    std::sort(classes.begin(), classes.end(), [](const EigenClass& a, const EigenClass& b) {
        if (a.modulus != b.modulus) return a.modulus < b.modulus;
        return a.argument < b.argument;
    });
    return classes;
}

JordanStructure jordan_structure(const HMat3& A, double rank_tol) {
    const auto classes = eigen_classes(A);
    const Mat6c P = phi_embed(A);
    JordanStructure js;
    const double scale_A = std::max(phi_embed(A).cwiseAbs().maxCoeff(), 1e-300);
    for (const auto& c : classes) {
        const int m = c.multiplicity;
        const Mat6c M = P - c.representative * Mat6c::Identity();
        // scale for the k-th power: sigma_max(M)^k, floored so that an exactly
        // repeated eigenvalue (M numerically zero) still reads rank zero
        const double s1 = Eigen::JacobiSVD<Mat6c>(M).singularValues()(0);
        const double base = std::max(s1, 1e-3 * (scale_A + c.modulus));
        std::vector<int> ranks{6};
        Mat6c Pk = Mat6c::Identity();
        double scale_k = 1.0;
        for (int k = 1; k <= m; ++k) {
            Pk = Pk * M;
            scale_k *= base;
            ranks.push_back(svd_rank(Pk, rank_tol * scale_k, c.representative, k));
        }
        // blocks of size >= k on the complex side: rank difference
        std::vector<int> at_least(static_cast<size_t>(m) + 2, 0);
        for (int k = 1; k <= m; ++k)
            at_least[static_cast<size_t>(k)] =
                ranks[static_cast<size_t>(k - 1)] - ranks[static_cast<size_t>(k)];
        const bool real_class = class_is_real(c, 1e-9);
        for (int k = 1; k <= m; ++k) {
            int count = at_least[static_cast<size_t>(k)] - at_least[static_cast<size_t>(k + 1)];
            if (real_class) {
                if (count % 2 != 0) {
                    std::ostringstream os;
                    os << "odd complex block count at real class " << c.representative
                       << ", size " << k;
                    throw DiagnosticError(os.str(), count);
                }
                count /= 2;
            }
            for (int n = 0; n < count; ++n) js.blocks.push_back({c.representative, k});
        }
    }
    if (js.total_size() != 3) throw InternalError("jordan_structure: block sizes do not sum to 3");
    std::sort(js.blocks.begin(), js.blocks.end(), [](const JordanBlock& a, const JordanBlock& b) {
        if (a.size != b.size) return a.size > b.size;
        return std::abs(a.representative) < std::abs(b.representative);
    });
    return js;
}

FixedSet fixed_points(const HMat3& A, double tol) {
    const auto classes = eigen_classes(A);
    const Mat6c P = phi_embed(A);
    FixedSet fs;
    for (const auto& c : classes) {
        auto cbasis = eigenspace_basis(P, c.representative, tol);
        if (class_is_real(c, 1e-9)) {
            auto hbasis = h_gram_schmidt(cbasis, 1e-6);
            switch (hbasis.size()) {
                case 1: fs.points.emplace_back(hbasis[0]); break;
                case 2: fs.lines.push_back(line_through(ProjPoint(hbasis[0]), ProjPoint(hbasis[1]))); break;
                case 3: fs.whole_space = true; break;
                default: break;
            }
        } else {
            // the complex kernel basis is exactly the eigenvector set for this
            // representative: complex combinations only
            switch (cbasis.size()) {
                case 1: fs.points.emplace_back(cbasis[0]); break;
                case 2: fs.complex_lines.push_back({ProjPoint(cbasis[0]), ProjPoint(cbasis[1])}); break;
                case 3: fs.complex_plane = true; break;
                default: break;
            }
        }
    }
    return fs;
}

bool is_proximal(const HMat3& A, double mod_tol) {
    const auto classes = eigen_classes(A);
    double maxmod = 0.0;
    for (const auto& c : classes) maxmod = std::max(maxmod, c.modulus);
    int at_max = 0;
    int mult = 0;
    for (const auto& c : classes) {
        if (c.modulus >= maxmod * (1.0 - mod_tol)) {
            ++at_max;
            mult = c.multiplicity;
        }
    }
    return at_max == 1 && mult == 1;
}

ProjPoint attracting_fixed_point(const HMat3& A, double mod_tol) {
    const auto classes = eigen_classes(A);
    double maxmod = 0.0;
    for (const auto& c : classes) maxmod = std::max(maxmod, c.modulus);
    const EigenClass* dominant = nullptr;
    int at_max = 0;
    bool has_gap = false;
    for (const auto& c : classes) {
        if (c.modulus >= maxmod * (1.0 - mod_tol)) {
            ++at_max;
            dominant = &c;
        } else {
            has_gap = true;
        }
    }
    if (at_max != 1 || !has_gap || dominant == nullptr)
        throw DomainError("attracting_fixed_point: no strictly dominant eigenvalue class");
    auto basis = eigenspace_basis(phi_embed(A), dominant->representative, 1e-8);
    auto hbasis = h_gram_schmidt(basis, 1e-6);
    if (hbasis.size() != 1)
        throw DomainError("attracting_fixed_point: dominant eigenspace is not a single direction");
    return ProjPoint(hbasis.front());
}

} // namespace qk
