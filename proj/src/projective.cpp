#include "qk/projective.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "qk/errors.hpp"

namespace qk {

namespace {

constexpr double kCanonRel = 1e-12;   // relative cutoff for "first nonzero"
constexpr double kKernelRel = 1e-12;  // image-vanishing threshold in apply()

HVec3 canonicalize(const HVec3& v) {
    double maxmod = 0.0;
    for (int i = 0; i < 3; ++i) maxmod = std::max(maxmod, v[i].norm());
    if (!(maxmod > 1e-300)) throw DomainError("projective point from (near) zero vector");
    int lead = 0;
    while (v[lead].norm() < kCanonRel * maxmod) ++lead;
    HVec3 u = v.scaled_right(inverse(v[lead]));
    u[lead] = Quaternion::real(1.0);  // exact by construction
    return u.scaled(1.0 / u.norm());
}

// chi embedding of the map n -> (<p,n>, <q,n>) as a 4x6 complex matrix. The
// rows are the conjugated coordinates of p and q; the kernel is the polar
// direction (p,q independent) as a j-invariant complex subspace.
Eigen::Matrix<std::complex<double>, 4, 6> incidence_embed(const HVec3& p, const HVec3& q) {
    Eigen::Matrix<std::complex<double>, 4, 6> M;
    const HVec3 rows[2] = {p, q};
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 3; ++c) {
            auto [a1, a2] = complex_split(conj(rows[r][c]));
            M(r, c) = a1;
            M(r, c + 3) = a2;
            M(r + 2, c) = -std::conj(a2);
            M(r + 2, c + 3) = std::conj(a1);
        }
    return M;
}

} // namespace

ProjPoint::ProjPoint(const HVec3& v) : rep_(canonicalize(v)) {}

namespace {
bool lex_after(const HVec3& a, const HVec3& b) {
    for (int i = 0; i < 3; ++i) {
        const std::array<double, 4> x{a[i].w, a[i].x, a[i].y, a[i].z};
        const std::array<double, 4> y{b[i].w, b[i].x, b[i].y, b[i].z};
        for (int c = 0; c < 4; ++c)
            if (x[static_cast<size_t>(c)] != y[static_cast<size_t>(c)])
                return x[static_cast<size_t>(c)] > y[static_cast<size_t>(c)];
    }
    return false;
}
} // namespace

double chordal_dist(const ProjPoint& p, const ProjPoint& q) {
    // sqrt(1 - |<p,q>|^2) evaluated as the projection residual |q - p <p,q>|,
    // which is the same number without the cancellation floor near zero.
    // Arguments are ordered first so symmetry is exact.
    const HVec3* a = &p.canonical();
    const HVec3* b = &q.canonical();
    if (lex_after(*a, *b)) std::swap(a, b);
    const HVec3 r = *b - a->scaled_right(herm(*a, *b));
    return std::min(1.0, r.norm());
}

ProjLine::ProjLine(const ProjPoint& p, const ProjPoint& q)
    : polar_(ProjPoint::basis(0)), span_{p, q} {
    auto basis = h_gram_schmidt({p.canonical(), q.canonical()}, 1e-10);
    if (basis.size() != 2) throw DomainError("line through coincident points");
    frame_ = {basis[0], basis[1]};

    Eigen::Matrix<std::complex<double>, 4, 6> M = incidence_embed(p.canonical(), q.canonical());
    Eigen::JacobiSVD<Eigen::Matrix<std::complex<double>, 4, 6>> svd(M, Eigen::ComputeFullV);
    // 6 columns, rank 4: the two trailing right singular vectors span the polar line.
    polar_ = ProjPoint(chi_pullback(svd.matrixV().col(5)));
}

ProjLine line_through(const ProjPoint& p, const ProjPoint& q) { return ProjLine(p, q); }

ProjLine line_from_polar(const ProjPoint& n) {
    // Kernel of x -> <n,x> has H-dimension 2; recover a spanning pair.
    Eigen::Matrix<std::complex<double>, 4, 6> M =
        incidence_embed(n.canonical(), n.canonical());
    Eigen::JacobiSVD<Eigen::Matrix<std::complex<double>, 4, 6>> svd(M, Eigen::ComputeFullV);
    std::vector<HVec3> cand;
    for (int c = 5; c >= 2; --c) cand.push_back(chi_pullback(svd.matrixV().col(c)));
    auto basis = h_gram_schmidt(cand, 1e-10);
    if (basis.size() < 2) throw InternalError("line_from_polar: degenerate kernel");
    ProjLine l;
    l.span_ = {ProjPoint(basis[0]), ProjPoint(basis[1])};
    l.frame_ = {basis[0], basis[1]};
    l.polar_ = n;
    return l;
}

double point_line_dist(const ProjPoint& r, const ProjLine& l) {
    return herm(l.polar().canonical(), r.canonical()).norm();
}

double point_line_dist_via_span(const ProjPoint& r, const ProjLine& l) {
    const HVec3& v = r.canonical();
    HVec3 proj = HVec3::zero();
    for (const auto& e : l.frame()) proj = proj + e.scaled_right(herm(e, v));
    const double n2 = proj.norm_sq();
    return std::sqrt(std::clamp(1.0 - n2, 0.0, 1.0));
}

bool in_complex_line(const ProjPoint& r, int axis_a, int axis_b, double tol) {
    const int axis_c = 3 - axis_a - axis_b;
    const HVec3& v = r.canonical();
    if (v[axis_c].norm() > tol) return false;
    const bool a_leads = v[axis_a].norm() >= v[axis_b].norm();
    const Quaternion lead = a_leads ? v[axis_a] : v[axis_b];
    const Quaternion other = a_leads ? v[axis_b] : v[axis_a];
    return jk_residual(other * inverse(lead)) <= tol;
}

double complex_line_dist(const ProjPoint& r, int axis_a, int axis_b) {
    const int axis_c = 3 - axis_a - axis_b;
    const HVec3& v = r.canonical();
    const double off_line = v[axis_c].norm();
    const bool a_leads = v[axis_a].norm() >= v[axis_b].norm();
    const Quaternion lead = a_leads ? v[axis_a] : v[axis_b];
    if (lead.norm() < 1e-14) return off_line;  // degenerate: the point is the third axis
    const Quaternion other = a_leads ? v[axis_b] : v[axis_a];
    return std::max(off_line, jk_residual(other * inverse(lead)));
}

ProjPoint apply(const HMat3& g, const ProjPoint& p) {
    const HVec3 w = mat_vec(g, p.canonical());
    if (w.norm() <= kKernelRel * std::max(1e-300, sup_norm(g)))
        throw DomainError("apply: point lies in the kernel");
    return ProjPoint(w);
}

ProjLine dual_apply(const HMat3& g, const ProjLine& l) {
    const ProjPoint new_polar = apply(dual_step_matrix(g), l.polar());
    return line_from_polar(new_polar);
}

HMat3 dual_step_matrix(const HMat3& g) { return transpose(inverse(g)); }

} // namespace qk
