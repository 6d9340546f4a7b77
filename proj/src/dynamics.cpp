#include "qk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qk/errors.hpp"
#include "qk/rng.hpp"

namespace qk {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kPi = 3.1415926535897932384626433832795;

double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

HMat3 renormalize(const HMat3& M) {
    const double s = sup_norm(M);
    if (!(s > 0.0)) throw InternalError("renormalize: zero matrix");
    return scale_real(M, 1.0 / s);
}

SubspaceDesc subspace_from_basis(const std::vector<HVec3>& hbasis) {
    SubspaceDesc s;
    switch (hbasis.size()) {
        case 0: s.kind = SubspaceDesc::Kind::Empty; break;
        case 1:
            s.kind = SubspaceDesc::Kind::Point;
            s.point = ProjPoint(hbasis[0]);
            break;
        case 2:
            s.kind = SubspaceDesc::Kind::Line;
            s.line = line_through(ProjPoint(hbasis[0]), ProjPoint(hbasis[1]));
            break;
        default: s.kind = SubspaceDesc::Kind::All; break;
    }
    return s;
}

Quaternion unit_phase_turns(double turns) {
    return {std::cos(kTwoPi * turns), std::sin(kTwoPi * turns), 0.0, 0.0};
}

} // namespace

OrbitTrace orbit(const HMat3& g, const ProjPoint& p, long n_from, long n_to) {
    if (n_from > n_to) throw DomainError("orbit: n_from > n_to");
    OrbitTrace tr{g, p, {}};
    tr.samples.reserve(static_cast<size_t>(n_to - n_from + 1));
    std::vector<std::pair<long, ProjPoint>> negative;
    if (n_from < 0) {
        const HMat3 ginv = inverse(g);
        ProjPoint q = p;
        for (long n = -1; n >= n_from; --n) {
            q = apply(ginv, q);
            if (n <= n_to) negative.emplace_back(n, q);
        }
    }
    for (auto it = negative.rbegin(); it != negative.rend(); ++it) tr.samples.push_back(*it);
    if (n_from <= 0 && n_to >= 0) tr.samples.emplace_back(0, p);
    if (n_to > 0) {
        ProjPoint q = p;
        for (long n = 1; n <= n_to; ++n) {
            q = apply(g, q);
            if (n >= n_from) tr.samples.emplace_back(n, q);
        }
    }
    return tr;
}

std::vector<HMat3> renormalized_powers(const HMat3& g, int n_max) {
    std::vector<HMat3> out;
    out.reserve(static_cast<size_t>(n_max));
    const HMat3 step = renormalize(g);
    HMat3 B = step;
    for (int n = 1; n <= n_max; ++n) {
        out.push_back(B);
        B = renormalize(B * step);
    }
    return out;
}

bool subspace_equal(const SubspaceDesc& a, const SubspaceDesc& b, double tol) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case SubspaceDesc::Kind::Point: return chordal_dist(*a.point, *b.point) <= tol;
        case SubspaceDesc::Kind::Line: return chordal_dist(a.line->polar(), b.line->polar()) <= tol;
        default: return true;
    }
}

std::string to_string(const SubspaceDesc& s) {
    switch (s.kind) {
        case SubspaceDesc::Kind::Empty: return "empty";
        case SubspaceDesc::Kind::Point: return "point";
        case SubspaceDesc::Kind::Line: return "line";
        default: return "all";
    }
}

std::vector<PseudoProjective> limit_of_powers(const HMat3& g, Direction dir, uint64_t n_max,
                                              double tol, double rank_tol) {
    const HMat3 base = dir == Direction::Forward ? g : inverse(g);
    std::vector<HMat3> samples;
    HMat3 B = renormalize(base);
    samples.push_back(B);
    for (uint64_t n = 1; 2 * n <= n_max && n < (1ull << 62); n *= 2) {
        B = renormalize(B * B);
        samples.push_back(B);
    }
    const size_t tail = std::min<size_t>(4, samples.size());
    std::vector<HMat3> reps;
    for (size_t i = samples.size() - tail; i < samples.size(); ++i) {
        const HMat3& M = samples[i];
        const bool merged = std::any_of(reps.begin(), reps.end(), [&](const HMat3& R) {
            return max_abs_diff(R, M) <= tol;
        });
        if (!merged) reps.push_back(M);
    }
    std::vector<PseudoProjective> out;
    for (const HMat3& R : reps) {
        const Mat6c P = phi_embed(R);
        PseudoProjective pp;
        pp.matrix = R;
        pp.kernel = subspace_from_basis(h_gram_schmidt(right_kernel_basis(P, rank_tol), 1e-6));
        pp.image = subspace_from_basis(h_gram_schmidt(column_space_basis(P, rank_tol), 1e-6));
        out.push_back(std::move(pp));
    }
    for (size_t i = 1; i < out.size(); ++i) {
        if (!subspace_equal(out[0].kernel, out[i].kernel)) {
            std::ostringstream os;
            os << "limit_of_powers: kernel descriptors disagree across cluster representatives ("
               << to_string(out[0].kernel) << " vs " << to_string(out[i].kernel)
               << "); increase n_max or tighten tol";
            throw DiagnosticError(os.str());
        }
    }
    return out;
}

ClusterSet cluster_points(const OrbitTrace& trace, size_t tail_start, double eps) {
    if (tail_start >= trace.samples.size())
        throw DomainError("cluster_points: tail_start beyond the trace");
    if (!(eps > 0.0)) throw DomainError("cluster_points: eps must be positive");
    ClusterSet cs;
    cs.radius = eps;
    for (size_t i = tail_start; i < trace.samples.size(); ++i) {
        const ProjPoint& p = trace.samples[i].second;
        const bool merged = std::any_of(cs.representatives.begin(), cs.representatives.end(),
                                        [&](const ProjPoint& r) { return chordal_dist(r, p) <= eps; });
        if (!merged) cs.representatives.push_back(p);
    }
    return cs;
}

ClusterSet kulkarni_l1_estimate(const HMat3& g, const Descriptor& predicted_l0, int sample_count,
                                uint64_t seed, int max_iter, double eps) {
    const HMat3 ginv = inverse(g);
    ClusterSet global;
    global.radius = eps;
    const size_t tail_start = static_cast<size_t>(0.8 * max_iter);
    auto absorb = [&](const ClusterSet& cs) {
        for (const auto& r : cs.representatives) {
            const bool merged =
                std::any_of(global.representatives.begin(), global.representatives.end(),
                            [&](const ProjPoint& q) { return chordal_dist(q, r) <= eps; });
            if (!merged) global.representatives.push_back(r);
        }
    };
    for (int idx = 0; idx < sample_count; ++idx) {
        Rng rng(seed, static_cast<uint64_t>(idx));
        ProjPoint p = ProjPoint::basis(0);
        bool found = false;
        for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
            p = ProjPoint(rng.next_hvec3());
            found = descriptor_dist(p, predicted_l0) > 0.05;
        }
        if (!found) continue;  // L0 fills the space; nothing to sample off it
        for (const HMat3* gen : {&g, &ginv}) {
            OrbitTrace tr{*gen, p, {}};
            tr.samples.reserve(static_cast<size_t>(max_iter));
            ProjPoint q = p;
            for (int n = 1; n <= max_iter; ++n) {
                q = apply(*gen, q);
                tr.samples.emplace_back(n, q);
            }
            absorb(cluster_points(tr, std::min(tail_start, tr.samples.size() - 1), eps));
        }
    }
    return global;
}

namespace {

struct TargetCoords {
    Quaternion a, b;  // nonzero coordinates of the target on its line
};

// Reads [0:y:z]-style coordinates off a canonical representative; the
// remaining coordinate must vanish within tol.
TargetCoords on_line_coords(const ProjPoint& t, int zero_axis, double tol) {
    const HVec3& v = t.canonical();
    if (v[zero_axis].norm() > tol)
        throw DomainError("l2_witness: target is not on the predicted component");
    const int i = zero_axis == 0 ? 1 : 0;
    const int j = zero_axis == 2 ? 1 : 2;
    return {v[i], v[j]};
}

} // namespace

WitnessSequence l2_witness(const ElementClass& cls, const ProjPoint& target, long n_max) {
    WitnessSequence seq;
    const double on_tol = 1e-9;
    const HVec3& t = target.canonical();

    switch (cls.fine) {
        case Fine::RegularLoxodromic: {
            const double ml = cls.param("lambda").modulus;
            const double mm = cls.param("mu").modulus;
            const double mx = cls.param("xi").modulus;
            if (t[0].norm() <= on_tol) {
                // [0:y:z], forward: k_n = [(|xi^n y|^2 + |mu^n z|^2)^(1/2) : |xi|^n y : |mu|^n z],
                // written here with everything divided by |xi|^n
                const Quaternion y = t[1], z = t[2];
                const double r = mm / mx;
                seq.direction = Direction::Forward;
                double rn = 1.0;
                for (long n = 1; n <= n_max; ++n) {
                    rn *= r;
                    HVec3 k;
                    k[0] = Quaternion::real(std::sqrt(y.norm_sq() + rn * rn * z.norm_sq()));
                    k[1] = y;
                    k[2] = z * rn;
                    seq.points.emplace_back(n, ProjPoint(k));
                }
                return seq;
            }
            if (t[2].norm() <= on_tol) {
                // [x:y:0], backward, divided by |lambda|^(-n)
                const Quaternion x = t[0], y = t[1];
                const double s = ml / mm;
                seq.direction = Direction::Backward;
                double sn = 1.0;
                for (long n = 1; n <= n_max; ++n) {
                    sn *= s;
                    HVec3 k;
                    k[0] = x * sn;
                    k[1] = y;
                    k[2] = Quaternion::real(std::sqrt(sn * sn * x.norm_sq() + y.norm_sq()));
                    seq.points.emplace_back(n, ProjPoint(k));
                }
                return seq;
            }
            throw DomainError("l2_witness: regular loxodromic target must lie on one invariant line");
        }
        case Fine::LoxoParabolic: {
            const double L = cls.param("lambda").modulus;
            const double theta = angle_value(cls.param("lambda").angle);
            if (t[2].norm() <= on_tol) {
                // [y:1:0], forward
                if (t[1].norm() <= on_tol)
                    throw DomainError("l2_witness: loxo-parabolic target on L{e1,e2} needs a nonzero second coordinate");
                const Quaternion y = t[0] * inverse(t[1]);
                const Quaternion head = unit_phase_turns(-theta) * (-1.0 / L);
                seq.direction = Direction::Forward;
                for (long n = 1; n <= n_max; ++n) {
                    HVec3 k;
                    k[0] = head + y * (1.0 / static_cast<double>(n));
                    k[1] = Quaternion::real(1.0 / static_cast<double>(n));
                    k[2] = Quaternion::real(1.0 / L);
                    seq.points.emplace_back(n, ProjPoint(k));
                }
                return seq;
            }
            if (t[1].norm() <= on_tol) {
                // [w:0:1], backward; the third coordinate decays like n |lambda|^(-3n-1)
                // and the sequence is truncated where it leaves double range
                if (t[0].norm() <= on_tol)
                    throw DomainError("l2_witness: loxo-parabolic target on L{e1,e3} needs a nonzero first coordinate");
                const Quaternion winv = inverse(t[0] * inverse(t[2]));
                seq.direction = Direction::Backward;
                for (long n = 1; n <= n_max; ++n) {
                    const double log_coef = std::log(static_cast<double>(n)) -
                                            (3.0 * n + 1.0) * std::log(L);
                    if (log_coef < -690.0) break;  // below double range; deeper n is unrepresentable
                    HVec3 k;
                    k[0] = Quaternion::real(1.0);
                    k[1] = Quaternion::real(1.0);
                    k[2] = winv * (-std::exp(log_coef));
                    seq.points.emplace_back(n, ProjPoint(k));
                }
                return seq;
            }
            throw DomainError("l2_witness: loxo-parabolic target must lie on L{e1,e2} or L{e1,e3}");
        }
        case Fine::NonVerticalTranslation: {
            if (t[2].norm() > on_tol || t[1].norm() <= on_tol)
                throw DomainError("l2_witness: non-vertical translation target must be [x:1:0]");
            const Quaternion x = t[0] * inverse(t[1]);
            seq.direction = Direction::Forward;
            for (long n = 1; n <= n_max; ++n) {
                const double dn = static_cast<double>(n);
                HVec3 k;
                k[0] = x;
                k[1] = Quaternion::real(-(dn - 1.0) / dn);
                k[2] = Quaternion::real(2.0 / dn);
                seq.points.emplace_back(n, ProjPoint(k));
            }
            return seq;
        }
        case Fine::ElliptoTranslation: {
            if (t[2].norm() > on_tol || t[1].norm() <= on_tol)
                throw DomainError("l2_witness: ellipto-translation target must be [x:1:0]");
            const Quaternion x = t[0] * inverse(t[1]);
            const Quaternion phase = unit_phase_turns(angle_value(cls.param("alpha").angle));
            seq.direction = Direction::Forward;
            for (long n = 1; n <= n_max; ++n) {
                const double dn = static_cast<double>(n);
                HVec3 k;
                k[0] = x;
                k[1] = Quaternion::real(-1.0 + 1.0 / dn);
                k[2] = phase * (2.0 / dn);
                seq.points.emplace_back(n, ProjPoint(k));
            }
            return seq;
        }
        default:
            throw DomainError("l2_witness: unsupported subclass '" + to_string(cls.fine) + "'");
    }
}

WitnessOutcome run_l2_witness(const HMat3& g, const WitnessSequence& seq, const ProjPoint& target,
                              double tol) {
    const HMat3 base = seq.direction == Direction::Forward ? g : inverse(g);
    const HMat3 step = renormalize(base);
    WitnessOutcome out;
    HMat3 B = step;
    long cur = 1;
    for (const auto& [n, k] : seq.points) {
        while (cur < n) {
            B = renormalize(B * step);
            ++cur;
        }
        const double d = chordal_dist(apply(B, k), target);
        if (d < out.best_dist) {
            out.best_dist = d;
            out.best_n = n;
        }
        if (out.first_below < 0 && d < tol) out.first_below = n;
    }
    return out;
}

long density_check_s1(double alpha, double eps, long cap) {
    if (!(eps > 0.0)) throw DomainError("density_check_s1: eps must be positive");
    // gap threshold in turns; chord eps corresponds to angle 2*arcsin(eps/2)
    const double thr = std::asin(std::min(1.0, eps / 2.0)) / kPi;
    std::set<double> pts;
    std::multiset<double> gaps;
    auto circ_gap = [](double a, double b) {
        double d = b - a;
        if (d <= 0.0) d += 1.0;
        return d;
    };
    for (long n = 0; n <= cap; ++n) {
        const double pos = frac(static_cast<double>(n) * alpha);
        if (!pts.empty()) {
            // skip points indistinguishable from an existing one; they cannot
            // move a gap decision at the threshold scale
            auto circ_abs = [](double a, double b) {
                const double d = std::abs(a - b);
                return std::min(d, 1.0 - d);
            };
            auto ub = pts.lower_bound(pos);
            double dnear = circ_abs(pos, *pts.begin());
            dnear = std::min(dnear, circ_abs(pos, *pts.rbegin()));
            if (ub != pts.end()) dnear = std::min(dnear, circ_abs(pos, *ub));
            if (ub != pts.begin()) dnear = std::min(dnear, circ_abs(pos, *std::prev(ub)));
            if (dnear < 1e-12) continue;
        }
        auto [it, inserted] = pts.insert(pos);
        if (!inserted) continue;
        if (pts.size() == 1) {
            gaps.insert(1.0);
        } else {
            auto nx = std::next(it) == pts.end() ? pts.begin() : std::next(it);
            auto pv = it == pts.begin() ? std::prev(pts.end()) : std::prev(it);
            const double old_gap = circ_gap(*pv, *nx);
            auto hit = gaps.find(old_gap);
            if (hit != gaps.end()) gaps.erase(hit);
            gaps.insert(circ_gap(*pv, *it));
            gaps.insert(circ_gap(*it, *nx));
        }
        if (pts.size() >= 2 && *gaps.rbegin() <= thr) return n;
    }
    std::ostringstream os;
    os << "density_check_s1: cap " << cap << " reached; max gap " << *gaps.rbegin()
       << " turns vs threshold " << thr;
    throw DiagnosticError(os.str(), *gaps.rbegin());
}

long density_check_t2(double alpha, double beta, double eps, long cap) {
    if (!(eps > 0.0)) throw DomainError("density_check_t2: eps must be positive");
    const long m = std::max<long>(1, static_cast<long>(std::ceil(1.0 / eps)));
    std::vector<char> cell(static_cast<size_t>(m * m), 0);
    long filled = 0;
    const long total = m * m;
    for (long n = 0; n <= cap; ++n) {
        const double pa = frac(static_cast<double>(n) * alpha);
        const double pb = frac(static_cast<double>(n) * beta);
        long ia = std::min<long>(m - 1, static_cast<long>(pa * static_cast<double>(m)));
        long ib = std::min<long>(m - 1, static_cast<long>(pb * static_cast<double>(m)));
        char& c = cell[static_cast<size_t>(ia * m + ib)];
        if (!c) {
            c = 1;
            if (++filled == total) return n;
        }
    }
    std::ostringstream os;
    os << "density_check_t2: cap " << cap << " reached; " << filled << "/" << total
       << " grid cells covered";
    throw DiagnosticError(os.str(), static_cast<double>(filled) / static_cast<double>(total));
}

long recurrence_check(const HMat3& g, const ProjPoint& p, double eps, long N) {
    if (!(eps > 0.0)) throw DomainError("recurrence_check: eps must be positive");
    ProjPoint q = p;
    double best = 2.0;
    for (long n = 1; n <= N; ++n) {
        q = apply(g, q);
        const double d = chordal_dist(q, p);
        best = std::min(best, d);
        if (d < eps) return n;
    }
    std::ostringstream os;
    os << "recurrence_check: no return within " << N << " steps; closest approach " << best;
    throw DiagnosticError(os.str(), best);
}

} // namespace qk
