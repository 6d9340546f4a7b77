#include "qk/limitsets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qk/errors.hpp"
#include "qk/rng.hpp"

namespace qk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Orthonormal complex-compatible frame of a complex line span (a, b).
struct ComplexFrame {
    HVec3 e1, e2;
};

ComplexFrame complex_frame(const ProjPoint& a, const ProjPoint& b) {
    const HVec3& u = a.canonical();
    HVec3 w = b.canonical();
    const Quaternion h = herm(u, w);
    if (jk_residual(h) > 1e-9)
        throw InternalError("complex line span is not complex-compatible");
    w = w - u.scaled_right(h);
    const double n = w.norm();
    if (n < 1e-10) throw DomainError("complex line through coincident points");
    return {u, w.scaled(1.0 / n)};
}

double complex_line_dist_general(const ProjPoint& r, const ProjPoint& a, const ProjPoint& b) {
    const auto f = complex_frame(a, b);
    const HVec3& v = r.canonical();
    const Quaternion c1 = herm(f.e1, v);
    const Quaternion c2 = herm(f.e2, v);
    const double in_plane = c1.norm_sq() + c2.norm_sq();
    const double off = std::sqrt(std::clamp(1.0 - in_plane, 0.0, 1.0));
    const bool first = c1.norm() >= c2.norm();
    const Quaternion lead = first ? c1 : c2;
    if (lead.norm() < 1e-14) return 1.0;
    const Quaternion other = first ? c2 : c1;
    return std::max(off, jk_residual(other * inverse(lead)));
}

double complex_plane_dist(const ProjPoint& p) {
    const HVec3& v = p.canonical();
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        s += v[i].y * v[i].y + v[i].z * v[i].z;
    }
    return std::sqrt(s);
}

bool point_near(const ProjPoint& p, const ProjPoint& q, double tol) {
    return chordal_dist(p, q) <= tol;
}

bool line_near(const ProjLine& a, const ProjLine& b, double tol) {
    return chordal_dist(a.polar(), b.polar()) <= tol;
}

struct Flattened {
    bool whole_space = false;
    bool complex_plane = false;
    std::vector<ProjLine> lines;
    std::vector<std::pair<ProjPoint, ProjPoint>> complex_lines;
    std::vector<ProjPoint> points;
};

void flatten_into(const Descriptor& d, Flattened& f) {
    switch (d.kind()) {
        case Descriptor::Kind::Empty: break;
        case Descriptor::Kind::WholeSpace: f.whole_space = true; break;
        case Descriptor::Kind::ComplexPlane: f.complex_plane = true; break;
        case Descriptor::Kind::Points:
            f.points.insert(f.points.end(), d.point_list().begin(), d.point_list().end());
            break;
        case Descriptor::Kind::Lines:
            f.lines.insert(f.lines.end(), d.line_list().begin(), d.line_list().end());
            break;
        case Descriptor::Kind::ComplexLine:
            f.complex_lines.push_back(*d.complex_span());
            break;
        case Descriptor::Kind::FixedPoints:
        case Descriptor::Kind::Union:
            for (const auto& m : d.members()) flatten_into(m, f);
            break;
    }
}

Flattened flatten_absorb(const std::vector<Descriptor>& parts, double tol) {
    Flattened raw;
    for (const auto& d : parts) flatten_into(d, raw);
    Flattened out;
    out.whole_space = raw.whole_space;
    if (out.whole_space) return out;
    out.complex_plane = raw.complex_plane;
    for (const auto& l : raw.lines) {
        if (std::none_of(out.lines.begin(), out.lines.end(),
                         [&](const ProjLine& k) { return line_near(k, l, tol); }))
            out.lines.push_back(l);
    }
    for (const auto& cl : raw.complex_lines) {
        const bool inside_line = std::any_of(out.lines.begin(), out.lines.end(), [&](const ProjLine& k) {
            return point_line_dist(cl.first, k) <= tol && point_line_dist(cl.second, k) <= tol;
        });
        if (inside_line) continue;
        const bool dup = std::any_of(out.complex_lines.begin(), out.complex_lines.end(), [&](const auto& k) {
            return complex_line_dist_general(cl.first, k.first, k.second) <= tol &&
                   complex_line_dist_general(cl.second, k.first, k.second) <= tol;
        });
        if (!dup) out.complex_lines.push_back(cl);
    }
    for (const auto& p : raw.points) {
        bool absorbed = out.complex_plane && complex_plane_dist(p) <= tol;
        absorbed = absorbed || std::any_of(out.lines.begin(), out.lines.end(), [&](const ProjLine& k) {
                       return point_line_dist(p, k) <= tol;
                   });
        absorbed = absorbed ||
                   std::any_of(out.complex_lines.begin(), out.complex_lines.end(), [&](const auto& k) {
                       return complex_line_dist_general(p, k.first, k.second) <= tol;
                   });
        absorbed = absorbed || std::any_of(out.points.begin(), out.points.end(),
                                           [&](const ProjPoint& q) { return point_near(p, q, tol); });
        if (!absorbed) out.points.push_back(p);
    }
    return out;
}

Descriptor rebuild(const Flattened& f) {
    if (f.whole_space) return Descriptor::whole_space();
    std::vector<Descriptor> parts;
    if (f.complex_plane) parts.push_back(Descriptor::complex_plane());
    if (!f.lines.empty()) parts.push_back(Descriptor::lines(f.lines));
    for (const auto& cl : f.complex_lines) parts.push_back(Descriptor::complex_line(cl.first, cl.second));
    if (!f.points.empty()) parts.push_back(Descriptor::points(f.points));
    if (parts.empty()) return Descriptor::empty();
    if (parts.size() == 1) return parts.front();
    return Descriptor::union_of(std::move(parts));
}

} // namespace

Descriptor Descriptor::empty() { return {}; }

Descriptor Descriptor::points(std::vector<ProjPoint> ps) {
    Descriptor d;
    d.kind_ = Kind::Points;
    d.points_ = std::move(ps);
    return d;
}

Descriptor Descriptor::lines(std::vector<ProjLine> ls) {
    Descriptor d;
    d.kind_ = Kind::Lines;
    d.lines_ = std::move(ls);
    return d;
}

Descriptor Descriptor::complex_line(const ProjPoint& a, const ProjPoint& b) {
    Descriptor d;
    d.kind_ = Kind::ComplexLine;
    d.cl_ = {a, b};
    return d;
}

Descriptor Descriptor::whole_space() {
    Descriptor d;
    d.kind_ = Kind::WholeSpace;
    return d;
}

Descriptor Descriptor::complex_plane() {
    Descriptor d;
    d.kind_ = Kind::ComplexPlane;
    return d;
}

Descriptor Descriptor::union_of(std::vector<Descriptor> members) {
    Descriptor d;
    d.kind_ = Kind::Union;
    for (auto& m : members)
        if (!m.is_empty()) d.members_.push_back(std::move(m));
    if (d.members_.empty()) return empty();
    return d;
}

Descriptor Descriptor::from_fixed_set(const FixedSet& fs) {
    Descriptor d;
    d.kind_ = Kind::FixedPoints;
    if (fs.whole_space) {
        d.members_.push_back(whole_space());
        return d;
    }
    if (fs.complex_plane) d.members_.push_back(complex_plane());
    if (!fs.lines.empty()) d.members_.push_back(lines(fs.lines));
    for (const auto& cl : fs.complex_lines) d.members_.push_back(complex_line(cl.a, cl.b));
    if (!fs.points.empty()) d.members_.push_back(points(fs.points));
    return d;
}

double descriptor_dist(const ProjPoint& p, const Descriptor& d) {
    switch (d.kind()) {
        case Descriptor::Kind::Empty:
            return kInf;
        case Descriptor::Kind::WholeSpace:
            return 0.0;
        case Descriptor::Kind::ComplexPlane:
            return complex_plane_dist(p);
        case Descriptor::Kind::Points: {
            double best = kInf;
            for (const auto& q : d.point_list()) best = std::min(best, chordal_dist(p, q));
            return best;
        }
        case Descriptor::Kind::Lines: {
            double best = kInf;
            for (const auto& l : d.line_list()) best = std::min(best, point_line_dist(p, l));
            return best;
        }
        case Descriptor::Kind::ComplexLine: {
            const auto& [a, b] = *d.complex_span();
            return complex_line_dist_general(p, a, b);
        }
        case Descriptor::Kind::FixedPoints:
        case Descriptor::Kind::Union: {
            double best = kInf;
            for (const auto& m : d.members()) best = std::min(best, descriptor_dist(p, m));
            return best;
        }
    }
    return kInf;
}

Descriptor simplify_union(const std::vector<Descriptor>& parts, double tol) {
    return rebuild(flatten_absorb(parts, tol));
}

bool descriptor_equal(const Descriptor& a, const Descriptor& b, double tol) {
    const Flattened fa = flatten_absorb({a}, tol);
    const Flattened fb = flatten_absorb({b}, tol);
    if (fa.whole_space != fb.whole_space) return false;
    if (fa.whole_space) return true;
    if (fa.complex_plane != fb.complex_plane) return false;
    if (fa.lines.size() != fb.lines.size() || fa.points.size() != fb.points.size() ||
        fa.complex_lines.size() != fb.complex_lines.size())
        return false;
    std::vector<bool> used(fb.lines.size(), false);
    for (const auto& l : fa.lines) {
        bool hit = false;
        for (size_t j = 0; j < fb.lines.size(); ++j)
            if (!used[j] && line_near(l, fb.lines[j], tol)) {
                used[j] = true;
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    std::vector<bool> usedp(fb.points.size(), false);
    for (const auto& p : fa.points) {
        bool hit = false;
        for (size_t j = 0; j < fb.points.size(); ++j)
            if (!usedp[j] && point_near(p, fb.points[j], tol)) {
                usedp[j] = true;
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    std::vector<bool> usedc(fb.complex_lines.size(), false);
    for (const auto& c : fa.complex_lines) {
        bool hit = false;
        for (size_t j = 0; j < fb.complex_lines.size(); ++j) {
            const auto& k = fb.complex_lines[j];
            if (!usedc[j] && complex_line_dist_general(c.first, k.first, k.second) <= tol &&
                complex_line_dist_general(c.second, k.first, k.second) <= tol) {
                usedc[j] = true;
                hit = true;
                break;
            }
        }
        if (!hit) return false;
    }
    return true;
}

KulkarniPrediction predict_kulkarni(const ElementClass& cls) {
    const ProjPoint e1 = ProjPoint::basis(0), e2 = ProjPoint::basis(1), e3 = ProjPoint::basis(2);
    const ProjLine l12 = line_through(e1, e2);
    const ProjLine l13 = line_through(e1, e3);
    const ProjLine l23 = line_through(e2, e3);
    auto pts = [](std::initializer_list<ProjPoint> ps) { return Descriptor::points(ps); };

    KulkarniPrediction pr;
    switch (cls.fine) {
        case Fine::RationalElliptic:
            pr.L0 = pr.L1 = pr.L2 = Descriptor::empty();
            break;
        case Fine::SimpleIrrationalElliptic:
            pr.L0 = Descriptor::complex_plane();
            pr.L1 = Descriptor::whole_space();
            pr.L2 = Descriptor::empty();
            break;
        case Fine::CompoundIrrationalEllipticI:
        case Fine::CompoundIrrationalEllipticII:
        case Fine::CompoundIrrationalEllipticIII:
            pr.L0 = Descriptor::from_fixed_set(fixed_points(canonical_form(cls)));
            pr.L1 = Descriptor::whole_space();
            pr.L2 = Descriptor::empty();
            break;
        case Fine::RegularLoxodromic:
            pr.L0 = pts({e1, e2, e3});
            pr.L1 = pts({e1, e2, e3});
            pr.L2 = Descriptor::lines({l12, l23});
            break;
        case Fine::ScrewLoxodromic:
            pr.L0 = pts({e1, e2, e3});
            pr.L1 = Descriptor::union_of({Descriptor::lines({l12}), pts({e3})});
            pr.L2 = pr.L1;
            break;
        case Fine::HomothetyReal:
        case Fine::HomothetyComplex:
            pr.L0 = Descriptor::from_fixed_set(fixed_points(canonical_form(cls)));
            pr.L1 = Descriptor::union_of({Descriptor::lines({l12}), pts({e3})});
            pr.L2 = pr.L1;
            break;
        case Fine::LoxoParabolic:
            pr.L0 = pts({e1, e3});
            pr.L1 = pts({e1, e3});
            pr.L2 = Descriptor::lines({l12, l13});
            break;
        case Fine::VerticalTranslation:
            pr.L0 = Descriptor::lines({l13});
            pr.L1 = pts({e1});
            pr.L2 = pts({e1});
            break;
        case Fine::NonVerticalTranslation:
            pr.L0 = pts({e1});
            pr.L1 = pts({e1});
            pr.L2 = Descriptor::lines({l12});
            break;
        case Fine::RationalElliptoParabolic:
            pr.L0 = Descriptor::lines({l13});
            pr.L1 = pts({e1});
            pr.L2 = pts({e1});
            break;
        case Fine::IrrationalElliptoParabolic:
            pr.L0 = pts({e1, e3});
            pr.L1 = Descriptor::lines({l13});
            pr.L2 = pts({e1});
            break;
        case Fine::ElliptoTranslation:
            pr.L0 = pts({e1});
            pr.L1 = pts({e1});
            pr.L2 = Descriptor::lines({l12});
            break;
    }
    pr.Lambda = simplify_union({pr.L0, pr.L1, pr.L2});
    return pr;
}

DualDescriptor predict_conze_guivarch(const ElementClass& cls) {
    const ProjPoint e1 = ProjPoint::basis(0), e2 = ProjPoint::basis(1), e3 = ProjPoint::basis(2);
    switch (cls.fine) {
        case Fine::RationalElliptic:
            return DualDescriptor::empty();
        case Fine::SimpleIrrationalElliptic:
        case Fine::CompoundIrrationalEllipticI:
        case Fine::CompoundIrrationalEllipticII:
        case Fine::CompoundIrrationalEllipticIII:
            return DualDescriptor::whole_dual();
        case Fine::RegularLoxodromic:
            return DualDescriptor::finite({e1, e3});
        case Fine::ScrewLoxodromic:
        case Fine::HomothetyReal:
        case Fine::HomothetyComplex:
            return DualDescriptor::finite({e3});
        case Fine::LoxoParabolic:
            return DualDescriptor::finite({e3, e2});
        case Fine::VerticalTranslation:
            return DualDescriptor::finite({e2});
        case Fine::NonVerticalTranslation:
            return DualDescriptor::finite({e3});
        case Fine::RationalElliptoParabolic:
        case Fine::IrrationalElliptoParabolic:
            return DualDescriptor::finite({e2});
        case Fine::ElliptoTranslation:
            return DualDescriptor::finite({e3});
    }
    return DualDescriptor::empty();
}

InvarianceReport descriptor_invariance_check(const HMat3& g, const Descriptor& d, int samples,
                                             double tol, uint64_t seed) {
    InvarianceReport rep;
    if (d.is_empty() || d.is_whole_space()) return rep;

    auto check = [&](const ProjPoint& p) {
        const ProjPoint img = apply(g, p);
        const double dist = descriptor_dist(img, d);
        ++rep.samples_checked;
        if (dist > rep.worst) {
            rep.worst = dist;
            rep.worst_sample = p;
        }
        if (dist > tol) rep.pass = false;
    };

    const Flattened f = flatten_absorb({d}, 1e-12);
    for (const auto& p : f.points) check(p);
    uint64_t stream = 0;
    for (const auto& l : f.lines) {
        Rng rng(seed, stream++);
        for (int s = 0; s < samples; ++s) {
            const HVec3 v = l.frame()[0].scaled_right(rng.next_quaternion()) +
                            l.frame()[1].scaled_right(rng.next_quaternion());
            if (v.norm() < 1e-6) continue;
            check(ProjPoint(v));
        }
    }
    for (const auto& cl : f.complex_lines) {
        Rng rng(seed, stream++);
        const auto frame = complex_frame(cl.first, cl.second);
        for (int s = 0; s < samples; ++s) {
            const Quaternion a = Quaternion::from_split(rng.next_complex(), 0.0);
            const Quaternion b = Quaternion::from_split(rng.next_complex(), 0.0);
            const HVec3 v = frame.e1.scaled_right(a) + frame.e2.scaled_right(b);
            if (v.norm() < 1e-6) continue;
            check(ProjPoint(v));
        }
    }
    if (f.complex_plane) {
        Rng rng(seed, stream++);
        for (int s = 0; s < samples; ++s) {
            HVec3 v;
            for (int i = 0; i < 3; ++i) v[i] = Quaternion::from_split(rng.next_complex(), 0.0);
            if (v.norm() < 1e-6) continue;
            check(ProjPoint(v));
        }
    }
    return rep;
}

} // namespace qk
