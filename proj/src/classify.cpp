#include "qk/classify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qk/errors.hpp"

namespace qk {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kModTol = 1e-9;       // unit-modulus and modulus-equality tolerance
constexpr double kAngleEqTol = 1e-12;  // equality of declared irrational angles

double frac(double x) {
    double f = x - std::floor(x);
    if (f >= 1.0) f = 0.0;
    return f;
}

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

void require(bool cond, const std::string& what) {
    if (!cond) fail(what);
}

bool modulus_is(double m, double target) { return std::abs(m - target) <= kModTol * std::max(1.0, target); }

const EigenSpec& named(const StructuredSpec& s, const std::string& key) {
    for (const auto& [k, v] : s.params)
        if (k == key) return v;
    fail("missing parameter '" + key + "' for class '" + s.klass + "'");
}

Quaternion unit_phase(const AngleSpec& a) {
    const double t = kTwoPi * angle_value(a);
    return {std::cos(t), std::sin(t), 0.0, 0.0};
}

Quaternion eigen_quat(const EigenSpec& s) {
    return unit_phase(s.angle) * s.modulus;
}

struct EllipticPattern {
    int rational_count = 0;
    bool all_equal = true;
    bool two_equal_irrational = false;
};

EllipticPattern elliptic_pattern(const std::vector<AngleSpec>& angles) {
    EllipticPattern p;
    for (const auto& a : angles)
        if (angle_is_rational(a)) ++p.rational_count;
    p.all_equal = angle_equal(angles[0], angles[1]) && angle_equal(angles[1], angles[2]);
    if (!p.all_equal && p.rational_count == 0) {
        p.two_equal_irrational = angle_equal(angles[0], angles[1]) ||
                                 angle_equal(angles[1], angles[2]) ||
                                 angle_equal(angles[0], angles[2]);
    }
    return p;
}

Fine elliptic_fine(const EllipticPattern& p) {
    if (p.rational_count == 3) return Fine::RationalElliptic;
    if (p.rational_count == 0 && p.all_equal) return Fine::SimpleIrrationalElliptic;
    if (p.rational_count == 2) return Fine::CompoundIrrationalEllipticI;
    if (p.rational_count == 1) return Fine::CompoundIrrationalEllipticII;
    return Fine::CompoundIrrationalEllipticIII;
}

bool angle_is_real_axis(const AngleSpec& a) {
    const double v = angle_value(a);
    return v == 0.0 || v == 0.5;
}

} // namespace

RationalAngle make_rational_angle(long long p, long long q) {
    if (q <= 0) fail("rational angle denominator must be positive");
    p %= q;
    if (p < 0) p += q;
    const long long g = std::gcd(p, q);
    return {p / g, q / g};
}

double angle_value(const AngleSpec& a) {
    if (const auto* r = std::get_if<RationalAngle>(&a))
        return static_cast<double>(r->p) / static_cast<double>(r->q);
    return frac(std::get<IrrationalAngle>(a).value);
}

bool angle_is_rational(const AngleSpec& a) { return std::holds_alternative<RationalAngle>(a); }

bool angle_equal(const AngleSpec& a, const AngleSpec& b) {
    if (angle_is_rational(a) != angle_is_rational(b)) return false;
    if (angle_is_rational(a)) {
        const auto& ra = std::get<RationalAngle>(a);
        const auto& rb = std::get<RationalAngle>(b);
        return ra.p == rb.p && ra.q == rb.q;
    }
    return std::abs(angle_value(a) - angle_value(b)) <= kAngleEqTol;
}

double representative_angle(const AngleSpec& a) {
    const double v = angle_value(a);
    return v <= 0.5 ? v : 1.0 - v;
}

std::complex<double> eigen_value(const EigenSpec& s) {
    const double t = kTwoPi * angle_value(s.angle);
    return {s.modulus * std::cos(t), s.modulus * std::sin(t)};
}

Coarse coarse_of(Fine f) {
    switch (f) {
        case Fine::RationalElliptic:
        case Fine::SimpleIrrationalElliptic:
        case Fine::CompoundIrrationalEllipticI:
        case Fine::CompoundIrrationalEllipticII:
        case Fine::CompoundIrrationalEllipticIII:
            return Coarse::Elliptic;
        case Fine::RegularLoxodromic:
        case Fine::ScrewLoxodromic:
        case Fine::HomothetyReal:
        case Fine::HomothetyComplex:
        case Fine::LoxoParabolic:
            return Coarse::Loxodromic;
        default:
            return Coarse::Parabolic;
    }
}

std::string to_string(Coarse c) {
    switch (c) {
        case Coarse::Elliptic: return "elliptic";
        case Coarse::Loxodromic: return "loxodromic";
        default: return "parabolic";
    }
}

std::string to_string(Fine f) {
    switch (f) {
        case Fine::RationalElliptic: return "rational_elliptic";
        case Fine::SimpleIrrationalElliptic: return "simple_irrational_elliptic";
        case Fine::CompoundIrrationalEllipticI: return "compound_irrational_elliptic_i";
        case Fine::CompoundIrrationalEllipticII: return "compound_irrational_elliptic_ii";
        case Fine::CompoundIrrationalEllipticIII: return "compound_irrational_elliptic_iii";
        case Fine::RegularLoxodromic: return "regular_loxodromic";
        case Fine::ScrewLoxodromic: return "screw";
        case Fine::HomothetyReal: return "homothety_real";
        case Fine::HomothetyComplex: return "homothety_complex";
        case Fine::LoxoParabolic: return "loxo_parabolic";
        case Fine::VerticalTranslation: return "vertical_translation";
        case Fine::NonVerticalTranslation: return "non_vertical_translation";
        case Fine::RationalElliptoParabolic: return "rational_ellipto_parabolic";
        case Fine::IrrationalElliptoParabolic: return "irrational_ellipto_parabolic";
        default: return "ellipto_translation";
    }
}

std::optional<Fine> fine_from_string(const std::string& name) {
    static const std::pair<const char*, Fine> table[] = {
        {"rational_elliptic", Fine::RationalElliptic},
        {"simple_irrational_elliptic", Fine::SimpleIrrationalElliptic},
        {"compound_irrational_elliptic_i", Fine::CompoundIrrationalEllipticI},
        {"compound_irrational_elliptic_ii", Fine::CompoundIrrationalEllipticII},
        {"compound_irrational_elliptic_iii", Fine::CompoundIrrationalEllipticIII},
        {"regular_loxodromic", Fine::RegularLoxodromic},
        {"screw", Fine::ScrewLoxodromic},
        {"screw_loxodromic", Fine::ScrewLoxodromic},
        {"homothety_real", Fine::HomothetyReal},
        {"homothety_complex", Fine::HomothetyComplex},
        {"loxo_parabolic", Fine::LoxoParabolic},
        {"vertical_translation", Fine::VerticalTranslation},
        {"non_vertical_translation", Fine::NonVerticalTranslation},
        {"rational_ellipto_parabolic", Fine::RationalElliptoParabolic},
        {"irrational_ellipto_parabolic", Fine::IrrationalElliptoParabolic},
        {"ellipto_translation", Fine::ElliptoTranslation},
    };
    for (const auto& [k, v] : table)
        if (name == k) return v;
    return std::nullopt;
}

const EigenSpec& ElementClass::param(const std::string& name) const {
    for (const auto& [k, v] : params)
        if (k == name) return v;
    throw InternalError("ElementClass: missing parameter '" + name + "'");
}

bool ElementClass::has_param(const std::string& name) const {
    for (const auto& [k, v] : params)
        if (k == name) return true;
    return false;
}

Coarse classify_coarse(const HMat3& A, double tol) {
    const HMat3 B = normalize_to_sl(A);
    const auto classes = eigen_classes(B);
    for (const auto& c : classes)
        if (std::abs(c.modulus - 1.0) > tol) return Coarse::Loxodromic;
    const auto js = jordan_structure(B);
    for (const auto& b : js.blocks)
        if (b.size > 1) return Coarse::Parabolic;
    return Coarse::Elliptic;
}

ElementClass classify_fine(const StructuredSpec& spec) {
    const std::string& k = spec.klass;
    const auto declared = fine_from_string(k);

    ElementClass out;
    auto finish = [&](Fine f, std::vector<std::pair<std::string, EigenSpec>> params) {
        out.fine = f;
        out.coarse = coarse_of(f);
        out.params = std::move(params);
        if (declared && *declared != f)
            fail("declared class '" + k + "' but parameters describe '" + to_string(f) + "'");
        return out;
    };

    const bool elliptic_name =
        k == "elliptic" || (declared && coarse_of(*declared) == Coarse::Elliptic);
    if (elliptic_name) {
        EigenSpec a = named(spec, "alpha"), b = named(spec, "beta"), g = named(spec, "gamma");
        for (const auto* s : {&a, &b, &g})
            require(modulus_is(s->modulus, 1.0), "elliptic classes require unit moduli");
        const auto pat = elliptic_pattern({a.angle, b.angle, g.angle});
        const Fine f = elliptic_fine(pat);
        if (pat.two_equal_irrational)
            out.note = "two equal irrational angles; treated as compound type III";
        return finish(f, {{"alpha", a}, {"beta", b}, {"gamma", g}});
    }

    if (k == "regular_loxodromic") {
        std::vector<std::pair<std::string, EigenSpec>> ps = {
            {"lambda", named(spec, "lambda")}, {"mu", named(spec, "mu")}, {"xi", named(spec, "xi")}};
        std::sort(ps.begin(), ps.end(), [](const auto& x, const auto& y) {
            return x.second.modulus < y.second.modulus;
        });
        ps[0].first = "lambda";
        ps[1].first = "mu";
        ps[2].first = "xi";
        require(ps[1].second.modulus - ps[0].second.modulus > kModTol &&
                    ps[2].second.modulus - ps[1].second.modulus > kModTol,
                "regular loxodromic requires pairwise distinct moduli");
        return finish(Fine::RegularLoxodromic, std::move(ps));
    }

    if (k == "screw" || k == "screw_loxodromic") {
        EigenSpec l = named(spec, "lambda"), m = named(spec, "mu"), x = named(spec, "xi");
        require(modulus_is(l.modulus, m.modulus), "screw requires |lambda| = |mu|");
        require(std::abs(l.modulus - 1.0) > kModTol, "screw requires |lambda| != 1");
        require(!angle_equal(l.angle, m.angle), "screw requires lambda != mu");
        require(modulus_is(x.modulus * l.modulus * l.modulus, 1.0),
                "screw requires |xi| = 1/|lambda|^2");
        return finish(Fine::ScrewLoxodromic, {{"lambda", l}, {"mu", m}, {"xi", x}});
    }

    if (k == "homothety" || k == "homothety_real" || k == "homothety_complex") {
        EigenSpec l = named(spec, "lambda"), x = named(spec, "xi");
        require(std::abs(l.modulus - 1.0) > kModTol, "homothety requires |lambda| != 1");
        require(modulus_is(x.modulus * l.modulus * l.modulus, 1.0),
                "homothety requires |xi| = 1/|lambda|^2");
        const Fine f = angle_is_real_axis(l.angle) ? Fine::HomothetyReal : Fine::HomothetyComplex;
        if (k != "homothety" && declared && *declared != f)
            fail("declared '" + k + "' but lambda is " +
                 std::string(f == Fine::HomothetyReal ? "real" : "complex"));
        ElementClass c;
        c.fine = f;
        c.coarse = Coarse::Loxodromic;
        c.params = {{"lambda", l}, {"xi", x}};
        return c;
    }

    if (k == "loxo_parabolic") {
        EigenSpec l = named(spec, "lambda"), x = named(spec, "xi");
        require(std::abs(l.modulus - 1.0) > kModTol, "loxo-parabolic requires |lambda| != 1");
        require(modulus_is(x.modulus * l.modulus * l.modulus, 1.0),
                "loxo-parabolic requires |xi| = 1/|lambda|^2");
        return finish(Fine::LoxoParabolic, {{"lambda", l}, {"xi", x}});
    }

    if (k == "vertical_translation") return finish(Fine::VerticalTranslation, {});
    if (k == "non_vertical_translation") return finish(Fine::NonVerticalTranslation, {});

    if (k == "ellipto_parabolic" || k == "rational_ellipto_parabolic" ||
        k == "irrational_ellipto_parabolic") {
        EigenSpec a = named(spec, "alpha"), b = named(spec, "beta");
        require(modulus_is(a.modulus, 1.0) && modulus_is(b.modulus, 1.0),
                "ellipto-parabolic requires unit moduli");
        require(angle_value(a.angle) != 0.0, "ellipto-parabolic requires e^(2 pi i alpha) != 1");
        const Fine f = (angle_is_rational(a.angle) && angle_is_rational(b.angle))
                           ? Fine::RationalElliptoParabolic
                           : Fine::IrrationalElliptoParabolic;
        return finish(f, {{"alpha", a}, {"beta", b}});
    }

    if (k == "ellipto_translation") {
        EigenSpec a = named(spec, "alpha");
        require(modulus_is(a.modulus, 1.0), "ellipto-translation requires unit modulus");
        require(angle_value(a.angle) != 0.0,
                "ellipto-translation requires e^(2 pi i alpha) != 1 (otherwise unipotent)");
        return finish(Fine::ElliptoTranslation, {{"alpha", a}});
    }

    fail("unknown element class '" + k + "'");
}

RationalFit best_rational(double theta, long long max_denominator) {
    theta = frac(theta);
    RationalFit best{0, 1, std::abs(theta)};
    // continued fraction convergents p_k/q_k, a0 = 0 since theta is in [0,1)
    long long p0 = 1, q0 = 0;
    long long p1 = 0, q1 = 1;
    double x = theta;
    for (int iter = 0; iter < 64; ++iter) {
        const double err = std::abs(theta - static_cast<double>(p1) / static_cast<double>(q1)) *
                           static_cast<double>(q1) * static_cast<double>(q1);
        if (q1 <= max_denominator && err < best.scaled_residual) best = {p1, q1, err};
        x = x - std::floor(x);
        if (x < 1e-18) break;
        x = 1.0 / x;
        const double af = std::floor(x);
        if (af > 4e18) break;
        const long long a = static_cast<long long>(af);
        const long long p2 = a * p1 + p0;
        const long long q2 = a * q1 + q0;
        if (q2 > max_denominator || q2 <= 0) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    }
    const double err = std::abs(theta - static_cast<double>(p1) / static_cast<double>(q1)) *
                       static_cast<double>(q1) * static_cast<double>(q1);
    if (q1 <= max_denominator && err < best.scaled_residual) best = {p1, q1, err};
    return best;
}

namespace {

AngleSpec recover_angle(double theta, double tol, long long max_denominator) {
    const auto fit = best_rational(theta, max_denominator);
    if (fit.scaled_residual <= tol) return make_rational_angle(fit.p, fit.q);
    return IrrationalAngle{frac(theta), ""};
}

EigenSpec recover_eigen(const EigenClass& c, double tol, long long maxden) {
    return {c.modulus, recover_angle(c.argument / kTwoPi, tol, maxden)};
}

} // namespace

std::pair<ElementClass, Provenance> classify_fine_numeric(const HMat3& A, double tol,
                                                          long long max_denominator) {
    const HMat3 B = normalize_to_sl(A);
    auto classes = eigen_classes(B);
    const auto js = jordan_structure(B);
    const bool semisimple =
        std::all_of(js.blocks.begin(), js.blocks.end(), [](const JordanBlock& b) { return b.size == 1; });
    const bool unit_moduli = std::all_of(classes.begin(), classes.end(), [](const EigenClass& c) {
        return std::abs(c.modulus - 1.0) <= kModTol;
    });
    auto rec = [&](const EigenClass& c) { return recover_eigen(c, tol, max_denominator); };

    ElementClass out;
    if (!unit_moduli) {
        out.coarse = Coarse::Loxodromic;
        int max_block = 0;
        for (const auto& b : js.blocks) max_block = std::max(max_block, b.size);
        if (max_block >= 2) {
            // J(lambda,2) + (xi): lambda sits under the defective block
            std::complex<double> lam;
            for (const auto& b : js.blocks)
                if (b.size == 2) lam = b.representative;
            const EigenClass* lc = nullptr;
            const EigenClass* xc = nullptr;
            for (const auto& c : classes)
                (std::abs(c.representative - lam) < 1e-6 * (1.0 + std::abs(lam)) ? lc : xc) = &c;
            if (lc == nullptr) throw InternalError("loxo-parabolic: lost the defective class");
            out.fine = Fine::LoxoParabolic;
            out.params = {{"lambda", rec(*lc)}, {"xi", rec(xc != nullptr ? *xc : *lc)}};
        } else if (classes.size() == 3) {
            // distinct representatives: regular when the moduli are pairwise
            // distinct, screw when exactly two coincide
            const bool m01 = std::abs(classes[0].modulus - classes[1].modulus) <= 1e-7;
            const bool m12 = std::abs(classes[1].modulus - classes[2].modulus) <= 1e-7;
            if (!m01 && !m12) {
                out.fine = Fine::RegularLoxodromic;
                out.params = {{"lambda", rec(classes[0])},
                              {"mu", rec(classes[1])},
                              {"xi", rec(classes[2])}};
            } else {
                const size_t i = m01 ? 0 : 1;
                const size_t other = m01 ? 2 : 0;
                const bool first_hi = classes[i].argument >= classes[i + 1].argument;
                const EigenClass& hi = first_hi ? classes[i] : classes[i + 1];
                const EigenClass& lo = first_hi ? classes[i + 1] : classes[i];
                out.fine = Fine::ScrewLoxodromic;
                out.params = {{"lambda", rec(hi)}, {"mu", rec(lo)}, {"xi", rec(classes[other])}};
            }
        } else {
            // repeated eigenvalue with full eigenspace
            const EigenClass* lc = nullptr;
            const EigenClass* xc = nullptr;
            for (const auto& c : classes) (c.multiplicity == 2 ? lc : xc) = &c;
            if (lc == nullptr || xc == nullptr)
                throw InternalError("homothety: unexpected class multiplicities");
            out.fine = std::abs(std::sin(lc->argument)) <= 1e-9 ? Fine::HomothetyReal
                                                                : Fine::HomothetyComplex;
            out.params = {{"lambda", rec(*lc)}, {"xi", rec(*xc)}};
        }
    } else if (semisimple) {
        out.coarse = Coarse::Elliptic;
        std::vector<EigenSpec> specs;
        for (const auto& c : classes)
            for (int i = 0; i < c.multiplicity; ++i) specs.push_back(rec(c));
        std::vector<AngleSpec> angles{specs[0].angle, specs[1].angle, specs[2].angle};
        const auto pat = elliptic_pattern(angles);
        out.fine = elliptic_fine(pat);
        if (pat.two_equal_irrational)
            out.note = "two equal irrational angles; treated as compound type III";
        out.params = {{"alpha", specs[0]}, {"beta", specs[1]}, {"gamma", specs[2]}};
    } else {
        out.coarse = Coarse::Parabolic;
        const bool unipotent = std::all_of(classes.begin(), classes.end(), [](const EigenClass& c) {
            return std::abs(c.representative - std::complex<double>(1.0, 0.0)) <= 1e-7;
        });
        int max_block = 0;
        std::complex<double> big_rep;
        for (const auto& b : js.blocks)
            if (b.size > max_block) {
                max_block = b.size;
                big_rep = b.representative;
            }
        if (unipotent) {
            out.fine = max_block == 2 ? Fine::VerticalTranslation : Fine::NonVerticalTranslation;
            if (max_block == 3) out.fine = Fine::NonVerticalTranslation;
        } else if (max_block == 3) {
            out.fine = Fine::ElliptoTranslation;
            out.params = {{"alpha", rec(classes[0])}};
        } else {
            const EigenClass* ac = nullptr;
            const EigenClass* bc = nullptr;
            for (const auto& c : classes)
                (std::abs(c.representative - big_rep) < 1e-6 * (1.0 + std::abs(big_rep)) ? ac : bc) = &c;
            if (ac == nullptr) throw InternalError("ellipto-parabolic: lost the defective class");
            EigenSpec a = rec(*ac);
            EigenSpec b = rec(bc != nullptr ? *bc : *ac);
            out.fine = (angle_is_rational(a.angle) && angle_is_rational(b.angle))
                           ? Fine::RationalElliptoParabolic
                           : Fine::IrrationalElliptoParabolic;
            if (angle_value(a.angle) == 0.0)
                out.note = "defective eigenvalue 1 beside a second class; not a displayed canonical form";
            out.params = {{"alpha", a}, {"beta", b}};
        }
    }
    return {out, Provenance::Heuristic};
}

std::pair<ElementClass, Provenance> classify_element(const ElementSpec& spec) {
    if (spec.structured()) return {classify_fine(spec.as_structured()), Provenance::Exact};
    return classify_fine_numeric(spec.as_matrix());
}

HMat3 canonical_form(const ElementClass& cls) {
    const Quaternion one = Quaternion::real(1.0);
    HMat3 M;
    switch (cls.fine) {
        case Fine::RationalElliptic:
        case Fine::SimpleIrrationalElliptic:
        case Fine::CompoundIrrationalEllipticI:
        case Fine::CompoundIrrationalEllipticII:
        case Fine::CompoundIrrationalEllipticIII:
            M = HMat3::diag(eigen_quat(cls.param("alpha")), eigen_quat(cls.param("beta")),
                            eigen_quat(cls.param("gamma")));
            break;
        case Fine::RegularLoxodromic:
        case Fine::ScrewLoxodromic:
            M = HMat3::diag(eigen_quat(cls.param("lambda")), eigen_quat(cls.param("mu")),
                            eigen_quat(cls.param("xi")));
            break;
        case Fine::HomothetyReal:
        case Fine::HomothetyComplex:
            M = HMat3::diag(eigen_quat(cls.param("lambda")), eigen_quat(cls.param("lambda")),
                            eigen_quat(cls.param("xi")));
            break;
        case Fine::LoxoParabolic:
            M = HMat3::diag(eigen_quat(cls.param("lambda")), eigen_quat(cls.param("lambda")),
                            eigen_quat(cls.param("xi")));
            M.at(0, 1) = one;
            break;
        case Fine::VerticalTranslation:
            M = HMat3::identity();
            M.at(0, 1) = one;
            break;
        case Fine::NonVerticalTranslation:
            M = HMat3::identity();
            M.at(0, 1) = one;
            M.at(1, 2) = one;
            break;
        case Fine::RationalElliptoParabolic:
        case Fine::IrrationalElliptoParabolic:
            M = HMat3::diag(eigen_quat(cls.param("alpha")), eigen_quat(cls.param("alpha")),
                            eigen_quat(cls.param("beta")));
            M.at(0, 1) = one;
            break;
        case Fine::ElliptoTranslation: {
            const Quaternion a = eigen_quat(cls.param("alpha"));
            M = HMat3::diag(a, a, a);
            M.at(0, 1) = one;
            M.at(1, 2) = one;
            break;
        }
    }
    return normalize_to_sl(M);
}

ProjectiveOrder projective_order(const ElementClass& cls) {
    if (cls.coarse != Coarse::Elliptic) return {false, 0};
    for (const auto& [name, s] : cls.params) {
        if (std::abs(s.modulus - 1.0) > 1e-12) return {false, 0};
        if (!angle_is_rational(s.angle)) return {false, 0};
    }
    std::array<RationalAngle, 3> a{std::get<RationalAngle>(cls.param("alpha").angle),
                                   std::get<RationalAngle>(cls.param("beta").angle),
                                   std::get<RationalAngle>(cls.param("gamma").angle)};
    long long lcm = 1;
    for (const auto& r : a) {
        lcm = std::lcm(lcm, r.q);
        if (lcm > 10'000'000) throw DiagnosticError("projective order search space too large", 0.0);
    }
    for (long long n = 1; n <= 2 * lcm; ++n) {
        bool plus = true, minus = true;
        for (const auto& r : a) {
            if ((n * r.p) % r.q != 0) plus = false;
            if ((2 * n * r.p - r.q) % (2 * r.q) != 0) minus = false;
        }
        if (plus || minus) return {true, n};
    }
    throw InternalError("projective order not found within 2*lcm");
}

} // namespace qk
