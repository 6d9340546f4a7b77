#include <doctest.h>

#include "qk/classify.hpp"
#include "qk/errors.hpp"
#include "qk/rng.hpp"

using namespace qk;

namespace {

EigenSpec angle_only(AngleSpec a) { return {1.0, std::move(a)}; }
EigenSpec rat(long long p, long long q, double modulus = 1.0) {
    return {modulus, make_rational_angle(p, q)};
}
EigenSpec irr(double v, const char* label, double modulus = 1.0) {
    return {modulus, IrrationalAngle{v, label}};
}

const double kGolden = 0.6180339887498949;
const double kSqrt2m1 = 0.41421356237309515;
const double kInvPi = 0.3183098861837907;

StructuredSpec spec_of(const char* klass, std::vector<std::pair<std::string, EigenSpec>> ps) {
    return {klass, std::move(ps)};
}

// the canonical spec of every subclass, as used across the test suite
std::vector<StructuredSpec> canonical_specs() {
    return {
        spec_of("elliptic", {{"alpha", rat(1, 3)}, {"beta", rat(1, 5)}, {"gamma", rat(7, 15)}}),
        spec_of("elliptic", {{"alpha", irr(kGolden, "golden")},
                             {"beta", irr(kGolden, "golden")},
                             {"gamma", irr(kGolden, "golden")}}),
        spec_of("elliptic", {{"alpha", rat(1, 3)}, {"beta", rat(1, 5)}, {"gamma", irr(kGolden, "golden")}}),
        spec_of("elliptic", {{"alpha", rat(1, 3)}, {"beta", irr(kGolden, "golden")}, {"gamma", irr(kSqrt2m1, "sqrt2-1")}}),
        spec_of("elliptic", {{"alpha", irr(kGolden, "golden")}, {"beta", irr(kSqrt2m1, "sqrt2-1")}, {"gamma", irr(kInvPi, "1/pi")}}),
        spec_of("regular_loxodromic", {{"lambda", rat(0, 1, 0.5)}, {"mu", rat(0, 1, 1.0)}, {"xi", rat(0, 1, 2.0)}}),
        spec_of("screw", {{"lambda", rat(1, 4, 2.0)}, {"mu", rat(0, 1, 2.0)}, {"xi", rat(0, 1, 0.25)}}),
        spec_of("homothety", {{"lambda", rat(0, 1, 2.0)}, {"xi", rat(0, 1, 0.25)}}),
        spec_of("homothety", {{"lambda", rat(1, 4, 2.0)}, {"xi", rat(0, 1, 0.25)}}),
        spec_of("loxo_parabolic", {{"lambda", rat(0, 1, 2.0)}, {"xi", rat(0, 1, 0.25)}}),
        spec_of("vertical_translation", {}),
        spec_of("non_vertical_translation", {}),
        spec_of("ellipto_parabolic", {{"alpha", rat(1, 3)}, {"beta", rat(1, 5)}}),
        spec_of("ellipto_parabolic", {{"alpha", irr(kGolden, "golden")}, {"beta", rat(1, 3)}}),
        spec_of("ellipto_translation", {{"alpha", rat(1, 4)}}),
    };
}

const Fine kExpected[] = {
    Fine::RationalElliptic,
    Fine::SimpleIrrationalElliptic,
    Fine::CompoundIrrationalEllipticI,
    Fine::CompoundIrrationalEllipticII,
    Fine::CompoundIrrationalEllipticIII,
    Fine::RegularLoxodromic,
    Fine::ScrewLoxodromic,
    Fine::HomothetyReal,
    Fine::HomothetyComplex,
    Fine::LoxoParabolic,
    Fine::VerticalTranslation,
    Fine::NonVerticalTranslation,
    Fine::RationalElliptoParabolic,
    Fine::IrrationalElliptoParabolic,
    Fine::ElliptoTranslation,
};

} // namespace

TEST_CASE("angles") {
    const RationalAngle r = make_rational_angle(-2, 6);
    CHECK(r.p == 2);
    CHECK(r.q == 3);
    CHECK(angle_value(AngleSpec{r}) == doctest::Approx(2.0 / 3.0));
    CHECK(representative_angle(AngleSpec{r}) == doctest::Approx(1.0 / 3.0));
    CHECK(angle_equal(AngleSpec{make_rational_angle(2, 4)}, AngleSpec{make_rational_angle(1, 2)}));
    CHECK_FALSE(angle_equal(AngleSpec{make_rational_angle(1, 2)},
                            AngleSpec{IrrationalAngle{0.5, ""}}));
}

TEST_CASE("best_rational") {
    const auto f3 = best_rational(1.0 / 3.0, 1000000);
    CHECK(f3.p == 1);
    CHECK(f3.q == 3);
    CHECK(f3.scaled_residual <= 1e-9);
    // the golden ratio admits no convergent with a tiny q^2-scaled residual
    const auto fg = best_rational(kGolden, 1000000);
    CHECK(fg.scaled_residual > 1e-3);
    const auto f0 = best_rational(0.0, 1000000);
    CHECK(f0.q == 1);
    CHECK(f0.p == 0);
    const auto f97 = best_rational(96.0 / 97.0, 1000000);
    CHECK(f97.p == 96);
    CHECK(f97.q == 97);
}

TEST_CASE("structured classification covers the whole taxonomy") {
    const auto specs = canonical_specs();
    for (size_t i = 0; i < specs.size(); ++i) {
        const ElementClass cls = classify_fine(specs[i]);
        CHECK(cls.fine == kExpected[i]);
        CHECK(cls.coarse == coarse_of(kExpected[i]));
    }
}

TEST_CASE("structured validation errors") {
    // screw with lambda == mu
    CHECK_THROWS_AS(classify_fine(spec_of(
                        "screw", {{"lambda", rat(0, 1, 2.0)}, {"mu", rat(0, 1, 2.0)}, {"xi", rat(0, 1, 0.25)}})),
                    ValidationError);
    // loxo-parabolic with the wrong xi modulus
    CHECK_THROWS_AS(classify_fine(spec_of("loxo_parabolic",
                                          {{"lambda", rat(0, 1, 2.0)}, {"xi", rat(0, 1, 0.5)}})),
                    ValidationError);
    // ellipto-translation with alpha = 0 is unipotent
    CHECK_THROWS_AS(classify_fine(spec_of("ellipto_translation", {{"alpha", rat(0, 1)}})),
                    ValidationError);
    // declared fine class contradicting the parameters
    CHECK_THROWS_AS(classify_fine(spec_of("rational_elliptic",
                                          {{"alpha", rat(1, 3)},
                                           {"beta", rat(1, 5)},
                                           {"gamma", irr(kGolden, "golden")}})),
                    ValidationError);
    CHECK_THROWS_AS(classify_fine(spec_of("unknown_thing", {})), ValidationError);
    // missing parameter
    CHECK_THROWS_AS(classify_fine(spec_of("screw", {{"lambda", rat(1, 4, 2.0)}})), ValidationError);
}

TEST_CASE("two equal irrational angles flag") {
    const ElementClass cls = classify_fine(spec_of("elliptic", {{"alpha", irr(kGolden, "golden")},
                                                                {"beta", irr(kGolden, "golden")},
                                                                {"gamma", irr(kSqrt2m1, "s")}}));
    CHECK(cls.fine == Fine::CompoundIrrationalEllipticIII);
    CHECK_FALSE(cls.note.empty());
}

TEST_CASE("canonical forms have unit determinant") {
    for (const auto& s : canonical_specs()) {
        const HMat3 M = canonical_form(classify_fine(s));
        CHECK(det_h(M) == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("coarse classification of canonical forms") {
    const auto specs = canonical_specs();
    for (size_t i = 0; i < specs.size(); ++i) {
        const ElementClass cls = classify_fine(specs[i]);
        CHECK(classify_coarse(canonical_form(cls)) == cls.coarse);
    }
}

TEST_CASE("coarse classification is conjugation invariant") {
    Rng rng(113);
    const auto specs = canonical_specs();
    for (int t = 0; t < 10; ++t) {
        const auto& s = specs[static_cast<size_t>(t) % specs.size()];
        HMat3 S = HMat3::identity();
        for (auto& e : S.e) e += rng.next_quaternion() * 0.15;
        const ElementClass cls = classify_fine(s);
        const HMat3 A = canonical_form(cls);
        CHECK(classify_coarse(S * A * inverse(S)) == cls.coarse);
        // real rescaling does not change the class either
        const double r = 0.5 + rng.next_unit();
        CHECK(classify_coarse(normalize_to_sl(scale_real(A, r))) == cls.coarse);
    }
}

TEST_CASE("matrix-mode classification recovers every canonical subclass") {
    const auto specs = canonical_specs();
    for (size_t i = 0; i < specs.size(); ++i) {
        const ElementClass cls = classify_fine(specs[i]);
        const auto [ncls, prov] = classify_fine_numeric(canonical_form(cls));
        CHECK(ncls.fine == kExpected[i]);
        CHECK(prov == Provenance::Heuristic);
    }
}

TEST_CASE("matrix-mode examples") {
    // diag(1/2, 1, 2)
    const HMat3 D = HMat3::diag(Quaternion::real(0.5), Quaternion::real(1), Quaternion::real(2));
    const auto [cls, prov] = classify_fine_numeric(D);
    CHECK(cls.fine == Fine::RegularLoxodromic);
    CHECK(prov == Provenance::Heuristic);

    // exact floats of rational angles are recovered through convergents
    const ElementClass re = classify_fine(spec_of(
        "elliptic", {{"alpha", rat(1, 3)}, {"beta", rat(1, 5)}, {"gamma", rat(7, 15)}}));
    const auto [ncls, nprov] = classify_fine_numeric(canonical_form(re), 1e-9, 1000000);
    CHECK(ncls.fine == Fine::RationalElliptic);

    // the golden angle stays irrational
    const ElementClass si = classify_fine(spec_of("elliptic", {{"alpha", irr(kGolden, "g")},
                                                               {"beta", irr(kGolden, "g")},
                                                               {"gamma", irr(kGolden, "g")}}));
    const auto [scls, sprov] = classify_fine_numeric(canonical_form(si), 1e-9, 1000000);
    CHECK(scls.fine == Fine::SimpleIrrationalElliptic);
}

TEST_CASE("structured mode is exact") {
    const auto [cls, prov] = classify_element(
        ElementSpec{spec_of("screw", {{"lambda", rat(1, 4, 2.0)}, {"mu", rat(0, 1, 2.0)}, {"xi", rat(0, 1, 0.25)}})});
    CHECK(prov == Provenance::Exact);
    CHECK(cls.fine == Fine::ScrewLoxodromic);
}

TEST_CASE("projective order") {
    const ElementClass re = classify_fine(spec_of(
        "elliptic", {{"alpha", rat(1, 3)}, {"beta", rat(1, 5)}, {"gamma", rat(7, 15)}}));
    const auto po = projective_order(re);
    CHECK(po.finite);
    CHECK(po.n == 15);
    CHECK(2 * 15 % po.n == 0);  // divides twice the lcm

    // -I at order 2: all angles 1/2
    const ElementClass half = classify_fine(spec_of(
        "elliptic", {{"alpha", rat(1, 2)}, {"beta", rat(1, 2)}, {"gamma", rat(1, 2)}}));
    CHECK(projective_order(half).n == 1);  // g = -I is already the projective identity

    const ElementClass si = classify_fine(spec_of("elliptic", {{"alpha", irr(kGolden, "g")},
                                                               {"beta", irr(kGolden, "g")},
                                                               {"gamma", irr(kGolden, "g")}}));
    CHECK_FALSE(projective_order(si).finite);

    const ElementClass vt = classify_fine(spec_of("vertical_translation", {}));
    CHECK_FALSE(projective_order(vt).finite);

    // the projective order really returns to the start
    const HMat3 g = canonical_form(re);
    HMat3 P = HMat3::identity();
    for (long long i = 0; i < po.n; ++i) P = P * g;
    // P must be a real multiple of the identity
    CHECK(std::abs(std::abs(P.at(0, 0).w) - 1.0) <= 1e-12);
    CHECK((P.at(0, 0) - P.at(1, 1)).norm() <= 1e-12);
    CHECK((P.at(0, 0) - P.at(2, 2)).norm() <= 1e-12);
    CHECK(P.at(0, 1).norm() + P.at(0, 2).norm() + P.at(1, 2).norm() <= 1e-12);
}
