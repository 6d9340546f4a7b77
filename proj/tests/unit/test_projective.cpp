#include <doctest.h>

#include "qk/errors.hpp"
#include "qk/projective.hpp"
#include "qk/rng.hpp"

using namespace qk;

namespace {
const Quaternion one = Quaternion::real(1);
const Quaternion qi{0, 1, 0, 0};
const Quaternion qj{0, 0, 1, 0};
const Quaternion qk_{0, 0, 0, 1};

ProjPoint rand_point(Rng& rng) { return ProjPoint(rng.next_hvec3()); }

// random quaternionic unitary via Gram-Schmidt of a random basis
HMat3 random_unitary(Rng& rng) {
    std::vector<HVec3> vs{rng.next_hvec3(), rng.next_hvec3(), rng.next_hvec3()};
    auto basis = h_gram_schmidt(vs, 1e-6);
    REQUIRE(basis.size() == 3);
    HMat3 U;
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < 3; ++r) U.at(r, c) = basis[static_cast<size_t>(c)][r];
    return U;
}
} // namespace

TEST_CASE("canonicalization and right-scaling invariance") {
    HVec3 v;
    v[2] = qj * 5.0;
    const ProjPoint p(v);
    CHECK(chordal_dist(p, ProjPoint::basis(2)) <= 1e-14);

    HVec3 w;
    w[0] = qj;
    w[1] = qj;
    const ProjPoint a(w);
    HVec3 u;
    u[0] = one;
    u[1] = one;
    CHECK(chordal_dist(a, ProjPoint(u)) <= 1e-14);

    HVec3 x1, x2;
    x1[0] = one; x1[1] = qi;
    x2[0] = qk_; x2[1] = qi * qk_;
    CHECK(chordal_dist(ProjPoint(x1), ProjPoint(x2)) <= 1e-14);
    // canonical representatives agree componentwise
    for (int i = 0; i < 3; ++i)
        CHECK((ProjPoint(x1)[i] - ProjPoint(x2)[i]).norm() <= 1e-14);

    HVec3 z;
    CHECK_THROWS_AS(ProjPoint{z}, DomainError);

    Rng rng(71);
    for (int t = 0; t < 100; ++t) {
        const HVec3 r = rng.next_hvec3();
        const Quaternion alpha = rng.next_quaternion();
        if (alpha.norm() < 1e-3) continue;
        CHECK(chordal_dist(ProjPoint(r), ProjPoint(r.scaled_right(alpha))) <= 1e-12);
        // canonicalization is idempotent
        const ProjPoint p1(r);
        const ProjPoint p2(p1.canonical());
        for (int i = 0; i < 3; ++i) CHECK((p1[i] - p2[i]).norm() <= 1e-15);
    }
}

TEST_CASE("chordal distance values and metric axioms") {
    const ProjPoint e1 = ProjPoint::basis(0), e2 = ProjPoint::basis(1);
    CHECK(chordal_dist(e1, e2) == doctest::Approx(1.0));
    HVec3 v;
    v[0] = one;
    v[1] = one;
    CHECK(chordal_dist(ProjPoint(v), e1) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

    Rng rng(73);
    for (int t = 0; t < 200; ++t) {
        const ProjPoint p = rand_point(rng), q = rand_point(rng), r = rand_point(rng);
        CHECK(chordal_dist(p, q) == chordal_dist(q, p));  // exact symmetry
        CHECK(chordal_dist(p, r) <= chordal_dist(p, q) + chordal_dist(q, r) + 1e-12);
        CHECK(chordal_dist(p, p) <= 1e-12);
        // unit right scalings leave it unchanged
        Quaternion a = rng.next_quaternion(), b = rng.next_quaternion();
        if (a.norm() < 1e-3 || b.norm() < 1e-3) continue;
        a = a / a.norm();
        b = b / b.norm();
        CHECK(chordal_dist(ProjPoint(p.canonical().scaled_right(a)),
                           ProjPoint(q.canonical().scaled_right(b))) ==
              doctest::Approx(chordal_dist(p, q)).epsilon(1e-10));
    }
}

TEST_CASE("chordal distance is a unitary invariant") {
    Rng rng(79);
    for (int t = 0; t < 30; ++t) {
        const HMat3 U = random_unitary(rng);
        CHECK(sup_norm(conj_transpose(U) * U - HMat3::identity()) <= 1e-10);
        const ProjPoint p = rand_point(rng), q = rand_point(rng);
        CHECK(chordal_dist(apply(U, p), apply(U, q)) ==
              doctest::Approx(chordal_dist(p, q)).epsilon(1e-10));
    }
}

TEST_CASE("lines: polar and span") {
    const ProjPoint e1 = ProjPoint::basis(0), e2 = ProjPoint::basis(1), e3 = ProjPoint::basis(2);
    CHECK(chordal_dist(line_through(e1, e2).polar(), e3) <= 1e-12);
    CHECK(chordal_dist(line_through(e1, e3).polar(), e2) <= 1e-12);

    HVec3 v;
    v[0] = one;
    v[1] = one;
    const ProjLine l = line_through(ProjPoint(v), e3);
    HVec3 n;
    n[0] = one;
    n[1] = -one;
    CHECK(chordal_dist(l.polar(), ProjPoint(n)) <= 1e-10);

    CHECK_THROWS_AS(line_through(e1, e1), DomainError);

    Rng rng(83);
    for (int t = 0; t < 50; ++t) {
        const ProjPoint p = rand_point(rng), q = rand_point(rng);
        if (chordal_dist(p, q) < 1e-3) continue;
        const ProjLine m = line_through(p, q);
        CHECK(herm(m.polar().canonical(), p.canonical()).norm() <= 1e-9);
        CHECK(herm(m.polar().canonical(), q.canonical()).norm() <= 1e-9);
        // membership of right-module combinations
        const HVec3 comb = p.canonical().scaled_right(rng.next_quaternion()) +
                           q.canonical().scaled_right(rng.next_quaternion());
        if (comb.norm() < 1e-6) continue;
        CHECK(point_line_dist(ProjPoint(comb), m) <= 1e-9);
        // polar and span routes agree
        const ProjPoint r = rand_point(rng);
        CHECK(point_line_dist(r, m) == doctest::Approx(point_line_dist_via_span(r, m)).epsilon(1e-9));
    }
}

TEST_CASE("point-line distances") {
    const ProjPoint e1 = ProjPoint::basis(0), e2 = ProjPoint::basis(1), e3 = ProjPoint::basis(2);
    const ProjLine l12 = line_through(e1, e2);
    CHECK(point_line_dist(e3, l12) == doctest::Approx(1.0));
    HVec3 v;
    v[0] = one;
    v[2] = one;
    CHECK(point_line_dist(ProjPoint(v), l12) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("line_from_polar round trip") {
    Rng rng(89);
    for (int t = 0; t < 30; ++t) {
        const ProjPoint n = rand_point(rng);
        const ProjLine l = line_from_polar(n);
        CHECK(chordal_dist(l.polar(), n) <= 1e-12);
        CHECK(herm(n.canonical(), l.span()[0].canonical()).norm() <= 1e-9);
        CHECK(herm(n.canonical(), l.span()[1].canonical()).norm() <= 1e-9);
    }
}

TEST_CASE("complex line membership") {
    HVec3 a, b, c;
    a[0] = one; a[1] = qi;
    b[0] = one; b[1] = qj;
    c[0] = qj;  c[1] = qk_;
    CHECK(in_complex_line(ProjPoint(a), 0, 1, 1e-9));
    CHECK_FALSE(in_complex_line(ProjPoint(b), 0, 1, 1e-9));
    CHECK(in_complex_line(ProjPoint(c), 0, 1, 1e-9));  // [j:k:0] = [1:i:0]
}

TEST_CASE("projective action") {
    const HMat3 D = HMat3::diag(Quaternion::real(0.5), one, Quaternion::real(2));
    CHECK(chordal_dist(apply(D, ProjPoint::basis(2)), ProjPoint::basis(2)) <= 1e-14);

    HMat3 V = HMat3::identity();
    V.at(0, 1) = one;  // vertical translation
    HVec3 p;
    p[0] = one; p[1] = one; p[2] = one;
    HVec3 q;
    q[0] = Quaternion::real(2); q[1] = one; q[2] = one;
    CHECK(chordal_dist(apply(V, ProjPoint(p)), ProjPoint(q)) <= 1e-12);

    Rng rng(97);
    for (int t = 0; t < 50; ++t) {
        HMat3 g = HMat3::identity();
        for (auto& e : g.e) e += rng.next_quaternion() * 0.3;
        HMat3 h = HMat3::identity();
        for (auto& e : h.e) e += rng.next_quaternion() * 0.3;
        const ProjPoint x = rand_point(rng);
        // composition law and real-lift invariance
        CHECK(chordal_dist(apply(g * h, x), apply(g, apply(h, x))) <= 1e-10);
        const double r = 0.5 + rng.next_unit();
        CHECK(chordal_dist(apply(scale_real(g, r), x), apply(g, x)) <= 1e-11);
    }

    const HMat3 D1 = HMat3::diag(Quaternion{}, Quaternion{}, one);
    CHECK_THROWS_AS(apply(D1, ProjPoint::basis(0)), DomainError);
}

TEST_CASE("dual action") {
    const HMat3 D = HMat3::diag(Quaternion::real(0.5), one, Quaternion::real(2));
    const ProjLine l = line_from_polar(ProjPoint::basis(0));
    const ProjLine limg = dual_apply(D, l);
    CHECK(chordal_dist(limg.polar(), ProjPoint::basis(0)) <= 1e-12);

    const ProjLine any = line_through(ProjPoint::basis(0), ProjPoint::basis(1));
    const ProjLine same = dual_apply(HMat3::identity(), any);
    CHECK(chordal_dist(same.polar(), any.polar()) <= 1e-12);

    // vertical translation drives dual polars toward [0:1:0]
    HMat3 V = HMat3::identity();
    V.at(0, 1) = one;
    HVec3 n;
    n[0] = one; n[1] = Quaternion{0.3, 0.1, 0.2, 0.0}; n[2] = Quaternion{0.5, 0, 0, 0.4};
    ProjPoint polar(n);
    const HMat3 step = dual_step_matrix(V);
    for (int i = 0; i < 4000; ++i) polar = apply(step, polar);
    CHECK(chordal_dist(polar, ProjPoint::basis(1)) <= 2e-3);
}
