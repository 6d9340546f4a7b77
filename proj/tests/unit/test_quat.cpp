#include <doctest.h>

#include "oracles.hpp"
#include "qk/quat.hpp"
#include "qk/rng.hpp"

using namespace qk;

namespace {
const Quaternion qi{0, 1, 0, 0};
const Quaternion qj{0, 0, 1, 0};
const Quaternion qk_{0, 0, 0, 1};

bool close(const Quaternion& a, const Quaternion& b, double tol = 1e-12) {
    return (a - b).norm() <= tol * std::max(1.0, std::max(a.norm(), b.norm()));
}
} // namespace

TEST_CASE("defining relations") {
    CHECK(close(qi * qi, Quaternion::real(-1)));
    CHECK(close(qj * qj, Quaternion::real(-1)));
    CHECK(close(qk_ * qk_, Quaternion::real(-1)));
    CHECK(close(qi * qj * qk_, Quaternion::real(-1)));
    CHECK(close(qi * qj, qk_));
}

TEST_CASE("products match the table oracle") {
    const Quaternion a{1, 0, 0, 0};
    CHECK(close((Quaternion{1, 1, 0, 0}) * (Quaternion{1, 0, 1, 0}), Quaternion{1, 1, 1, 1}));
    // squared norm through conjugation
    const Quaternion q{1, 2, 3, 4};
    CHECK(close(q * conj(q), Quaternion::real(30)));
    CHECK(norm(q) == doctest::Approx(std::sqrt(30.0)).epsilon(1e-14));

    Rng rng(7);
    for (int t = 0; t < 500; ++t) {
        const Quaternion x = rng.next_quaternion();
        const Quaternion y = rng.next_quaternion();
        CHECK(close(x * y, oracle::table_mul(x, y)));
    }
    (void)a;
}

TEST_CASE("conjugation is an anti-automorphism") {
    const Quaternion a{1, 1, 0, 0};
    const Quaternion b{1, 0, 1, 0};
    CHECK(close(conj(a * b), conj(b) * conj(a)));
    CHECK(close(conj(a * b), Quaternion{1, -1, -1, -1}));
    Rng rng(11);
    for (int t = 0; t < 200; ++t) {
        const Quaternion x = rng.next_quaternion();
        const Quaternion y = rng.next_quaternion();
        CHECK(close(conj(x * y), conj(y) * conj(x)));
    }
}

TEST_CASE("inverse") {
    CHECK(close(inverse(qi), -qi));
    CHECK(close(inverse(Quaternion::real(2)), Quaternion::real(0.5)));
    CHECK_THROWS_AS(inverse(Quaternion{}), DomainError);
    Rng rng(13);
    for (int t = 0; t < 100; ++t) {
        const Quaternion x = rng.next_quaternion();
        if (x.norm() < 1e-6) continue;
        CHECK(close(x * inverse(x), Quaternion::real(1), 1e-11));
    }
}

TEST_CASE("complex split") {
    auto [c1, c2] = complex_split(qj);
    CHECK(c1 == std::complex<double>(0, 0));
    CHECK(c2 == std::complex<double>(1, 0));
    auto [d1, d2] = complex_split(Quaternion{1, 1, 1, 1});
    CHECK(d1 == std::complex<double>(1, 1));
    CHECK(d2 == std::complex<double>(1, 1));
    auto [e1, e2] = complex_split(Quaternion::real(2));
    CHECK(e1 == std::complex<double>(2, 0));
    CHECK(e2 == std::complex<double>(0, 0));

    // split round-trip is exact
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        const Quaternion x = rng.next_quaternion();
        auto [s1, s2] = complex_split(x);
        const Quaternion back = Quaternion::from_split(s1, 0) + Quaternion::from_split(s2, 0) * qj;
        CHECK(back.w == x.w);
        CHECK(back.x == x.x);
        CHECK(back.y == x.y);
        CHECK(back.z == x.z);
    }
}

TEST_CASE("is_complex") {
    CHECK(is_complex(Quaternion{1, 1, 0, 0}, 0.0));
    CHECK_FALSE(is_complex(qj, 1e-12));
    CHECK(is_complex(Quaternion{1, 0, 1e-15, 0}, 1e-12));
}

TEST_CASE("algebra properties on random triples") {
    Rng rng(19);
    for (int t = 0; t < 300; ++t) {
        const Quaternion a = rng.next_quaternion();
        const Quaternion b = rng.next_quaternion();
        const Quaternion c = rng.next_quaternion();
        CHECK(close((a * b) * c, a * (b * c)));
        CHECK(norm(a * b) == doctest::Approx(norm(a) * norm(b)).epsilon(1e-12));
    }
}

TEST_CASE("w j = j conj(w) for complex w") {
    Rng rng(23);
    for (int t = 0; t < 100; ++t) {
        const Quaternion w{rng.next_normal(), rng.next_normal(), 0, 0};
        CHECK(close(w * qj, qj * conj(w)));
    }
}
