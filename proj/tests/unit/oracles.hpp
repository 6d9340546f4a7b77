#pragma once

// Independent oracles used to freeze expected values. These deliberately avoid
// the implementation paths they check.

#include <array>
#include <cmath>
#include <complex>
#include <set>
#include <vector>

#include "qk/quat.hpp"

namespace qk::oracle {

// Table-driven Hamilton product over the basis {1,i,j,k}: component k of the
// product collects sign[a][b] wherever basis[a][b] == k.
inline Quaternion table_mul(const Quaternion& x, const Quaternion& y) {
    static const int basis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
    static const int sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
    const std::array<double, 4> a{x.w, x.x, x.y, x.z};
    const std::array<double, 4> b{y.w, y.x, y.y, y.z};
    std::array<double, 4> out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out[static_cast<size_t>(basis[i][j])] +=
                sign[i][j] * a[static_cast<size_t>(i)] * b[static_cast<size_t>(j)];
    return {out[0], out[1], out[2], out[3]};
}

// 2x2 complex determinant of the adjoint block of a single quaternion,
// [[c1, c2], [-conj(c2), conj(c1)]] by cofactor expansion.
inline double adjoint_det_1x1(const Quaternion& q) {
    const std::complex<double> c1{q.w, q.x};
    const std::complex<double> c2{q.y, q.z};
    const std::complex<double> d = c1 * std::conj(c1) + c2 * std::conj(c2);
    return d.real();
}

// Gap-scan density oracle: recomputes the point set from scratch for every N
// and returns the first N whose maximal circular gap is below the threshold.
// Positions must match the implementation bit for bit, so the same frac
// expression is used.
inline long s1_first_dense(double alpha, double eps, long n_limit) {
    const double thr = std::asin(std::min(1.0, eps / 2.0)) / 3.1415926535897932384626433832795;
    for (long N = 1; N <= n_limit; ++N) {
        std::set<double> pts;
        for (long n = 0; n <= N; ++n) {
            double f = static_cast<double>(n) * alpha;
            f -= std::floor(f);
            if (f >= 1.0) f = 0.0;
            pts.insert(f);
        }
        double maxgap = 0.0;
        auto first = pts.begin();
        auto prev = first;
        for (auto it = std::next(first); it != pts.end(); ++it) {
            maxgap = std::max(maxgap, *it - *prev);
            prev = it;
        }
        maxgap = std::max(maxgap, *first + 1.0 - *prev);
        if (maxgap <= thr) return N;
    }
    return -1;
}

} // namespace qk::oracle
