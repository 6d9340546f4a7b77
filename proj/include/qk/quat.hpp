#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>
#include <utility>

#include "qk/errors.hpp"

namespace qk {

/// Hamilton quaternion a = w + x*i + y*j + z*k with double components.
///
/// Multiplication follows i^2 = j^2 = k^2 = ijk = -1 and is non-commutative.
/// Everything here is a plain value; equality in tests is always tolerance based.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_)
        : w(w_), x(x_), y(y_), z(z_) {}

    static constexpr Quaternion real(double r) { return {r, 0.0, 0.0, 0.0}; }

    /// c1 + c2*j with c1, c2 in the complex plane spanned by {1, i}.
    static Quaternion from_split(std::complex<double> c1, std::complex<double> c2) {
        return {c1.real(), c1.imag(), c2.real(), c2.imag()};
    }

    constexpr Quaternion& operator+=(const Quaternion& o) {
        w += o.w; x += o.x; y += o.y; z += o.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& o) {
        w -= o.w; x -= o.x; y -= o.y; z -= o.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
    constexpr Quaternion& operator/=(double s) {
        w /= s; x /= s; y /= s; z /= s;
        return *this;
    }

    friend constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
    friend constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
    friend constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
    friend constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
    friend constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
    friend constexpr Quaternion operator/(Quaternion a, double s) { return a /= s; }

    /// Hamilton product.
    friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
        return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
                a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
                a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
                a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
    }

    constexpr double norm_sq() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm_sq()); }

    friend std::ostream& operator<<(std::ostream& os, const Quaternion& q);
};

constexpr Quaternion conj(const Quaternion& a) { return {a.w, -a.x, -a.y, -a.z}; }
inline double norm(const Quaternion& a) { return a.norm(); }
constexpr Quaternion mul(const Quaternion& a, const Quaternion& b) { return a * b; }

inline Quaternion inverse(const Quaternion& a) {
    const double n2 = a.norm_sq();
    if (n2 == 0.0) throw DomainError("quaternion inverse of zero");
    return conj(a) / n2;
}

/// Splits a = c1 + c2*j with c1 = w + x*i and c2 = y + z*i (k = i*j).
inline std::pair<std::complex<double>, std::complex<double>> complex_split(const Quaternion& a) {
    return {{a.w, a.x}, {a.y, a.z}};
}

/// True iff the j and k parts are within tol of zero.
inline bool is_complex(const Quaternion& a, double tol) {
    return std::abs(a.y) <= tol && std::abs(a.z) <= tol;
}

/// Magnitude of the j,k residue, zero exactly on the embedded complex plane.
inline double jk_residual(const Quaternion& a) { return std::hypot(a.y, a.z); }

inline bool finite(const Quaternion& a) {
    return std::isfinite(a.w) && std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

} // namespace qk
