#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qk/quat.hpp"

namespace qk {

using Mat6c = Eigen::Matrix<std::complex<double>, 6, 6>;
using Vec6c = Eigen::Matrix<std::complex<double>, 6, 1>;

/// Column vector of H^3, viewed as a right H-module: scalars act from the right.
struct HVec3 {
    std::array<Quaternion, 3> c{};

    Quaternion& operator[](int i) { return c[static_cast<size_t>(i)]; }
    const Quaternion& operator[](int i) const { return c[static_cast<size_t>(i)]; }

    static HVec3 basis(int i);
    static HVec3 zero() { return {}; }

    HVec3 scaled_right(const Quaternion& a) const {
        return {{c[0] * a, c[1] * a, c[2] * a}};
    }
    HVec3 scaled(double r) const { return {{c[0] * r, c[1] * r, c[2] * r}}; }

    friend HVec3 operator+(const HVec3& u, const HVec3& v) {
        return {{u.c[0] + v.c[0], u.c[1] + v.c[1], u.c[2] + v.c[2]}};
    }
    friend HVec3 operator-(const HVec3& u, const HVec3& v) {
        return {{u.c[0] - v.c[0], u.c[1] - v.c[1], u.c[2] - v.c[2]}};
    }

    double norm_sq() const { return c[0].norm_sq() + c[1].norm_sq() + c[2].norm_sq(); }
    double norm() const { return std::sqrt(norm_sq()); }
};

/// Hermitian right form <u,v> = sum conj(u_i) v_i. Right-linear in v.
Quaternion herm(const HVec3& u, const HVec3& v);

/// 3x3 matrix over H, row-major. Acts on HVec3 from the left, so matrix
/// entries multiply vector components from the left and right scalar
/// multiplication on vectors commutes with the action.
struct HMat3 {
    std::array<Quaternion, 9> e{};

    Quaternion& at(int r, int c) { return e[static_cast<size_t>(3 * r + c)]; }
    const Quaternion& at(int r, int c) const { return e[static_cast<size_t>(3 * r + c)]; }

    static HMat3 identity();
    static HMat3 diag(const Quaternion& a, const Quaternion& b, const Quaternion& c);

    friend HMat3 operator+(const HMat3& A, const HMat3& B);
    friend HMat3 operator-(const HMat3& A, const HMat3& B);
};

HMat3 mat_mul(const HMat3& A, const HMat3& B);
HVec3 mat_vec(const HMat3& A, const HVec3& v);
inline HMat3 operator*(const HMat3& A, const HMat3& B) { return mat_mul(A, B); }
inline HVec3 operator*(const HMat3& A, const HVec3& v) { return mat_vec(A, v); }

/// Complex adjoint embedding: A = A1 + A2*j entrywise maps to the 6x6 block
/// matrix [[A1, A2], [-conj(A2), conj(A1)]]. Unital algebra homomorphism.
Mat6c phi_embed(const HMat3& A);

/// Reads a 6x6 complex matrix of the block shape produced by phi_embed back
/// into a quaternionic matrix using the top blocks. `block_tol` bounds the
/// allowed mismatch of the redundant bottom blocks (relative to sup norm).
HMat3 phi_pullback(const Mat6c& M, double block_tol = 1e-9);

/// Vector-level embedding chi(v1 + v2 j) = (v1, -conj(v2)) intertwining the
/// left action of A on H^3 with phi_embed(A) on C^6. Right C-linear.
Vec6c chi_embed(const HVec3& v);
HVec3 chi_pullback(const Vec6c& u);

/// det of phi_embed(A): real and nonnegative. The imaginary residue must stay
/// below 1e-9 relative or an InternalError is raised.
double det_h(const HMat3& A);

/// Inverse computed through the complex embedding. Throws DomainError with the
/// det_h value when the matrix is singular (det below `singular_tol`).
HMat3 inverse(const HMat3& A, double singular_tol = 1e-12);

HMat3 transpose(const HMat3& A);
HMat3 conj_transpose(const HMat3& A);

/// Max entry modulus.
double sup_norm(const HMat3& A);
HMat3 scale_real(const HMat3& A, double r);

/// Rescales by det_h(A)^(-1/6) so the result has unit quaternionic determinant.
/// Only real rescaling preserves the induced projective map.
HMat3 normalize_to_sl(const HMat3& A);

double max_abs_diff(const HMat3& A, const HMat3& B);

/// Right kernel of a 6x6 complex matrix: columns of V whose singular value is
/// <= rank_tol * sigma_max, pulled back to H^3. The result is a C-basis of a
/// quaternionic subspace (the kernel is invariant under the right j action).
std::vector<HVec3> right_kernel_basis(const Mat6c& M, double rank_tol);

/// Column space counterpart: left singular vectors with sigma > rank_tol * sigma_max.
std::vector<HVec3> column_space_basis(const Mat6c& M, double rank_tol);

/// Complex rank of M with the given relative threshold.
int complex_rank(const Mat6c& M, double rank_tol);

/// Quaternionic Gram-Schmidt with scalars on the right. Returns an orthonormal
/// H-basis of the span; inputs whose residual norm falls below drop_tol are
/// discarded as dependent.
std::vector<HVec3> h_gram_schmidt(const std::vector<HVec3>& vs, double drop_tol = 1e-8);

} // namespace qk
