#include "qk/hmat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "qk/errors.hpp"

namespace qk {

namespace {
using cd = std::complex<double>;
}

HVec3 HVec3::basis(int i) {
    HVec3 v;
    v[i] = Quaternion::real(1.0);
    return v;
}

Quaternion herm(const HVec3& u, const HVec3& v) {
    Quaternion s;
    for (int i = 0; i < 3; ++i) s += conj(u[i]) * v[i];
    return s;
}

HMat3 HMat3::identity() {
    return diag(Quaternion::real(1.0), Quaternion::real(1.0), Quaternion::real(1.0));
}

HMat3 HMat3::diag(const Quaternion& a, const Quaternion& b, const Quaternion& c) {
    HMat3 M;
    M.at(0, 0) = a;
    M.at(1, 1) = b;
    M.at(2, 2) = c;
    return M;
}

HMat3 operator+(const HMat3& A, const HMat3& B) {
    HMat3 C;
    for (size_t i = 0; i < 9; ++i) C.e[i] = A.e[i] + B.e[i];
    return C;
}

HMat3 operator-(const HMat3& A, const HMat3& B) {
    HMat3 C;
    for (size_t i = 0; i < 9; ++i) C.e[i] = A.e[i] - B.e[i];
    return C;
}

HMat3 mat_mul(const HMat3& A, const HMat3& B) {
    HMat3 C;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            Quaternion s;
            for (int k = 0; k < 3; ++k) s += A.at(r, k) * B.at(k, c);
            C.at(r, c) = s;
        }
    return C;
}

HVec3 mat_vec(const HMat3& A, const HVec3& v) {
    HVec3 w;
    for (int r = 0; r < 3; ++r) {
        Quaternion s;
        for (int k = 0; k < 3; ++k) s += A.at(r, k) * v[k];
        w[r] = s;
    }
    return w;
}

Mat6c phi_embed(const HMat3& A) {
    Mat6c M;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            auto [a1, a2] = complex_split(A.at(r, c));
            M(r, c) = a1;
            M(r, c + 3) = a2;
            M(r + 3, c) = -std::conj(a2);
            M(r + 3, c + 3) = std::conj(a1);
        }
    return M;
}

HMat3 phi_pullback(const Mat6c& M, double block_tol) {
    HMat3 A;
    double scale = M.cwiseAbs().maxCoeff();
    if (scale == 0.0) scale = 1.0;
    double worst = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const cd a1 = M(r, c);
            const cd a2 = M(r, c + 3);
            worst = std::max(worst, std::abs(M(r + 3, c) + std::conj(a2)));
            worst = std::max(worst, std::abs(M(r + 3, c + 3) - std::conj(a1)));
            A.at(r, c) = Quaternion::from_split(a1, a2);
        }
    if (worst > block_tol * scale)
        throw InternalError("phi_pullback: matrix does not have the adjoint block structure");
    return A;
}

Vec6c chi_embed(const HVec3& v) {
    Vec6c u;
    for (int i = 0; i < 3; ++i) {
        auto [v1, v2] = complex_split(v[i]);
        u(i) = v1;
        u(i + 3) = -std::conj(v2);
    }
    return u;
}

HVec3 chi_pullback(const Vec6c& u) {
    HVec3 v;
    for (int i = 0; i < 3; ++i)
        v[i] = Quaternion::from_split(u(i), -std::conj(u(i + 3)));
    return v;
}

double det_h(const HMat3& A) {
    const cd d = phi_embed(A).determinant();
    const double scale = std::max(1e-300, std::abs(d));
    if (std::abs(d.imag()) > 1e-9 * scale) {
        std::ostringstream os;
        os << "det_h: imaginary residue " << d.imag() << " exceeds tolerance (det " << d << ")";
        throw InternalError(os.str());
    }
    return d.real();
}

HMat3 inverse(const HMat3& A, double singular_tol) {
    const double d = det_h(A);
    if (!(d > singular_tol)) {
        std::ostringstream os;
        os << "matrix is singular: det_h = " << d;
        throw DomainError(os.str());
    }
    Mat6c Minv = phi_embed(A).inverse();
    return phi_pullback(Minv, 1e-8);
}

HMat3 transpose(const HMat3& A) {
    HMat3 T;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) T.at(r, c) = A.at(c, r);
    return T;
}

HMat3 conj_transpose(const HMat3& A) {
    HMat3 T;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) T.at(r, c) = conj(A.at(c, r));
    return T;
}

double sup_norm(const HMat3& A) {
    double m = 0.0;
    for (const auto& q : A.e) m = std::max(m, q.norm());
    return m;
}

HMat3 scale_real(const HMat3& A, double r) {
    HMat3 B;
    for (size_t i = 0; i < 9; ++i) B.e[i] = A.e[i] * r;
    return B;
}

HMat3 normalize_to_sl(const HMat3& A) {
    const double d = det_h(A);
    if (!(d > 0.0)) throw DomainError("normalize_to_sl: matrix is singular");
    return scale_real(A, std::pow(d, -1.0 / 6.0));
}

double max_abs_diff(const HMat3& A, const HMat3& B) {
    double m = 0.0;
    for (size_t i = 0; i < 9; ++i) m = std::max(m, (A.e[i] - B.e[i]).norm());
    return m;
}

std::vector<HVec3> right_kernel_basis(const Mat6c& M, double rank_tol) {
    Eigen::JacobiSVD<Mat6c> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double thresh = rank_tol * sv(0);
    std::vector<HVec3> out;
    for (int i = 0; i < 6; ++i)
        if (sv(i) <= thresh) out.push_back(chi_pullback(svd.matrixV().col(i)));
    return out;
}

std::vector<HVec3> column_space_basis(const Mat6c& M, double rank_tol) {
    Eigen::JacobiSVD<Mat6c> svd(M, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double thresh = rank_tol * sv(0);
    std::vector<HVec3> out;
    for (int i = 0; i < 6; ++i)
        if (sv(i) > thresh) out.push_back(chi_pullback(svd.matrixU().col(i)));
    return out;
}

int complex_rank(const Mat6c& M, double rank_tol) {
    Eigen::JacobiSVD<Mat6c> svd(M);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0) return 0;
    const double thresh = rank_tol * sv(0);
    int r = 0;
    for (int i = 0; i < 6; ++i)
        if (sv(i) > thresh) ++r;
    return r;
}

std::vector<HVec3> h_gram_schmidt(const std::vector<HVec3>& vs, double drop_tol) {
    std::vector<HVec3> basis;
    for (const auto& v : vs) {
        HVec3 w = v;
        for (const auto& e : basis) {
            const Quaternion proj = herm(e, w);
            w = w - e.scaled_right(proj);
        }
        const double n = w.norm();
        if (n > drop_tol * std::max(1.0, v.norm())) basis.push_back(w.scaled(1.0 / n));
        if (basis.size() == 3) break;
    }
    return basis;
}

} // namespace qk
