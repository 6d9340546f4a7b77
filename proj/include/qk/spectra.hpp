#pragma once

#include <complex>
#include <vector>

#include "qk/hmat.hpp"
#include "qk/projective.hpp"

namespace qk {

/// Similarity class of right eigenvalues, represented by the unique complex
/// number with nonnegative imaginary part.
struct EigenClass {
    std::complex<double> representative;  // Im >= 0
    double modulus = 0.0;
    double argument = 0.0;                // in [0, pi]
    int multiplicity = 0;                 // quaternionic algebraic multiplicity
};

struct JordanBlock {
    std::complex<double> representative;
    int size = 0;
};

/// Jordan block multiset; a similarity invariant, compared order-free.
struct JordanStructure {
    std::vector<JordanBlock> blocks;
    int total_size() const;
};

/// Components of the projective fixed-point set of an element.
struct ComplexLineSpan {
    ProjPoint a, b;  // fixed points are classes of a*alpha + b*beta, alpha,beta complex
};

struct FixedSet {
    std::vector<ProjPoint> points;
    std::vector<ProjLine> lines;
    std::vector<ComplexLineSpan> complex_lines;
    bool complex_plane = false;  // embedded P^2_C (lambda*I with lambda non-real)
    bool whole_space = false;    // +-identity
};

/// Eigenvalues of phi_embed(A) paired into conjugate pairs; the Im >= 0 member
/// of each pair represents its class, classes with equal representatives merge
/// with summed multiplicity. Total multiplicity is always 3.
/// Pairing failure beyond pair_tol raises InternalError.
std::vector<EigenClass> eigen_classes(const HMat3& A, double pair_tol = 1e-9,
                                      double merge_tol = 1e-7);

/// Block sizes recovered from ranks of (phi(A) - lambda I)^k. Quaternionic
/// blocks at a real class appear doubled on the complex side and are halved
/// back. A singular value inside the ambiguity band around
/// rank_tol * sigma_max raises DiagnosticError naming lambda and k.
JordanStructure jordan_structure(const HMat3& A, double rank_tol = 1e-8);

/// Projective fixed-point set: isolated points from H-dimension-1 eigenspaces,
/// a full line for a real class with H-dimension 2, a complex line for a
/// non-real class with H-dimension 2 (only complex combinations stay fixed).
FixedSet fixed_points(const HMat3& A, double tol = 1e-8);

/// True iff exactly one eigenvalue class attains the maximal modulus, with
/// algebraic multiplicity 1 (strict dominance).
bool is_proximal(const HMat3& A, double mod_tol = 1e-9);

/// Projective point of the dominant eigendirection. Requires a unique class of
/// strictly maximal modulus (the class may be defective: the true eigenvector
/// inside the dominant generalized eigenspace is returned).
ProjPoint attracting_fixed_point(const HMat3& A, double mod_tol = 1e-9);

} // namespace qk
