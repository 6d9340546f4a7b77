#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "qk/classify.hpp"
#include "qk/limitsets.hpp"
#include "qk/projective.hpp"

namespace qk {

enum class Direction { Forward, Backward };

struct OrbitTrace {
    HMat3 generator;
    ProjPoint base;
    std::vector<std::pair<long, ProjPoint>> samples;  // (n, g^n(base))
};

/// Iterated projective action with canonicalization after every step, so the
/// representatives stay unit norm and no overflow is possible. Negative powers
/// use the inverse.
OrbitTrace orbit(const HMat3& g, const ProjPoint& p, long n_from, long n_to);

/// Consecutive renormalized powers B_n = g^n / sup_norm(g^n), n = 1..n_max,
/// computed incrementally with renormalization at each step.
std::vector<HMat3> renormalized_powers(const HMat3& g, int n_max);

struct SubspaceDesc {
    enum class Kind { Empty, Point, Line, All };
    Kind kind = Kind::Empty;
    std::optional<ProjPoint> point;
    std::optional<ProjLine> line;
};

bool subspace_equal(const SubspaceDesc& a, const SubspaceDesc& b, double tol = 1e-6);
std::string to_string(const SubspaceDesc& s);

/// Pseudo-projective transformation: a nonzero, possibly singular matrix with
/// the induced map defined off its kernel.
struct PseudoProjective {
    HMat3 matrix;
    SubspaceDesc kernel;
    SubspaceDesc image;
};

/// Cluster representatives of the renormalized power sequence. Powers are
/// sampled along a doubling schedule (each step squares and renormalizes, the
/// same normalization as the incremental walk) so that the vanishing singular
/// values of polynomially converging classes drop below the rank tolerance
/// within a handful of steps. Rotating phases prevent matrix-level
/// convergence, so the tail samples are clustered and each representative is
/// returned with its kernel and image read off the singular value structure
/// of the complex embedding. All representatives must agree on the kernel;
/// disagreement raises DiagnosticError (n_max too small or tol too loose).
std::vector<PseudoProjective> limit_of_powers(const HMat3& g, Direction dir,
                                              uint64_t n_max = (1ull << 32),
                                              double tol = 1e-3, double rank_tol = 1e-8);

struct ClusterSet {
    std::vector<ProjPoint> representatives;
    double radius = 0.0;
};

/// Greedy metric clustering of the tail samples under the chordal distance.
/// Representatives end up pairwise farther apart than eps.
ClusterSet cluster_points(const OrbitTrace& trace, size_t tail_start, double eps);

/// Union of forward and backward orbit cluster sets over seeded random points,
/// excluding start points within 0.05 of the predicted L0. Randomness is
/// derived from (seed, point index), independent of evaluation order.
ClusterSet kulkarni_l1_estimate(const HMat3& g, const Descriptor& predicted_l0, int sample_count,
                                uint64_t seed, int max_iter, double eps);

struct WitnessSequence {
    Direction direction = Direction::Forward;
    std::vector<std::pair<long, ProjPoint>> points;  // (n, k_n)
};

/// The explicit compact-set sequences from the limit-set proofs: g^n(k_n)
/// (or g^{-n}(k_n)) approaches the target on the predicted L2 component.
/// Supported subclasses: regular loxodromic, loxo-parabolic, non-vertical
/// translation, ellipto-translation. Anything else raises DomainError, as
/// does a target off the predicted component.
WitnessSequence l2_witness(const ElementClass& cls, const ProjPoint& target, long n_max);

struct WitnessOutcome {
    double best_dist = 1.0;
    long best_n = 0;
    long first_below = -1;  // least n with dist < tol, -1 if never
};

/// Evaluates chordal_dist(g^(+-n)(k_n), target) along the sequence using the
/// incrementally renormalized powers of g.
WitnessOutcome run_l2_witness(const HMat3& g, const WitnessSequence& seq, const ProjPoint& target,
                              double tol);

/// Least N such that {e^(2 pi i n a) : 0 <= n <= N} is eps-dense on the
/// circle: the maximal angular gap is at most 2*arcsin(eps/2). The search is
/// capped; reaching the cap (rational or near-rational alpha) raises
/// DiagnosticError carrying the achieved gap.
long density_check_s1(double alpha, double eps, long cap = 10'000'000);

/// Torus version under the max metric, discretized as grid coverage: least N
/// such that every cell of the eps-grid on the torus contains an orbit point
/// with index <= N. Capped like the circle check.
long density_check_t2(double alpha, double beta, double eps, long cap = 10'000'000);

/// Least n in [1, N] with chordal_dist(g^n(p), p) < eps. DiagnosticError if
/// none is found.
long recurrence_check(const HMat3& g, const ProjPoint& p, double eps, long N);

} // namespace qk
