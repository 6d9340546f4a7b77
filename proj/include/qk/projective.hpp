#pragma once

#include <array>
#include <utility>

#include "qk/hmat.hpp"

namespace qk {

/// Point of the quaternionic projective plane: the right-scaling class of a
/// nonzero vector of H^3. The stored representative is canonical: unit
/// Euclidean norm with the first significant coordinate real and positive
/// (divide on the right by that coordinate, then normalize). Right-module
/// quotients demand right division here.
class ProjPoint {
public:
    explicit ProjPoint(const HVec3& v);

    static ProjPoint basis(int i) { return ProjPoint(HVec3::basis(i)); }

    const HVec3& canonical() const { return rep_; }
    const Quaternion& operator[](int i) const { return rep_[i]; }

private:
    HVec3 rep_;
};

inline ProjPoint proj_point(const HVec3& v) { return ProjPoint(v); }

/// sqrt(1 - |<p,q>|^2) on the unit representatives. A metric with values in [0,1].
double chordal_dist(const ProjPoint& p, const ProjPoint& q);

/// Quaternionic projective line. The polar vector n carries the incidence test
/// <n,x> = 0 (cheap distances); the span pair carries membership and
/// projections. Both are kept consistent at construction.
class ProjLine {
public:
    ProjLine(const ProjPoint& p, const ProjPoint& q);

    const ProjPoint& polar() const { return polar_; }
    const std::array<ProjPoint, 2>& span() const { return span_; }
    /// Orthonormal H-basis of the spanning submodule.
    const std::array<HVec3, 2>& frame() const { return frame_; }

private:
    ProjPoint polar_;
    std::array<ProjPoint, 2> span_;
    std::array<HVec3, 2> frame_;
    friend ProjLine line_from_polar(const ProjPoint& n);
    ProjLine() : polar_(ProjPoint::basis(0)), span_{ProjPoint::basis(1), ProjPoint::basis(2)} {}
};

/// Unique line through two distinct points. Throws DomainError when they coincide.
ProjLine line_through(const ProjPoint& p, const ProjPoint& q);

/// Reconstructs a line from its polar vector.
ProjLine line_from_polar(const ProjPoint& n);

/// |<n,r>| for the unit polar; equals sqrt(1 - |P_span r|^2).
double point_line_dist(const ProjPoint& r, const ProjLine& l);

/// Residual of projecting r onto the span frame (independent route to the
/// same distance, used for cross-checks).
double point_line_dist_via_span(const ProjPoint& r, const ProjLine& l);

/// Membership in the complex projective line joining two standard basis
/// points: the remaining coordinate must vanish and the ratio of the two
/// in-line coordinates must be complex, all within tol.
bool in_complex_line(const ProjPoint& r, int axis_a, int axis_b, double tol);

/// max(distance to the quaternionic line, j/k residual of the coordinate ratio).
double complex_line_dist(const ProjPoint& r, int axis_a, int axis_b);

/// Projective action p -> [g v]. Throws DomainError when the image vanishes
/// (kernel of a pseudo-projective transformation).
ProjPoint apply(const HMat3& g, const ProjPoint& p);

/// Dual action on lines: polar -> [transpose(inverse(g)) polar], span recomputed.
/// Plain transpose, not conjugate-transpose; iterates compose correctly for
/// complex-entried generators (powers commute with transposition there).
ProjLine dual_apply(const HMat3& g, const ProjLine& l);

/// One step of the dual action at the polar level (for dual orbit iteration):
/// the step matrix is transpose(inverse(g)).
HMat3 dual_step_matrix(const HMat3& g);

} // namespace qk
