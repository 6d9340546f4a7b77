#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qk/classify.hpp"
#include "qk/projective.hpp"
#include "qk/spectra.hpp"

namespace qk {

/// Symbolic description of a subset of the projective plane: finitely many
/// points, quaternionic lines, the complex line through two basis points, the
/// embedded complex plane (C = span{1,i} inside H), everything, or a union.
class Descriptor {
public:
    enum class Kind { Empty, Points, Lines, ComplexLine, FixedPoints, WholeSpace, ComplexPlane, Union };

    static Descriptor empty();
    static Descriptor points(std::vector<ProjPoint> ps);
    static Descriptor lines(std::vector<ProjLine> ls);
    static Descriptor complex_line(const ProjPoint& a, const ProjPoint& b);
    static Descriptor whole_space();
    static Descriptor complex_plane();
    static Descriptor union_of(std::vector<Descriptor> members);
    static Descriptor from_fixed_set(const FixedSet& fs);

    Kind kind() const { return kind_; }
    bool is_empty() const { return kind_ == Kind::Empty; }
    bool is_whole_space() const { return kind_ == Kind::WholeSpace; }
    const std::vector<ProjPoint>& point_list() const { return points_; }
    const std::vector<ProjLine>& line_list() const { return lines_; }
    const std::optional<std::pair<ProjPoint, ProjPoint>>& complex_span() const { return cl_; }
    const std::vector<Descriptor>& members() const { return members_; }

private:
    Kind kind_ = Kind::Empty;
    std::vector<ProjPoint> points_;
    std::vector<ProjLine> lines_;
    std::optional<std::pair<ProjPoint, ProjPoint>> cl_;
    std::vector<Descriptor> members_;
};

/// Infimum of chordal distances from p to the described set. Empty yields
/// +infinity, WholeSpace yields 0.
double descriptor_dist(const ProjPoint& p, const Descriptor& d);

/// Union with absorption: points on a kept line vanish, a complex line inside
/// the matching quaternionic line vanishes, WholeSpace swallows everything.
Descriptor simplify_union(const std::vector<Descriptor>& parts, double tol = 1e-9);

/// Set-level comparison of two descriptors after flattening, within tol.
bool descriptor_equal(const Descriptor& a, const Descriptor& b, double tol = 1e-9);

struct KulkarniPrediction {
    Descriptor L0, L1, L2, Lambda;  // Lambda is the flattened union of the three
};

/// Closed-form Kulkarni sets for the cyclic group generated by the element.
/// "Set of fixed points" rows are resolved against the canonical form so the
/// descriptor is concrete.
KulkarniPrediction predict_kulkarni(const ElementClass& cls);

/// Subset of the dual plane. Lines are encoded by their polar vectors, i.e.
/// as the dual points the proofs converge to.
struct DualDescriptor {
    enum class Kind { Empty, FiniteLines, WholeDual };
    Kind kind = Kind::Empty;
    std::vector<ProjPoint> polars;

    static DualDescriptor empty() { return {}; }
    static DualDescriptor whole_dual() { return {Kind::WholeDual, {}}; }
    static DualDescriptor finite(std::vector<ProjPoint> ps) { return {Kind::FiniteLines, std::move(ps)}; }
};

/// Closed-form extended Conze-Guivarc'h limit set for the cyclic group.
DualDescriptor predict_conze_guivarch(const ElementClass& cls);

struct InvarianceReport {
    bool pass = true;
    double worst = 0.0;
    std::optional<ProjPoint> worst_sample;
    int samples_checked = 0;
};

/// Samples points on the descriptor (random right-scalar combinations on
/// lines, the listed points themselves for finite sets), applies g and checks
/// the images stay within tol of the descriptor. WholeSpace and Empty are
/// trivially invariant.
InvarianceReport descriptor_invariance_check(const HMat3& g, const Descriptor& d, int samples,
                                             double tol, uint64_t seed = 0);

} // namespace qk
