#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qk/hmat.hpp"
#include "qk/spectra.hpp"

namespace qk {

/// Angle as a fraction of a full turn. Rationality is declared, not inferred:
/// it cannot be decided from floats.
struct RationalAngle {
    long long p = 0;
    long long q = 1;  // q > 0, gcd(|p|, q) = 1, value p/q reduced mod 1 into [0,1)
};

struct IrrationalAngle {
    double value = 0.0;  // in [0,1)
    std::string label;   // e.g. "golden"
};

using AngleSpec = std::variant<RationalAngle, IrrationalAngle>;

RationalAngle make_rational_angle(long long p, long long q);
double angle_value(const AngleSpec& a);  // in [0,1)
bool angle_is_rational(const AngleSpec& a);
bool angle_equal(const AngleSpec& a, const AngleSpec& b);
/// The representative angle in [0, 1/2]: theta or 1-theta, whichever lands there.
double representative_angle(const AngleSpec& a);

/// One eigenvalue parameter: modulus * e^{2 pi i angle}.
struct EigenSpec {
    double modulus = 1.0;
    AngleSpec angle = RationalAngle{0, 1};
};

std::complex<double> eigen_value(const EigenSpec& s);

enum class Coarse { Elliptic, Loxodromic, Parabolic };

enum class Fine {
    RationalElliptic,
    SimpleIrrationalElliptic,
    CompoundIrrationalEllipticI,    // two rational angles
    CompoundIrrationalEllipticII,   // one rational angle
    CompoundIrrationalEllipticIII,  // no rational angle, not all equal
    RegularLoxodromic,
    ScrewLoxodromic,
    HomothetyReal,
    HomothetyComplex,
    LoxoParabolic,
    VerticalTranslation,
    NonVerticalTranslation,
    RationalElliptoParabolic,
    IrrationalElliptoParabolic,
    ElliptoTranslation,
};

Coarse coarse_of(Fine f);
std::string to_string(Coarse c);
std::string to_string(Fine f);
std::optional<Fine> fine_from_string(const std::string& name);

enum class Provenance { Exact, Heuristic };

/// Node in the dynamical taxonomy with the parameters echoed in role order:
/// (alpha, beta, gamma) for elliptic, (lambda[, mu], xi) for loxodromic,
/// (alpha[, beta]) for the ellipto classes, empty for unipotent ones.
struct ElementClass {
    Coarse coarse;
    Fine fine;
    std::vector<std::pair<std::string, EigenSpec>> params;
    std::string note;  // flagged edge cases, e.g. two equal irrational angles

    const EigenSpec& param(const std::string& name) const;
    bool has_param(const std::string& name) const;
};

/// Structured element description: declared subclass (or a coarse family name
/// such as "elliptic") plus named parameters.
struct StructuredSpec {
    std::string klass;
    std::vector<std::pair<std::string, EigenSpec>> params;
};

struct ElementSpec {
    std::variant<StructuredSpec, HMat3> payload;

    bool structured() const { return payload.index() == 0; }
    const StructuredSpec& as_structured() const { return std::get<StructuredSpec>(payload); }
    const HMat3& as_matrix() const { return std::get<HMat3>(payload); }
};

/// Coarse trichotomy: loxodromic when some class modulus leaves the unit
/// circle by more than tol, elliptic when additionally semisimple, parabolic
/// otherwise. The lift is det-normalized internally.
Coarse classify_coarse(const HMat3& A, double tol = 1e-9);

/// Exact subclass of a structured spec. Validates the declared subclass
/// constraints and raises ValidationError naming the violated one.
ElementClass classify_fine(const StructuredSpec& spec);

/// Heuristic subclass of a matrix. Angle rationality is decided by continued
/// fraction convergents with denominator <= max_denominator; a convergent
/// p/q counts as exact when |theta - p/q| * q^2 <= tol.
std::pair<ElementClass, Provenance> classify_fine_numeric(const HMat3& A, double tol = 1e-9,
                                                          long long max_denominator = 1000000);

std::pair<ElementClass, Provenance> classify_element(const ElementSpec& spec);

/// The displayed Jordan representative of the subclass, det-normalized to
/// SL(3,H) by a positive real factor.
HMat3 canonical_form(const ElementClass& cls);

struct ProjectiveOrder {
    bool finite = false;
    long long n = 0;
};

/// Least n with g^n = +-identity, which is the projective identity (only real
/// scalar multiples of I act trivially). Infinite for any irrational angle,
/// non-unit modulus or nontrivial Jordan block.
ProjectiveOrder projective_order(const ElementClass& cls);

/// Best rational approximation p/q with q <= max_denominator, by continued
/// fractions. Returns the convergent together with |theta - p/q| * q^2.
struct RationalFit {
    long long p = 0, q = 1;
    double scaled_residual = 0.0;
};
RationalFit best_rational(double theta, long long max_denominator);

} // namespace qk
