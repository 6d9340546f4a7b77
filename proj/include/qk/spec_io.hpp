#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "qk/classify.hpp"
#include "qk/dynamics.hpp"
#include "qk/limitsets.hpp"

namespace qk {

using json = nlohmann::json;

/// Element spec document:
///   {"mode":"structured","class":"screw","params":{"lambda":{"modulus":2.0,
///    "angle":{"type":"rational","p":1,"q":4}}, ...}}
///   {"mode":"matrix","matrix":[[[w,x,y,z],...],...]}
/// Scalar shorthand: a bare number as a parameter means a real eigenvalue.
/// Violations raise SchemaError carrying the field path.
ElementSpec element_spec_from_json(const json& j);
ElementSpec element_spec_from_file(const std::string& path);
json element_spec_to_json(const ElementSpec& spec);

/// Quaternions serialize as [w,x,y,z]; matrices as 3x3 nested arrays of those.
json quaternion_to_json(const Quaternion& q);
Quaternion quaternion_from_json(const json& j, const std::string& path);
json matrix_to_json(const HMat3& A);
HMat3 matrix_from_json(const json& j, const std::string& path = "matrix");

/// Points serialize as arrays of three 4-component arrays, with the named
/// shorthands "e1", "e2", "e3" accepted and emitted for basis points.
json point_to_json(const ProjPoint& p);
ProjPoint point_from_json(const json& j, const std::string& path = "point");

/// Lines serialize as {"polar": point, "span": [point, point]}.
json line_to_json(const ProjLine& l);
ProjLine line_from_json(const json& j, const std::string& path = "line");

/// Tagged descriptor records, e.g.
///   {"type":"union","members":[{"type":"line","span":["e1","e2"]},
///                              {"type":"points","points":["e3"]}]}
json descriptor_to_json(const Descriptor& d);
Descriptor descriptor_from_json(const json& j, const std::string& path = "descriptor");

json dual_descriptor_to_json(const DualDescriptor& d);
DualDescriptor dual_descriptor_from_json(const json& j, const std::string& path = "dual");

json kulkarni_to_json(const KulkarniPrediction& pr);
KulkarniPrediction kulkarni_from_json(const json& j);

json classification_to_json(const ElementClass& cls, Provenance prov);

/// {"classes":[{"re":..,"im":..,"multiplicity":..}],"blocks":[[re,im,size],...]}
json spectral_to_json(const std::vector<EigenClass>& classes, const JordanStructure& js);

/// Tabular orbit trace: columns n, x.w,x.x,x.y,x.z, y.*, z.* of the canonical
/// representative.
void write_orbit_trace(std::ostream& os, const OrbitTrace& trace);

} // namespace qk
