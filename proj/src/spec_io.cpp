#include "qk/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

#include "qk/errors.hpp"

namespace qk {

namespace {

const json& member(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
    return *it;
}

double number_at(const json& j, const std::string& path) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    return j.get<double>();
}

long long integer_at(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    return j.get<long long>();
}

AngleSpec angle_from_json(const json& j, const std::string& path) {
    const std::string type = member(j, "type", path).get<std::string>();
    if (type == "rational") {
        const long long p = integer_at(member(j, "p", path), path + ".p");
        const long long q = integer_at(member(j, "q", path), path + ".q");
        if (q <= 0) throw SchemaError(path + ".q", "denominator must be positive");
        return make_rational_angle(p, q);
    }
    if (type == "irrational") {
        const double v = number_at(member(j, "value", path), path + ".value");
        if (!(v >= 0.0 && v < 1.0)) throw SchemaError(path + ".value", "expected a value in [0,1)");
        std::string label;
        if (j.contains("label")) label = j["label"].get<std::string>();
        return IrrationalAngle{v, label};
    }
    throw SchemaError(path + ".type", "expected 'rational' or 'irrational'");
}

json angle_to_json(const AngleSpec& a) {
    if (const auto* r = std::get_if<RationalAngle>(&a))
        return {{"type", "rational"}, {"p", r->p}, {"q", r->q}};
    const auto& ir = std::get<IrrationalAngle>(a);
    json j = {{"type", "irrational"}, {"value", ir.value}};
    if (!ir.label.empty()) j["label"] = ir.label;
    return j;
}

EigenSpec eigen_from_json(const json& j, const std::string& path) {
    if (j.is_number()) {
        // scalar shorthand: a real eigenvalue
        const double v = j.get<double>();
        if (v == 0.0) throw SchemaError(path, "eigenvalue must be nonzero");
        EigenSpec s;
        s.modulus = std::abs(v);
        s.angle = v > 0 ? make_rational_angle(0, 1) : make_rational_angle(1, 2);
        return s;
    }
    if (!j.is_object()) throw SchemaError(path, "expected an object or a number");
    EigenSpec s;
    if (j.contains("modulus")) {
        s.modulus = number_at(j["modulus"], path + ".modulus");
        if (!(s.modulus > 0.0)) throw SchemaError(path + ".modulus", "expected a positive real");
    }
    if (j.contains("angle")) s.angle = angle_from_json(j["angle"], path + ".angle");
    return s;
}

json eigen_to_json(const EigenSpec& s) {
    return {{"modulus", s.modulus}, {"angle", angle_to_json(s.angle)}};
}

} // namespace

json quaternion_to_json(const Quaternion& q) { return json::array({q.w, q.x, q.y, q.z}); }

Quaternion quaternion_from_json(const json& j, const std::string& path) {
    if (j.is_number()) return Quaternion::real(j.get<double>());
    if (!j.is_array() || j.size() != 4) throw SchemaError(path, "expected [w,x,y,z]");
    for (const auto& c : j)
        if (!c.is_number()) throw SchemaError(path, "expected numeric components");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

json matrix_to_json(const HMat3& A) {
    json rows = json::array();
    for (int r = 0; r < 3; ++r) {
        json row = json::array();
        for (int c = 0; c < 3; ++c) row.push_back(quaternion_to_json(A.at(r, c)));
        rows.push_back(row);
    }
    return rows;
}

HMat3 matrix_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected 3 rows");
    HMat3 A;
    for (int r = 0; r < 3; ++r) {
        const json& row = j[static_cast<size_t>(r)];
        const std::string rp = path + "[" + std::to_string(r) + "]";
        if (!row.is_array() || row.size() != 3) throw SchemaError(rp, "expected 3 entries");
        for (int c = 0; c < 3; ++c)
            A.at(r, c) = quaternion_from_json(row[static_cast<size_t>(c)],
                                              rp + "[" + std::to_string(c) + "]");
    }
    return A;
}

json point_to_json(const ProjPoint& p) {
    for (int i = 0; i < 3; ++i)
        if (chordal_dist(p, ProjPoint::basis(i)) < 1e-12) return "e" + std::to_string(i + 1);
    json arr = json::array();
    for (int i = 0; i < 3; ++i) arr.push_back(quaternion_to_json(p[i]));
    return arr;
}

ProjPoint point_from_json(const json& j, const std::string& path) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "e1") return ProjPoint::basis(0);
        if (s == "e2") return ProjPoint::basis(1);
        if (s == "e3") return ProjPoint::basis(2);
        throw SchemaError(path, "unknown named point '" + s + "'");
    }
    if (!j.is_array() || j.size() != 3) throw SchemaError(path, "expected 3 homogeneous coordinates");
    HVec3 v;
    for (int i = 0; i < 3; ++i)
        v[i] = quaternion_from_json(j[static_cast<size_t>(i)], path + "[" + std::to_string(i) + "]");
    try {
        return ProjPoint(v);
    } catch (const DomainError& e) {
        throw SchemaError(path, e.what());
    }
}

json line_to_json(const ProjLine& l) {
    return {{"polar", point_to_json(l.polar())},
            {"span", json::array({point_to_json(l.span()[0]), point_to_json(l.span()[1])})}};
}

ProjLine line_from_json(const json& j, const std::string& path) {
    if (j.contains("span")) {
        const json& span = j["span"];
        if (!span.is_array() || span.size() != 2) throw SchemaError(path + ".span", "expected two points");
        return line_through(point_from_json(span[0], path + ".span[0]"),
                            point_from_json(span[1], path + ".span[1]"));
    }
    if (j.contains("polar")) return line_from_polar(point_from_json(j["polar"], path + ".polar"));
    throw SchemaError(path, "expected a span or a polar");
}

ElementSpec element_spec_from_json(const json& j) {
    const std::string mode = member(j, "mode", "spec").get<std::string>();
    if (mode == "matrix") {
        return ElementSpec{matrix_from_json(member(j, "matrix", "spec"), "spec.matrix")};
    }
    if (mode != "structured") throw SchemaError("spec.mode", "expected 'structured' or 'matrix'");
    StructuredSpec s;
    s.klass = member(j, "class", "spec").get<std::string>();
    if (j.contains("params")) {
        const json& params = j["params"];
        if (!params.is_object()) throw SchemaError("spec.params", "expected an object");
        for (auto it = params.begin(); it != params.end(); ++it)
            s.params.emplace_back(it.key(), eigen_from_json(it.value(), "spec.params." + it.key()));
    }
    return ElementSpec{std::move(s)};
}

ElementSpec element_spec_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("spec", "cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw SchemaError("spec", std::string("invalid JSON: ") + e.what());
    }
    return element_spec_from_json(j);
}

json element_spec_to_json(const ElementSpec& spec) {
    if (!spec.structured()) return {{"mode", "matrix"}, {"matrix", matrix_to_json(spec.as_matrix())}};
    const auto& s = spec.as_structured();
    json params = json::object();
    for (const auto& [k, v] : s.params) params[k] = eigen_to_json(v);
    return {{"mode", "structured"}, {"class", s.klass}, {"params", params}};
}

json descriptor_to_json(const Descriptor& d) {
    switch (d.kind()) {
        case Descriptor::Kind::Empty:
            return {{"type", "empty"}};
        case Descriptor::Kind::WholeSpace:
            return {{"type", "whole_space"}};
        case Descriptor::Kind::ComplexPlane:
            return {{"type", "complex_plane"}};
        case Descriptor::Kind::Points: {
            json pts = json::array();
            for (const auto& p : d.point_list()) pts.push_back(point_to_json(p));
            return {{"type", "points"}, {"points", pts}};
        }
        case Descriptor::Kind::Lines: {
            if (d.line_list().size() == 1) {
                const auto& l = d.line_list().front();
                return {{"type", "line"},
                        {"span", json::array({point_to_json(l.span()[0]), point_to_json(l.span()[1])})}};
            }
            json members = json::array();
            for (const auto& l : d.line_list())
                members.push_back(json{
                    {"type", "line"},
                    {"span", json::array({point_to_json(l.span()[0]), point_to_json(l.span()[1])})}});
            return {{"type", "union"}, {"members", members}};
        }
        case Descriptor::Kind::ComplexLine: {
            const auto& [a, b] = *d.complex_span();
            return {{"type", "complex_line"},
                    {"span", json::array({point_to_json(a), point_to_json(b)})}};
        }
        case Descriptor::Kind::FixedPoints:
        case Descriptor::Kind::Union: {
            json members = json::array();
            for (const auto& m : d.members()) members.push_back(descriptor_to_json(m));
            return {{"type", d.kind() == Descriptor::Kind::Union ? "union" : "fixed_points"},
                    {"members", members}};
        }
    }
    return {{"type", "empty"}};
}

Descriptor descriptor_from_json(const json& j, const std::string& path) {
    const std::string type = member(j, "type", path).get<std::string>();
    if (type == "empty") return Descriptor::empty();
    if (type == "whole_space") return Descriptor::whole_space();
    if (type == "complex_plane") return Descriptor::complex_plane();
    if (type == "points") {
        const json& pts = member(j, "points", path);
        if (!pts.is_array()) throw SchemaError(path + ".points", "expected an array");
        std::vector<ProjPoint> out;
        for (size_t i = 0; i < pts.size(); ++i)
            out.push_back(point_from_json(pts[i], path + ".points[" + std::to_string(i) + "]"));
        return Descriptor::points(std::move(out));
    }
    if (type == "line") {
        return Descriptor::lines({line_from_json(j, path)});
    }
    if (type == "complex_line") {
        const json& span = member(j, "span", path);
        if (!span.is_array() || span.size() != 2)
            throw SchemaError(path + ".span", "expected two points");
        return Descriptor::complex_line(point_from_json(span[0], path + ".span[0]"),
                                        point_from_json(span[1], path + ".span[1]"));
    }
    if (type == "union" || type == "fixed_points") {
        const json& members = member(j, "members", path);
        if (!members.is_array()) throw SchemaError(path + ".members", "expected an array");
        std::vector<Descriptor> out;
        for (size_t i = 0; i < members.size(); ++i)
            out.push_back(descriptor_from_json(members[i], path + ".members[" + std::to_string(i) + "]"));
        return Descriptor::union_of(std::move(out));
    }
    throw SchemaError(path + ".type", "unknown descriptor type '" + type + "'");
}

json dual_descriptor_to_json(const DualDescriptor& d) {
    switch (d.kind) {
        case DualDescriptor::Kind::Empty: return {{"type", "empty"}};
        case DualDescriptor::Kind::WholeDual: return {{"type", "whole_dual"}};
        case DualDescriptor::Kind::FiniteLines: {
            json polars = json::array();
            for (const auto& p : d.polars) polars.push_back(point_to_json(p));
            return {{"type", "dual_points"}, {"polars", polars}};
        }
    }
    return {{"type", "empty"}};
}

DualDescriptor dual_descriptor_from_json(const json& j, const std::string& path) {
    const std::string type = member(j, "type", path).get<std::string>();
    if (type == "empty") return DualDescriptor::empty();
    if (type == "whole_dual") return DualDescriptor::whole_dual();
    if (type == "dual_points") {
        const json& polars = member(j, "polars", path);
        std::vector<ProjPoint> out;
        for (size_t i = 0; i < polars.size(); ++i)
            out.push_back(point_from_json(polars[i], path + ".polars[" + std::to_string(i) + "]"));
        return DualDescriptor::finite(std::move(out));
    }
    throw SchemaError(path + ".type", "unknown dual descriptor type '" + type + "'");
}

json kulkarni_to_json(const KulkarniPrediction& pr) {
    return {{"L0", descriptor_to_json(pr.L0)},
            {"L1", descriptor_to_json(pr.L1)},
            {"L2", descriptor_to_json(pr.L2)},
            {"Lambda", descriptor_to_json(pr.Lambda)}};
}

KulkarniPrediction kulkarni_from_json(const json& j) {
    KulkarniPrediction pr;
    pr.L0 = descriptor_from_json(member(j, "L0", "kulkarni"), "kulkarni.L0");
    pr.L1 = descriptor_from_json(member(j, "L1", "kulkarni"), "kulkarni.L1");
    pr.L2 = descriptor_from_json(member(j, "L2", "kulkarni"), "kulkarni.L2");
    pr.Lambda = descriptor_from_json(member(j, "Lambda", "kulkarni"), "kulkarni.Lambda");
    return pr;
}

json classification_to_json(const ElementClass& cls, Provenance prov) {
    json params = json::object();
    for (const auto& [k, v] : cls.params) params[k] = eigen_to_json(v);
    json out = {{"coarse", to_string(cls.coarse)},
                {"fine", to_string(cls.fine)},
                {"provenance", prov == Provenance::Exact ? "Exact" : "Heuristic"},
                {"params", params}};
    if (!cls.note.empty()) out["note"] = cls.note;
    return out;
}

json spectral_to_json(const std::vector<EigenClass>& classes, const JordanStructure& js) {
    json cl = json::array();
    for (const auto& c : classes)
        cl.push_back({{"re", c.representative.real()},
                      {"im", c.representative.imag()},
                      {"multiplicity", c.multiplicity}});
    json bl = json::array();
    for (const auto& b : js.blocks)
        bl.push_back(json::array({b.representative.real(), b.representative.imag(), b.size}));
    return {{"classes", cl}, {"blocks", bl}};
}

void write_orbit_trace(std::ostream& os, const OrbitTrace& trace) {
    os << "n x.w x.x x.y x.z y.w y.x y.y y.z z.w z.x z.y z.z\n";
    char buf[64];
    for (const auto& [n, p] : trace.samples) {
        os << n;
        for (int i = 0; i < 3; ++i) {
            const Quaternion& q = p[i];
            for (double v : {q.w, q.x, q.y, q.z}) {
                std::snprintf(buf, sizeof(buf), " %.17g", v);
                os << buf;
            }
        }
        os << "\n";
    }
}

} // namespace qk
