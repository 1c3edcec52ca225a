#include "igavib/model.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

namespace igavib {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw InputError(path + ": " + msg);
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& path) {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                ok = true;
                break;
            }
        }
        if (!ok) fail(path + "." + it.key(), "unknown field");
    }
}

const json& require(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(path, std::string("missing required field '") + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& path) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
}

double get_number(const json& obj, const char* key, const std::string& path) {
    return as_number(require(obj, key, path), path + "." + key);
}

double get_number_or(const json& obj, const char* key, const std::string& path, double fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return as_number(*it, path + "." + key);
}

int get_int_or(const json& obj, const char* key, const std::string& path, int fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer()) fail(path + "." + key, "expected an integer");
    return it->get<int>();
}

MaterialSpec parse_material(const json& j, const std::string& path) {
    MaterialSpec m;
    if (j.contains("E")) {
        check_keys(j, {"E", "nu", "rho"}, path);
        m.isotropic = true;
        m.E = get_number(j, "E", path);
        m.nu = get_number(j, "nu", path);
        m.rho = get_number(j, "rho", path);
    } else if (j.contains("E_L_over_E_T")) {
        check_keys(j, {"E_L_over_E_T", "G_LT_over_E_T", "G_TT_over_E_T", "nu_LT", "E_T", "rho"},
                   path);
        m.isotropic = false;
        m.E_T = get_number(j, "E_T", path);
        m.E_L = get_number(j, "E_L_over_E_T", path) * m.E_T;
        m.G_LT = get_number(j, "G_LT_over_E_T", path) * m.E_T;
        m.G_TT = get_number(j, "G_TT_over_E_T", path) * m.E_T;
        m.nu_LT = get_number(j, "nu_LT", path);
        m.rho = get_number(j, "rho", path);
    } else {
        check_keys(j, {"E_L", "E_T", "G_LT", "G_TT", "nu_LT", "rho"}, path);
        m.isotropic = false;
        m.E_L = get_number(j, "E_L", path);
        m.E_T = get_number(j, "E_T", path);
        m.G_LT = get_number(j, "G_LT", path);
        m.G_TT = get_number(j, "G_TT", path);
        m.nu_LT = get_number(j, "nu_LT", path);
        m.rho = get_number(j, "rho", path);
    }
    return m;
}

json material_to_json(const MaterialSpec& m) {
    json j;
    if (m.isotropic) {
        j["E"] = m.E;
        j["nu"] = m.nu;
    } else {
        j["E_L"] = m.E_L;
        j["E_T"] = m.E_T;
        j["G_LT"] = m.G_LT;
        j["G_TT"] = m.G_TT;
        j["nu_LT"] = m.nu_LT;
    }
    j["rho"] = m.rho;
    return j;
}

NurbsCurve parse_curve(const json& j, const std::string& path) {
    check_keys(j, {"degree", "knots", "points"}, path);
    NurbsCurve c;
    c.knots.degree = get_int_or(j, "degree", path, -1);
    if (c.knots.degree < 1) fail(path + ".degree", "expected a positive integer degree");
    const json& knots = require(j, "knots", path);
    if (!knots.is_array()) fail(path + ".knots", "expected an array");
    for (const auto& v : knots) c.knots.values.push_back(as_number(v, path + ".knots"));
    const json& pts = require(j, "points", path);
    if (!pts.is_array()) fail(path + ".points", "expected an array");
    for (const auto& p : pts) {
        if (!p.is_array() || p.size() != 4) fail(path + ".points", "expected [x, y, z, w] entries");
        c.points.push_back({as_number(p[0], path), as_number(p[1], path), as_number(p[2], path),
                            as_number(p[3], path)});
    }
    try {
        c.validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return c;
}

json curve_to_json(const NurbsCurve& c) {
    json j;
    j["degree"] = c.knots.degree;
    j["knots"] = c.knots.values;
    json pts = json::array();
    for (const ControlPoint& p : c.points) pts.push_back({p.x, p.y, p.z, p.w});
    j["points"] = pts;
    return j;
}

NurbsSurface parse_surface(const json& j, const std::string& path) {
    check_keys(j, {"degree_u", "degree_v", "knots_u", "knots_v", "points", "periodic_u"}, path);
    NurbsSurface s;
    s.knots_u.degree = get_int_or(j, "degree_u", path, -1);
    s.knots_v.degree = get_int_or(j, "degree_v", path, -1);
    for (const auto& v : require(j, "knots_u", path)) {
        s.knots_u.values.push_back(as_number(v, path + ".knots_u"));
    }
    for (const auto& v : require(j, "knots_v", path)) {
        s.knots_v.values.push_back(as_number(v, path + ".knots_v"));
    }
    s.nu = s.knots_u.num_basis();
    s.nv = s.knots_v.num_basis();
    const json& pts = require(j, "points", path);
    if (!pts.is_array()) fail(path + ".points", "expected an array");
    for (const auto& p : pts) {
        if (!p.is_array() || p.size() != 4) fail(path + ".points", "expected [x, y, z, w] entries");
        s.net.push_back({as_number(p[0], path), as_number(p[1], path), as_number(p[2], path),
                         as_number(p[3], path)});
    }
    if (j.contains("periodic_u")) {
        if (!j["periodic_u"].is_boolean()) fail(path + ".periodic_u", "expected a boolean");
        s.periodic_u = j["periodic_u"].get<bool>();
    }
    try {
        s.validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return s;
}

json surface_to_json(const NurbsSurface& s) {
    json j;
    j["degree_u"] = s.knots_u.degree;
    j["degree_v"] = s.knots_v.degree;
    j["knots_u"] = s.knots_u.values;
    j["knots_v"] = s.knots_v.values;
    json pts = json::array();
    for (const ControlPoint& p : s.net) pts.push_back({p.x, p.y, p.z, p.w});
    j["points"] = pts;
    j["periodic_u"] = s.periodic_u;
    return j;
}

HoleSpec parse_hole(const json& j, const std::string& path) {
    HoleSpec h;
    const json& shape = require(j, "shape", path);
    if (!shape.is_string()) fail(path + ".shape", "expected a string");
    const std::string s = shape.get<std::string>();
    if (s == "circle") {
        check_keys(j, {"shape", "center", "radius"}, path);
        h.shape = HoleSpec::Shape::kCircle;
        const json& c = require(j, "center", path);
        if (!c.is_array() || c.size() != 2) fail(path + ".center", "expected [x, y]");
        h.cx = as_number(c[0], path);
        h.cy = as_number(c[1], path);
        h.rx = h.ry = get_number(j, "radius", path);
    } else if (s == "ellipse") {
        check_keys(j, {"shape", "center", "rx", "ry"}, path);
        h.shape = HoleSpec::Shape::kEllipse;
        const json& c = require(j, "center", path);
        if (!c.is_array() || c.size() != 2) fail(path + ".center", "expected [x, y]");
        h.cx = as_number(c[0], path);
        h.cy = as_number(c[1], path);
        h.rx = get_number(j, "rx", path);
        h.ry = get_number(j, "ry", path);
    } else if (s == "heart") {
        check_keys(j, {"shape"}, path);
        h.shape = HoleSpec::Shape::kHeart;
    } else {
        fail(path + ".shape", "unknown hole shape '" + s + "'");
    }
    return h;
}

json hole_to_json(const HoleSpec& h) {
    json j;
    switch (h.shape) {
        case HoleSpec::Shape::kCircle:
            j["shape"] = "circle";
            j["center"] = {h.cx, h.cy};
            j["radius"] = h.rx;
            break;
        case HoleSpec::Shape::kEllipse:
            j["shape"] = "ellipse";
            j["center"] = {h.cx, h.cy};
            j["rx"] = h.rx;
            j["ry"] = h.ry;
            break;
        case HoleSpec::Shape::kHeart:
            j["shape"] = "heart";
            break;
    }
    return j;
}

GeometrySpec parse_geometry(const json& j, const std::string& path) {
    GeometrySpec g;
    const json& kind = require(j, "kind", path);
    if (!kind.is_string()) fail(path + ".kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (k == "rectangle") {
        check_keys(j, {"kind", "a", "b"}, path);
        g.kind = GeometrySpec::Kind::kRectangle;
        g.a = get_number(j, "a", path);
        g.b = get_number(j, "b", path);
    } else if (k == "ruled_cutout") {
        check_keys(j, {"kind", "outer", "inner"}, path);
        g.kind = GeometrySpec::Kind::kRuledCutout;
        const json& outer = require(j, "outer", path);
        if (outer.contains("rectangle")) {
            check_keys(outer, {"rectangle"}, path + ".outer");
            const json& r = outer["rectangle"];
            check_keys(r, {"a", "b"}, path + ".outer.rectangle");
            g.a = get_number(r, "a", path + ".outer.rectangle");
            g.b = get_number(r, "b", path + ".outer.rectangle");
        } else {
            check_keys(outer, {"curve"}, path + ".outer");
            g.outer_curve = parse_curve(require(outer, "curve", path + ".outer"), path + ".outer.curve");
        }
        const json& inner = require(j, "inner", path);
        if (inner.contains("hole")) {
            check_keys(inner, {"hole"}, path + ".inner");
            g.hole = parse_hole(inner["hole"], path + ".inner.hole");
        } else {
            check_keys(inner, {"curve"}, path + ".inner");
            g.inner_curve = parse_curve(require(inner, "curve", path + ".inner"), path + ".inner.curve");
        }
    } else if (k == "surface") {
        check_keys(j, {"kind", "surface"}, path);
        g.kind = GeometrySpec::Kind::kSurface;
        g.surface = parse_surface(require(j, "surface", path), path + ".surface");
    } else {
        fail(path + ".kind", "unknown geometry kind '" + k + "'");
    }
    return g;
}

json geometry_to_json(const GeometrySpec& g) {
    json j;
    switch (g.kind) {
        case GeometrySpec::Kind::kRectangle:
            j["kind"] = "rectangle";
            j["a"] = g.a;
            j["b"] = g.b;
            break;
        case GeometrySpec::Kind::kRuledCutout: {
            j["kind"] = "ruled_cutout";
            if (g.outer_curve) {
                j["outer"] = json{{"curve", curve_to_json(*g.outer_curve)}};
            } else {
                j["outer"] = json{{"rectangle", json{{"a", g.a}, {"b", g.b}}}};
            }
            if (g.inner_curve) {
                j["inner"] = json{{"curve", curve_to_json(*g.inner_curve)}};
            } else {
                j["inner"] = json{{"hole", hole_to_json(*g.hole)}};
            }
            break;
        }
        case GeometrySpec::Kind::kSurface:
            j["kind"] = "surface";
            j["surface"] = surface_to_json(*g.surface);
            break;
    }
    return j;
}

StiffenerSpec parse_stiffener(const json& j, const std::string& path) {
    check_keys(j, {"path", "section", "material"}, path);
    StiffenerSpec s;
    const json& p = require(j, "path", path);
    if (p.contains("points")) {
        check_keys(p, {"points"}, path + ".path");
        for (const auto& q : p["points"]) {
            if (!q.is_array() || q.size() != 2) fail(path + ".path.points", "expected [x, y] entries");
            s.points.emplace_back(as_number(q[0], path), as_number(q[1], path));
        }
        if (s.points.size() < 3) fail(path + ".path.points", "need at least three points");
    } else {
        check_keys(p, {"delta_eps", "delta_dist"}, path + ".path");
        s.from_parameters = true;
        s.delta_eps = get_number(p, "delta_eps", path + ".path");
        s.delta_dist = get_number_or(p, "delta_dist", path + ".path", 0.25);
    }
    const json& sec = require(j, "section", path);
    if (sec.contains("gamma")) {
        check_keys(sec, {"gamma", "delta"}, path + ".section");
        s.section.from_ratios = true;
        s.section.gamma = get_number(sec, "gamma", path + ".section");
        s.section.delta = get_number(sec, "delta", path + ".section");
    } else {
        check_keys(sec, {"b_s", "h_s", "e"}, path + ".section");
        s.section.from_ratios = false;
        s.section.b_s = get_number(sec, "b_s", path + ".section");
        s.section.h_s = get_number(sec, "h_s", path + ".section");
        if (sec.contains("e")) s.section.e = get_number(sec, "e", path + ".section");
    }
    s.section.material = parse_material(require(j, "material", path), path + ".material");
    if (!s.section.material.isotropic) {
        fail(path + ".material", "stiffener material must be isotropic");
    }
    return s;
}

json stiffener_to_json(const StiffenerSpec& s) {
    json j;
    if (s.from_parameters) {
        j["path"] = json{{"delta_eps", s.delta_eps}, {"delta_dist", s.delta_dist}};
    } else {
        json pts = json::array();
        for (const auto& p : s.points) pts.push_back({p.x(), p.y()});
        j["path"] = json{{"points", pts}};
    }
    if (s.section.from_ratios) {
        j["section"] = json{{"gamma", s.section.gamma}, {"delta", s.section.delta}};
    } else {
        json sec = json{{"b_s", s.section.b_s}, {"h_s", s.section.h_s}};
        if (s.section.e) sec["e"] = *s.section.e;
        j["section"] = sec;
    }
    j["material"] = material_to_json(s.section.material);
    return j;
}

Normalization::Scheme parse_scheme(const std::string& s, const std::string& path) {
    if (s == "none") return Normalization::Scheme::kNone;
    if (s == "isotropic_quartic") return Normalization::Scheme::kIsotropicQuartic;
    if (s == "orthotropic_sqrt") return Normalization::Scheme::kOrthotropicSqrt;
    fail(path, "unknown normalization scheme '" + s + "'");
}

std::string scheme_name(Normalization::Scheme s) {
    switch (s) {
        case Normalization::Scheme::kNone: return "none";
        case Normalization::Scheme::kIsotropicQuartic: return "isotropic_quartic";
        case Normalization::Scheme::kOrthotropicSqrt: return "orthotropic_sqrt";
    }
    return "none";
}

}  // namespace

Lamina MaterialSpec::make_lamina(double thickness, double theta_rad) const {
    if (isotropic) {
        Lamina l = Lamina::isotropic(E, nu, rho, thickness);
        l.theta = theta_rad;
        return l;
    }
    Lamina l;
    l.E_L = E_L;
    l.E_T = E_T;
    l.G_LT = G_LT;
    l.G_TT = G_TT;
    l.nu_LT = nu_LT;
    l.rho = rho;
    l.thickness = thickness;
    l.theta = theta_rad;
    return l;
}

ModelDocument parse_model_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(origin + ": JSON parse error: " + e.what());
    }
    const std::string root = origin;
    check_keys(j, {"name", "geometry", "layup", "stiffeners", "boundary", "analysis"}, root);

    ModelDocument doc;
    if (j.contains("name")) {
        if (!j["name"].is_string()) fail(root + ".name", "expected a string");
        doc.name = j["name"].get<std::string>();
    }
    doc.geometry = parse_geometry(require(j, "geometry", root), root + ".geometry");

    const json& layup = require(j, "layup", root);
    check_keys(layup, {"material", "angles_deg", "thickness"}, root + ".layup");
    doc.layup.material = parse_material(require(layup, "material", root + ".layup"), root + ".layup.material");
    doc.layup.thickness = get_number(layup, "thickness", root + ".layup");
    if (layup.contains("angles_deg")) {
        doc.layup.angles_deg.clear();
        for (const auto& a : layup["angles_deg"]) {
            doc.layup.angles_deg.push_back(as_number(a, root + ".layup.angles_deg"));
        }
        if (doc.layup.angles_deg.empty()) fail(root + ".layup.angles_deg", "empty ply list");
    }

    if (j.contains("stiffeners")) {
        if (!j["stiffeners"].is_array()) fail(root + ".stiffeners", "expected an array");
        int idx = 0;
        for (const auto& s : j["stiffeners"]) {
            doc.stiffeners.push_back(
                parse_stiffener(s, root + ".stiffeners[" + std::to_string(idx) + "]"));
            ++idx;
        }
    }

    if (j.contains("boundary")) {
        if (!j["boundary"].is_string()) fail(root + ".boundary", "expected a string");
        const std::string b = j["boundary"].get<std::string>();
        if (b == "cccc")
            doc.boundary = BcKind::kClamped;
        else if (b == "ssss")
            doc.boundary = BcKind::kSimplySupported;
        else if (b == "ffff")
            doc.boundary = BcKind::kFree;
        else
            fail(root + ".boundary", "expected one of cccc, ssss, ffff");
    }

    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        check_keys(a,
                   {"n_modes", "subdivisions", "quadrature", "shear_correction", "eigen_tol",
                    "normalization", "grid"},
                   root + ".analysis");
        doc.analysis.n_modes = get_int_or(a, "n_modes", root + ".analysis", doc.analysis.n_modes);
        if (a.contains("subdivisions")) {
            const json& sd = a["subdivisions"];
            if (!sd.is_array() || sd.size() != 2) {
                fail(root + ".analysis.subdivisions", "expected [n_u, n_v]");
            }
            doc.analysis.subdiv_u = sd[0].get<int>();
            doc.analysis.subdiv_v = sd[1].get<int>();
        }
        doc.analysis.quadrature = get_int_or(a, "quadrature", root + ".analysis", 0);
        doc.analysis.shear_correction =
            get_number_or(a, "shear_correction", root + ".analysis", 5.0 / 6.0);
        doc.analysis.eigen_tol = get_number_or(a, "eigen_tol", root + ".analysis", 1e-9);
        doc.analysis.grid = get_int_or(a, "grid", root + ".analysis", 64);
        if (a.contains("normalization")) {
            const json& n = a["normalization"];
            check_keys(n, {"scheme", "a"}, root + ".analysis.normalization");
            const json& s = require(n, "scheme", root + ".analysis.normalization");
            if (!s.is_string()) fail(root + ".analysis.normalization.scheme", "expected a string");
            doc.analysis.norm_scheme =
                parse_scheme(s.get<std::string>(), root + ".analysis.normalization.scheme");
            doc.analysis.norm_a = get_number_or(n, "a", root + ".analysis.normalization", 0.0);
        }
    }
    if (doc.analysis.n_modes < 0) fail(root + ".analysis.n_modes", "must be non-negative");
    return doc;
}

ModelDocument parse_model_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model_text(buf.str(), path);
}

std::string model_to_json_text(const ModelDocument& doc) {
    json j;
    j["name"] = doc.name;
    j["geometry"] = geometry_to_json(doc.geometry);
    j["layup"] = json{{"material", material_to_json(doc.layup.material)},
                      {"angles_deg", doc.layup.angles_deg},
                      {"thickness", doc.layup.thickness}};
    json st = json::array();
    for (const auto& s : doc.stiffeners) st.push_back(stiffener_to_json(s));
    j["stiffeners"] = st;
    j["boundary"] = doc.boundary == BcKind::kClamped
                        ? "cccc"
                        : (doc.boundary == BcKind::kSimplySupported ? "ssss" : "ffff");
    json a;
    a["n_modes"] = doc.analysis.n_modes;
    a["subdivisions"] = {doc.analysis.subdiv_u, doc.analysis.subdiv_v};
    a["quadrature"] = doc.analysis.quadrature;
    a["shear_correction"] = doc.analysis.shear_correction;
    a["eigen_tol"] = doc.analysis.eigen_tol;
    a["grid"] = doc.analysis.grid;
    a["normalization"] = json{{"scheme", scheme_name(doc.analysis.norm_scheme)},
                              {"a", doc.analysis.norm_a}};
    j["analysis"] = a;
    return j.dump(2) + "\n";
}

NurbsCurve rectangle_outline_curve(double a, double b) {
    NurbsCurve c;
    c.knots.degree = 2;
    c.knots.values = {0, 0, 0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1, 1, 1};
    c.points = {{a, b, 0, 1},       {0.5 * a, b, 0, 1}, {0, b, 0, 1},
                {0, 0.5 * b, 0, 1}, {0, 0, 0, 1},       {0.5 * a, 0, 0, 1},
                {a, 0, 0, 1},       {a, 0.5 * b, 0, 1}, {a, b, 0, 1}};
    c.validate();
    return c;
}

NurbsCurve heart_inner_curve() {
    NurbsCurve c;
    c.knots.degree = 2;
    c.knots.values = {0,     0,     0,     0.125, 0.125, 0.25, 0.25, 0.375, 0.375, 0.5,
                      0.5,   0.625, 0.625, 0.75,  0.75,  0.875, 0.875, 1,    1,    1};
    const double xs[17] = {6, 5, 4, 3, 2, 2, 2, 2, 2, 1.414, 4, 4.243, 6, 5.657, 8, 5.657, 6};
    const double ys[17] = {8, 8, 8, 8, 8, 7, 6, 5, 4, 1.414, 2, 1.414, 4, 2.828, 6, 5.657, 8};
    const double ws[17] = {1, 1, 1, 1, 1, 1, 1, 1, 1, 0.707, 1, 0.707, 1, 0.707, 1, 0.707, 1};
    for (int i = 0; i < 17; ++i) c.points.push_back({xs[i], ys[i], 0.0, ws[i]});
    c.validate();
    return c;
}

NurbsCurve hole_curve(const HoleSpec& hole) {
    if (hole.shape == HoleSpec::Shape::kHeart) return heart_inner_curve();
    if (!(hole.rx > 0.0) || !(hole.ry > 0.0)) throw InputError("hole: radii must be positive");
    NurbsCurve c;
    c.knots.degree = 2;
    c.knots.values = {0, 0, 0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1, 1, 1};
    const double w = std::sqrt(0.5);  // 90-degree rational arc weight
    const double s2 = std::sqrt(2.0);
    const double q = std::sqrt(0.5);  // cos(45 deg)
    // Unit-circle control polygon starting at 45 degrees, counterclockwise;
    // the ellipse is its axis-aligned affine image.
    const double ux[9] = {q, -0., -q, -s2, -q, 0., q, s2, q};
    const double uy[9] = {q, s2, q, 0., -q, -s2, -q, -0., q};
    const double uw[9] = {1, w, 1, w, 1, w, 1, w, 1};
    for (int i = 0; i < 9; ++i) {
        c.points.push_back({hole.cx + hole.rx * ux[i], hole.cy + hole.ry * uy[i], 0.0, uw[i]});
    }
    c.validate();
    return c;
}

NurbsSurface build_geometry(const GeometrySpec& geom, int subdiv_u, int subdiv_v) {
    NurbsSurface coarse;
    switch (geom.kind) {
        case GeometrySpec::Kind::kRectangle: {
            if (!(geom.a > 0.0) || !(geom.b > 0.0)) {
                throw InputError("rectangle geometry: dimensions must be positive");
            }
            coarse.knots_u = KnotVector{2, {0, 0, 0, 1, 1, 1}};
            coarse.knots_v = KnotVector{2, {0, 0, 0, 1, 1, 1}};
            coarse.nu = coarse.nv = 3;
            const double xs[3] = {0.0, 0.5 * geom.a, geom.a};
            const double ys[3] = {0.0, 0.5 * geom.b, geom.b};
            for (int j = 0; j < 3; ++j) {
                for (int i = 0; i < 3; ++i) coarse.net.push_back({xs[i], ys[j], 0.0, 1.0});
            }
            break;
        }
        case GeometrySpec::Kind::kRuledCutout: {
            const NurbsCurve inner = geom.inner_curve ? *geom.inner_curve : hole_curve(*geom.hole);
            const NurbsCurve outer =
                geom.outer_curve ? *geom.outer_curve : rectangle_outline_curve(geom.a, geom.b);
            coarse = elevate_degree_v(ruled_surface(inner, outer), 1);
            break;
        }
        case GeometrySpec::Kind::kSurface:
            coarse = *geom.surface;
            break;
    }
    return refine(coarse, subdiv_u, subdiv_v);
}

namespace {

// Norm reference rigidity used both for frequency scaling and the
// gamma-ratio stiffener sizing.
double reference_rigidity(const Normalization& n) {
    switch (n.scheme) {
        case Normalization::Scheme::kIsotropicQuartic:
            return n.E * n.h * n.h * n.h / (12.0 * (1.0 - n.nu * n.nu));
        case Normalization::Scheme::kOrthotropicSqrt: {
            const double nu21 = n.nu12 * n.E2 / n.E1;
            return n.E1 * n.h * n.h * n.h / (12.0 * (1.0 - n.nu12 * nu21));
        }
        case Normalization::Scheme::kNone:
            return 0.0;
    }
    return 0.0;
}

}  // namespace

BuiltModel build_model(const ModelDocument& doc) {
    BuiltModel built;
    NurbsSurface surf =
        build_geometry(doc.geometry, doc.analysis.subdiv_u, doc.analysis.subdiv_v);

    const int n_plies = static_cast<int>(doc.layup.angles_deg.size());
    if (!(doc.layup.thickness > 0.0)) throw InputError("layup.thickness must be positive");
    std::vector<Lamina> plies;
    plies.reserve(n_plies);
    for (double deg : doc.layup.angles_deg) {
        plies.push_back(doc.layup.material.make_lamina(doc.layup.thickness / n_plies,
                                                       deg * M_PI / 180.0));
    }
    const LaminateStack stack = LaminateStack::from_plies(std::move(plies));
    built.plate = PlateModel::build(std::move(surf), stack, doc.analysis.shear_correction);

    // Panel extents for normalization defaults and the parametric stiffener scheme.
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const ControlPoint& cp : built.plate.surface.net) {
        xmin = std::min(xmin, cp.x);
        xmax = std::max(xmax, cp.x);
        ymin = std::min(ymin, cp.y);
        ymax = std::max(ymax, cp.y);
    }
    const double panel_a = xmax - xmin;
    const double panel_b = ymax - ymin;

    Normalization norm;
    norm.scheme = doc.analysis.norm_scheme;
    norm.a = doc.analysis.norm_a > 0.0 ? doc.analysis.norm_a : panel_a;
    norm.h = doc.layup.thickness;
    norm.rho = doc.layup.material.rho;
    if (doc.layup.material.isotropic) {
        norm.E = doc.layup.material.E;
        norm.nu = doc.layup.material.nu;
        norm.E1 = norm.E2 = doc.layup.material.E;
        norm.nu12 = doc.layup.material.nu;
    } else {
        norm.E1 = doc.layup.material.E_L;
        norm.E2 = doc.layup.material.E_T;
        norm.nu12 = doc.layup.material.nu_LT;
        norm.E = doc.layup.material.E_L;
        norm.nu = doc.layup.material.nu_LT;
    }
    built.normalization = norm;

    for (const StiffenerSpec& spec : doc.stiffeners) {
        BuiltStiffener bs;
        if (spec.from_parameters) {
            bs.path = path_from_parameters(panel_a, panel_b, spec.delta_eps, spec.delta_dist);
        } else {
            bs.path = path_from_points(spec.points);
        }
        const MaterialSpec& m = spec.section.material;
        const double G_s = m.E / (2.0 * (1.0 + m.nu));
        if (spec.section.from_ratios) {
            double D_ref = reference_rigidity(norm);
            if (!(D_ref > 0.0)) D_ref = built.plate.rigidity.D(0, 0);
            bs.section = section_from_ratios(spec.section.gamma, spec.section.delta, panel_a,
                                             doc.layup.thickness, D_ref, m.E, G_s, m.rho);
        } else {
            bs.section.b_s = spec.section.b_s;
            bs.section.h_s = spec.section.h_s;
            bs.section.e = spec.section.e ? *spec.section.e
                                          : 0.5 * (doc.layup.thickness + spec.section.h_s);
            bs.section.E = m.E;
            bs.section.G = G_s;
            bs.section.rho = m.rho;
            bs.section.validate();
        }
        bs.rigidity = stiffener_rigidity(bs.section);
        built.stiffeners.push_back(std::move(bs));
    }
    return built;
}

ResultBundle run_analysis(const ModelDocument& doc) {
    const auto t0 = std::chrono::steady_clock::now();
    const BuiltModel built = build_model(doc);

    QuadratureSpec quad;
    quad.n_u = quad.n_v = doc.analysis.quadrature;
    GlobalSystem sys = assemble(built.plate, quad, configured_thread_count());
    for (const BuiltStiffener& bs : built.stiffeners) {
        const auto [Ks, Ms] = stiffener_contributions(built.plate, bs.path, bs.rigidity);
        sys.K = sys.K + Ks;
        sys.M = sys.M + Ms;
    }

    BoundarySpec bc;
    bc.kind = doc.boundary;
    const ReducedSystem reduced = apply_boundary_conditions(sys, built.plate, bc);

    EigenOptions opts;
    opts.tol = doc.analysis.eigen_tol;
    const ModeSet modes = solve_modes(reduced, doc.analysis.n_modes, opts);

    ResultBundle bundle;
    bundle.omega = modes.omega;
    bundle.omega_tilde.resize(modes.size());
    for (int i = 0; i < modes.size(); ++i) {
        bundle.omega_tilde[i] = normalize_frequency(modes.omega[i], built.normalization);
    }
    bundle.n_elements = built.plate.conn.num_elements();
    bundle.n_dofs = built.plate.dofs.num_dofs();
    bundle.n_free_dofs = reduced.n_free();

    // Mode-shape sampling on the parametric lattice.
    const int g = std::max(1, doc.analysis.grid);
    bundle.grid = g;
    bundle.grid_x.resize(g + 1, g + 1);
    bundle.grid_y.resize(g + 1, g + 1);
    const NurbsSurface& s = built.plate.surface;
    const double u0 = s.knots_u.domain_start(), u1 = s.knots_u.domain_end();
    const double v0 = s.knots_v.domain_start(), v1 = s.knots_v.domain_end();

    std::vector<Eigen::VectorXd> w0_full(modes.size(),
                                         Eigen::VectorXd::Zero(built.plate.dofs.num_points()));
    for (int m = 0; m < modes.size(); ++m) {
        for (int r = 0; r < reduced.n_free(); ++r) {
            const int gdof = reduced.free_dofs[r];
            if (gdof % kDofPerPoint == kW0) w0_full[m][gdof / kDofPerPoint] = modes.phi(r, m);
        }
    }
    bundle.mode_w0.assign(modes.size(), Eigen::MatrixXd::Zero(g + 1, g + 1));
    for (int i = 0; i <= g; ++i) {
        for (int j = 0; j <= g; ++j) {
            const ParamPoint p{u0 + (u1 - u0) * i / g, v0 + (v1 - v0) * j / g};
            const SurfaceBasis basis = surface_basis(s, p);
            const auto nodes = support_nodes(s, basis.span_u, basis.span_v);
            const SurfaceSample smp = eval_surface(s, p);
            bundle.grid_x(i, j) = smp.p.x();
            bundle.grid_y(i, j) = smp.p.y();
            for (int m = 0; m < modes.size(); ++m) {
                double val = 0.0;
                for (size_t k = 0; k < nodes.size(); ++k) {
                    const int cp = built.plate.dofs.node_to_cp[nodes[k]];
                    if (cp >= 0) val += basis.R[static_cast<int>(k)] * w0_full[m][cp];
                }
                bundle.mode_w0[m](i, j) = val;
            }
        }
    }

    bundle.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return bundle;
}

}  // namespace igavib
