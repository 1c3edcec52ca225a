#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "igavib/eigensolver.hpp"
#include "igavib/plate.hpp"
#include "igavib/stiffener.hpp"

namespace igavib {

struct MaterialSpec {
    bool isotropic = true;
    double E = 0.0;   // isotropic modulus
    double nu = 0.0;  // isotropic Poisson ratio (also nu_LT source when orthotropic)
    double E_L = 0.0, E_T = 0.0, G_LT = 0.0, G_TT = 0.0, nu_LT = 0.0;
    double rho = 0.0;

    Lamina make_lamina(double thickness, double theta_rad) const;
};

struct LayupSpec {
    MaterialSpec material;
    std::vector<double> angles_deg = {0.0};  // one ply per entry, equal thickness
    double thickness = 0.0;                  // laminate total
};

struct HoleSpec {
    enum class Shape { kCircle, kEllipse, kHeart };
    Shape shape = Shape::kCircle;
    double cx = 0.0, cy = 0.0;
    double rx = 0.0, ry = 0.0;
};

struct GeometrySpec {
    enum class Kind { kRectangle, kRuledCutout, kSurface };
    Kind kind = Kind::kRectangle;
    double a = 0.0, b = 0.0;  // outer rectangle dimensions
    std::optional<HoleSpec> hole;
    std::optional<NurbsCurve> inner_curve;
    std::optional<NurbsCurve> outer_curve;
    std::optional<NurbsSurface> surface;
};

struct SectionSpec {
    bool from_ratios = false;
    double gamma = 0.0, delta = 0.0;
    double b_s = 0.0, h_s = 0.0;
    std::optional<double> e;  // default (t_p + h_s)/2
    MaterialSpec material;    // isotropic
};

struct StiffenerSpec {
    bool from_parameters = false;
    double delta_eps = 0.0, delta_dist = 0.25;
    std::vector<Eigen::Vector2d> points;
    SectionSpec section;
};

struct AnalysisSpec {
    int n_modes = 6;
    int subdiv_u = 0;
    int subdiv_v = 0;
    int quadrature = 0;  // Gauss points per direction, 0 -> degree+1
    double shear_correction = 5.0 / 6.0;
    double eigen_tol = 1e-9;
    Normalization::Scheme norm_scheme = Normalization::Scheme::kNone;
    double norm_a = 0.0;  // 0 -> panel bounding-box width
    int grid = 64;        // mode-shape sample grid per direction
};

struct ModelDocument {
    std::string name;
    GeometrySpec geometry;
    LayupSpec layup;
    std::vector<StiffenerSpec> stiffeners;
    BcKind boundary = BcKind::kClamped;
    AnalysisSpec analysis;
};

ModelDocument parse_model_text(const std::string& text, const std::string& origin = "<memory>");
ModelDocument parse_model_file(const std::string& path);
std::string model_to_json_text(const ModelDocument& doc);

// Named-hole inner curves and the rectangle outline as degree-2 curves.
NurbsCurve rectangle_outline_curve(double a, double b);
NurbsCurve hole_curve(const HoleSpec& hole);
NurbsCurve heart_inner_curve();  // the shipped complicated-cutout profile

// Analysis-ready surface at the document's refinement level.
NurbsSurface build_geometry(const GeometrySpec& geom, int subdiv_u, int subdiv_v);

struct BuiltStiffener {
    StiffenerPath path;
    StiffenerSection section;
    StiffenerRigidity rigidity;
};

struct BuiltModel {
    PlateModel plate;
    std::vector<BuiltStiffener> stiffeners;
    Normalization normalization;
};

BuiltModel build_model(const ModelDocument& doc);

struct ResultBundle {
    Eigen::VectorXd omega;
    Eigen::VectorXd omega_tilde;
    int n_elements = 0;
    int n_dofs = 0;
    int n_free_dofs = 0;
    double wall_seconds = 0.0;
    // Mode-shape w0 samples on a (grid+1)^2 parametric lattice.
    int grid = 0;
    Eigen::MatrixXd grid_x, grid_y;
    std::vector<Eigen::MatrixXd> mode_w0;
};

ResultBundle run_analysis(const ModelDocument& doc);

std::string results_to_csv(const ResultBundle& bundle);
std::string results_to_vtk(const ResultBundle& bundle);

std::vector<std::string> fixture_names();
std::string fixture_text(const std::string& name);  // InputError for unknown names

}  // namespace igavib
