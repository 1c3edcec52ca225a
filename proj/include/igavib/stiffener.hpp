#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "igavib/materials.hpp"
#include "igavib/nurbs.hpp"
#include "igavib/plate.hpp"

namespace igavib {

// Parametric stiffener centerline on the plate midplane (z = 0).
struct StiffenerPath {
    NurbsCurve curve;
    void validate() const;
};

// Quadratic Bezier through explicit planar points (weights 1, open uniform
// knot vector). Three points give the standard three-point description.
StiffenerPath path_from_points(const std::vector<Eigen::Vector2d>& pts);

// Two-parameter description on an a x b panel: end control points slide
// along the left and bottom edges, P0 = (0, (1-de)b) and P2 = ((1-de)a, 0),
// and the middle control point sits at (dd*a, dd*b).
StiffenerPath path_from_parameters(double a, double b, double delta_eps, double delta_dist);

struct PathFrame {
    double alpha = 0.0;         // tangent angle from +x (two-argument arctangent)
    double curvature = 0.0;     // signed; positive when curving toward the left normal
    double arc_jacobian = 0.0;  // |dr/ds_param|
};

PathFrame tangent_and_curvature(const StiffenerPath& path, double s);

// Plate-displacement interpolation N_ps (5 x 5*n_en) at a parametric point;
// column blocks follow support_nodes() ordering of the containing element.
Eigen::MatrixXd coupling_matrix(const PlateModel& plate, const ParamPoint& plate_param);

struct StiffenerQuadraturePoint {
    double s_param = 0.0;
    double weight = 0.0;  // includes the interval scale, not the arc Jacobian
    ParamPoint plate_param;
    PathFrame frame;
};

// Gauss points along the path, with intervals split where the path crosses
// plate knot lines so that no interval straddles an element boundary.
std::vector<StiffenerQuadraturePoint> stiffener_quadrature(const PlateModel& plate,
                                                           const StiffenerPath& path,
                                                           int points_per_interval = 4);

// Transformed stiffener stiffness/mass accumulated over plate DOFs.
std::pair<Eigen::SparseMatrix<double>, Eigen::SparseMatrix<double>> stiffener_contributions(
    const PlateModel& plate, const StiffenerPath& path, const StiffenerRigidity& rigidity,
    int points_per_interval = 4);

}  // namespace igavib
