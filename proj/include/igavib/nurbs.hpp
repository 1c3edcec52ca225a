#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "igavib/errors.hpp"

namespace igavib {

// Open-form knot vector. Periodic patches are handled downstream by seam
// index sharing in the connectivity, not by periodic knots.
struct KnotVector {
    int degree = 0;
    std::vector<double> values;

    int num_basis() const { return static_cast<int>(values.size()) - degree - 1; }
    double domain_start() const { return values.front(); }
    double domain_end() const { return values.back(); }

    // Indices s with values[s] < values[s+1], i.e. the elements in this direction.
    std::vector<int> nonempty_spans() const;
    int num_spans() const { return static_cast<int>(nonempty_spans().size()); }

    void validate() const;
};

// Returns s such that values[s] <= u < values[s+1]; the right domain
// boundary maps to the last nonempty span.
int find_span(const KnotVector& knots, double u);

// Nonrational basis functions and derivatives at u (Cox-de Boor recursion).
// Row k holds the k-th derivatives of the degree+1 functions that are
// nonzero on the containing span.
Eigen::MatrixXd basis_and_derivatives(const KnotVector& knots, double u, int n_derivs);
Eigen::MatrixXd basis_and_derivatives(const KnotVector& knots, double u, int n_derivs, int span);

struct ControlPoint {
    double x = 0.0, y = 0.0, z = 0.0;
    double w = 1.0;

    Eigen::Vector4d homogeneous() const { return {w * x, w * y, w * z, w}; }
    static ControlPoint from_homogeneous(const Eigen::Vector4d& hw);
    Eigen::Vector3d position() const { return {x, y, z}; }
};

struct NurbsCurve {
    KnotVector knots;
    std::vector<ControlPoint> points;

    void validate() const;
    bool closed(double rel_tol = 1e-12) const;
};

struct CurveSample {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Vector3d d1 = Eigen::Vector3d::Zero();  // d/du
    Eigen::Vector3d d2 = Eigen::Vector3d::Zero();  // d2/du2
};

CurveSample eval_curve(const NurbsCurve& curve, double u, int n_derivs = 2);

struct NurbsSurface {
    KnotVector knots_u;
    KnotVector knots_v;
    int nu = 0;  // control net columns (u direction)
    int nv = 0;  // control net rows (v direction)
    std::vector<ControlPoint> net;  // row-major, net[j*nu + i]
    bool periodic_u = false;

    const ControlPoint& at(int i, int j) const { return net[static_cast<size_t>(j) * nu + i]; }
    ControlPoint& at(int i, int j) { return net[static_cast<size_t>(j) * nu + i]; }

    void validate() const;
};

struct ParamPoint {
    double xi = 0.0;
    double eta = 0.0;
};

struct SurfaceSample {
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Vector3d du = Eigen::Vector3d::Zero();
    Eigen::Vector3d dv = Eigen::Vector3d::Zero();
};

SurfaceSample eval_surface(const NurbsSurface& surface, const ParamPoint& p);

// Rational basis bundle at one parametric point: the (p+1)(q+1) nonzero
// functions (u index fastest) with first parametric derivatives.
struct SurfaceBasis {
    int span_u = 0;
    int span_v = 0;
    Eigen::VectorXd R;
    Eigen::VectorXd dRdu;
    Eigen::VectorXd dRdv;
};

SurfaceBasis surface_basis(const NurbsSurface& surface, const ParamPoint& p);

// Global control-point column indices supporting (span_u, span_v), with the
// periodic seam wrapped onto the first column.
std::vector<int> support_nodes(const NurbsSurface& surface, int span_u, int span_v);

NurbsCurve reverse_curve(const NurbsCurve& curve);
NurbsCurve rescale_domain(const NurbsCurve& curve, double a, double b);
NurbsCurve insert_knots(const NurbsCurve& curve, const std::vector<double>& new_knots);

// Degree elevation by t. The result is returned in Bezier-decomposed form:
// interior breakpoints keep full multiplicity, so parametric continuity
// drops to C0 there while the geometry is unchanged.
NurbsCurve elevate_degree(const NurbsCurve& curve, int t);

// Ruled surface with v=0 on `inner` and v=1 on `outer` (degree 1 in v).
// Performs degree matching and knot merging; flips the common u direction
// if the Jacobian comes out uniformly negative. Crossing ruling lines or a
// degenerate patch raise GeometryError.
NurbsSurface ruled_surface(const NurbsCurve& inner, const NurbsCurve& outer);

NurbsSurface elevate_degree_v(const NurbsSurface& surface, int t);
NurbsSurface insert_knots_u(const NurbsSurface& surface, const std::vector<double>& new_knots);
NurbsSurface insert_knots_v(const NurbsSurface& surface, const std::vector<double>& new_knots);

// Uniformly splits every nonempty span into (n_u+1) x (n_v+1) subspans.
// Geometry is unchanged.
NurbsSurface refine(const NurbsSurface& surface, int n_u, int n_v);

// Newton point inversion with step clamping and element-center multi-start.
// Throws GeometryError when the target does not lie on the surface.
ParamPoint point_inversion(const NurbsSurface& surface, const Eigen::Vector3d& target,
                           const ParamPoint& guess);

struct ElementConnectivity {
    int degree_u = 0;
    int degree_v = 0;
    std::vector<std::vector<int>> ien;           // per element, (p+1)(q+1) node ids, u fastest
    std::vector<std::pair<int, int>> spans;      // per element (span_u, span_v)
    int num_elements() const { return static_cast<int>(ien.size()); }
    int nodes_per_element() const { return (degree_u + 1) * (degree_v + 1); }
};

// Elements ordered u fastest. Node ids are row-major net indices; for
// periodic patches the last column aliases the first, so the seam elements
// reference first-column ids and the last-column ids never appear.
ElementConnectivity build_connectivity(const NurbsSurface& surface);

}  // namespace igavib
