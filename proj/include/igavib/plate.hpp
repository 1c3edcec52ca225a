#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "igavib/materials.hpp"
#include "igavib/nurbs.hpp"

namespace igavib {

// Five generalized displacements per control point, in this order.
enum DofComponent { kU0 = 0, kV0 = 1, kW0 = 2, kBetaX = 3, kBetaY = 4 };
constexpr int kDofPerPoint = 5;

// Maps the (possibly seam-aliased) net node ids used by the connectivity to
// compact control-point indices carrying 5 DOFs each.
struct DofMap {
    std::vector<int> node_to_cp;  // net node id -> compact index, -1 for unused seam duplicates
    std::vector<int> cp_to_node;  // compact index -> representative net node id
    int num_points() const { return static_cast<int>(cp_to_node.size()); }
    int num_dofs() const { return kDofPerPoint * num_points(); }
    int dof(int cp, int comp) const { return kDofPerPoint * cp + comp; }
};

struct PlateModel {
    NurbsSurface surface;
    ElementConnectivity conn;
    PlateRigidity rigidity;
    double thickness = 0.0;
    double mean_rho = 0.0;
    DofMap dofs;

    // 5x5 translational/rotary inertia density (integrated through thickness).
    Eigen::Matrix<double, 5, 5> mass_density() const;

    static PlateModel build(NurbsSurface surface, const LaminateStack& stack,
                            double K_shear = 5.0 / 6.0);
};

// Gauss points per direction and element; 0 means degree+1.
struct QuadratureSpec {
    int n_u = 0;
    int n_v = 0;

    int points_u(int degree) const { return n_u > 0 ? n_u : degree + 1; }
    int points_v(int degree) const { return n_v > 0 ? n_v : degree + 1; }
};

// FSDT pointwise kernel: generalized strain operator (8 x 5n), shape matrix
// (5 x 5n) and in-plane Jacobian determinant at one parametric point. Column
// blocks follow support_nodes() ordering.
struct ElementKernel {
    Eigen::MatrixXd B;
    Eigen::MatrixXd N;
    double detJ = 0.0;
};

ElementKernel strain_operator(const NurbsSurface& surface, const ParamPoint& p);

struct ElementMatrices {
    Eigen::MatrixXd Ke;
    Eigen::MatrixXd Me;
};

ElementMatrices element_matrices(const PlateModel& model, int element, const QuadratureSpec& quad);

struct GlobalSystem {
    Eigen::SparseMatrix<double> K;
    Eigen::SparseMatrix<double> M;
    int n_dofs = 0;
};

// Scatter-add of element matrices over the model DOFs. Deterministic for any
// thread count: elements are processed in fixed-size blocks whose triplet
// buffers are concatenated in block order.
GlobalSystem assemble(const PlateModel& model, const QuadratureSpec& quad, int n_threads = 1);

// Worker count from IGAVIB_THREADS, clamped to [1, 64]; defaults to the
// hardware concurrency.
int configured_thread_count();

}  // namespace igavib
