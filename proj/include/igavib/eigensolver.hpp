#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "igavib/plate.hpp"

namespace igavib {

enum class BcKind { kFree, kClamped, kSimplySupported };

struct BoundarySpec {
    BcKind kind = BcKind::kClamped;
    double geom_tol = 1e-9;  // meters, for edge-plane identification
};

struct ReducedSystem {
    Eigen::SparseMatrix<double> K;
    Eigen::SparseMatrix<double> M;
    std::vector<int> free_dofs;  // reduced index -> global dof
    int n_free() const { return static_cast<int>(free_dofs.size()); }
};

// Control points whose basis functions touch the analysis boundary. For a
// periodic (cutout) patch this is the outer edge row v=1 only; the hole rim
// stays free.
std::vector<int> boundary_points(const PlateModel& model);

// Row/column elimination of the constrained DOFs. Clamped fixes all five
// components; hard simple support fixes the translations plus the rotation
// about the in-plane edge normal.
ReducedSystem apply_boundary_conditions(const GlobalSystem& system, const PlateModel& model,
                                        const BoundarySpec& spec);

struct EigenOptions {
    double tol = 1e-9;      // relative eigen-residual
    int max_restarts = 3;
    int max_subspace = 0;   // 0 -> automatic
};

struct ModeSet {
    Eigen::VectorXd lambda;    // omega^2, ascending
    Eigen::VectorXd omega;     // rad/s
    Eigen::MatrixXd phi;       // n_free x n_modes, M-orthonormal
    Eigen::VectorXd residual;  // ||K phi - lambda M phi|| / (lambda ||M phi||)
    int size() const { return static_cast<int>(lambda.size()); }
};

// Smallest n_modes eigenpairs of K phi = lambda M phi via shift-invert
// Lanczos (sparse LDLT at sigma = 0, or slightly negative when K is
// singular) with full reorthogonalization. Deterministic: fixed start
// vector, single-threaded iteration.
ModeSet solve_modes(const ReducedSystem& reduced, int n_modes, const EigenOptions& opts = {});

struct Normalization {
    enum class Scheme { kNone, kIsotropicQuartic, kOrthotropicSqrt };
    Scheme scheme = Scheme::kNone;
    double a = 0.0;    // reference in-plane dimension
    double h = 0.0;
    double rho = 0.0;
    double E = 0.0;    // isotropic scheme
    double nu = 0.0;
    double E1 = 0.0;   // orthotropic scheme
    double E2 = 0.0;
    double nu12 = 0.0;
};

// kIsotropicQuartic: [rho h w^2 a^4 / (D (1-nu^2))]^{1/4}, D = E h^3/12(1-nu^2).
// kOrthotropicSqrt:  [rho h w^2 a^4 / D01]^{1/2},  D01 = E1 h^3/12(1-nu12 nu21).
double normalize_frequency(double omega, const Normalization& norm);
double denormalize_frequency(double omega_tilde, const Normalization& norm);

}  // namespace igavib
