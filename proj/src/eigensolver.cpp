#include "igavib/eigensolver.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace igavib {

std::vector<int> boundary_points(const PlateModel& model) {
    const NurbsSurface& s = model.surface;
    std::vector<char> mark(static_cast<size_t>(s.nu) * s.nv, 0);
    auto mark_node = [&](int i, int j) {
        if (s.periodic_u && i == s.nu - 1) i = 0;
        mark[static_cast<size_t>(j) * s.nu + i] = 1;
    };
    if (s.periodic_u) {
        for (int i = 0; i < s.nu; ++i) mark_node(i, s.nv - 1);
    } else {
        for (int i = 0; i < s.nu; ++i) {
            mark_node(i, 0);
            mark_node(i, s.nv - 1);
        }
        for (int j = 0; j < s.nv; ++j) {
            mark_node(0, j);
            mark_node(s.nu - 1, j);
        }
    }
    std::vector<int> cps;
    for (size_t n = 0; n < mark.size(); ++n) {
        if (mark[n] && model.dofs.node_to_cp[n] >= 0) cps.push_back(model.dofs.node_to_cp[n]);
    }
    return cps;
}

ReducedSystem apply_boundary_conditions(const GlobalSystem& system, const PlateModel& model,
                                        const BoundarySpec& spec) {
    const int n_dofs = system.n_dofs;
    std::vector<char> constrained(n_dofs, 0);

    if (spec.kind != BcKind::kFree) {
        const std::vector<int> rim = boundary_points(model);
        if (spec.kind == BcKind::kClamped) {
            for (int cp : rim) {
                for (int c = 0; c < kDofPerPoint; ++c) constrained[model.dofs.dof(cp, c)] = 1;
            }
        } else {
            // Hard simple support classified by the plate outline planes.
            double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
            for (int cp : rim) {
                const int node = model.dofs.cp_to_node[cp];
                const ControlPoint& P = model.surface.net[node];
                xmin = std::min(xmin, P.x);
                xmax = std::max(xmax, P.x);
                ymin = std::min(ymin, P.y);
                ymax = std::max(ymax, P.y);
            }
            for (int cp : rim) {
                const int node = model.dofs.cp_to_node[cp];
                const ControlPoint& P = model.surface.net[node];
                const bool on_x_plane = std::abs(P.x - xmin) <= spec.geom_tol ||
                                        std::abs(P.x - xmax) <= spec.geom_tol;
                const bool on_y_plane = std::abs(P.y - ymin) <= spec.geom_tol ||
                                        std::abs(P.y - ymax) <= spec.geom_tol;
                if (!on_x_plane && !on_y_plane) {
                    throw InputError("simple support requires an axis-aligned rectangular outline");
                }
                constrained[model.dofs.dof(cp, kU0)] = 1;
                constrained[model.dofs.dof(cp, kV0)] = 1;
                constrained[model.dofs.dof(cp, kW0)] = 1;
                if (on_x_plane) constrained[model.dofs.dof(cp, kBetaY)] = 1;
                if (on_y_plane) constrained[model.dofs.dof(cp, kBetaX)] = 1;
            }
        }
    }

    ReducedSystem out;
    std::vector<int> to_reduced(n_dofs, -1);
    for (int d = 0; d < n_dofs; ++d) {
        if (!constrained[d]) {
            to_reduced[d] = static_cast<int>(out.free_dofs.size());
            out.free_dofs.push_back(d);
        }
    }
    if (out.free_dofs.empty()) throw InputError("boundary conditions leave no free DOFs");

    const int nf = out.n_free();
    auto reduce = [&](const Eigen::SparseMatrix<double>& A) {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(A.nonZeros());
        for (int col = 0; col < A.outerSize(); ++col) {
            const int rc = to_reduced[col];
            if (rc < 0) continue;
            for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
                const int rr = to_reduced[it.row()];
                if (rr >= 0) trips.emplace_back(rr, rc, it.value());
            }
        }
        Eigen::SparseMatrix<double> R(nf, nf);
        R.setFromTriplets(trips.begin(), trips.end());
        return R;
    };
    out.K = reduce(system.K);
    out.M = reduce(system.M);
    return out;
}

namespace {

double sparse_trace(const Eigen::SparseMatrix<double>& A) {
    double t = 0.0;
    for (int i = 0; i < A.rows(); ++i) t += A.coeff(i, i);
    return t;
}

Eigen::VectorXd deterministic_vector(int n, unsigned salt) {
    std::mt19937 eng(0x5eed1234u + salt);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        v[i] = (static_cast<double>(eng()) / 4294967296.0) - 0.5;
    }
    return v;
}

}  // namespace

ModeSet solve_modes(const ReducedSystem& reduced, int n_modes, const EigenOptions& opts) {
    const int n = reduced.n_free();
    ModeSet empty;
    empty.phi.resize(n, 0);
    if (n_modes <= 0) return empty;
    const int nev = std::min(n_modes, n);

    const Eigen::SparseMatrix<double>& K = reduced.K;
    const Eigen::SparseMatrix<double>& M = reduced.M;
    const double scale = std::abs(sparse_trace(K)) / std::max(sparse_trace(M), 1e-300);

    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    double sigma = 0.0;
    ldlt.compute(K);
    bool singular = (ldlt.info() != Eigen::Success);
    if (!singular) {
        const Eigen::VectorXd d = ldlt.vectorD();
        const double dmax = d.cwiseAbs().maxCoeff();
        if (d.minCoeff() <= 1e-12 * dmax) singular = true;
    }
    if (singular) {
        sigma = -1e-6 * scale;
        Eigen::SparseMatrix<double> A = K - sigma * M;
        ldlt.compute(A);
        if (ldlt.info() != Eigen::Success) {
            throw NumericalError("eigensolver: sparse factorization failed at shifted matrix");
        }
    }

    int m_target = std::min(n, std::max(2 * nev + 30, 60));
    if (opts.max_subspace > 0) m_target = std::min(n, opts.max_subspace);

    Eigen::MatrixXd V;   // Lanczos vectors
    Eigen::MatrixXd W;   // M * V cache
    Eigen::VectorXd alpha, beta;

    for (int attempt = 0; attempt <= opts.max_restarts; ++attempt) {
        const int m = m_target;
        V.resize(n, m);
        W.resize(n, m);
        alpha.resize(m);
        beta = Eigen::VectorXd::Zero(m);

        unsigned salt = 0;
        Eigen::VectorXd v = deterministic_vector(n, salt++);
        Eigen::VectorXd Mv = M * v;
        v /= std::sqrt(v.dot(Mv));
        V.col(0) = v;
        W.col(0) = M * v;

        double t_scale = 0.0;
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXd r = ldlt.solve(W.col(j));
            alpha[j] = r.dot(W.col(j));
            t_scale = std::max(t_scale, std::abs(alpha[j]));
            r -= alpha[j] * V.col(j);
            if (j > 0) r -= beta[j - 1] * V.col(j - 1);
            // two-pass full reorthogonalization in the M inner product
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) r -= (r.dot(W.col(i))) * V.col(i);
            }
            if (j + 1 >= m) break;
            Eigen::VectorXd Mr = M * r;
            double b = std::sqrt(std::max(r.dot(Mr), 0.0));
            if (b <= 1e-13 * std::max(t_scale, 1e-300)) {
                // invariant subspace hit; continue with a fresh deterministic vector
                Eigen::VectorXd f = deterministic_vector(n, salt++);
                for (int pass = 0; pass < 2; ++pass) {
                    for (int i = 0; i <= j; ++i) f -= (f.dot(W.col(i))) * V.col(i);
                }
                const Eigen::VectorXd Mf = M * f;
                const double fn = std::sqrt(std::max(f.dot(Mf), 0.0));
                if (fn <= 1e-300) throw NumericalError("eigensolver: Lanczos breakdown");
                r = f / fn;
                Mr = M * r;
                b = 0.0;
                beta[j] = 0.0;
                V.col(j + 1) = r;
                W.col(j + 1) = Mr;
                continue;
            }
            beta[j] = b;
            V.col(j + 1) = r / b;
            W.col(j + 1) = Mr / b;
        }

        // Tridiagonal Ritz problem
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            T(j, j) = alpha[j];
            if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        if (es.info() != Eigen::Success) throw NumericalError("eigensolver: Ritz solve failed");

        // theta ascending; largest theta correspond to the smallest lambda
        std::vector<int> order(m);
        for (int i = 0; i < m; ++i) order[i] = m - 1 - i;

        ModeSet result;
        result.lambda.resize(nev);
        result.omega.resize(nev);
        result.phi.resize(n, nev);
        result.residual.resize(nev);
        bool converged = true;
        for (int i = 0; i < nev; ++i) {
            const int idx = order[i];
            const double theta = es.eigenvalues()[idx];
            const double lam = (theta > 0.0) ? sigma + 1.0 / theta
                                             : std::numeric_limits<double>::max();
            Eigen::VectorXd x = V * es.eigenvectors().col(idx);
            Eigen::VectorXd Mx = M * x;
            const double mn = std::sqrt(std::max(x.dot(Mx), 1e-300));
            x /= mn;
            Mx /= mn;
            const double denom = std::max(std::abs(lam), 1e-14 * scale) * Mx.norm();
            const double res = (K * x - lam * Mx).norm() / std::max(denom, 1e-300);
            if (res > opts.tol) converged = false;
            result.lambda[i] = lam;
            result.omega[i] = std::sqrt(std::max(lam, 0.0));
            result.phi.col(i) = x;
            result.residual[i] = res;
        }

        if (converged || m >= n) {
            if (!converged && attempt < opts.max_restarts && m < n) continue;
            // sign convention: largest-magnitude entry positive
            for (int i = 0; i < nev; ++i) {
                int imax = 0;
                double amax = 0.0;
                for (int r = 0; r < n; ++r) {
                    const double a = std::abs(result.phi(r, i));
                    if (a > amax) {
                        amax = a;
                        imax = r;
                    }
                }
                if (result.phi(imax, i) < 0.0) result.phi.col(i) = -result.phi.col(i);
            }
            if (!converged) {
                std::ostringstream os;
                os << "eigensolver: not converged after " << opts.max_restarts + 1
                   << " attempts (subspace " << m << "/" << n << ", worst residual "
                   << result.residual.maxCoeff() << ")";
                throw NumericalError(os.str());
            }
            return result;
        }
        m_target = std::min(n, static_cast<int>(std::ceil(m_target * 1.6)));
    }
    throw NumericalError("eigensolver: restart limit exceeded");
}

double normalize_frequency(double omega, const Normalization& norm) {
    switch (norm.scheme) {
        case Normalization::Scheme::kNone:
            return omega;
        case Normalization::Scheme::kIsotropicQuartic: {
            if (!(norm.E > 0.0) || !(norm.h > 0.0) || !(norm.rho > 0.0) || !(norm.a > 0.0) ||
                !(norm.nu < 1.0)) {
                throw InputError("normalization: isotropic scheme needs E, nu, rho, h, a");
            }
            const double D = norm.E * norm.h * norm.h * norm.h / (12.0 * (1.0 - norm.nu * norm.nu));
            const double x = norm.rho * norm.h * omega * omega * std::pow(norm.a, 4) /
                             (D * (1.0 - norm.nu * norm.nu));
            return std::pow(x, 0.25);
        }
        case Normalization::Scheme::kOrthotropicSqrt: {
            if (!(norm.E1 > 0.0) || !(norm.E2 > 0.0) || !(norm.h > 0.0) || !(norm.rho > 0.0) ||
                !(norm.a > 0.0)) {
                throw InputError("normalization: orthotropic scheme needs E1, E2, nu12, rho, h, a");
            }
            const double nu21 = norm.nu12 * norm.E2 / norm.E1;
            const double D01 =
                norm.E1 * norm.h * norm.h * norm.h / (12.0 * (1.0 - norm.nu12 * nu21));
            return std::sqrt(norm.rho * norm.h * omega * omega * std::pow(norm.a, 4) / D01);
        }
    }
    throw InputError("normalization: unknown scheme");
}

double denormalize_frequency(double omega_tilde, const Normalization& norm) {
    switch (norm.scheme) {
        case Normalization::Scheme::kNone:
            return omega_tilde;
        case Normalization::Scheme::kIsotropicQuartic: {
            const double D = norm.E * norm.h * norm.h * norm.h / (12.0 * (1.0 - norm.nu * norm.nu));
            const double x = std::pow(omega_tilde, 4);
            return std::sqrt(x * D * (1.0 - norm.nu * norm.nu) /
                             (norm.rho * norm.h * std::pow(norm.a, 4)));
        }
        case Normalization::Scheme::kOrthotropicSqrt: {
            const double nu21 = norm.nu12 * norm.E2 / norm.E1;
            const double D01 =
                norm.E1 * norm.h * norm.h * norm.h / (12.0 * (1.0 - norm.nu12 * nu21));
            return omega_tilde * std::sqrt(D01 / (norm.rho * norm.h * std::pow(norm.a, 4)));
        }
    }
    throw InputError("normalization: unknown scheme");
}

}  // namespace igavib
