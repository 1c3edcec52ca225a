#include "igavib/plate.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "igavib/quadrature.hpp"

namespace igavib {

Eigen::Matrix<double, 5, 5> PlateModel::mass_density() const {
    Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
    const double h = thickness;
    m(0, 0) = m(1, 1) = m(2, 2) = mean_rho * h;
    m(3, 3) = m(4, 4) = mean_rho * h * h * h / 12.0;
    return m;
}

PlateModel PlateModel::build(NurbsSurface surface, const LaminateStack& stack, double K_shear) {
    surface.validate();
    double scale = 1.0;
    for (const ControlPoint& cp : surface.net) {
        scale = std::max({scale, std::abs(cp.x), std::abs(cp.y)});
    }
    for (const ControlPoint& cp : surface.net) {
        if (std::abs(cp.z) > 1e-12 * scale) {
            throw InputError("plate model: control net must lie in the z=0 midplane");
        }
    }

    PlateModel model;
    model.conn = build_connectivity(surface);
    model.surface = std::move(surface);
    model.rigidity = laminate_rigidity(stack, K_shear);
    model.thickness = stack.thickness();
    model.mean_rho = stack.mean_density();

    const int n_nodes = model.surface.nu * model.surface.nv;
    std::vector<char> used(n_nodes, 0);
    for (const auto& nodes : model.conn.ien) {
        for (int n : nodes) used[n] = 1;
    }
    model.dofs.node_to_cp.assign(n_nodes, -1);
    for (int n = 0; n < n_nodes; ++n) {
        if (used[n]) {
            model.dofs.node_to_cp[n] = static_cast<int>(model.dofs.cp_to_node.size());
            model.dofs.cp_to_node.push_back(n);
        }
    }
    return model;
}

ElementKernel strain_operator(const NurbsSurface& surface, const ParamPoint& p) {
    const SurfaceBasis basis = surface_basis(surface, p);
    const int n_en = static_cast<int>(basis.R.size());

    double xu = 0.0, yu = 0.0, xv = 0.0, yv = 0.0;
    const int pu = surface.knots_u.degree;
    const int pv = surface.knots_v.degree;
    int k = 0;
    for (int b = 0; b <= pv; ++b) {
        for (int a = 0; a <= pu; ++a, ++k) {
            const ControlPoint& cp = surface.at(basis.span_u - pu + a, basis.span_v - pv + b);
            xu += basis.dRdu[k] * cp.x;
            yu += basis.dRdu[k] * cp.y;
            xv += basis.dRdv[k] * cp.x;
            yv += basis.dRdv[k] * cp.y;
        }
    }
    const double detJ = xu * yv - yu * xv;
    if (!(detJ > 0.0)) {
        throw GeometryError("mesh quality: non-positive Jacobian determinant");
    }

    ElementKernel out;
    out.detJ = detJ;
    out.B = Eigen::MatrixXd::Zero(8, kDofPerPoint * n_en);
    out.N = Eigen::MatrixXd::Zero(5, kDofPerPoint * n_en);
    for (int a = 0; a < n_en; ++a) {
        const double dRdx = (yv * basis.dRdu[a] - yu * basis.dRdv[a]) / detJ;
        const double dRdy = (-xv * basis.dRdu[a] + xu * basis.dRdv[a]) / detJ;
        const double R = basis.R[a];
        const int c = kDofPerPoint * a;
        out.B(0, c + kU0) = dRdx;                         // eps_x
        out.B(1, c + kV0) = dRdy;                         // eps_y
        out.B(2, c + kU0) = dRdy;                         // gamma_xy
        out.B(2, c + kV0) = dRdx;
        out.B(3, c + kBetaX) = dRdx;                      // kappa_x
        out.B(4, c + kBetaY) = dRdy;                      // kappa_y
        out.B(5, c + kBetaX) = dRdy;                      // kappa_xy
        out.B(5, c + kBetaY) = dRdx;
        out.B(6, c + kW0) = dRdx;                         // gamma_xz
        out.B(6, c + kBetaX) = R;
        out.B(7, c + kW0) = dRdy;                         // gamma_yz
        out.B(7, c + kBetaY) = R;
        for (int comp = 0; comp < kDofPerPoint; ++comp) out.N(comp, c + comp) = R;
    }
    return out;
}

ElementMatrices element_matrices(const PlateModel& model, int element, const QuadratureSpec& quad) {
    const NurbsSurface& s = model.surface;
    const auto [su, sv] = model.conn.spans[element];
    const double u0 = s.knots_u.values[su], u1 = s.knots_u.values[su + 1];
    const double v0 = s.knots_v.values[sv], v1 = s.knots_v.values[sv + 1];
    const GaussRule& gu = gauss_legendre(quad.points_u(s.knots_u.degree));
    const GaussRule& gv = gauss_legendre(quad.points_v(s.knots_v.degree));
    const double ju = 0.5 * (u1 - u0);
    const double jv = 0.5 * (v1 - v0);

    const Matrix8d Dp = model.rigidity.Dp();
    const Eigen::Matrix<double, 5, 5> mp = model.mass_density();
    const int n_cols = kDofPerPoint * model.conn.nodes_per_element();

    ElementMatrices em;
    em.Ke = Eigen::MatrixXd::Zero(n_cols, n_cols);
    em.Me = Eigen::MatrixXd::Zero(n_cols, n_cols);
    for (int i = 0; i < gu.size(); ++i) {
        for (int j = 0; j < gv.size(); ++j) {
            const ParamPoint p{u0 + ju * (gu.points[i] + 1.0), v0 + jv * (gv.points[j] + 1.0)};
            const ElementKernel kern = strain_operator(s, p);
            const double w = gu.weights[i] * gv.weights[j] * ju * jv * kern.detJ;
            em.Ke.noalias() += w * kern.B.transpose() * Dp * kern.B;
            em.Me.noalias() += w * kern.N.transpose() * mp * kern.N;
        }
    }
    return em;
}

int configured_thread_count() {
    if (const char* env = std::getenv("IGAVIB_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return std::min(n, 64);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return std::max(1, std::min<int>(static_cast<int>(hw), 64));
}

GlobalSystem assemble(const PlateModel& model, const QuadratureSpec& quad, int n_threads) {
    const int n_elem = model.conn.num_elements();
    const int n_dofs = model.dofs.num_dofs();
    constexpr int kBlock = 64;  // fixed block size keeps merge order thread-count independent
    const int n_blocks = (n_elem + kBlock - 1) / kBlock;

    using Triplet = Eigen::Triplet<double>;
    std::vector<std::vector<Triplet>> k_blocks(n_blocks), m_blocks(n_blocks);

    std::atomic<int> next_block{0};
    auto worker = [&]() {
        while (true) {
            const int blk = next_block.fetch_add(1);
            if (blk >= n_blocks) return;
            auto& kt = k_blocks[blk];
            auto& mt = m_blocks[blk];
            const int e0 = blk * kBlock;
            const int e1 = std::min(n_elem, e0 + kBlock);
            for (int e = e0; e < e1; ++e) {
                const ElementMatrices em = element_matrices(model, e, quad);
                const auto& nodes = model.conn.ien[e];
                const int n_en = static_cast<int>(nodes.size());
                std::vector<int> gdof(kDofPerPoint * n_en);
                for (int a = 0; a < n_en; ++a) {
                    const int cp = model.dofs.node_to_cp[nodes[a]];
                    for (int c = 0; c < kDofPerPoint; ++c) {
                        gdof[kDofPerPoint * a + c] = model.dofs.dof(cp, c);
                    }
                }
                for (int r = 0; r < em.Ke.rows(); ++r) {
                    for (int c = 0; c < em.Ke.cols(); ++c) {
                        if (em.Ke(r, c) != 0.0) kt.emplace_back(gdof[r], gdof[c], em.Ke(r, c));
                        if (em.Me(r, c) != 0.0) mt.emplace_back(gdof[r], gdof[c], em.Me(r, c));
                    }
                }
            }
        }
    };

    const int workers = std::max(1, std::min(n_threads, n_blocks));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::vector<Triplet> kt, mt;
    size_t nk = 0, nm = 0;
    for (int b = 0; b < n_blocks; ++b) {
        nk += k_blocks[b].size();
        nm += m_blocks[b].size();
    }
    kt.reserve(nk);
    mt.reserve(nm);
    for (int b = 0; b < n_blocks; ++b) {
        kt.insert(kt.end(), k_blocks[b].begin(), k_blocks[b].end());
        mt.insert(mt.end(), m_blocks[b].begin(), m_blocks[b].end());
    }

    GlobalSystem sys;
    sys.n_dofs = n_dofs;
    sys.K.resize(n_dofs, n_dofs);
    sys.M.resize(n_dofs, n_dofs);
    sys.K.setFromTriplets(kt.begin(), kt.end());
    sys.M.setFromTriplets(mt.begin(), mt.end());
    return sys;
}

}  // namespace igavib
