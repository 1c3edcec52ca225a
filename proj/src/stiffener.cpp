#include "igavib/stiffener.hpp"

#include <cmath>

#include "igavib/quadrature.hpp"

namespace igavib {

void StiffenerPath::validate() const {
    curve.validate();
    for (const ControlPoint& cp : curve.points) {
        if (std::abs(cp.z) > 1e-12) {
            throw InputError("stiffener path must lie on the plate midplane (z = 0)");
        }
    }
}

StiffenerPath path_from_points(const std::vector<Eigen::Vector2d>& pts) {
    if (pts.size() < 3) throw InputError("stiffener path needs at least three control points");
    const int p = 2;
    const int n = static_cast<int>(pts.size());
    StiffenerPath path;
    path.curve.knots.degree = p;
    auto& U = path.curve.knots.values;
    for (int i = 0; i <= p; ++i) U.push_back(0.0);
    for (int i = 1; i <= n - p - 1; ++i) U.push_back(static_cast<double>(i) / (n - p));
    for (int i = 0; i <= p; ++i) U.push_back(1.0);
    for (const Eigen::Vector2d& q : pts) path.curve.points.push_back({q.x(), q.y(), 0.0, 1.0});
    path.validate();
    return path;
}

StiffenerPath path_from_parameters(double a, double b, double delta_eps, double delta_dist) {
    if (!(a > 0.0) || !(b > 0.0)) throw InputError("stiffener path: panel dimensions must be positive");
    if (delta_eps < 0.0 || delta_eps >= 1.0) {
        throw InputError("stiffener path: delta_eps must lie in [0, 1)");
    }
    const Eigen::Vector2d p0{0.0, (1.0 - delta_eps) * b};
    const Eigen::Vector2d p1{delta_dist * a, delta_dist * b};
    const Eigen::Vector2d p2{(1.0 - delta_eps) * a, 0.0};
    return path_from_points({p0, p1, p2});
}

PathFrame tangent_and_curvature(const StiffenerPath& path, double s) {
    const CurveSample c = eval_curve(path.curve, s, 2);
    PathFrame f;
    f.arc_jacobian = std::hypot(c.d1.x(), c.d1.y());
    if (!(f.arc_jacobian > 1e-14)) {
        throw GeometryError("stiffener path: degenerate parametrization (zero tangent)");
    }
    f.alpha = std::atan2(c.d1.y(), c.d1.x());
    f.curvature = (c.d1.x() * c.d2.y() - c.d1.y() * c.d2.x()) /
                  (f.arc_jacobian * f.arc_jacobian * f.arc_jacobian);
    return f;
}

Eigen::MatrixXd coupling_matrix(const PlateModel& plate, const ParamPoint& plate_param) {
    const SurfaceBasis basis = surface_basis(plate.surface, plate_param);
    const int n_en = static_cast<int>(basis.R.size());
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(5, kDofPerPoint * n_en);
    for (int a = 0; a < n_en; ++a) {
        for (int c = 0; c < kDofPerPoint; ++c) N(c, kDofPerPoint * a + c) = basis.R[a];
    }
    return N;
}

namespace {

// Containing plate spans of an inverted point (for crossing detection).
std::pair<int, int> plate_spans(const PlateModel& plate, const ParamPoint& p) {
    return {find_span(plate.surface.knots_u, p.xi), find_span(plate.surface.knots_v, p.eta)};
}

struct TracedPoint {
    ParamPoint param;
    std::pair<int, int> spans;
};

}  // namespace

std::vector<StiffenerQuadraturePoint> stiffener_quadrature(const PlateModel& plate,
                                                           const StiffenerPath& path,
                                                           int points_per_interval) {
    path.validate();
    const GaussRule& rule = gauss_legendre(points_per_interval);

    auto invert = [&](double s, const ParamPoint& guess) {
        const CurveSample c = eval_curve(path.curve, s, 0);
        try {
            return point_inversion(plate.surface, c.p, guess);
        } catch (const GeometryError&) {
            throw GeometryError("stiffener placement: path point at s=" + std::to_string(s) +
                                " is outside the panel (cutout crossing or overhang)");
        }
    };

    // Split every curve span at plate knot-line crossings. Crossing locations
    // are found from a dense parameter walk refined by bisection.
    std::vector<double> breaks;
    const auto spans = path.curve.knots.nonempty_spans();
    ParamPoint warm{0.5 * (plate.surface.knots_u.domain_start() + plate.surface.knots_u.domain_end()),
                    0.5 * (plate.surface.knots_v.domain_start() + plate.surface.knots_v.domain_end())};
    constexpr int kWalk = 64;
    for (int sp : spans) {
        const double s0 = path.curve.knots.values[sp];
        const double s1 = path.curve.knots.values[sp + 1];
        breaks.push_back(s0);
        TracedPoint prev{invert(s0, warm), {0, 0}};
        prev.spans = plate_spans(plate, prev.param);
        warm = prev.param;
        for (int k = 1; k <= kWalk; ++k) {
            const double s = s0 + (s1 - s0) * k / kWalk;
            TracedPoint cur{invert(s, warm), {0, 0}};
            cur.spans = plate_spans(plate, cur.param);
            warm = cur.param;
            if (cur.spans != prev.spans) {
                double lo = s0 + (s1 - s0) * (k - 1) / kWalk;
                double hi = s;
                ParamPoint guess = prev.param;
                for (int it = 0; it < 60 && (hi - lo) > 1e-13 * (s1 - s0); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const ParamPoint pm = invert(mid, guess);
                    guess = pm;
                    if (plate_spans(plate, pm) == prev.spans)
                        lo = mid;
                    else
                        hi = mid;
                }
                breaks.push_back(0.5 * (lo + hi));
            }
            prev = cur;
        }
    }
    breaks.push_back(path.curve.knots.domain_end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 breaks.end());

    std::vector<StiffenerQuadraturePoint> out;
    warm = {0.5, 0.5};
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double s0 = breaks[i];
        const double s1 = breaks[i + 1];
        const double half = 0.5 * (s1 - s0);
        for (int g = 0; g < rule.size(); ++g) {
            StiffenerQuadraturePoint qp;
            qp.s_param = s0 + half * (rule.points[g] + 1.0);
            qp.weight = rule.weights[g] * half;
            qp.plate_param = invert(qp.s_param, out.empty() ? warm : out.back().plate_param);
            qp.frame = tangent_and_curvature(path, qp.s_param);
            out.push_back(qp);
        }
    }
    return out;
}

namespace {

Matrix5d transform_matrix(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    Matrix5d T = Matrix5d::Zero();
    T(0, 0) = c;
    T(0, 1) = s;
    T(1, 0) = -s;
    T(1, 1) = c;
    T(2, 2) = 1.0;
    T(3, 3) = c;
    T(3, 4) = s;
    T(4, 3) = -s;
    T(4, 4) = c;
    return T;
}

Matrix5d transform_matrix_dalpha(double alpha) {
    const double c = std::cos(alpha), s = std::sin(alpha);
    Matrix5d T = Matrix5d::Zero();
    T(0, 0) = -s;
    T(0, 1) = c;
    T(1, 0) = -c;
    T(1, 1) = -s;
    T(3, 3) = -s;
    T(3, 4) = c;
    T(4, 3) = -c;
    T(4, 4) = -s;
    return T;
}

}  // namespace

std::pair<Eigen::SparseMatrix<double>, Eigen::SparseMatrix<double>> stiffener_contributions(
    const PlateModel& plate, const StiffenerPath& path, const StiffenerRigidity& rigidity,
    int points_per_interval) {
    const int n_dofs = plate.dofs.num_dofs();
    const auto qps = stiffener_quadrature(plate, path, points_per_interval);

    std::vector<Eigen::Triplet<double>> kt, mt;
    for (const StiffenerQuadraturePoint& qp : qps) {
        const SurfaceBasis basis = surface_basis(plate.surface, qp.plate_param);
        const int n_en = static_cast<int>(basis.R.size());
        const int n_cols = kDofPerPoint * n_en;

        // Path velocity in plate parameter space from the surface tangents.
        const SurfaceSample smp = eval_surface(plate.surface, qp.plate_param);
        const CurveSample c = eval_curve(path.curve, qp.s_param, 1);
        Eigen::Matrix2d Jsurf;
        Jsurf << smp.du.x(), smp.dv.x(), smp.du.y(), smp.dv.y();
        const Eigen::Vector2d dparam = Jsurf.inverse() * Eigen::Vector2d(c.d1.x(), c.d1.y());

        Eigen::MatrixXd N0 = Eigen::MatrixXd::Zero(5, n_cols);
        Eigen::MatrixXd N1 = Eigen::MatrixXd::Zero(5, n_cols);
        for (int a = 0; a < n_en; ++a) {
            const double dRds = basis.dRdu[a] * dparam.x() + basis.dRdv[a] * dparam.y();
            for (int comp = 0; comp < kDofPerPoint; ++comp) {
                N0(comp, kDofPerPoint * a + comp) = basis.R[a];
                N1(comp, kDofPerPoint * a + comp) = dRds;
            }
        }

        const double kappa = qp.frame.curvature;
        const double aj = qp.frame.arc_jacobian;
        const Matrix5d T = transform_matrix(qp.frame.alpha);
        // d(alpha)/ds_param = curvature * arc_jacobian
        const Matrix5d dT = transform_matrix_dalpha(qp.frame.alpha) * (kappa * aj);

        const Eigen::MatrixXd G0 = T * N0;
        const Eigen::MatrixXd G1 = (dT * N0 + T * N1) / aj;  // arc-length derivative

        // Curved Timoshenko rod strain rows; the curvature terms complete the
        // moving-frame derivative so rigid translations produce zero strain.
        Eigen::MatrixXd Bs(5, n_cols);
        Bs.row(0) = G1.row(0) - kappa * G0.row(1);
        Bs.row(1) = kappa * G0.row(0) + G1.row(1);
        Bs.row(2) = G1.row(2) + G0.row(3);
        Bs.row(3) = G1.row(3) - kappa * G0.row(4);
        Bs.row(4) = kappa * G0.row(3) + G1.row(4);

        const double w = qp.weight * aj;
        const Eigen::MatrixXd Ke = w * Bs.transpose() * rigidity.D_s * Bs;
        const Eigen::MatrixXd Me = w * G0.transpose() * rigidity.m_s * G0;

        const auto nodes = support_nodes(plate.surface, basis.span_u, basis.span_v);
        std::vector<int> gdof(n_cols);
        for (int a = 0; a < n_en; ++a) {
            const int cp = plate.dofs.node_to_cp[nodes[a]];
            if (cp < 0) throw GeometryError("stiffener support touches an unused control point");
            for (int comp = 0; comp < kDofPerPoint; ++comp) {
                gdof[kDofPerPoint * a + comp] = plate.dofs.dof(cp, comp);
            }
        }
        for (int r = 0; r < n_cols; ++r) {
            for (int col = 0; col < n_cols; ++col) {
                if (Ke(r, col) != 0.0) kt.emplace_back(gdof[r], gdof[col], Ke(r, col));
                if (Me(r, col) != 0.0) mt.emplace_back(gdof[r], gdof[col], Me(r, col));
            }
        }
    }

    std::pair<Eigen::SparseMatrix<double>, Eigen::SparseMatrix<double>> out;
    out.first.resize(n_dofs, n_dofs);
    out.second.resize(n_dofs, n_dofs);
    out.first.setFromTriplets(kt.begin(), kt.end());
    out.second.setFromTriplets(mt.begin(), mt.end());
    return out;
}

}  // namespace igavib
