#include "igavib/nurbs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace igavib {

namespace {

std::string fmt_double(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::vector<int> KnotVector::nonempty_spans() const {
    std::vector<int> spans;
    const int n = num_basis();
    for (int s = degree; s < n; ++s) {
        if (values[s] < values[s + 1]) spans.push_back(s);
    }
    return spans;
}

void KnotVector::validate() const {
    if (degree < 0) throw InputError("knot vector: negative degree");
    const int n = num_basis();
    if (n < degree + 1) throw InputError("knot vector: too few knots for degree");
    for (size_t i = 1; i < values.size(); ++i) {
        if (values[i] < values[i - 1]) throw InputError("knot vector: values must be nondecreasing");
    }
    for (int i = 1; i <= degree; ++i) {
        if (values[static_cast<size_t>(i)] != values[0] ||
            values[values.size() - 1 - i] != values.back()) {
            throw InputError("knot vector: open form requires degree+1 end multiplicity");
        }
    }
    if (values.front() >= values.back()) throw InputError("knot vector: empty parameter domain");
    // interior multiplicity bound
    int run = 1;
    for (int i = degree + 2; i < n; ++i) {
        if (values[i] == values[i - 1]) {
            if (++run > degree) throw InputError("knot vector: interior multiplicity exceeds degree");
        } else {
            run = 1;
        }
    }
}

int find_span(const KnotVector& knots, double u) {
    const int p = knots.degree;
    const int n = knots.num_basis() - 1;
    const std::vector<double>& U = knots.values;
    if (u < U[p] || u > U[n + 1]) {
        throw GeometryError("parameter " + fmt_double(u) + " outside knot domain [" +
                            fmt_double(U[p]) + ", " + fmt_double(U[n + 1]) + "]");
    }
    if (u >= U[n + 1]) {
        int s = n;
        while (s > p && U[s] == U[s + 1]) --s;
        return s;
    }
    int low = p, high = n + 1;
    int mid = (low + high) / 2;
    while (u < U[mid] || u >= U[mid + 1]) {
        if (u < U[mid])
            high = mid;
        else
            low = mid;
        mid = (low + high) / 2;
    }
    return mid;
}

Eigen::MatrixXd basis_and_derivatives(const KnotVector& knots, double u, int n_derivs, int span) {
    const int p = knots.degree;
    const std::vector<double>& U = knots.values;
    const int n = std::min(n_derivs, p);  // higher derivatives of degree-p splines vanish

    Eigen::MatrixXd ndu(p + 1, p + 1);
    std::vector<double> left(p + 1), right(p + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[j] = u - U[span + 1 - j];
        right[j] = U[span + j] - u;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[r + 1] + left[j - r];
            const double temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu(j, j) = saved;
    }

    Eigen::MatrixXd ders = Eigen::MatrixXd::Zero(n_derivs + 1, p + 1);
    for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

    Eigen::MatrixXd a(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= n; ++k) {
            double d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            ders(k, r) = d;
            std::swap(s1, s2);
        }
    }

    double factor = p;
    for (int k = 1; k <= n; ++k) {
        for (int j = 0; j <= p; ++j) ders(k, j) *= factor;
        factor *= (p - k);
    }
    return ders;
}

Eigen::MatrixXd basis_and_derivatives(const KnotVector& knots, double u, int n_derivs) {
    return basis_and_derivatives(knots, u, n_derivs, find_span(knots, u));
}

ControlPoint ControlPoint::from_homogeneous(const Eigen::Vector4d& hw) {
    if (hw[3] <= 0.0) throw GeometryError("homogeneous point with non-positive weight");
    return ControlPoint{hw[0] / hw[3], hw[1] / hw[3], hw[2] / hw[3], hw[3]};
}

void NurbsCurve::validate() const {
    knots.validate();
    if (static_cast<int>(points.size()) != knots.num_basis()) {
        throw InputError("curve: control point count does not match knot vector");
    }
    for (const ControlPoint& cp : points) {
        if (!(cp.w > 0.0)) throw InputError("curve: control point weights must be positive");
    }
}

bool NurbsCurve::closed(double rel_tol) const {
    const Eigen::Vector3d a = points.front().position();
    const Eigen::Vector3d b = points.back().position();
    const double scale = std::max({1.0, a.norm(), b.norm()});
    return (a - b).norm() <= rel_tol * scale;
}

CurveSample eval_curve(const NurbsCurve& curve, double u, int n_derivs) {
    const int p = curve.knots.degree;
    const int span = find_span(curve.knots, u);
    const Eigen::MatrixXd ders = basis_and_derivatives(curve.knots, u, n_derivs, span);

    Eigen::Matrix<double, 4, 3> A = Eigen::Matrix<double, 4, 3>::Zero();
    const int n_eval = std::min(n_derivs, 2);
    for (int k = 0; k <= n_eval && k < ders.rows(); ++k) {
        for (int j = 0; j <= p; ++j) {
            A.col(k) += ders(k, j) * curve.points[span - p + j].homogeneous();
        }
    }

    CurveSample s;
    const double w0 = A(3, 0);
    s.p = A.block<3, 1>(0, 0) / w0;
    if (n_eval >= 1) s.d1 = (A.block<3, 1>(0, 1) - A(3, 1) * s.p) / w0;
    if (n_eval >= 2) s.d2 = (A.block<3, 1>(0, 2) - 2.0 * A(3, 1) * s.d1 - A(3, 2) * s.p) / w0;
    return s;
}

void NurbsSurface::validate() const {
    knots_u.validate();
    knots_v.validate();
    if (nu != knots_u.num_basis() || nv != knots_v.num_basis()) {
        throw InputError("surface: net dimensions do not match knot vectors");
    }
    if (static_cast<int>(net.size()) != nu * nv) {
        throw InputError("surface: control net size mismatch");
    }
    for (const ControlPoint& cp : net) {
        if (!(cp.w > 0.0)) throw InputError("surface: control point weights must be positive");
    }
    if (periodic_u) {
        for (int j = 0; j < nv; ++j) {
            const Eigen::Vector3d a = at(0, j).position();
            const Eigen::Vector3d b = at(nu - 1, j).position();
            const double scale = std::max({1.0, a.norm(), b.norm()});
            if ((a - b).norm() > 1e-12 * scale) {
                throw InputError("surface: periodic_u requires coincident first/last columns");
            }
        }
    }
}

SurfaceBasis surface_basis(const NurbsSurface& surface, const ParamPoint& p) {
    SurfaceBasis out;
    out.span_u = find_span(surface.knots_u, p.xi);
    out.span_v = find_span(surface.knots_v, p.eta);
    const int pu = surface.knots_u.degree;
    const int pv = surface.knots_v.degree;
    const Eigen::MatrixXd Nu = basis_and_derivatives(surface.knots_u, p.xi, 1, out.span_u);
    const Eigen::MatrixXd Nv = basis_and_derivatives(surface.knots_v, p.eta, 1, out.span_v);

    const int n_local = (pu + 1) * (pv + 1);
    out.R.resize(n_local);
    out.dRdu.resize(n_local);
    out.dRdv.resize(n_local);

    double W = 0.0, Wu = 0.0, Wv = 0.0;
    int k = 0;
    for (int b = 0; b <= pv; ++b) {
        for (int a = 0; a <= pu; ++a, ++k) {
            const double w = surface.at(out.span_u - pu + a, out.span_v - pv + b).w;
            out.R[k] = Nu(0, a) * Nv(0, b) * w;
            out.dRdu[k] = Nu(1, a) * Nv(0, b) * w;
            out.dRdv[k] = Nu(0, a) * Nv(1, b) * w;
            W += out.R[k];
            Wu += out.dRdu[k];
            Wv += out.dRdv[k];
        }
    }
    for (int i = 0; i < n_local; ++i) {
        out.R[i] /= W;
        out.dRdu[i] = (out.dRdu[i] - out.R[i] * Wu) / W;
        out.dRdv[i] = (out.dRdv[i] - out.R[i] * Wv) / W;
    }
    return out;
}

SurfaceSample eval_surface(const NurbsSurface& surface, const ParamPoint& p) {
    const SurfaceBasis basis = surface_basis(surface, p);
    const int pu = surface.knots_u.degree;
    const int pv = surface.knots_v.degree;
    SurfaceSample s;
    int k = 0;
    for (int b = 0; b <= pv; ++b) {
        for (int a = 0; a <= pu; ++a, ++k) {
            const Eigen::Vector3d P = surface.at(basis.span_u - pu + a, basis.span_v - pv + b).position();
            s.p += basis.R[k] * P;
            s.du += basis.dRdu[k] * P;
            s.dv += basis.dRdv[k] * P;
        }
    }
    return s;
}

std::vector<int> support_nodes(const NurbsSurface& surface, int span_u, int span_v) {
    const int pu = surface.knots_u.degree;
    const int pv = surface.knots_v.degree;
    std::vector<int> nodes;
    nodes.reserve((pu + 1) * (pv + 1));
    for (int b = 0; b <= pv; ++b) {
        for (int a = 0; a <= pu; ++a) {
            int i = span_u - pu + a;
            const int j = span_v - pv + b;
            if (surface.periodic_u && i == surface.nu - 1) i = 0;
            nodes.push_back(j * surface.nu + i);
        }
    }
    return nodes;
}

NurbsCurve reverse_curve(const NurbsCurve& curve) {
    NurbsCurve out;
    out.knots.degree = curve.knots.degree;
    const double a = curve.knots.domain_start();
    const double b = curve.knots.domain_end();
    out.knots.values.resize(curve.knots.values.size());
    for (size_t i = 0; i < curve.knots.values.size(); ++i) {
        out.knots.values[i] = a + b - curve.knots.values[curve.knots.values.size() - 1 - i];
    }
    out.points.assign(curve.points.rbegin(), curve.points.rend());
    return out;
}

NurbsCurve rescale_domain(const NurbsCurve& curve, double a, double b) {
    const double s = curve.knots.domain_start();
    const double e = curve.knots.domain_end();
    NurbsCurve out = curve;
    for (double& u : out.knots.values) u = a + (b - a) * (u - s) / (e - s);
    // snap the clamped runs exactly
    for (int i = 0; i <= out.knots.degree; ++i) {
        out.knots.values[i] = a;
        out.knots.values[out.knots.values.size() - 1 - i] = b;
    }
    return out;
}

NurbsCurve insert_knots(const NurbsCurve& curve, const std::vector<double>& new_knots) {
    if (new_knots.empty()) return curve;
    std::vector<double> X = new_knots;
    std::sort(X.begin(), X.end());
    const int p = curve.knots.degree;
    const std::vector<double>& U = curve.knots.values;
    const int n = curve.knots.num_basis() - 1;
    const int m = n + p + 1;
    const int r = static_cast<int>(X.size()) - 1;

    if (X.front() <= U[p] || X.back() >= U[m - p]) {
        throw GeometryError("knot insertion values must lie strictly inside the domain");
    }

    std::vector<Eigen::Vector4d> Pw(curve.points.size());
    for (size_t i = 0; i < curve.points.size(); ++i) Pw[i] = curve.points[i].homogeneous();

    const int a = find_span(curve.knots, X.front());
    const int b = find_span(curve.knots, X.back()) + 1;

    std::vector<Eigen::Vector4d> Qw(n + r + 2);
    std::vector<double> Ubar(m + r + 2);

    for (int j = 0; j <= a - p; ++j) Qw[j] = Pw[j];
    for (int j = b - 1; j <= n; ++j) Qw[j + r + 1] = Pw[j];
    for (int j = 0; j <= a; ++j) Ubar[j] = U[j];
    for (int j = b + p; j <= m; ++j) Ubar[j + r + 1] = U[j];

    int i = b + p - 1;
    int k = b + p + r;
    for (int j = r; j >= 0; --j) {
        while (X[j] <= U[i] && i > a) {
            Qw[k - p - 1] = Pw[i - p - 1];
            Ubar[k] = U[i];
            --k;
            --i;
        }
        Qw[k - p - 1] = Qw[k - p];
        for (int l = 1; l <= p; ++l) {
            const int ind = k - p + l;
            double alfa = Ubar[k + l] - X[j];
            if (std::abs(alfa) == 0.0) {
                Qw[ind - 1] = Qw[ind];
            } else {
                alfa /= (Ubar[k + l] - U[i - p + l]);
                Qw[ind - 1] = alfa * Qw[ind - 1] + (1.0 - alfa) * Qw[ind];
            }
        }
        Ubar[k] = X[j];
        --k;
    }

    NurbsCurve out;
    out.knots.degree = p;
    out.knots.values = std::move(Ubar);
    out.points.resize(Qw.size());
    for (size_t q = 0; q < Qw.size(); ++q) out.points[q] = ControlPoint::from_homogeneous(Qw[q]);
    out.validate();
    return out;
}

namespace {

// Distinct interior knot values with multiplicities.
std::vector<std::pair<double, int>> interior_multiplicities(const KnotVector& kv) {
    std::vector<std::pair<double, int>> out;
    const int p = kv.degree;
    const int n = kv.num_basis();
    for (int i = p + 1; i < n; ++i) {
        const double v = kv.values[i];
        if (!out.empty() && out.back().first == v) {
            out.back().second++;
        } else {
            out.push_back({v, 1});
        }
    }
    return out;
}

std::vector<Eigen::Vector4d> elevate_bezier(std::vector<Eigen::Vector4d> q, int t) {
    for (int step = 0; step < t; ++step) {
        const int d = static_cast<int>(q.size()) - 1;
        std::vector<Eigen::Vector4d> q2(d + 2);
        q2[0] = q[0];
        q2[d + 1] = q[d];
        for (int i = 1; i <= d; ++i) {
            const double a = static_cast<double>(i) / (d + 1);
            q2[i] = a * q[i - 1] + (1.0 - a) * q[i];
        }
        q = std::move(q2);
    }
    return q;
}

}  // namespace

NurbsCurve elevate_degree(const NurbsCurve& curve, int t) {
    if (t < 0) throw InputError("degree elevation amount must be non-negative");
    if (t == 0) return curve;
    const int p = curve.knots.degree;

    // Bezier decomposition: raise every interior knot to multiplicity p.
    std::vector<double> to_insert;
    for (const auto& [v, mult] : interior_multiplicities(curve.knots)) {
        for (int k = mult; k < p; ++k) to_insert.push_back(v);
    }
    const NurbsCurve bez = to_insert.empty() ? curve : insert_knots(curve, to_insert);

    std::vector<double> breakpoints;
    breakpoints.push_back(bez.knots.domain_start());
    for (const auto& [v, mult] : interior_multiplicities(bez.knots)) breakpoints.push_back(v);
    breakpoints.push_back(bez.knots.domain_end());
    const int n_seg = static_cast<int>(breakpoints.size()) - 1;

    NurbsCurve out;
    out.knots.degree = p + t;
    for (int i = 0; i <= p + t; ++i) out.knots.values.push_back(breakpoints.front());
    for (int s = 1; s < n_seg; ++s) {
        for (int i = 0; i < p + t; ++i) out.knots.values.push_back(breakpoints[s]);
    }
    for (int i = 0; i <= p + t; ++i) out.knots.values.push_back(breakpoints.back());

    for (int s = 0; s < n_seg; ++s) {
        std::vector<Eigen::Vector4d> q(p + 1);
        for (int i = 0; i <= p; ++i) q[i] = bez.points[s * p + i].homogeneous();
        const std::vector<Eigen::Vector4d> eq = elevate_bezier(std::move(q), t);
        const int start = (s == 0) ? 0 : 1;  // shared segment endpoints
        for (size_t i = start; i < eq.size(); ++i) {
            out.points.push_back(ControlPoint::from_homogeneous(eq[i]));
        }
    }
    out.validate();
    return out;
}

namespace {

constexpr double kKnotSnapTol = 1e-12;

// Union of two interior-knot multisets: per value, the larger multiplicity.
std::vector<std::pair<double, int>> merge_interiors(const KnotVector& a, const KnotVector& b) {
    std::map<double, int> merged;
    for (const auto& [v, m] : interior_multiplicities(a)) merged[v] = m;
    for (const auto& [v, m] : interior_multiplicities(b)) {
        auto near = merged.lower_bound(v - kKnotSnapTol);
        if (near != merged.end() && std::abs(near->first - v) <= kKnotSnapTol) {
            near->second = std::max(near->second, m);
        } else {
            merged[v] = m;
        }
    }
    return {merged.begin(), merged.end()};
}

// Knots to insert into `kv` so its interior matches `target`.
std::vector<double> missing_knots(const KnotVector& kv, const std::vector<std::pair<double, int>>& target) {
    std::vector<double> out;
    auto own = interior_multiplicities(kv);
    for (const auto& [v, m] : target) {
        int have = 0;
        for (const auto& [ov, om] : own) {
            if (std::abs(ov - v) <= kKnotSnapTol) have = om;
        }
        for (int k = have; k < m; ++k) out.push_back(v);
    }
    return out;
}

NurbsSurface flip_u(const NurbsSurface& s) {
    NurbsSurface out = s;
    const double a = s.knots_u.domain_start();
    const double b = s.knots_u.domain_end();
    for (size_t i = 0; i < s.knots_u.values.size(); ++i) {
        out.knots_u.values[i] = a + b - s.knots_u.values[s.knots_u.values.size() - 1 - i];
    }
    for (int j = 0; j < s.nv; ++j) {
        for (int i = 0; i < s.nu; ++i) out.at(i, j) = s.at(s.nu - 1 - i, j);
    }
    return out;
}

// In-plane Jacobian determinant range over a few sample points per element.
std::pair<double, double> jacobian_range(const NurbsSurface& s) {
    double dmin = std::numeric_limits<double>::max();
    double dmax = std::numeric_limits<double>::lowest();
    const auto spans_u = s.knots_u.nonempty_spans();
    const auto spans_v = s.knots_v.nonempty_spans();
    const double offs[3] = {0.1127016653792583, 0.5, 0.8872983346207417};  // 3-pt Gauss abscissae
    for (int sv : spans_v) {
        for (int su : spans_u) {
            const double u0 = s.knots_u.values[su], u1 = s.knots_u.values[su + 1];
            const double v0 = s.knots_v.values[sv], v1 = s.knots_v.values[sv + 1];
            for (double fu : offs) {
                for (double fv : offs) {
                    const SurfaceSample smp =
                        eval_surface(s, {u0 + fu * (u1 - u0), v0 + fv * (v1 - v0)});
                    const double det = smp.du.x() * smp.dv.y() - smp.dv.x() * smp.du.y();
                    dmin = std::min(dmin, det);
                    dmax = std::max(dmax, det);
                }
            }
        }
    }
    return {dmin, dmax};
}

}  // namespace

NurbsSurface ruled_surface(const NurbsCurve& inner, const NurbsCurve& outer) {
    inner.validate();
    outer.validate();
    NurbsCurve ci = rescale_domain(inner, 0.0, 1.0);
    NurbsCurve co = rescale_domain(outer, 0.0, 1.0);

    if (ci.knots.degree < co.knots.degree) ci = elevate_degree(ci, co.knots.degree - ci.knots.degree);
    if (co.knots.degree < ci.knots.degree) co = elevate_degree(co, ci.knots.degree - co.knots.degree);

    const auto target = merge_interiors(ci.knots, co.knots);
    const std::vector<double> miss_i = missing_knots(ci.knots, target);
    const std::vector<double> miss_o = missing_knots(co.knots, target);
    if (!miss_i.empty()) ci = insert_knots(ci, miss_i);
    if (!miss_o.empty()) co = insert_knots(co, miss_o);
    if (ci.points.size() != co.points.size()) {
        throw GeometryError("ruled surface: curve compatibility failed");
    }

    NurbsSurface s;
    s.knots_u = ci.knots;
    s.knots_v = KnotVector{1, {0.0, 0.0, 1.0, 1.0}};
    s.nu = static_cast<int>(ci.points.size());
    s.nv = 2;
    s.net.resize(static_cast<size_t>(s.nu) * 2);
    for (int i = 0; i < s.nu; ++i) {
        s.at(i, 0) = ci.points[i];
        s.at(i, 1) = co.points[i];
    }
    s.periodic_u = ci.closed() && co.closed();

    auto [dmin, dmax] = jacobian_range(s);
    if (dmax < 0.0) {
        s = flip_u(s);
        std::tie(dmin, dmax) = jacobian_range(s);
    }
    if (!(dmin > 0.0)) {
        throw GeometryError("ruled surface: ruling lines cross or the patch is degenerate "
                            "(Jacobian range [" + fmt_double(dmin) + ", " + fmt_double(dmax) + "])");
    }
    s.validate();
    return s;
}

NurbsSurface elevate_degree_v(const NurbsSurface& surface, int t) {
    if (t == 0) return surface;
    std::vector<NurbsCurve> cols(surface.nu);
    int new_nv = 0;
    KnotVector new_kv;
    for (int i = 0; i < surface.nu; ++i) {
        NurbsCurve col;
        col.knots = surface.knots_v;
        col.points.resize(surface.nv);
        for (int j = 0; j < surface.nv; ++j) col.points[j] = surface.at(i, j);
        cols[i] = elevate_degree(col, t);
        new_nv = static_cast<int>(cols[i].points.size());
        new_kv = cols[i].knots;
    }
    NurbsSurface out;
    out.knots_u = surface.knots_u;
    out.knots_v = new_kv;
    out.nu = surface.nu;
    out.nv = new_nv;
    out.periodic_u = surface.periodic_u;
    out.net.resize(static_cast<size_t>(out.nu) * out.nv);
    for (int i = 0; i < out.nu; ++i) {
        for (int j = 0; j < out.nv; ++j) out.at(i, j) = cols[i].points[j];
    }
    out.validate();
    return out;
}

NurbsSurface insert_knots_u(const NurbsSurface& surface, const std::vector<double>& new_knots) {
    if (new_knots.empty()) return surface;
    std::vector<NurbsCurve> rows(surface.nv);
    for (int j = 0; j < surface.nv; ++j) {
        NurbsCurve row;
        row.knots = surface.knots_u;
        row.points.assign(surface.net.begin() + static_cast<size_t>(j) * surface.nu,
                          surface.net.begin() + static_cast<size_t>(j + 1) * surface.nu);
        rows[j] = insert_knots(row, new_knots);
    }
    NurbsSurface out;
    out.knots_u = rows[0].knots;
    out.knots_v = surface.knots_v;
    out.nu = static_cast<int>(rows[0].points.size());
    out.nv = surface.nv;
    out.periodic_u = surface.periodic_u;
    out.net.resize(static_cast<size_t>(out.nu) * out.nv);
    for (int j = 0; j < out.nv; ++j) {
        for (int i = 0; i < out.nu; ++i) out.at(i, j) = rows[j].points[i];
    }
    out.validate();
    return out;
}

NurbsSurface insert_knots_v(const NurbsSurface& surface, const std::vector<double>& new_knots) {
    if (new_knots.empty()) return surface;
    std::vector<NurbsCurve> cols(surface.nu);
    for (int i = 0; i < surface.nu; ++i) {
        NurbsCurve col;
        col.knots = surface.knots_v;
        col.points.resize(surface.nv);
        for (int j = 0; j < surface.nv; ++j) col.points[j] = surface.at(i, j);
        cols[i] = insert_knots(col, new_knots);
    }
    NurbsSurface out;
    out.knots_u = surface.knots_u;
    out.knots_v = cols[0].knots;
    out.nu = surface.nu;
    out.nv = static_cast<int>(cols[0].points.size());
    out.periodic_u = surface.periodic_u;
    out.net.resize(static_cast<size_t>(out.nu) * out.nv);
    for (int i = 0; i < out.nu; ++i) {
        for (int j = 0; j < out.nv; ++j) out.at(i, j) = cols[i].points[j];
    }
    out.validate();
    return out;
}

namespace {

std::vector<double> span_subdivision_knots(const KnotVector& kv, int n_new) {
    std::vector<double> out;
    for (int s : kv.nonempty_spans()) {
        const double a = kv.values[s];
        const double b = kv.values[s + 1];
        for (int k = 1; k <= n_new; ++k) out.push_back(a + (b - a) * k / (n_new + 1));
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

NurbsSurface refine(const NurbsSurface& surface, int n_u, int n_v) {
    if (n_u < 0 || n_v < 0) throw InputError("refine: subdivision counts must be non-negative");
    NurbsSurface out = surface;
    if (n_u > 0) out = insert_knots_u(out, span_subdivision_knots(out.knots_u, n_u));
    if (n_v > 0) out = insert_knots_v(out, span_subdivision_knots(out.knots_v, n_v));
    return out;
}

ParamPoint point_inversion(const NurbsSurface& surface, const Eigen::Vector3d& target,
                           const ParamPoint& guess) {
    constexpr double kTol = 1e-10;  // meters
    constexpr int kMaxIter = 50;

    const double u_lo = surface.knots_u.domain_start();
    const double u_hi = surface.knots_u.domain_end();
    const double v_lo = surface.knots_v.domain_start();
    const double v_hi = surface.knots_v.domain_end();
    auto clamp = [&](ParamPoint p) {
        p.xi = std::clamp(p.xi, u_lo, u_hi);
        p.eta = std::clamp(p.eta, v_lo, v_hi);
        return p;
    };

    std::vector<ParamPoint> starts;
    starts.push_back(clamp(guess));
    for (int su : surface.knots_u.nonempty_spans()) {
        for (int sv : surface.knots_v.nonempty_spans()) {
            starts.push_back({0.5 * (surface.knots_u.values[su] + surface.knots_u.values[su + 1]),
                              0.5 * (surface.knots_v.values[sv] + surface.knots_v.values[sv + 1])});
        }
    }

    for (const ParamPoint& start : starts) {
        ParamPoint p = start;
        SurfaceSample s = eval_surface(surface, p);
        double res = (s.p - target).norm();
        for (int iter = 0; iter < kMaxIter; ++iter) {
            if (res <= kTol) return p;
            Eigen::Matrix2d J;
            J << s.du.x(), s.dv.x(), s.du.y(), s.dv.y();
            const double det = J.determinant();
            if (std::abs(det) < 1e-30) break;
            const Eigen::Vector2d step = -J.inverse() * Eigen::Vector2d(s.p.x() - target.x(),
                                                                        s.p.y() - target.y());
            bool accepted = false;
            double lambda = 1.0;
            for (int damp = 0; damp < 30; ++damp) {
                const ParamPoint cand = clamp({p.xi + lambda * step.x(), p.eta + lambda * step.y()});
                const SurfaceSample cs = eval_surface(surface, cand);
                const double cres = (cs.p - target).norm();
                if (cres < res) {
                    p = cand;
                    s = cs;
                    res = cres;
                    accepted = true;
                    break;
                }
                lambda *= 0.5;
            }
            if (!accepted) break;  // stalled; try the next start
        }
        if (res <= kTol) return p;
    }
    throw GeometryError("point inversion failed: target (" + fmt_double(target.x()) + ", " +
                        fmt_double(target.y()) + ", " + fmt_double(target.z()) +
                        ") does not lie on the surface");
}

ElementConnectivity build_connectivity(const NurbsSurface& surface) {
    surface.validate();
    ElementConnectivity conn;
    conn.degree_u = surface.knots_u.degree;
    conn.degree_v = surface.knots_v.degree;
    const auto spans_u = surface.knots_u.nonempty_spans();
    const auto spans_v = surface.knots_v.nonempty_spans();
    conn.ien.reserve(spans_u.size() * spans_v.size());
    conn.spans.reserve(spans_u.size() * spans_v.size());
    for (int sv : spans_v) {
        for (int su : spans_u) {
            conn.ien.push_back(support_nodes(surface, su, sv));
            conn.spans.push_back({su, sv});
        }
    }
    return conn;
}

}  // namespace igavib
