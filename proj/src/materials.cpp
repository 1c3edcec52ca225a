#include "igavib/materials.hpp"

#include <cmath>

namespace igavib {

void Lamina::validate() const {
    if (!(E_L > 0.0) || !(E_T > 0.0) || !(G_LT > 0.0) || !(G_TT > 0.0)) {
        throw InputError("lamina: moduli must be positive");
    }
    if (!(thickness > 0.0)) throw InputError("lamina: thickness must be positive");
    if (!(rho > 0.0)) throw InputError("lamina: density must be positive");
    if (std::abs(nu_LT * nu_TL()) >= 1.0) {
        throw InputError("lamina: Poisson ratios violate positive definiteness");
    }
}

Lamina Lamina::isotropic(double E, double nu, double rho, double thickness) {
    Lamina l;
    l.E_L = l.E_T = E;
    l.G_LT = l.G_TT = E / (2.0 * (1.0 + nu));
    l.nu_LT = nu;
    l.rho = rho;
    l.thickness = thickness;
    l.theta = 0.0;
    return l;
}

Eigen::Matrix3d TransformedStiffness::in_plane() const {
    Eigen::Matrix3d Q;
    Q << Q11, Q12, Q16, Q12, Q22, Q26, Q16, Q26, Q66;
    return Q;
}

Eigen::Matrix2d TransformedStiffness::shear() const {
    Eigen::Matrix2d Q;
    Q << Q55, Q45, Q45, Q44;
    return Q;
}

TransformedStiffness transformed_stiffness(const Lamina& lamina) {
    lamina.validate();
    const double denom = 1.0 - lamina.nu_LT * lamina.nu_TL();
    const double Q11 = lamina.E_L / denom;
    const double Q22 = lamina.E_T / denom;
    const double Q12 = lamina.nu_LT * Q22;
    const double Q66 = lamina.G_LT;
    const double Q44 = lamina.G_TT;  // gamma_yz plane
    const double Q55 = lamina.G_LT;  // gamma_xz plane

    const double c = std::cos(lamina.theta);
    const double s = std::sin(lamina.theta);
    const double c2 = c * c, s2 = s * s;
    const double c3 = c2 * c, s3 = s2 * s;
    const double c4 = c2 * c2, s4 = s2 * s2;

    TransformedStiffness t;
    t.Q11 = c4 * Q11 + 2.0 * c2 * s2 * Q12 + s4 * Q22 + 4.0 * c2 * s2 * Q66;
    t.Q12 = c2 * s2 * Q11 + (c4 + s4) * Q12 + c2 * s2 * Q22 - 4.0 * c2 * s2 * Q66;
    t.Q22 = s4 * Q11 + 2.0 * c2 * s2 * Q12 + c4 * Q22 + 4.0 * c2 * s2 * Q66;
    t.Q16 = c3 * s * Q11 + c * s * (s2 - c2) * Q12 - c * s3 * Q22 + 2.0 * c * s * (s2 - c2) * Q66;
    t.Q26 = c * s3 * Q11 + c * s * (c2 - s2) * Q12 - c3 * s * Q22 + 2.0 * c * s * (c2 - s2) * Q66;
    t.Q66 = c2 * s2 * Q11 - 2.0 * c2 * s2 * Q12 + c2 * s2 * Q22 + (c2 - s2) * (c2 - s2) * Q66;
    t.Q44 = c2 * Q44 + s2 * Q55;
    t.Q45 = c * s * (Q55 - Q44);
    t.Q55 = s2 * Q44 + c2 * Q55;
    return t;
}

LaminateStack LaminateStack::from_plies(std::vector<Lamina> plies) {
    if (plies.empty()) throw InputError("laminate: at least one ply required");
    double h = 0.0;
    for (const Lamina& ply : plies) {
        ply.validate();
        h += ply.thickness;
    }
    LaminateStack stack;
    stack.plies = std::move(plies);
    stack.z_interfaces.resize(stack.plies.size() + 1);
    stack.z_interfaces[0] = -0.5 * h;
    for (size_t k = 0; k < stack.plies.size(); ++k) {
        stack.z_interfaces[k + 1] = stack.z_interfaces[k] + stack.plies[k].thickness;
    }
    stack.z_interfaces.back() = 0.5 * h;  // kill accumulated rounding
    return stack;
}

double LaminateStack::mean_density() const {
    double m = 0.0;
    for (const Lamina& ply : plies) m += ply.rho * ply.thickness;
    return m / thickness();
}

void LaminateStack::validate() const {
    if (plies.empty()) throw InputError("laminate: empty stack");
    if (z_interfaces.size() != plies.size() + 1) throw InputError("laminate: interface count mismatch");
    for (size_t i = 1; i < z_interfaces.size(); ++i) {
        if (!(z_interfaces[i] > z_interfaces[i - 1])) {
            throw InputError("laminate: interfaces must be strictly increasing");
        }
    }
    for (const Lamina& ply : plies) ply.validate();
}

Matrix8d PlateRigidity::Dp() const {
    Matrix8d D8 = Matrix8d::Zero();
    D8.block<3, 3>(0, 0) = A;
    D8.block<3, 3>(0, 3) = B;
    D8.block<3, 3>(3, 0) = B;
    D8.block<3, 3>(3, 3) = D;
    D8.block<2, 2>(6, 6) = As;
    return D8;
}

PlateRigidity laminate_rigidity(const LaminateStack& stack, double K_shear) {
    stack.validate();
    PlateRigidity r;
    for (size_t k = 0; k < stack.plies.size(); ++k) {
        const TransformedStiffness q = transformed_stiffness(stack.plies[k]);
        const double z0 = stack.z_interfaces[k];
        const double z1 = stack.z_interfaces[k + 1];
        const double d1 = z1 - z0;
        const double d2 = 0.5 * (z1 * z1 - z0 * z0);
        const double d3 = (z1 * z1 * z1 - z0 * z0 * z0) / 3.0;
        r.A += q.in_plane() * d1;
        r.B += q.in_plane() * d2;
        r.D += q.in_plane() * d3;
        r.As += K_shear * q.shear() * d1;
    }
    return r;
}

void StiffenerSection::validate() const {
    if (!(b_s > 0.0) || !(h_s > 0.0)) throw InputError("stiffener section: b_s, h_s must be positive");
    if (!(E > 0.0) || !(G > 0.0)) throw InputError("stiffener section: moduli must be positive");
    if (!(rho >= 0.0)) throw InputError("stiffener section: density must be non-negative");
}

double StiffenerSection::J_t() const {
    // One-term-corrected series for a solid rectangle, long side a, short side b:
    // J = a b^3 (1/3 - 0.21 (b/a)(1 - b^4/(12 a^4)))
    const double a = std::max(b_s, h_s);
    const double b = std::min(b_s, h_s);
    const double q = b / a;
    return a * b * b * b * (1.0 / 3.0 - 0.21 * q * (1.0 - q * q * q * q / 12.0));
}

StiffenerRigidity stiffener_rigidity(const StiffenerSection& section) {
    section.validate();
    const double A = section.area();
    const double An = section.shear_area();
    const double Ab = section.shear_area();
    const double In = section.I_n();
    const double Ib = section.I_b();
    const double Jt = section.J_t();
    const double e = section.e;

    StiffenerRigidity r;
    r.D_s(0, 0) = section.E * A;
    r.D_s(0, 3) = r.D_s(3, 0) = section.E * A * e;
    r.D_s(1, 1) = section.G * An;
    r.D_s(1, 4) = r.D_s(4, 1) = section.G * An * e;
    r.D_s(2, 2) = section.G * Ab;
    r.D_s(3, 3) = section.E * In;
    // Torsion about the plate midplane axis; the A_n e^2 transport keeps the
    // (gamma_n, kappa_n) block positive semidefinite for eccentric sections.
    r.D_s(4, 4) = section.G * (Jt + An * e * e);

    r.m_s(0, 0) = r.m_s(1, 1) = r.m_s(2, 2) = section.rho * A;
    r.m_s(0, 3) = r.m_s(3, 0) = section.rho * A * e;
    r.m_s(1, 4) = r.m_s(4, 1) = section.rho * A * e;
    r.m_s(3, 3) = section.rho * In;
    r.m_s(4, 4) = section.rho * (In + Ib);
    return r;
}

StiffenerSection section_from_ratios(double gamma, double delta, double b, double t_p,
                                     double D11, double E_s, double G_s, double rho_s) {
    if (!(gamma > 0.0) || !(delta > 0.0)) throw InputError("stiffener ratios must be positive");
    const double A = delta * b * t_p;
    const double I_target = gamma * b * D11 / E_s;

    // I(h) = A (h^2/12 + ((t_p+h)/2)^2), strictly increasing in h.
    auto I_of_h = [&](double h) {
        const double e = 0.5 * (t_p + h);
        return A * (h * h / 12.0 + e * e);
    };
    if (I_target <= I_of_h(0.0)) {
        throw InputError("section_from_ratios: no positive stiffener height satisfies the ratios");
    }
    double lo = 0.0;
    double hi = t_p;
    while (I_of_h(hi) < I_target) {
        hi *= 2.0;
        if (hi > 1e9) throw InputError("section_from_ratios: ratios out of reachable range");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (I_of_h(mid) < I_target)
            lo = mid;
        else
            hi = mid;
        if ((hi - lo) <= 1e-12 * hi) break;
    }
    const double h_s = 0.5 * (lo + hi);

    StiffenerSection s;
    s.h_s = h_s;
    s.b_s = A / h_s;
    s.e = 0.5 * (t_p + h_s);
    s.E = E_s;
    s.G = G_s;
    s.rho = rho_s;
    s.validate();
    return s;
}

}  // namespace igavib
