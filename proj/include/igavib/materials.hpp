#pragma once

#include <Eigen/Dense>
#include <vector>

#include "igavib/errors.hpp"

namespace igavib {

using Matrix5d = Eigen::Matrix<double, 5, 5>;
using Matrix8d = Eigen::Matrix<double, 8, 8>;

// One orthotropic ply. theta is the fiber angle in radians measured from
// the plate x axis.
struct Lamina {
    double E_L = 0.0;
    double E_T = 0.0;
    double G_LT = 0.0;
    double G_TT = 0.0;
    double nu_LT = 0.0;
    double rho = 0.0;
    double thickness = 0.0;
    double theta = 0.0;

    double nu_TL() const { return nu_LT * E_T / E_L; }
    void validate() const;

    static Lamina isotropic(double E, double nu, double rho, double thickness);
};

// Transformed plane-stress constants Qbar in the plate frame.
struct TransformedStiffness {
    double Q11 = 0, Q12 = 0, Q22 = 0, Q16 = 0, Q26 = 0, Q66 = 0;
    double Q44 = 0, Q45 = 0, Q55 = 0;  // transverse shear

    Eigen::Matrix3d in_plane() const;
    // 2x2 in (gamma_xz, gamma_yz) order: [[Q55, Q45], [Q45, Q44]].
    Eigen::Matrix2d shear() const;
};

TransformedStiffness transformed_stiffness(const Lamina& lamina);

struct LaminateStack {
    std::vector<Lamina> plies;          // bottom to top
    std::vector<double> z_interfaces;   // plies.size()+1 values, midplane at z=0

    static LaminateStack from_plies(std::vector<Lamina> plies);
    double thickness() const { return z_interfaces.back() - z_interfaces.front(); }
    double mean_density() const;
    void validate() const;
};

struct PlateRigidity {
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d B = Eigen::Matrix3d::Zero();
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    Eigen::Matrix2d As = Eigen::Matrix2d::Zero();

    // 8x8 generalized rigidity [[A,B,0],[B,D,0],[0,0,As]] over
    // (membrane, curvature, transverse shear) strains.
    Matrix8d Dp() const;
};

PlateRigidity laminate_rigidity(const LaminateStack& stack, double K_shear = 5.0 / 6.0);

// Rectangular blade stiffener section, isotropic material. Eccentricity e is
// the offset of the section centroid from the plate midplane; the default
// construction (surface-mounted) is e = (t_p + h_s)/2.
struct StiffenerSection {
    double b_s = 0.0;  // width
    double h_s = 0.0;  // height
    double e = 0.0;    // centroid eccentricity from plate midplane
    double E = 0.0;
    double G = 0.0;
    double rho = 0.0;

    double area() const { return b_s * h_s; }
    double shear_area() const { return (5.0 / 6.0) * area(); }  // A_n = A_b
    // Second moment about the in-plane normal axis at the plate midplane
    // (parallel-axis term included).
    double I_n() const { return b_s * h_s * h_s * h_s / 12.0 + area() * e * e; }
    double I_b() const { return h_s * b_s * b_s * b_s / 12.0; }
    double J_t() const;

    void validate() const;
};

// 5x5 stiffener rigidity and mass-density matrices over the stiffener-frame
// generalized strains/velocities (eps_t, gamma_n, gamma_b, kappa_t, kappa_n).
struct StiffenerRigidity {
    Matrix5d D_s = Matrix5d::Zero();
    Matrix5d m_s = Matrix5d::Zero();
};

StiffenerRigidity stiffener_rigidity(const StiffenerSection& section);

// Sizes a surface-mounted blade section so that A = delta*b*t_p and
// E_s * I(h_s) = gamma * b * D11 with e tied to h_s. The closure in h_s is
// solved by bisection to 1e-12 relative.
StiffenerSection section_from_ratios(double gamma, double delta, double b, double t_p,
                                     double D11, double E_s, double G_s, double rho_s);

}  // namespace igavib
