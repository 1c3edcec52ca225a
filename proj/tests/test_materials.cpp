#include <gtest/gtest.h>

#include <cmath>

#include "igavib/materials.hpp"

using namespace igavib;

namespace {

Lamina ortho_ratio_lamina(double ratio_EL, double ratio_GLT, double ratio_GTT, double nu_LT,
                          double E_T, double rho, double t, double theta) {
    Lamina l;
    l.E_T = E_T;
    l.E_L = ratio_EL * E_T;
    l.G_LT = ratio_GLT * E_T;
    l.G_TT = ratio_GTT * E_T;
    l.nu_LT = nu_LT;
    l.rho = rho;
    l.thickness = t;
    l.theta = theta;
    return l;
}

Lamina composite_345(double theta) {
    // E_L/E_T = 2.45, G_LT/E_T = 0.48, G_TT/E_T = 0.2, nu_LT = 0.23
    return ortho_ratio_lamina(2.45, 0.48, 0.2, 0.23, 10e9, 8000.0, 0.02, theta);
}

// Brute-force rotation of the plane-stress stiffness as a 4th-order tensor,
// fiber axis at +theta from x.
TransformedStiffness tensor_rotation_oracle(const Lamina& lam) {
    const double denom = 1.0 - lam.nu_LT * lam.nu_TL();
    double C[2][2][2][2] = {};
    const double Q11 = lam.E_L / denom;
    const double Q22 = lam.E_T / denom;
    const double Q12 = lam.nu_LT * Q22;
    const double Q66 = lam.G_LT;
    C[0][0][0][0] = Q11;
    C[1][1][1][1] = Q22;
    C[0][0][1][1] = C[1][1][0][0] = Q12;
    C[0][1][0][1] = C[1][0][0][1] = C[0][1][1][0] = C[1][0][1][0] = Q66;

    const double c = std::cos(lam.theta), s = std::sin(lam.theta);
    // columns are the material axes expressed in global coordinates
    const double a[2][2] = {{c, -s}, {s, c}};
    double G[2][2][2][2] = {};
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
            for (int r = 0; r < 2; ++r)
                for (int t = 0; t < 2; ++t) {
                    double sum = 0.0;
                    for (int i = 0; i < 2; ++i)
                        for (int j = 0; j < 2; ++j)
                            for (int k = 0; k < 2; ++k)
                                for (int l = 0; l < 2; ++l)
                                    sum += a[p][i] * a[q][j] * a[r][k] * a[t][l] * C[i][j][k][l];
                    G[p][q][r][t] = sum;
                }

    TransformedStiffness out;
    out.Q11 = G[0][0][0][0];
    out.Q22 = G[1][1][1][1];
    out.Q12 = G[0][0][1][1];
    out.Q16 = G[0][0][0][1];
    out.Q26 = G[1][1][0][1];
    out.Q66 = G[0][1][0][1];
    // transverse shear: vector-pair rotation of diag(G_13, G_23) in (xz, yz)
    const double Qs[2][2] = {{lam.G_LT, 0.0}, {0.0, lam.G_TT}};
    double Gs[2][2] = {};
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) {
            double sum = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) sum += a[p][i] * a[q][j] * Qs[i][j];
            Gs[p][q] = sum;
        }
    out.Q55 = Gs[0][0];  // xz
    out.Q45 = Gs[0][1];
    out.Q44 = Gs[1][1];  // yz
    return out;
}

LaminateStack isotropic_stack(double E, double nu, double rho, double t) {
    return LaminateStack::from_plies({Lamina::isotropic(E, nu, rho, t)});
}

StiffenerSection demo_section(double b_s, double h_s, double e) {
    StiffenerSection s;
    s.b_s = b_s;
    s.h_s = h_s;
    s.e = e;
    s.E = 70e9;
    s.G = 70e9 / 2.6;
    s.rho = 2700.0;
    return s;
}

}  // namespace

TEST(TransformedStiffness, ZeroAngleIsIdentity) {
    const Lamina l = composite_345(0.0);
    const TransformedStiffness q = transformed_stiffness(l);
    const double denom = 1.0 - l.nu_LT * l.nu_TL();
    EXPECT_NEAR(q.Q11, l.E_L / denom, 1e-6);
    EXPECT_NEAR(q.Q22, l.E_T / denom, 1e-6);
    EXPECT_NEAR(q.Q12, l.nu_LT * l.E_T / denom, 1e-6);
    EXPECT_DOUBLE_EQ(q.Q16, 0.0);
    EXPECT_DOUBLE_EQ(q.Q26, 0.0);
    EXPECT_DOUBLE_EQ(q.Q66, l.G_LT);
    EXPECT_DOUBLE_EQ(q.Q44, l.G_TT);
    EXPECT_DOUBLE_EQ(q.Q55, l.G_LT);
    EXPECT_DOUBLE_EQ(q.Q45, 0.0);
}

TEST(TransformedStiffness, QuarterTurnSwapsAxes) {
    const Lamina l0 = composite_345(0.0);
    const Lamina l90 = composite_345(M_PI / 2.0);
    const TransformedStiffness q0 = transformed_stiffness(l0);
    const TransformedStiffness q90 = transformed_stiffness(l90);
    EXPECT_NEAR(q90.Q11, q0.Q22, 1e-12 * q0.Q11);
    EXPECT_NEAR(q90.Q22, q0.Q11, 1e-12 * q0.Q11);
    EXPECT_NEAR(q90.Q12, q0.Q12, 1e-12 * q0.Q11);
    EXPECT_NEAR(q90.Q66, q0.Q66, 1e-12 * q0.Q11);
    EXPECT_NEAR(q90.Q16, 0.0, 1e-12 * q0.Q11);
    EXPECT_NEAR(q90.Q26, 0.0, 1e-12 * q0.Q11);
    EXPECT_NEAR(q90.Q44, q0.Q55, 1e-12 * q0.Q44);
    EXPECT_NEAR(q90.Q55, q0.Q44, 1e-12 * q0.Q44);
}

TEST(TransformedStiffness, MatchesTensorRotationOracle) {
    for (double theta : {M_PI / 4.0, M_PI / 6.0, -M_PI / 3.0, 0.21, 1.13}) {
        const Lamina l = composite_345(theta);
        const TransformedStiffness q = transformed_stiffness(l);
        const TransformedStiffness o = tensor_rotation_oracle(l);
        const double scale = o.Q11;
        EXPECT_NEAR(q.Q11, o.Q11, 1e-10 * scale) << theta;
        EXPECT_NEAR(q.Q12, o.Q12, 1e-10 * scale) << theta;
        EXPECT_NEAR(q.Q22, o.Q22, 1e-10 * scale) << theta;
        EXPECT_NEAR(q.Q16, o.Q16, 1e-10 * scale) << theta;
        EXPECT_NEAR(q.Q26, o.Q26, 1e-10 * scale) << theta;
        EXPECT_NEAR(q.Q66, o.Q66, 1e-10 * scale) << theta;
        EXPECT_NEAR(q.Q44, o.Q44, 1e-10 * o.Q44) << theta;
        EXPECT_NEAR(q.Q45, o.Q45, 1e-10 * o.Q44) << theta;
        EXPECT_NEAR(q.Q55, o.Q55, 1e-10 * o.Q44) << theta;
    }
}

TEST(TransformedStiffness, RotationInvariants) {
    const TransformedStiffness ref = transformed_stiffness(composite_345(0.0));
    const double i1_ref = ref.Q11 + ref.Q22 + 2.0 * ref.Q12;
    const double i2_ref = ref.Q66 - ref.Q12;
    for (int k = 1; k <= 20; ++k) {
        const TransformedStiffness q = transformed_stiffness(composite_345(k * 0.157));
        EXPECT_NEAR(q.Q11 + q.Q22 + 2.0 * q.Q12, i1_ref, 1e-10 * i1_ref);
        EXPECT_NEAR(q.Q66 - q.Q12, i2_ref, 1e-10 * std::abs(i1_ref));
    }
}

TEST(TransformedStiffness, NonPhysicalLaminaRejected) {
    Lamina l = composite_345(0.0);
    l.E_L = -1.0;
    EXPECT_THROW(transformed_stiffness(l), InputError);
    Lamina l2 = composite_345(0.0);
    l2.nu_LT = 2.5;  // nu_LT * nu_TL > 1 for this E ratio
    EXPECT_THROW(transformed_stiffness(l2), InputError);
}

TEST(LaminateRigidity, IsotropicSinglePlyAnalytic) {
    const double E = 70e9, nu = 0.3, t = 0.004;
    const PlateRigidity r = laminate_rigidity(isotropic_stack(E, nu, 1000.0, t));
    const double A11 = E * t / (1.0 - nu * nu);
    const double D11 = E * t * t * t / (12.0 * (1.0 - nu * nu));
    EXPECT_NEAR(r.A(0, 0), A11, 1e-12 * A11);
    EXPECT_NEAR(r.A(1, 1), A11, 1e-12 * A11);
    EXPECT_NEAR(r.A(0, 1), nu * A11, 1e-12 * A11);
    EXPECT_NEAR(r.D(0, 0), D11, 1e-12 * D11);
    EXPECT_NEAR(r.B.norm(), 0.0, 1e-15 * A11);
    const double G = E / (2.0 * (1.0 + nu));
    EXPECT_NEAR(r.As(0, 0), (5.0 / 6.0) * G * t, 1e-12 * G * t);
    EXPECT_NEAR(r.As(0, 1), 0.0, 1e-15 * G * t);
}

TEST(LaminateRigidity, SymmetricCrossplyHasZeroB) {
    std::vector<Lamina> plies = {composite_345(0.0), composite_345(M_PI / 2.0),
                                 composite_345(0.0)};
    const LaminateStack stack = LaminateStack::from_plies(plies);
    const PlateRigidity r = laminate_rigidity(stack);
    EXPECT_LT(r.B.cwiseAbs().maxCoeff(), 1e-12 * r.A.norm() * stack.thickness());
}

TEST(LaminateRigidity, AntisymmetricAngleplyMatchesMidpointIntegration) {
    const double angles[4] = {M_PI / 4, -M_PI / 4, M_PI / 4, -M_PI / 4};
    std::vector<Lamina> plies;
    for (double a : angles) plies.push_back(composite_345(a));
    const LaminateStack stack = LaminateStack::from_plies(plies);
    const PlateRigidity r = laminate_rigidity(stack);

    // midpoint-rule z integration oracle
    Eigen::Matrix3d A = Eigen::Matrix3d::Zero(), B = Eigen::Matrix3d::Zero(),
                    D = Eigen::Matrix3d::Zero();
    const int slices = 10000;
    const double h = stack.thickness();
    for (int i = 0; i < slices; ++i) {
        const double z = -h / 2 + (i + 0.5) * h / slices;
        int ply = 0;
        while (z > stack.z_interfaces[ply + 1]) ++ply;
        const Eigen::Matrix3d Q = transformed_stiffness(stack.plies[ply]).in_plane();
        A += Q * (h / slices);
        B += Q * z * (h / slices);
        D += Q * z * z * (h / slices);
    }
    EXPECT_LT((r.A - A).cwiseAbs().maxCoeff(), 1e-8 * A.norm());
    EXPECT_LT((r.B - B).cwiseAbs().maxCoeff(), 1e-8 * A.norm() * h);
    EXPECT_LT((r.D - D).cwiseAbs().maxCoeff(), 1e-7 * D.norm());
}

TEST(LaminateRigidity, PositiveDefiniteAandD) {
    std::vector<Lamina> plies = {composite_345(0.3), composite_345(-1.1), composite_345(0.7)};
    const PlateRigidity r = laminate_rigidity(LaminateStack::from_plies(plies));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> esA(r.A), esD(r.D);
    EXPECT_GT(esA.eigenvalues().minCoeff(), 0.0);
    EXPECT_GT(esD.eigenvalues().minCoeff(), 0.0);
}

TEST(LaminateRigidity, ExactSymmetry) {
    std::vector<Lamina> plies = {composite_345(0.3), composite_345(-0.9)};
    const PlateRigidity r = laminate_rigidity(LaminateStack::from_plies(plies));
    const Matrix8d Dp = r.Dp();
    EXPECT_EQ((Dp - Dp.transpose()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(LaminateRigidity, PlySplittingAdditivity) {
    std::vector<Lamina> plies = {composite_345(0.5), composite_345(-0.5)};
    const PlateRigidity r1 = laminate_rigidity(LaminateStack::from_plies(plies));
    Lamina half = composite_345(0.5);
    half.thickness *= 0.5;
    Lamina half2 = half;
    std::vector<Lamina> split = {half, half2, composite_345(-0.5)};
    const PlateRigidity r2 = laminate_rigidity(LaminateStack::from_plies(split));
    EXPECT_LT((r1.A - r2.A).norm(), 1e-12 * r1.A.norm());
    EXPECT_LT((r1.B - r2.B).norm(), 1e-12 * r1.A.norm() * 0.04);
    EXPECT_LT((r1.D - r2.D).norm(), 1e-12 * r1.D.norm());
}

TEST(StiffenerRigidity, ZeroEccentricityIsBlockDiagonal) {
    const StiffenerRigidity r = stiffener_rigidity(demo_section(0.01, 0.02, 0.0));
    EXPECT_EQ(r.D_s(0, 3), 0.0);
    EXPECT_EQ(r.D_s(1, 4), 0.0);
    EXPECT_EQ(r.m_s(0, 3), 0.0);
    EXPECT_EQ(r.m_s(1, 4), 0.0);
}

TEST(StiffenerRigidity, MassLinearInDensity) {
    StiffenerSection s = demo_section(0.01, 0.02, 0.015);
    const StiffenerRigidity r1 = stiffener_rigidity(s);
    s.rho *= 2.0;
    const StiffenerRigidity r2 = stiffener_rigidity(s);
    EXPECT_EQ((r2.m_s - 2.0 * r1.m_s).cwiseAbs().maxCoeff(), 0.0);
}

TEST(StiffenerRigidity, TorsionConstantMatchesSeriesOracle) {
    const StiffenerSection s = demo_section(1.0, 2.0, 0.0);
    // independent evaluation of the one-term-corrected series, short side h
    const double b = 2.0, h = 1.0;
    const double oracle = b * h * h * h * (1.0 / 3.0 - 0.21 * (h / b) * (1.0 - std::pow(h, 4) / (12.0 * std::pow(b, 4))));
    EXPECT_NEAR(s.J_t(), oracle, 1e-12 * oracle);
    EXPECT_LE(s.J_t(), s.I_n() + s.I_b());
}

TEST(StiffenerRigidity, PositiveSemidefiniteWithLargeEccentricity) {
    // tall blade: the transported torsion entry keeps D_s PSD
    const StiffenerSection s = demo_section(0.0077, 0.13, 0.07);
    const StiffenerRigidity r = stiffener_rigidity(s);
    Eigen::SelfAdjointEigenSolver<Matrix5d> esD(r.D_s), esM(r.m_s);
    EXPECT_GT(esD.eigenvalues().minCoeff(), -1e-12 * esD.eigenvalues().maxCoeff());
    EXPECT_GT(esM.eigenvalues().minCoeff(), -1e-12 * esM.eigenvalues().maxCoeff());
}

TEST(SectionFromRatios, AreaIdentityByConstruction) {
    const StiffenerSection s = section_from_ratios(5.0, 0.1, 1.0, 0.01, 1.2575e-6 * 10e9, 10e9,
                                                   10e9 / 2.6, 8000.0);
    EXPECT_NEAR(s.b_s * s.h_s, 0.1 * 1.0 * 0.01, 1e-15);
}

TEST(SectionFromRatios, RoundTripReproducesRatios) {
    // E_L/E_T = 15 ratios; D11 = E1 h^3 / 12 (1 - nu12 nu21)
    const double E_T = 10e9, E_1 = 15.0 * E_T, nu12 = 0.3;
    const double nu21 = nu12 / 15.0;
    const double t_p = 0.01, b = 1.0;
    const double D11 = E_1 * t_p * t_p * t_p / (12.0 * (1.0 - nu12 * nu21));
    const StiffenerSection s =
        section_from_ratios(5.0, 0.1, b, t_p, D11, E_T, E_T / 2.6, 8000.0);
    EXPECT_NEAR(s.area() / (b * t_p), 0.1, 1e-12);
    EXPECT_NEAR(s.E * s.I_n() / (b * D11), 5.0, 1e-10);
    EXPECT_NEAR(s.e, 0.5 * (t_p + s.h_s), 0.0);
}

TEST(SectionFromRatios, GammaLinearity) {
    const double D11 = 2.5e6, E_s = 70e9;
    const StiffenerSection s5 = section_from_ratios(5.0, 0.1, 1.0, 0.01, D11, E_s, 30e9, 1.0);
    const StiffenerSection s10 = section_from_ratios(10.0, 0.1, 1.0, 0.01, D11, E_s, 30e9, 1.0);
    EXPECT_NEAR(s10.I_n() / s5.I_n(), 2.0, 1e-10);
}

TEST(SectionFromRatios, InfeasibleRatiosRejected) {
    // gamma so small that even a vanishing blade overshoots the target inertia
    EXPECT_THROW(section_from_ratios(1e-12, 0.1, 1.0, 0.01, 1.0, 70e9, 30e9, 1.0), InputError);
}
