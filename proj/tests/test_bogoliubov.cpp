#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "lhy/bogoliubov.hpp"
#include "lhy/energy.hpp"
#include "lhy/verify.hpp"

namespace {

using namespace lhy;
constexpr double kPi = std::numbers::pi;

GasParameters sweep_point(std::int64_t N) { return {1.0, N, std::pow(static_cast<double>(N), -0.8), 0.25}; }

TEST(ShellCoefficients, DefinitionsAgainstLongDouble) {
    const MomentumShell sh{3, 8, 2.0 * kPi * std::sqrt(3.0)};
    for (double eta : {-0.3, -1e-4, 0.0, 0.2}) {
        for (double d : {-0.5, 0.0, 0.7}) {
            const double vg = 25.0;
            const auto c = make_shell_coefficients(sh, eta, d, vg);
            const long double p2 = static_cast<long double>(sh.norm) * sh.norm;
            const long double s = std::sinh(static_cast<long double>(eta));
            const long double g = std::cosh(static_cast<long double>(eta));
            const long double F = p2 * (s * s + g * g) + vg * (s + g) * (s + g);
            const long double G = 2.0L * p2 * s * g + vg * (s + g) * (s + g) + 2.0L * d;
            EXPECT_NEAR(c.f_coef, static_cast<double>(F), 1e-13 * static_cast<double>(F));
            EXPECT_NEAR(c.g_coef, static_cast<double>(G), 1e-13 * static_cast<double>(F));
            EXPECT_NEAR(c.f_minus_g, static_cast<double>(F - G), 1e-12 * static_cast<double>(F));
            EXPECT_NEAR(c.f_plus_g, static_cast<double>(F + G), 1e-12 * static_cast<double>(F));
            EXPECT_NEAR(c.dispersion, static_cast<double>(std::sqrt(F * F - G * G)), 1e-12 * static_cast<double>(F));
            EXPECT_NEAR(c.gamma * c.gamma - c.sigma * c.sigma, 1.0, 1e-15);
            EXPECT_NEAR(std::tanh(2.0 * c.tau), -c.g_coef / c.f_coef, 1e-14);
            const long double summand = (-F + std::sqrt(F * F - G * G)) / 2.0L;
            EXPECT_NEAR(vacuum_summand(c), static_cast<double>(summand), 1e-12 * std::fabs(static_cast<double>(summand)) + 1e-14);
        }
    }
}

TEST(ShellCoefficients, FreeGas) {
    const MomentumShell sh{5, 24, 2.0 * kPi * std::sqrt(5.0)};
    const auto c = make_shell_coefficients(sh, 0.0, 0.0, 0.0);
    EXPECT_EQ(c.g_coef, 0.0);
    EXPECT_EQ(c.tau, 0.0);
    EXPECT_DOUBLE_EQ(c.dispersion, sh.norm * sh.norm);
    EXPECT_EQ(vacuum_summand(c), 0.0);
}

TEST(ShellCoefficients, GFromScatteringEquation) {
    // With W = p^2 eta + D + Vg / 2 both forms of G coincide.
    for (double eta : {-1e-3, -1e-6, 0.05}) {
        const double p = 300.0, vg = 3.0, d = 1e-4;
        const double w = p * p * eta + d + 0.5 * vg;
        const auto c = make_shell_coefficients({1, 1, p}, eta, d, vg);
        EXPECT_NEAR(g_coefficient_from_scattering(p, eta, vg, w), c.g_coef, 1e-9 * c.f_coef);
    }
}

TEST(QuadraticCoefficients, GapFailureIsReported) {
    const auto pr = build_profiles(sweep_point(1000));
    auto t = build_tables(pr, {50, 1e-10, 1, kDefaultSwitchShell});
    EXPECT_NO_THROW(build_coefficients(t, 50));
    EXPECT_THROW(build_coefficients(t, 51), InvalidParameter);
    t.d.values[3] = 1e4;
    EXPECT_THROW(build_coefficients(t, 50), ModelRegimeError);
}

class SweepCoefficients : public ::testing::TestWithParam<std::int64_t> {};

TEST_P(SweepCoefficients, GapAndIdentities) {
    const auto gp = sweep_point(GetParam());
    const auto in = prepare_energy_inputs(gp, EnergyOptions{});
    const auto cb = measure::coefficient_bounds(in.coeffs, gp.scattering_length);
    EXPECT_GE(cb.gap_margin, 0.0);
    EXPECT_LT(cb.g_over_f, 1.0);
    EXPECT_LE(cb.g_decay_ratio, calibrated::g_decay);
    EXPECT_LE(cb.tau_decay_ratio, calibrated::tau_decay);
    EXPECT_LE(cb.f_growth_ratio, calibrated::f_growth);
    EXPECT_LE(cb.e_n_ratio, calibrated::e_n_decay);
    EXPECT_LT(cb.tanh_identity, 1e-12);
    EXPECT_LT(cb.diagonal_identity, 1e-10);
    EXPECT_LT(cb.off_diagonal_identity, 1e-10);
    EXPECT_LT(cb.hyperbolic_identity, 1e-12);
    EXPECT_LT(cb.dispersion_identity, 1e-10);
}

INSTANTIATE_TEST_SUITE_P(Sweep, SweepCoefficients, ::testing::Values(250, 500, 1000, 2000, 4000));

TEST(Vacuum, ShellSumAndTailEstimate) {
    const auto gp = sweep_point(1000);
    const auto in = prepare_energy_inputs(gp, {2000});
    const auto v = vacuum_quadratic_shift(in.coeffs, 2000);
    EXPECT_LT(v.value, 0.0);
    EXPECT_GT(v.tail_estimate, 0.0);
    EXPECT_THROW(vacuum_quadratic_shift(in.coeffs, 2000, 1e-30), ConvergenceError);
    // Summands are negative shell by shell.
    for (const auto& c : in.coeffs) EXPECT_LE(vacuum_summand(c), 0.0);
}

TEST(Vacuum, ContinuumTailMakesCutoffIrrelevant) {
    const auto gp = sweep_point(1000);
    EnergyOptions o;
    o.n_max = 2500;
    const auto in1 = prepare_energy_inputs(gp, o);
    o.n_max = 5000;
    const auto in2 = prepare_energy_inputs(gp, o);
    const CoefficientModel model(in1.profiles, 1e-10);
    const auto v1 = vacuum_shift_with_tail(gp, in1.coeffs, model, 2500, 1e-10);
    const auto v2 = vacuum_shift_with_tail(gp, in2.coeffs, model, 5000, 1e-10);
    EXPECT_NEAR(v1.value, v2.value, 1e-6 * std::fabs(v2.value));
    EXPECT_LT(std::fabs(v2.discretization_check), 1e-3 * std::fabs(v2.value));
}

TEST(Spectrum, ApproachesReferenceAlongSweep) {
    double prev = INFINITY;
    for (std::int64_t N : {250, 1000, 4000}) {
        const auto gp = sweep_point(N);
        const auto in = prepare_energy_inputs(gp, {1000});
        double dev = 0.0;
        for (const auto& c : in.coeffs) {
            const double ref = spectrum_reference(c.p, 1.0);
            dev = std::max(dev, std::fabs(c.dispersion - ref) / ref);
        }
        EXPECT_LT(dev, prev);
        prev = dev;
    }
}

}  // namespace
