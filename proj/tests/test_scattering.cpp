#include <cmath>
#include <numbers>
#include <random>

#include <boost/math/quadrature/gauss.hpp>
#include <gtest/gtest.h>

#include "lhy/scattering.hpp"
#include "lhy/verify.hpp"

namespace {

using namespace lhy;
constexpr double kPi = std::numbers::pi;

TEST(Validation, RejectsBrokenChain) {
    EXPECT_THROW(validate({1.0, 1000, 0.3, 0.25}), InvalidParameter);
    EXPECT_THROW(validate({1.0, 1000, 0.1, 0.6}), InvalidParameter);
    EXPECT_THROW(validate({-1.0, 1000, 0.01, 0.25}), InvalidParameter);
    EXPECT_THROW(validate({1.0, 1, 0.5, 0.5}), InvalidParameter);
    EXPECT_THROW(validate({1.0, 1000, 0.0005, 0.25}), InvalidParameter);
    EXPECT_THROW(validate({NAN, 1000, 0.01, 0.25}), InvalidParameter);
    try {
        validate({1.0, 1000, 0.6, 0.25});
        FAIL();
    } catch (const InvalidParameter& e) {
        EXPECT_NE(std::string(e.what()).find("ell0"), std::string::npos);
    }
}

TEST(Validation, WarnsOutsideAsymptoticWindow) {
    EXPECT_TRUE(validate({1.0, 1000, std::pow(1000.0, -0.8), 0.25}).empty());
    EXPECT_EQ(validate({1.0, 1000, 0.1, 0.25}).size(), 1u);
}

TEST(Neumann, DefiningEquationAndExpansion) {
    for (double a : {0.5, 1.0, 2.0}) {
        for (std::int64_t N : {1000, 10000}) {
            for (double ell : {0.1, 0.01}) {
                const GasParameters gp{a, N, ell, 0.25};
                const auto s = solve_neumann(gp, ell);
                EXPECT_LT(s.residual, 1e-13);
                const double k = s.wavenumber;
                EXPECT_NEAR(std::tan(k * (ell - s.hc_radius)), k * ell, 1e-11 * k * ell);
                const double x = a / (static_cast<double>(N) * ell);
                const double expansion = 3.0 * x / (ell * ell) * (1.0 + 1.8 * x);
                EXPECT_LT(std::fabs(s.eigenvalue / expansion - 1.0), 25.0 * x * x);
            }
        }
    }
}

TEST(Neumann, ZeroScatteringLength) {
    const auto s = solve_neumann({0.0, 1000, 0.01, 0.25}, 0.01);
    EXPECT_EQ(s.eigenvalue, 0.0);
    EXPECT_EQ(eval_f(s, 0.005), 1.0);
    EXPECT_EQ(omega_hat_closed(s, 10.0), 0.0);
}

TEST(Neumann, ProfileSolvesRadialEquation) {
    const GasParameters gp{1.0, 1000, 0.01, 0.25};
    const auto s = solve_neumann(gp, gp.short_scale);
    EXPECT_NEAR(eval_f(s, s.hc_radius), 0.0, 1e-14);
    EXPECT_NEAR(eval_f(s, s.ball_radius), 1.0, 1e-14);
    EXPECT_NEAR(eval_df(s, s.ball_radius), 0.0, 1e-10);
    // -f'' - (2/r) f' = lambda f at interior points, by central differences.
    for (double t : {0.1, 0.3, 0.6, 0.9}) {
        const double r = s.hc_radius + t * (s.ball_radius - s.hc_radius);
        const double h = 1e-4 * s.ball_radius;
        const double d2 = (eval_f(s, r + h) - 2.0 * eval_f(s, r) + eval_f(s, r - h)) / (h * h);
        const double d1 = (eval_f(s, r + h) - eval_f(s, r - h)) / (2.0 * h);
        EXPECT_NEAR(-d2 - 2.0 * d1 / r, s.eigenvalue * eval_f(s, r), 1e-4 * s.eigenvalue);
        EXPECT_NEAR(eval_omega(s, r), 1.0 - eval_f(s, r), 1e-15);
        EXPECT_NEAR(eval_df(s, r), d1, 1e-6 * std::fabs(d1) + 1e-9);
    }
    EXPECT_EQ(eval_f(s, 0.5 * s.hc_radius), 0.0);
    EXPECT_EQ(eval_f(s, 2.0 * s.ball_radius), 1.0);
}

TEST(Neumann, ProfileIsMonotone) {
    const auto pb = measure::profile_bounds(build_profiles({2.0, 250, std::pow(250.0, -0.8), 0.25}));
    EXPECT_EQ(pb.f_monotone_violation, 0.0);
}

TEST(Special, SeriesBranchesMatchDirectForms) {
    for (double x : {0.05, 0.099, 0.101, 0.19, 0.21, 0.5}) {
        const long double X = x;
        EXPECT_NEAR(special::sinc(x), static_cast<double>(std::sin(X) / X), 1e-15);
        EXPECT_NEAR(special::one_minus_sinc(x), static_cast<double>(1.0L - std::sin(X) / X), 1e-16);
        EXPECT_NEAR(special::tan_excess(x), static_cast<double>((std::tan(X) - X) / X), 1e-15);
        EXPECT_NEAR(special::cot_defect(x), static_cast<double>((X / std::tan(X) - 1.0L) / (X * X)), 1e-13);
        const double h = 1e-5;
        EXPECT_NEAR(special::tan_excess_derivative(x),
                    (special::tan_excess(x + h) - special::tan_excess(x - h)) / (2.0 * h), 1e-8);
    }
}

TEST(RadialFourier, GaussianOracle) {
    RadialProfile g{{0.0, 8.0}, [](double r) { return std::exp(-r * r); }, ProfileLabel::product};
    for (double p : {0.0, 1.0, 3.0, 7.0}) {
        const double exact = std::pow(kPi, 1.5) * std::exp(-p * p / 4.0);
        EXPECT_NEAR(radial_fourier(g, p, 1e-13), exact, 1e-12);
    }
    EXPECT_THROW(radial_fourier(g, 1.0, 0.0), InvalidParameter);
}

TEST(RadialFourier, BallMomentClosedForms) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 40; ++i) {
        const double R = 0.01 + 0.49 * u(rng);
        const double p = 400.0 * u(rng);
        const auto h = chi_moment_hats(R, p);
        // Fixed 30-point Gauss rule on panels of a quarter wavelength.
        auto moment = [&](int m) {
            const int panels = 1 + static_cast<int>(2.0 * p * R / kPi);
            double sum = 0.0;
            for (int j = 0; j < panels; ++j) {
                sum += boost::math::quadrature::gauss<double, 30>::integrate(
                    [&](double r) { return 4.0 * kPi * std::pow(r, m + 1) * special::sinc(p * r); },
                    R * j / panels, R * (j + 1) / panels);
            }
            return sum;
        };
        const double scale = 4.0 * kPi * R * R * R / (1.0 + p * p * R * R);
        EXPECT_NEAR(h.chi, moment(1), 1e-12 * scale);
        EXPECT_NEAR(h.chi_r2, moment(3), 1e-12 * scale * R * R);
        EXPECT_NEAR(h.chi_rinv, moment(0), 1e-12 * scale / R);
    }
}

TEST(OmegaHat, ClosedFormMatchesQuadrature) {
    const GasParameters gp{1.0, 1000, std::pow(1000.0, -0.8), 0.25};
    const auto cf = measure::closed_form_agreement(gp, 3000, 1e-10);
    EXPECT_LT(cf.omega_max_rel, 1e-8);
    EXPECT_LT(cf.chi_max_rel, 1e-10);
}

TEST(OmegaHat, NearSingularMomentum) {
    const auto s = solve_neumann({1.0, 1000, 0.01, 0.25}, 0.01);
    const auto om = omega_profile(s);
    for (double d : {0.0, 1e-9, -1e-8, 3e-7}) {
        const double p = std::sqrt(s.eigenvalue * (1.0 + d));
        const double closed = omega_hat_closed(s, p);
        const double quad = radial_fourier(om, p, 1e-16);
        EXPECT_NEAR(closed, quad, 1e-7 * std::fabs(quad));
    }
}

TEST(IntegralIdentities, LeadingOrderAndKnownCorrection) {
    // The flux correction tends to 24 pi / 5 a^2 / (N ell) as N ell grows.
    const auto ii = measure::integral_identities({1.0, 10000, 0.1, 0.25});
    EXPECT_NEAR(ii.flux / (4.0 * kPi), 1.0, 2e-3);
    EXPECT_NEAR(ii.flux_ratio, 24.0 * kPi / 5.0, 0.02);
    EXPECT_LT(ii.omega_ratio, 5.0);
    for (double a : {0.5, 2.0}) {
        const auto jj = measure::integral_identities({a, 1000, 0.01, 0.25});
        EXPECT_LT(jj.omega_ratio, 5.0);
        EXPECT_GT(jj.flux_ratio, 5.0);
    }
}

TEST(Profiles, ProductBreakpoints) {
    const auto s = solve_neumann({1.0, 1000, 0.01, 0.25}, 0.01);
    const auto prod = multiply(f_profile(s), chi_profile(0.005));
    EXPECT_DOUBLE_EQ(prod.breaks.front(), s.hc_radius);
    EXPECT_DOUBLE_EQ(prod.breaks.back(), 0.005);
    EXPECT_NEAR(prod(0.004), eval_f(s, 0.004), 1e-16);
}

}  // namespace
