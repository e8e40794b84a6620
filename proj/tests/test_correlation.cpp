#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <gtest/gtest.h>

#include "lhy/correlation.hpp"
#include "lhy/verify.hpp"

namespace {

using namespace lhy;
constexpr double kPi = std::numbers::pi;

GasParameters sweep_point(std::int64_t N) { return {1.0, N, std::pow(static_cast<double>(N), -0.8), 0.25}; }

// Radial transform by a fixed Gauss rule on equal panels, independent of the adaptive code.
template <class F>
double gauss_transform(F&& h, double lo, double hi, double p, int panels) {
    double sum = 0.0;
    for (int j = 0; j < panels; ++j) {
        const double a = lo + (hi - lo) * j / panels;
        const double b = lo + (hi - lo) * (j + 1) / panels;
        sum += boost::math::quadrature::gauss<double, 30>::integrate(
            [&](double r) { return 4.0 * kPi * r * r * h(r) * special::sinc(p * r); }, a, b);
    }
    return sum;
}

TEST(Profiles, ReferenceEdgeConditions) {
    const auto pr = build_profiles(sweep_point(1000));
    const double ell0 = pr.params.reference_scale;
    EXPECT_NEAR(pr.g(ell0), 1.0, 1e-14);
    EXPECT_NEAR(pr.eta_check(ell0 * (1.0 - 1e-9)), 0.0, 1e-6);
    EXPECT_NEAR(eval_df(pr.sol_ell0, ell0), 0.0, 1e-12);
    // eta_check = N (g - 1) on the whole support.
    for (double r : {0.001, 0.01, 0.1, 0.2}) {
        EXPECT_NEAR(pr.eta_check(r), pr.sol_ell.params.particle_count * (pr.g(r) - 1.0), 1e-9 * std::fabs(pr.eta_check(r)));
    }
}

TEST(Profiles, PointwiseBounds) {
    for (std::int64_t N : {250, 4000}) {
        const auto pb = measure::profile_bounds(build_profiles(sweep_point(N)));
        EXPECT_LE(pb.eta_ratio, calibrated::eta_check);
        EXPECT_LE(pb.slope_ratio, calibrated::eta_slope);
        EXPECT_LT(pb.g_edge, 1e-12);
    }
}

TEST(Coefficients, EtaAgainstIndependentQuadrature) {
    const auto pr = build_profiles(sweep_point(1000));
    const double b = pr.sol_ell.hc_radius;
    const double ell = pr.params.short_scale;
    const double ell0 = pr.params.reference_scale;
    for (double p : {0.0, 2.0 * kPi, 2.0 * kPi * std::sqrt(3.0), 2.0 * kPi * 10.0, 2.0 * kPi * 50.0}) {
        const auto h = [&](double r) { return pr.eta_check(r); };
        const double ref =
            gauss_transform(h, 0.0, b, p, 1) + gauss_transform(h, b, ell, p, 40) + gauss_transform(h, ell, ell0, p, 200);
        EXPECT_NEAR(eta_coefficient(pr, p, 1e-12), ref, 1e-9 * (1.0 + std::fabs(ref))) << "p = " << p;
    }
}

TEST(Coefficients, VgAtZeroAndDecay) {
    for (std::int64_t N : {250, 1000, 4000}) {
        const auto pr = build_profiles(sweep_point(N));
        const double vg0 = vg_coefficient(pr, 0.0, 1e-12);
        EXPECT_LE(std::fabs(vg0 - 8.0 * kPi) * static_cast<double>(N), calibrated::vg_zero);
    }
}

TEST(Coefficients, ZeroScatteringLength) {
    const auto pr = build_profiles({0.0, 1000, 0.01, 0.25});
    EXPECT_EQ(eta_coefficient(pr, 10.0, 1e-10), 0.0);
    EXPECT_EQ(d_coefficient_radial(pr, 10.0, 1e-10), 0.0);
    EXPECT_EQ(vg_coefficient(pr, 10.0, 1e-10), 0.0);
    const auto t = build_tables(pr, {200, 1e-10, 1, kDefaultSwitchShell});
    for (std::size_t i = 0; i < t.shells.size(); ++i) {
        EXPECT_EQ(t.eta[i], 0.0);
        EXPECT_EQ(scattering_residual(t, i), 0.0);
    }
    EXPECT_EQ(scattering_residual_zero(t), 0.0);
}

class TableFixture : public ::testing::Test {
protected:
    static void SetUpTestSuite() {
        profiles_ = new CorrelationProfiles(build_profiles(sweep_point(1000)));
        tables_ = new CorrelationTables(build_tables(*profiles_, {3600, 1e-10, 1, kDefaultSwitchShell}));
    }
    static void TearDownTestSuite() {
        delete tables_;
        delete profiles_;
    }
    static CorrelationProfiles* profiles_;
    static CorrelationTables* tables_;
};
CorrelationProfiles* TableFixture::profiles_ = nullptr;
CorrelationTables* TableFixture::tables_ = nullptr;

TEST_F(TableFixture, ScatteringResidualOnEveryShell) {
    const auto& t = *tables_;
    for (std::size_t i = 0; i < t.shells.size(); ++i) {
        const double p2 = t.shells[i].norm * t.shells[i].norm;
        EXPECT_LE(std::fabs(scattering_residual(t, i)), 10.0 * t.tol * (1.0 + p2 * std::fabs(t.eta[i])))
            << "shell " << t.shells[i].index;
    }
}

TEST_F(TableFixture, FluxIdentity) {
    EXPECT_LT(std::fabs(scattering_residual_zero(*tables_)), 1e-11);
    EXPECT_NEAR(tables_->g_hat0(), 1.0 + tables_->eta0 / tables_->n, 0.0);
}

TEST_F(TableFixture, TableBounds) {
    const auto tb = measure::table_bounds(*profiles_, *tables_);
    EXPECT_LE(tb.eta_decay_ratio, calibrated::eta_decay);
    EXPECT_LE(tb.eta0_ratio, calibrated::eta_zero);
    EXPECT_LE(tb.d_ratio, calibrated::d_decay);
    EXPECT_LE(tb.vg_decay_ratio, calibrated::vg_decay);
    EXPECT_LE(tb.v_hat0_ratio, calibrated::v_hat_zero);
}

TEST_F(TableFixture, DTwoRouteAgreement) {
    const auto tr = measure::d_two_route(*tables_, profiles_->params.short_scale, 20, 2500);
    EXPECT_GT(tr.shells, 5);
    EXPECT_LE(tr.worst_ratio, 1.0);
}

TEST_F(TableFixture, ConvolutionRejectsUncoveredCutoff) {
    EXPECT_THROW(d_coefficient_convolution(*tables_, {1, 0, 0}, 3600, profiles_->params.short_scale),
                 ConvergenceError);
    EXPECT_THROW(d_coefficient_convolution(*tables_, {0, 0, 0}, 100, profiles_->params.short_scale),
                 InvalidParameter);
}

TEST_F(TableFixture, ModelMatchesQuadratureRows) {
    const CoefficientModel model(*profiles_, 1e-10);
    const auto& t = *tables_;
    for (std::size_t i = 0; i < t.shells.size(); i += 97) {
        const double p = t.shells[i].norm;
        if (p < model.min_momentum()) continue;
        const auto c = model(p);
        EXPECT_NEAR(c.eta, t.eta[i], 1e-9 * (1.0 + std::fabs(t.eta[i])));
        EXPECT_NEAR(c.w, t.w[i], 1e-9);
        EXPECT_NEAR(c.vg, t.vg[i], 1e-9);
        EXPECT_NEAR(c.d, t.d[i], 1e-9);
    }
    EXPECT_THROW(static_cast<void>(model.eta(0.5 * model.min_momentum())), ConvergenceError);
}

TEST_F(TableFixture, ParallelBuildIsBitwiseIdentical) {
    const auto t3 = build_tables(*profiles_, {3600, 1e-10, 3, kDefaultSwitchShell});
    EXPECT_EQ(t3.eta.values, tables_->eta.values);
    EXPECT_EQ(t3.d.values, tables_->d.values);
    EXPECT_EQ(t3.w.values, tables_->w.values);
}

TEST_F(TableFixture, InterpolatedRowsWithinSpotCheck) {
    const auto ti = build_tables(*profiles_, {3600, 1e-10, 1, 900});
    ASSERT_EQ(ti.shells.size(), tables_->shells.size());
    double dev_vg = 0.0;
    for (std::size_t i = 0; i < ti.shells.size(); ++i) {
        if (ti.shells[i].index <= 900) {
            EXPECT_EQ(ti.provenance(i), Provenance::quadrature);
            EXPECT_EQ(ti.eta[i], tables_->eta[i]);
        } else {
            EXPECT_EQ(ti.provenance(i), Provenance::interpolated);
            dev_vg = std::max(dev_vg, std::fabs(ti.vg[i] - tables_->vg[i]));
        }
    }
    EXPECT_LE(dev_vg, 10.0 * ti.vg.interpolation_error + 1e-12);
    EXPECT_LT(ti.vg.interpolation_error, 1e-6 * std::fabs(ti.vg0));
}

}  // namespace
