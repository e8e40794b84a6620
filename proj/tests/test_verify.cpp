#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "lhy/verify.hpp"

namespace {

using namespace lhy;

GasParameters sweep_point(std::int64_t N) { return {1.0, N, std::pow(static_cast<double>(N), -0.8), 0.25}; }

VerifyOptions light() {
    VerifyOptions o;
    o.n_max = 3000;
    o.n_conv = 2500;
    o.n_two_route = 20;
    return o;
}

TEST(Verify, DefaultPointPasses) {
    const auto rep = run_verification(sweep_point(250), light());
    for (const auto& r : rep.rows) {
        EXPECT_EQ(r.status, CheckStatus::pass) << r.name << " measured " << r.measured << " > " << r.threshold;
    }
    EXPECT_TRUE(rep.passed());
}

TEST(Verify, RowNamesAreUnique) {
    const auto rep = run_verification(sweep_point(250), light());
    std::set<std::string> names;
    for (const auto& r : rep.rows) EXPECT_TRUE(names.insert(r.name).second) << r.name;
    EXPECT_GE(rep.rows.size(), 30u);
}

TEST(Verify, PerturbedEtaIsDetected) {
    auto o = light();
    o.perturb_eta = 0.1;
    const auto rep = run_verification(sweep_point(250), o);
    EXPECT_FALSE(rep.passed());
    bool residual_failed = false;
    for (const auto& r : rep.rows) {
        if (r.name == "scattering_residual") residual_failed = r.status == CheckStatus::fail;
    }
    EXPECT_TRUE(residual_failed);
}

TEST(Verify, NonFiniteMeasurementFails) {
    std::vector<CheckRow> rows;
    detail::add_check(rows, "x", NAN, 1.0);
    detail::add_check(rows, "y", 1.0, 1.0);
    EXPECT_EQ(rows[0].status, CheckStatus::fail);
    EXPECT_EQ(rows[1].status, CheckStatus::pass);
}

}  // namespace
