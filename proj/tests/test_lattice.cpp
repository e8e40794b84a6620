#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "lhy/energy.hpp"
#include "lhy/lattice.hpp"
#include "lhy/lattice_sums.hpp"

namespace {

using namespace lhy;
constexpr double kPi = std::numbers::pi;

// Epstein zeta of Z^3 at s = 2 and s = 3, from the theta-function Mellin integral
// evaluated at 30 digits.
constexpr double kZeta4 = 16.532315959761669644;
constexpr double kZeta6 = 8.4019239748275400024;

std::vector<std::int64_t> brute_r3(std::int64_t n_max) {
    std::vector<std::int64_t> r(static_cast<std::size_t>(n_max) + 1, 0);
    const auto m = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n_max)));
    for (std::int64_t x = -m; x <= m; ++x)
        for (std::int64_t y = -m; y <= m; ++y)
            for (std::int64_t z = -m; z <= m; ++z) {
                const auto n = x * x + y * y + z * z;
                if (n <= n_max) ++r[static_cast<std::size_t>(n)];
            }
    return r;
}

TEST(ThreeSquares, CountsMatchBruteForce) {
    const auto fast = three_square_counts(2000);
    const auto slow = brute_r3(2000);
    ASSERT_EQ(fast.size(), slow.size());
    for (std::size_t n = 0; n < fast.size(); ++n) EXPECT_EQ(fast[n], slow[n]) << "n = " << n;
}

TEST(ThreeSquares, SmallValues) {
    const auto r = three_square_counts(9);
    const std::vector<std::int64_t> expected{1, 6, 12, 8, 6, 24, 24, 0, 12, 30};
    EXPECT_EQ(r, expected);
}

TEST(ThreeSquares, LegendreCriterionAgreesWithCounts) {
    const auto r = three_square_counts(5000);
    for (std::int64_t n = 0; n <= 5000; ++n) {
        EXPECT_EQ(is_sum_of_three_squares(n), r[static_cast<std::size_t>(n)] > 0) << "n = " << n;
    }
    EXPECT_FALSE(is_sum_of_three_squares(-1));
    EXPECT_FALSE(is_sum_of_three_squares(28));
    EXPECT_FALSE(is_sum_of_three_squares(4 * 4 * 15));
}

TEST(ThreeSquares, BudgetIsEnforced) {
    EXPECT_THROW(three_square_counts(101, 100), ResourceError);
    EXPECT_THROW(three_square_counts(-1), InvalidParameter);
}

TEST(Shells, OrderedNormsAndPointCount) {
    const auto shells = enumerate_shells(400);
    std::int64_t points = 0;
    for (std::size_t i = 0; i < shells.size(); ++i) {
        EXPECT_DOUBLE_EQ(shells[i].norm, 2.0 * kPi * std::sqrt(static_cast<double>(shells[i].index)));
        if (i > 0) {
            EXPECT_GT(shells[i].index, shells[i - 1].index);
        }
        EXPECT_GT(shells[i].multiplicity, 0);
        points += shells[i].multiplicity;
    }
    // Lattice points with 0 < |v|^2 <= 400, counted directly.
    std::int64_t direct = 0;
    for (int x = -20; x <= 20; ++x)
        for (int y = -20; y <= 20; ++y)
            for (int z = -20; z <= 20; ++z) {
                const int n = x * x + y * y + z * z;
                if (n > 0 && n <= 400) ++direct;
            }
    EXPECT_EQ(points, direct);
}

TEST(Shells, IntegerScale) {
    const auto shells = enumerate_shells(10, LatticeScale::integer);
    EXPECT_DOUBLE_EQ(shells.front().norm, 1.0);
    EXPECT_DOUBLE_EQ(shells.back().norm, std::sqrt(10.0));
}

TEST(CubeSums, VisitsEveryPointOnce) {
    std::int64_t count = 0;
    cube_iterate(CubeCutoff{3}, [&](std::int64_t, std::int64_t, std::int64_t) { ++count; });
    EXPECT_EQ(count, 7 * 7 * 7 - 1);
    EXPECT_THROW(cube_iterate(CubeCutoff{0}, [](std::int64_t, std::int64_t, std::int64_t) {}), InvalidParameter);
}

TEST(CubeSums, FirstPartialSumByHand) {
    const auto partial = cosine_cube_partial_sums(2, LatticeScale::integer);
    const double hand = 6.0 * std::cos(1.0) + 6.0 * std::cos(std::sqrt(2.0)) + 8.0 / 3.0 * std::cos(std::sqrt(3.0));
    EXPECT_NEAR(partial[1], hand, 1e-15);
}

TEST(CubeSums, PartialSumsMatchDirectLoop) {
    const auto partial = cube_partial_sums(6, [](std::int64_t n2) { return 1.0 / static_cast<double>(n2); });
    for (std::int64_t M = 1; M <= 6; ++M) {
        double s = 0.0;
        cube_iterate(CubeCutoff{M}, [&](std::int64_t x, std::int64_t y, std::int64_t z) {
            s += 1.0 / static_cast<double>(x * x + y * y + z * z);
        });
        EXPECT_NEAR(partial[static_cast<std::size_t>(M)], s, 1e-12 * s);
    }
}

// Shell sums plus the continuum tail reproduce the Epstein zeta values.
TEST(LatticeSums, EpsteinZetaWithContinuumTail) {
    const std::int64_t n_max = 200'000;
    const auto shells = enumerate_shells(n_max, LatticeScale::integer);
    const double s4 = shell_sum(shells, [](double p) { return std::pow(p, -4); });
    const double s6 = shell_sum(shells, [](double p) { return std::pow(p, -6); });
    // Radius of the shell boundary on Z^3 and the 4 pi p^2 density.
    const double P = std::sqrt(static_cast<double>(n_max) + 0.5);
    EXPECT_NEAR(s4 + 4.0 * kPi / P, kZeta4, 2e-6);
    EXPECT_NEAR(s6 + 4.0 * kPi / (3.0 * P * P * P), kZeta6, 1e-9);
}

TEST(LatticeSums, MomentumTailIntegralMatchesClosedForm) {
    // (1 / 2 pi^2) int_P^inf p^2 p^-4 dp = 1 / (2 pi^2 P)
    const double P = momentum_tail_start(1000);
    const double v = momentum_tail_integral([](double p) { return std::pow(p, -4); }, P, 1e6 * P, 0.0, 1e-16);
    EXPECT_NEAR(v, (1.0 - 1e-6) / (2.0 * kPi * kPi * P), 1e-12 / P);
}

TEST(LatticeSums, ContinuumTailEnvelope) {
    const auto t = continuum_tail([](double p) { return std::pow(p, -6); }, 10.0, 100.0, 0.0, 1e-15, 6);
    const double exact = (std::pow(10.0, -3) - std::pow(100.0, -3)) / (3.0 * 2.0 * kPi * kPi);
    EXPECT_NEAR(t.value, exact, 1e-14);
    EXPECT_NEAR(t.far_estimate, std::pow(100.0, -3) / (3.0 * 2.0 * kPi * kPi), 1e-12);
    EXPECT_THROW(continuum_tail([](double) { return 1.0; }, 1.0, 2.0, 0.0, 1e-10, 3), InvalidParameter);
}

// Asymptote-subtracted LHY sum against a brute-force shell sum to a much larger cutoff
// with an integral tail.
TEST(LhySum, MatchesLargeCutoffDirectSum) {
    const double a = 1.0;
    const double c = 8.0 * kPi * a;
    const auto r3 = three_square_counts(1'000'000);
    long double direct = 0.0L;
    for (std::size_t n = 1; n < r3.size(); ++n) {
        if (r3[n] == 0) continue;
        const long double p2 = 4.0L * kPi * kPi * static_cast<long double>(n);
        const long double bracket = p2 + c - std::sqrt(p2 * p2 + 2.0L * c * p2) - c * c / (2.0L * p2);
        direct += static_cast<long double>(r3[n]) * bracket;
    }
    // Beyond the cutoff the bracket is -c^3 / (2 p^4).
    const double P = momentum_tail_start(1'000'000);
    const double tail = -0.5 * c * c * c / (2.0 * kPi * kPi * P);
    const auto ours = lhy_sum(a, 10'000);
    EXPECT_NEAR(ours.value, static_cast<double>(direct) + tail, 2e-3 * std::fabs(ours.value));
    EXPECT_LT(ours.tail_estimate, 1e-6 * std::fabs(ours.value));
}

TEST(LhySum, StableUnderCutoffDoubling) {
    for (double a : {0.5, 1.0, 2.0}) {
        const auto l1 = lhy_sum(a, 10'000);
        const auto l2 = lhy_sum(a, 20'000);
        EXPECT_LT(std::fabs(l1.value - l2.value), 1e-8 * std::fabs(l2.value)) << "a = " << a;
    }
    EXPECT_EQ(lhy_sum(0.0, 100).value, 0.0);
}

TEST(LhyBracket, MatchesNaiveFormula) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> logp(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const double p = std::pow(10.0, logp(rng));
        const long double p2 = static_cast<long double>(p) * p;
        const long double c = 8.0L * kPi;
        const long double naive = p2 + c - std::sqrt(p2 * p2 + 2.0L * c * p2) - c * c / (2.0L * p2);
        const double ours = lhy_bracket(p, static_cast<double>(c));
        if (p < 30.0) {
            EXPECT_NEAR(ours, static_cast<double>(naive), 1e-12 * std::fabs(ours));
        }
        EXPECT_LT(ours, 0.0);
        // Leading large-p behaviour -c^3 / (2 p^4).
        if (p > 300.0) {
            EXPECT_NEAR(ours * p * p * p * p, -0.5 * std::pow(8.0 * kPi, 3), 0.05 * 7.8e3);
        }
    }
}

TEST(ConditionalSums, WindowAverages) {
    const auto s = cube_cosine_sum(60, LatticeScale::integer);
    const auto t = cube_cosine_sum(80, LatticeScale::integer);
    EXPECT_LT(std::fabs(s.estimate - t.estimate), 1e-3);
    EXPECT_LT(t.band, 1e-2);
    EXPECT_THROW(cube_cosine_sum(4, LatticeScale::integer), InvalidParameter);
    // The smooth window of a constant sequence is that constant.
    std::vector<double> flat(40, 2.5);
    EXPECT_NEAR(smooth_window_average(flat, 30), 2.5, 1e-15);
    EXPECT_NEAR(trailing_window_average(flat, 30, 10), 2.5, 1e-15);
}

}  // namespace
