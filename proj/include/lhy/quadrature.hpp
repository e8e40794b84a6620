#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "errors.hpp"
#include "summation.hpp"

namespace lhy {

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;     // sum of accepted local error estimates
    double abs_value = 0.0; // integral of |f|, used for relative floors
    int panels = 0;
};

namespace detail {

struct PanelEstimate {
    double value;
    double error;
    double abs_value;
};

// One Gauss-Kronrod 21-point panel built from Boost's node tables; the embedded
// 10-point Gauss rule supplies the error estimate.
template <class F>
PanelEstimate gauss_panel(F& f, double lo, double hi) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using gauss = boost::math::quadrature::gauss<double, 10>;
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    // Kronrod nodes: x[0] is the centre, odd indices are the Gauss nodes.
    const double fc = f(mid);
    double k = wk[0] * fc;
    double g = 0.0;
    double l1 = wk[0] * std::fabs(fc);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(mid + half * x[i]);
        const double fm = f(mid - half * x[i]);
        k += wk[i] * (fp + fm);
        l1 += wk[i] * (std::fabs(fp) + std::fabs(fm));
        if (i % 2 == 1) g += wg[i / 2] * (fp + fm);
    }
    return {half * k, half * std::fabs(k - g), half * l1};
}

}  // namespace detail

struct QuadratureOptions {
    double tol = 1e-10;          // absolute target for the whole integral
    double max_panel_width = 0;  // 0 means unrestricted
    int max_depth = 48;
};

// Adaptive panel integration over consecutive intervals [breaks[i], breaks[i+1]].
// A panel is accepted once its error estimate is below its share of tol (or at the
// rounding floor of its |f| mass); otherwise it is bisected. Panels are processed
// left to right, so the result is deterministic.
template <class F>
QuadratureResult integrate_panels(F&& f, std::span<const double> breaks, const QuadratureOptions& opt) {
    QuadratureResult out;
    if (breaks.size() < 2) return out;
    const double total = breaks.back() - breaks.front();
    if (!(total > 0.0)) return out;
    constexpr double floor_factor = 64.0 * std::numeric_limits<double>::epsilon();

    struct Pending {
        double lo, hi;
        detail::PanelEstimate whole;
        int depth;
    };
    CompensatedSum value;
    CompensatedSum abs_value;
    CompensatedSum error;
    std::vector<Pending> stack;

    for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
        const double lo = breaks[k];
        const double hi = breaks[k + 1];
        if (!(hi > lo)) continue;
        int pieces = 1;
        if (opt.max_panel_width > 0.0) {
            pieces = static_cast<int>(std::ceil((hi - lo) / opt.max_panel_width));
            if (pieces < 1) pieces = 1;
        }
        // Panels are pushed in reverse so the stack pops them left to right.
        for (int j = pieces - 1; j >= 0; --j) {
            const double a = lo + (hi - lo) * j / pieces;
            const double b = (j + 1 == pieces) ? hi : lo + (hi - lo) * (j + 1) / pieces;
            stack.push_back({a, b, detail::gauss_panel(f, a, b), 0});
        }
        while (!stack.empty()) {
            const Pending cur = stack.back();
            stack.pop_back();
            const auto& est = cur.whole;
            if (!std::isfinite(est.value)) {
                throw ConvergenceError("quadrature produced a non-finite value on [" +
                                       std::to_string(cur.lo) + ", " + std::to_string(cur.hi) + "]");
            }
            // The depth term bounds the cost of isolated kinks or jumps, where the
            // error shrinks only linearly in the panel width.
            const double local_tol = std::max({opt.tol * (cur.hi - cur.lo) / total,
                                               opt.tol * std::ldexp(1.0, -cur.depth - 8),
                                               floor_factor * est.abs_value});
            const double mid = 0.5 * (cur.lo + cur.hi);
            // Panels at the rounding width of their position cannot be refined further.
            const bool at_rounding_width =
                cur.hi - cur.lo <= 1024.0 * std::numeric_limits<double>::epsilon() * std::max(std::fabs(cur.lo), std::fabs(cur.hi));
            if (est.error <= local_tol || at_rounding_width) {
                value.add(est.value);
                abs_value.add(est.abs_value);
                error.add(est.error);
                ++out.panels;
                continue;
            }
            if (cur.depth >= opt.max_depth) {
                throw ConvergenceError("quadrature did not converge on [" + std::to_string(cur.lo) + ", " +
                                       std::to_string(cur.hi) + "]: local error " + std::to_string(est.error) + " (value " + std::to_string(est.value) + ", depth " + std::to_string(cur.depth) + ")" +
                                       " exceeds " + std::to_string(local_tol));
            }
            const auto left = detail::gauss_panel(f, cur.lo, mid);
            const auto right = detail::gauss_panel(f, mid, cur.hi);
            stack.push_back({mid, cur.hi, right, cur.depth + 1});
            stack.push_back({cur.lo, mid, left, cur.depth + 1});
        }
    }
    out.value = value.value();
    out.abs_value = abs_value.value();
    out.error = error.value();
    return out;
}

template <std::size_t K>
struct VectorQuadratureResult {
    std::array<double, K> value{};
    std::array<double, K> error{};  // summed |Kronrod - Gauss| over panels
};

// Non-adaptive composite Gauss-Kronrod rule for K integrands sharing their evaluations,
// on equal panels no wider than max_panel_width. Suited to smooth integrands whose
// oscillation length is known in advance.
template <std::size_t K, class F>
VectorQuadratureResult<K> integrate_fixed_panels(F&& f, double lo, double hi, double max_panel_width) {
    using kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
    using gauss = boost::math::quadrature::gauss<double, 10>;
    VectorQuadratureResult<K> out;
    if (!(hi > lo)) return out;
    if (!(max_panel_width > 0.0)) throw InvalidParameter("panel width must be positive");
    const auto panels = static_cast<std::int64_t>(std::ceil((hi - lo) / max_panel_width));
    const auto& x = kronrod::abscissa();
    const auto& wk = kronrod::weights();
    const auto& wg = gauss::weights();
    std::array<CompensatedSum, K> value;
    std::array<CompensatedSum, K> error;
    for (std::int64_t j = 0; j < panels; ++j) {
        const double a = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(panels);
        const double b = j + 1 == panels ? hi : lo + (hi - lo) * static_cast<double>(j + 1) / static_cast<double>(panels);
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        std::array<double, K> k{};
        std::array<double, K> g{};
        const auto fc = f(mid);
        for (std::size_t m = 0; m < K; ++m) k[m] = wk[0] * fc[m];
        for (std::size_t i = 1; i < x.size(); ++i) {
            const auto fp = f(mid + half * x[i]);
            const auto fm = f(mid - half * x[i]);
            for (std::size_t m = 0; m < K; ++m) {
                k[m] += wk[i] * (fp[m] + fm[m]);
                if (i % 2 == 1) g[m] += wg[i / 2] * (fp[m] + fm[m]);
            }
        }
        for (std::size_t m = 0; m < K; ++m) {
            value[m].add(half * k[m]);
            error[m].add(half * std::fabs(k[m] - g[m]));
        }
    }
    for (std::size_t m = 0; m < K; ++m) {
        out.value[m] = value[m].value();
        out.error[m] = error[m].value();
    }
    return out;
}

}  // namespace lhy
