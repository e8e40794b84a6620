#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

// fpclassify first: pchip in Boost 1.74 calls isnan unqualified.
#include <boost/math/special_functions/fpclassify.hpp>
#include <boost/math/interpolators/pchip.hpp>

#include "errors.hpp"
#include "lattice.hpp"
#include "parallel.hpp"
#include "scattering.hpp"
#include "summation.hpp"

namespace lhy {

struct CorrelationProfiles {
    GasParameters params;
    NeumannSolution sol_ell;
    NeumannSolution sol_ell0;
    RadialProfile g;          // f_ell0 / f_ell, continued as a constant into [0, b]
    RadialProfile eta_check;  // N (g - 1), support [0, ell0]
    RadialProfile eta_slope;  // d eta_check / dr
    RadialProfile v_ell;      // 2 N lambda chi_ell f^2
    RadialProfile d_check;    // div((1 - f^2) grad eta_check), support [b, ell]
    RadialProfile u;          // 1 - f^2
    RadialProfile v_g;        // V g
    RadialProfile v_eta;      // V eta_check
    RadialProfile w_source;   // N lambda0 chi_ell0 f^2 g
};

namespace detail {

struct CorrelationKernel {
    NeumannSolution s;   // ell
    NeumannSolution s0;  // ell0
    double n = 0.0;
    double g_at_core = 1.0;

    // g on (b, ell): (ell0/ell) (sin(k(ell-b))/sin(k0(ell0-b))) (k0/k) sinc(k0 d)/sinc(k d)
    double g(double r) const {
        const double b = s.hc_radius;
        if (s.wavenumber == 0.0) return 1.0;
        if (r <= b) return g_at_core;
        if (r < s.ball_radius) {
            const double d = r - b;
            return g_at_core * special::sinc(s0.wavenumber * d) / special::sinc(s.wavenumber * d);
        }
        if (r < s0.ball_radius) return eval_f(s0, r);
        return 1.0;
    }

    double eta(double r) const {
        if (s.wavenumber == 0.0 || r >= s0.ball_radius) return 0.0;
        if (r >= s.ball_radius) return -n * eval_omega(s0, r);
        return n * (g(r) - 1.0);
    }

    // (d g / d r) / g = d (k0^2 h(k0 d) - k^2 h(k d)) on (b, ell), with d = r - b
    double log_dg_inner(double r) const {
        const double d = r - s.hc_radius;
        const double k = s.wavenumber;
        const double k0 = s0.wavenumber;
        return d * (k0 * k0 * special::cot_defect(k0 * d) - k * k * special::cot_defect(k * d));
    }

    double eta_slope(double r) const {
        if (s.wavenumber == 0.0 || r <= s.hc_radius || r >= s0.ball_radius) return 0.0;
        if (r >= s.ball_radius) return n * eval_df(s0, r);
        return n * g(r) * log_dg_inner(r);
    }

    // N g [ (lambda - lambda0)(1 - f^2) - 2 (k0^2 h0 - k^2 h)(b/r + k^2 d^2 h) ] on (b, ell)
    double d_check(double r) const {
        if (s.wavenumber == 0.0 || r <= s.hc_radius || r >= s.ball_radius) return 0.0;
        const double b = s.hc_radius;
        const double d = r - b;
        const double k = s.wavenumber;
        const double k0 = s0.wavenumber;
        const double h = special::cot_defect(k * d);
        const double h0 = special::cot_defect(k0 * d);
        const double slope_factor = k0 * k0 * h0 - k * k * h;
        const double log_df_times_d = b / r + k * k * d * d * h;
        return n * g(r) *
               ((s.eigenvalue - s0.eigenvalue) * eval_u(s, r) - 2.0 * slope_factor * log_df_times_d);
    }

    double v(double r) const {
        if (r <= s.hc_radius || r >= s.ball_radius) return 0.0;
        const double f = eval_f(s, r);
        return 2.0 * n * s.eigenvalue * f * f;
    }

    double w(double r) const {
        if (r <= s.hc_radius || r >= s0.ball_radius) return 0.0;
        return n * s0.eigenvalue * eval_f(s, r) * eval_f(s0, r);
    }
};

}  // namespace detail

inline CorrelationProfiles build_profiles(const GasParameters& gp) {
    validate(gp);
    CorrelationProfiles out;
    out.params = gp;
    out.sol_ell = solve_neumann(gp, gp.short_scale);
    out.sol_ell0 = solve_neumann(gp, gp.reference_scale);

    detail::CorrelationKernel ker;
    ker.s = out.sol_ell;
    ker.s0 = out.sol_ell0;
    ker.n = static_cast<double>(gp.particle_count);
    if (ker.s.wavenumber > 0.0) {
        ker.g_at_core = (gp.reference_scale / gp.short_scale) * (ker.s.sin_span / ker.s0.sin_span) *
                        (ker.s0.wavenumber / ker.s.wavenumber);
    }

    const double b = gp.hard_core_radius();
    const double ell = gp.short_scale;
    const double ell0 = gp.reference_scale;
    std::vector<double> full{0.0, b, ell, ell0};
    std::vector<double> inner{b, ell};
    std::vector<double> outer{b, ell, ell0};
    if (b == 0.0) full = {0.0, ell, ell0};

    out.g = {full, [ker](double r) { return ker.g(r); }, ProfileLabel::g};
    out.eta_check = {full, [ker](double r) { return ker.eta(r); }, ProfileLabel::eta_check};
    out.eta_slope = {full, [ker](double r) { return ker.eta_slope(r); }, ProfileLabel::product};
    out.v_ell = {inner, [ker](double r) { return ker.v(r); }, ProfileLabel::v_ell};
    out.d_check = {inner, [ker](double r) { return ker.d_check(r); }, ProfileLabel::d_check};
    out.u = u_profile(out.sol_ell);
    out.v_g = {inner, [ker](double r) { return ker.v(r) * ker.g(r); }, ProfileLabel::v_times_g};
    out.v_eta = {inner, [ker](double r) { return ker.v(r) * ker.eta(r); }, ProfileLabel::v_times_eta};
    out.w_source = {outer, [ker](double r) { return ker.w(r); }, ProfileLabel::w_source};
    return out;
}

inline double eta_coefficient(const CorrelationProfiles& pr, double p_norm, double tol) {
    return radial_fourier(pr.eta_check, p_norm, tol);
}

inline double d_coefficient_radial(const CorrelationProfiles& pr, double p_norm, double tol) {
    return radial_fourier(pr.d_check, p_norm, tol);
}

inline double vg_coefficient(const CorrelationProfiles& pr, double p_norm, double tol) {
    return radial_fourier(pr.v_g, p_norm, tol);
}

enum class Provenance { closed_form, quadrature, interpolated };

inline const char* to_string(Provenance p) noexcept {
    switch (p) {
        case Provenance::closed_form: return "closed_form";
        case Provenance::quadrature: return "quadrature";
        case Provenance::interpolated: return "interpolated";
    }
    return "unknown";
}

// One real coefficient per shell, aligned with a shell list.
struct ShellTable {
    std::int64_t n_max = 0;
    std::vector<double> values;
    double max_error = 0.0;            // largest per-shell quadrature error estimate
    double interpolation_error = 0.0;  // largest spot-check deviation on interpolated shells

    double operator[](std::size_t i) const { return values[i]; }
};

struct CorrelationTables {
    std::int64_t n_max = 0;
    std::int64_t n_switch = 0;  // shells above this index are interpolated
    double tol = 0.0;
    std::vector<MomentumShell> shells;
    std::vector<std::int32_t> position;  // shell index n -> row, or -1

    ShellTable eta;
    ShellTable v_hat;
    ShellTable vg;
    ShellTable w;
    ShellTable u_hat;
    ShellTable d;
    ShellTable v_eta;

    double eta0 = 0.0;
    double v_hat0 = 0.0;
    double vg0 = 0.0;
    double w0 = 0.0;
    double u_hat0 = 0.0;
    double v_eta0 = 0.0;
    double n = 0.0;

    [[nodiscard]] double g_hat0() const { return 1.0 + eta0 / n; }
    [[nodiscard]] Provenance provenance(std::size_t i) const {
        return shells[i].index > n_switch ? Provenance::interpolated : Provenance::quadrature;
    }
    [[nodiscard]] std::int32_t row(std::int64_t index) const {
        if (index < 0 || index > n_max) return -1;
        return position[static_cast<std::size_t>(index)];
    }
};

// All seven coefficients at one momentum.
struct CoefficientSample {
    double eta = 0.0;
    double v_hat = 0.0;
    double vg = 0.0;
    double w = 0.0;
    double u_hat = 0.0;
    double d = 0.0;
    double v_eta = 0.0;
};

// Coefficients at continuous |p|. The pieces of eta_check and W on [ell, ell0] are
// transformed in closed form; the short-range pieces on [0, ell] by quadrature, so
// the cost does not grow with p * ell0.
class CoefficientModel {
public:
    CoefficientModel(const CorrelationProfiles& pr, double tol) : pr_(pr), tol_(tol) {
        const double b = pr.params.hard_core_radius();
        const double ell = pr.params.short_scale;
        std::vector<double> core{0.0, b, ell};
        if (b == 0.0) core = {0.0, ell};
        eta_short_ = {core, pr.eta_check.fn, ProfileLabel::eta_check};
        w_short_ = {{b, ell}, pr.w_source.fn, ProfileLabel::w_source};
        n_ = static_cast<double>(pr.params.particle_count);
    }

    // Below this momentum the closed forms lose accuracy near p = k0; callers use the
    // full radial transform there.
    [[nodiscard]] double min_momentum() const { return std::max(1.0, 4.0 * pr_.sol_ell0.wavenumber); }

    [[nodiscard]] CoefficientSample operator()(double p) const {
        CoefficientSample c;
        c.eta = eta(p);
        c.v_hat = v_hat(p);
        c.vg = vg(p);
        c.w = w(p);
        c.u_hat = u_hat(p);
        c.d = d(p);
        c.v_eta = v_eta(p);
        return c;
    }

    [[nodiscard]] double eta(double p) const {
        if (trivial(p)) return 0.0;
        return radial_fourier(eta_short_, p, tol_ / (1.0 + p * p)) - n_ * (ball_shell_r(p) - shell_f0(p));
    }
    [[nodiscard]] double w(double p) const {
        if (trivial(p)) return 0.0;
        return radial_fourier(w_short_, p, tol_) + n_ * pr_.sol_ell0.eigenvalue * shell_f0(p);
    }
    [[nodiscard]] double v_hat(double p) const { return trivial(p) ? 0.0 : radial_fourier(pr_.v_ell, p, tol_); }
    [[nodiscard]] double vg(double p) const { return trivial(p) ? 0.0 : radial_fourier(pr_.v_g, p, tol_); }
    [[nodiscard]] double u_hat(double p) const { return trivial(p) ? 0.0 : radial_fourier(pr_.u, p, tol_); }
    [[nodiscard]] double d(double p) const { return trivial(p) ? 0.0 : radial_fourier(pr_.d_check, p, tol_); }
    [[nodiscard]] double v_eta(double p) const { return trivial(p) ? 0.0 : radial_fourier(pr_.v_eta, p, tol_); }

    [[nodiscard]] const CorrelationProfiles& profiles() const { return pr_; }

private:
    [[nodiscard]] bool trivial(double p) const {
        if (pr_.sol_ell.wavenumber == 0.0) return true;
        if (!(p >= min_momentum())) {
            throw ConvergenceError("coefficient model needs |p| >= " + std::to_string(min_momentum()) +
                                   "; raise the shell cutoff n_max");
        }
        return false;
    }

    // (4 pi / p) int_ell^ell0 r sin(p r) dr
    [[nodiscard]] double ball_shell_r(double p) const {
        const double lo = pr_.params.short_scale;
        const double hi = pr_.params.reference_scale;
        auto prim = [p](double r) { return std::sin(p * r) / (p * p) - r * std::cos(p * r) / p; };
        return 4.0 * std::numbers::pi / p * (prim(hi) - prim(lo));
    }

    // (4 pi / p) int_ell^ell0 r f0(r) sin(p r) dr, with r f0 = ell0 sin(k0 (r - b)) / sin(k0 (ell0 - b)).
    [[nodiscard]] double shell_f0(double p) const {
        const auto& s0 = pr_.sol_ell0;
        const double k0 = s0.wavenumber;
        const double b = s0.hc_radius;
        auto prim = [p, k0, b](double r) {
            return 0.5 * (std::sin((p - k0) * r + k0 * b) / (p - k0) - std::sin((p + k0) * r - k0 * b) / (p + k0));
        };
        const double lo = pr_.params.short_scale;
        const double hi = pr_.params.reference_scale;
        return 4.0 * std::numbers::pi / p * s0.ball_radius / s0.sin_span * (prim(hi) - prim(lo));
    }

    CorrelationProfiles pr_;
    double tol_;
    double n_ = 0.0;
    RadialProfile eta_short_;
    RadialProfile w_short_;
};

inline constexpr std::int64_t kDefaultSwitchShell = 1'000'000;
inline constexpr int kInterpolationNodes = 2000;
inline constexpr int kInterpolationSpotChecks = 100;

struct TableOptions {
    std::int64_t n_max = 10'000;
    double tol = 1e-10;
    unsigned workers = 1;
    std::int64_t n_switch = kDefaultSwitchShell;
};

namespace detail {

using Pchip = boost::math::interpolators::pchip<std::vector<double>>;

// Monotone cubic interpolation in log |p| of each coefficient, on nodes spanning [p_lo, p_hi].
struct CoefficientGrid {
    std::array<std::optional<Pchip>, 7> fields;

    // The end intervals of the interpolant are one order less accurate, so the nodes run
    // kEndNodes spacings past p_hi, and past p_lo where the model allows it.
    static constexpr int kEndNodes = 3;

    CoefficientGrid(const CoefficientModel& model, double p_lo, double p_hi, int nodes, unsigned workers) {
        const double step = std::log(p_hi / p_lo) / (nodes - 1.0);
        const int below = std::clamp(static_cast<int>(std::floor(std::log(p_lo / model.min_momentum()) / step)), 0,
                                     kEndNodes);
        const double log_start = std::log(p_lo) - below * step;
        std::vector<double> x(static_cast<std::size_t>(nodes + below + kEndNodes));
        std::vector<CoefficientSample> y(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = step * static_cast<double>(j);
        parallel_for(x.size(), workers, [&](std::size_t j) {
            y[j] = model(std::max(model.min_momentum(), std::exp(log_start + x[j])));
        });
        log_p_lo_ = log_start;
        span_ = x.back();
        for (std::size_t k = 0; k < fields.size(); ++k) {
            std::vector<double> col(x.size());
            for (std::size_t j = 0; j < x.size(); ++j) col[j] = member(y[j], k);
            fields[k].emplace(std::vector<double>(x), std::move(col));
        }
    }

    [[nodiscard]] double operator()(std::size_t field, double p) const {
        return (*fields[field])(std::clamp(std::log(p) - log_p_lo_, 0.0, span_));
    }

    static double member(const CoefficientSample& c, std::size_t k) {
        switch (k) {
            case 0: return c.eta;
            case 1: return c.v_hat;
            case 2: return c.vg;
            case 3: return c.w;
            case 4: return c.u_hat;
            case 5: return c.d;
            default: return c.v_eta;
        }
    }

private:
    double log_p_lo_ = 0.0;
    double span_ = 0.0;
};

}  // namespace detail

// Shells up to n_switch are transformed by quadrature; the rest up to n_max come from
// the coefficient model sampled on a logarithmic grid, spot-checked at random shells.
inline CorrelationTables build_tables(const CorrelationProfiles& pr, const TableOptions& opt) {
    if (opt.n_switch < 0) throw InvalidParameter("n_switch must be non-negative");
    CorrelationTables t;
    t.n_max = opt.n_max;
    t.n_switch = opt.n_switch;
    t.tol = opt.tol;
    t.n = static_cast<double>(pr.params.particle_count);
    t.shells = enumerate_shells(opt.n_max);
    t.position.assign(static_cast<std::size_t>(opt.n_max) + 1, -1);
    for (std::size_t i = 0; i < t.shells.size(); ++i) {
        t.position[static_cast<std::size_t>(t.shells[i].index)] = static_cast<std::int32_t>(i);
    }

    struct Slot {
        ShellTable* table;
        const RadialProfile* profile;
        bool momentum_weighted;  // tolerance tightened by 1 / (1 + p^2)
    };
    // Same order as CoefficientGrid::member.
    const std::array<Slot, 7> slots{{{&t.eta, &pr.eta_check, true},
                                     {&t.v_hat, &pr.v_ell, false},
                                     {&t.vg, &pr.v_g, false},
                                     {&t.w, &pr.w_source, false},
                                     {&t.u_hat, &pr.u, false},
                                     {&t.d, &pr.d_check, false},
                                     {&t.v_eta, &pr.v_eta, false}}};
    const std::size_t count = t.shells.size();
    std::size_t exact = 0;
    while (exact < count && t.shells[exact].index <= opt.n_switch) ++exact;
    for (const auto& s : slots) {
        s.table->n_max = opt.n_max;
        s.table->values.assign(count, 0.0);
    }
    if (pr.sol_ell.wavenumber == 0.0) return t;

    std::vector<double> errors(exact * slots.size(), 0.0);
    parallel_for(exact, opt.workers, [&](std::size_t i) {
        const double p = t.shells[i].norm;
        for (std::size_t k = 0; k < slots.size(); ++k) {
            const double tol = slots[k].momentum_weighted ? opt.tol / (1.0 + p * p) : opt.tol;
            const auto res = radial_fourier_result(*slots[k].profile, p, tol);
            slots[k].table->values[i] = res.value;
            errors[i * slots.size() + k] = res.error;
        }
    });
    for (std::size_t k = 0; k < slots.size(); ++k) {
        double m = 0.0;
        for (std::size_t i = 0; i < exact; ++i) m = std::max(m, errors[i * slots.size() + k]);
        slots[k].table->max_error = m;
    }

    if (exact < count) {
        const CoefficientModel model(pr, opt.tol);
        const double p_lo = std::max(t.shells[exact].norm, model.min_momentum());
        if (t.shells[exact].norm < model.min_momentum()) {
            throw InvalidParameter("n_switch is below the range of the interpolated coefficient model");
        }
        const detail::CoefficientGrid grid(model, p_lo, t.shells.back().norm, kInterpolationNodes, opt.workers);
        for (std::size_t i = exact; i < count; ++i) {
            for (std::size_t k = 0; k < slots.size(); ++k) slots[k].table->values[i] = grid(k, t.shells[i].norm);
        }
        std::mt19937_64 rng(0x5eed);
        std::uniform_int_distribution<std::size_t> pick(exact, count - 1);
        std::vector<std::size_t> rows(kInterpolationSpotChecks);
        for (auto& r : rows) r = pick(rng);
        rows.push_back(exact);
        rows.push_back(count - 1);
        std::vector<CoefficientSample> direct(rows.size());
        parallel_for(rows.size(), opt.workers, [&](std::size_t j) { direct[j] = model(t.shells[rows[j]].norm); });
        for (std::size_t j = 0; j < rows.size(); ++j) {
            for (std::size_t k = 0; k < slots.size(); ++k) {
                const double dev = std::fabs(slots[k].table->values[rows[j]] -
                                             detail::CoefficientGrid::member(direct[j], k));
                slots[k].table->interpolation_error = std::max(slots[k].table->interpolation_error, dev);
            }
        }
    }

    t.eta0 = radial_fourier(pr.eta_check, 0.0, opt.tol);
    t.v_hat0 = radial_fourier(pr.v_ell, 0.0, opt.tol);
    t.vg0 = radial_fourier(pr.v_g, 0.0, opt.tol);
    t.w0 = radial_fourier(pr.w_source, 0.0, opt.tol);
    t.u_hat0 = radial_fourier(pr.u, 0.0, opt.tol);
    t.v_eta0 = radial_fourier(pr.v_eta, 0.0, opt.tol);
    return t;
}

// p^2 eta_p + D_p + (V g)^_p / 2 - W_p on shell row i.
inline double scattering_residual(const CorrelationTables& t, std::size_t i) {
    const double p2 = t.shells[i].norm * t.shells[i].norm;
    return p2 * t.eta[i] + t.d[i] + 0.5 * t.vg[i] - t.w[i];
}

// The p = 0 analogue: N lambda int chi f^2 g - N lambda0 int chi0 f^2 g.
inline double scattering_residual_zero(const CorrelationTables& t) { return 0.5 * t.vg0 - t.w0; }

struct ConvolutionResult {
    double value = 0.0;
    double tail_estimate = 0.0;
    std::int64_t terms = 0;
};

// D_p = -sum_r p.(p + r) u^(r) eta_{p + r}, with q = p + r restricted to |q|^2 <= 4 pi^2 n_conv.
// The tail is bounded with |eta_q| <= C_eta / (ell^2 q^4) and sum_r |u^(r)|.
inline ConvolutionResult d_coefficient_convolution(const CorrelationTables& t, const std::array<std::int64_t, 3>& p,
                                                   std::int64_t n_conv, double ell,
                                                   double required_accuracy = std::numeric_limits<double>::infinity()) {
    const std::int64_t np = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
    if (np == 0) throw InvalidParameter("D_p is defined for p != 0");
    const double reach = std::sqrt(static_cast<double>(n_conv)) + std::sqrt(static_cast<double>(np));
    if (n_conv > t.n_max || reach * reach > static_cast<double>(t.n_max)) {
        throw ConvergenceError("coefficient tables (n_max = " + std::to_string(t.n_max) +
                               ") do not cover the convolution cutoff n_conv = " + std::to_string(n_conv) +
                               " around shell " + std::to_string(np));
    }
    ConvolutionResult out;
    const double two_pi = 2.0 * std::numbers::pi;
    const double four_pi2 = two_pi * two_pi;
    const auto m = static_cast<std::int64_t>(std::floor(std::sqrt(static_cast<double>(n_conv))));
    CompensatedSum sum;
    for (std::int64_t x = -m; x <= m; ++x) {
        for (std::int64_t y = -m; y <= m; ++y) {
            const std::int64_t xy = x * x + y * y;
            if (xy > n_conv) continue;
            for (std::int64_t z = -m; z <= m; ++z) {
                const std::int64_t nq = xy + z * z;
                if (nq > n_conv || nq == 0) continue;
                const std::int64_t dx = x - p[0], dy = y - p[1], dz = z - p[2];
                const std::int64_t nr = dx * dx + dy * dy + dz * dz;
                const double u = nr == 0 ? t.u_hat0 : t.u_hat[static_cast<std::size_t>(t.row(nr))];
                const double eta = t.eta[static_cast<std::size_t>(t.row(nq))];
                const double dot = four_pi2 * static_cast<double>(p[0] * x + p[1] * y + p[2] * z);
                sum.add(-dot * u * eta);
                ++out.terms;
            }
        }
    }
    out.value = sum.value();

    const double q_cut = two_pi * std::sqrt(static_cast<double>(n_conv));
    double c_eta = 0.0;
    double c_u = 0.0;
    CompensatedSum u_abs;
    u_abs.add(std::fabs(t.u_hat0));
    for (std::size_t i = 0; i < t.shells.size(); ++i) {
        const double q = t.shells[i].norm;
        const double q4 = q * q * q * q;
        u_abs.add(static_cast<double>(t.shells[i].multiplicity) * std::fabs(t.u_hat[i]));
        if (q >= 0.5 * q_cut) {
            c_eta = std::max(c_eta, std::fabs(t.eta[i]) * ell * ell * q4);
            c_u = std::max(c_u, std::fabs(t.u_hat[i]) * q4);
        }
    }
    const double r_table = t.shells.back().norm;
    const double u_sum = u_abs.value() + c_u / (2.0 * std::numbers::pi * std::numbers::pi * r_table);
    const double p_norm = two_pi * std::sqrt(static_cast<double>(np));
    out.tail_estimate = p_norm * c_eta / (ell * ell * q_cut * q_cut * q_cut) * u_sum;
    if (out.tail_estimate > required_accuracy) {
        throw ConvergenceError("convolution cutoff too small: tail estimate " + std::to_string(out.tail_estimate) +
                               " exceeds requested accuracy " + std::to_string(required_accuracy));
    }
    return out;
}

}  // namespace lhy
