#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "special.hpp"

namespace lhy {

struct GasParameters {
    double scattering_length = 1.0;     // a
    std::int64_t particle_count = 1000; // N
    double short_scale = 0.01;          // ell
    double reference_scale = 0.25;      // ell0

    [[nodiscard]] double hard_core_radius() const noexcept {
        return scattering_length / static_cast<double>(particle_count);
    }
};

// Throws InvalidParameter naming the violated constraint; returns advisory warnings.
inline std::vector<std::string> validate(const GasParameters& gp) {
    auto fail = [](const std::string& what) {
        throw InvalidParameter("constraint a/N < ell < ell0 <= 1/2 (with a >= 0, N >= 2) violated: " + what);
    };
    std::ostringstream os;
    os.precision(17);
    const double a = gp.scattering_length;
    const double ell = gp.short_scale;
    const double ell0 = gp.reference_scale;
    if (!std::isfinite(a) || a < 0.0) fail("a must be finite and >= 0");
    if (gp.particle_count < 2) fail("N must be at least 2");
    if (!std::isfinite(ell) || !std::isfinite(ell0)) fail("ell and ell0 must be finite");
    if (!(ell > gp.hard_core_radius()) || !(ell > 0.0)) {
        os << "ell = " << ell << " must exceed a/N = " << gp.hard_core_radius();
        fail(os.str());
    }
    if (!(ell < ell0)) {
        os << "ell = " << ell << " must be below ell0 = " << ell0;
        fail(os.str());
    }
    if (!(ell0 <= 0.5)) {
        os << "ell0 = " << ell0 << " must not exceed 1/2";
        fail(os.str());
    }
    std::vector<std::string> warnings;
    const double n = static_cast<double>(gp.particle_count);
    if (!(ell > 1.0 / n && ell < std::pow(n, -0.75))) {
        os << "ell = " << ell << " lies outside the asymptotic window (N^-1, N^-3/4) = (" << 1.0 / n << ", "
           << std::pow(n, -0.75) << ")";
        warnings.push_back(os.str());
    }
    return warnings;
}

struct NeumannSolution {
    GasParameters params;
    double ball_radius = 0.0;  // R
    double hc_radius = 0.0;    // b = a/N
    double eigenvalue = 0.0;   // lambda
    double wavenumber = 0.0;   // k = sqrt(lambda)
    double sin_span = 0.0;     // sin(k (R - b))
    double residual = 0.0;     // |tan(k (R - b)) - k R| / (k R)
};

// Smallest positive root of tan(k (R - b)) = k R. With x = k (R - b) this is
// (tan x - x)/x = b/(R - b) on (0, pi/2), whose left side is increasing.
inline NeumannSolution solve_neumann(const GasParameters& gp, double ball_radius) {
    NeumannSolution sol;
    sol.params = gp;
    sol.ball_radius = ball_radius;
    sol.hc_radius = gp.hard_core_radius();
    const double R = ball_radius;
    const double b = sol.hc_radius;
    if (!(R > b)) throw InvalidParameter("ball radius must exceed the hard-core radius a/N");
    if (b == 0.0) return sol;

    const double span = R - b;
    const double target = b / span;
    double lo = 0.0;
    double hi = std::numbers::pi / 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (special::tan_excess(mid) < target) lo = mid;
        else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
        const double step = (special::tan_excess(x) - target) / special::tan_excess_derivative(x);
        const double next = x - step;
        if (next > 0.0 && next < std::numbers::pi / 2.0) x = next;
    }
    const double k = x / span;
    sol.wavenumber = k;
    sol.eigenvalue = k * k;
    sol.sin_span = std::sin(x);
    sol.residual = std::fabs(std::tan(x) - k * R) / (k * R);
    if (!(sol.residual < 1e-12) || !(x > 0.0 && x < std::numbers::pi / 2.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "Neumann root not resolved: bracket (" << lo << ", " << hi << ") in k(R-b), residual "
           << sol.residual;
        throw ConvergenceError(os.str());
    }
    return sol;
}

inline double eval_f(const NeumannSolution& s, double r) noexcept {
    if (r <= s.hc_radius) return s.hc_radius > 0.0 ? 0.0 : 1.0;
    if (r >= s.ball_radius || s.wavenumber == 0.0) return 1.0;
    return s.ball_radius / r * std::sin(s.wavenumber * (r - s.hc_radius)) / s.sin_span;
}

// 1 - f, written so that it stays accurate where f is close to 1.
inline double eval_omega(const NeumannSolution& s, double r) noexcept {
    if (r <= s.hc_radius) return s.hc_radius > 0.0 ? 1.0 : 0.0;
    if (r >= s.ball_radius || s.wavenumber == 0.0) return 0.0;
    const double k = s.wavenumber;
    const double t = s.ball_radius - r;
    const double half = std::sin(0.5 * k * t);
    return (2.0 * s.ball_radius * half * half - t * special::one_minus_sinc(k * t)) / r;
}

// 1 - f^2
inline double eval_u(const NeumannSolution& s, double r) noexcept {
    const double w = eval_omega(s, r);
    return w * (2.0 - w);
}

// d f / d r on (b, R); zero outside.
inline double eval_df(const NeumannSolution& s, double r) noexcept {
    if (r <= s.hc_radius || r >= s.ball_radius || s.wavenumber == 0.0) return 0.0;
    const double k = s.wavenumber;
    const double x = k * (r - s.hc_radius);
    return s.ball_radius / (s.sin_span * r * r) * (k * r * std::cos(x) - std::sin(x));
}

// (d f / d r) / f = b / ((r - b) r) + k^2 (r - b) h(k (r - b)) on (b, R).
inline double eval_log_df(const NeumannSolution& s, double r) noexcept {
    if (r <= s.hc_radius || r >= s.ball_radius || s.wavenumber == 0.0) return 0.0;
    const double k = s.wavenumber;
    const double d = r - s.hc_radius;
    return s.hc_radius / (d * r) + k * k * d * special::cot_defect(k * d);
}

enum class ProfileLabel {
    f,
    omega,
    u,
    chi,
    g,
    eta_check,
    v_ell,
    d_check,
    v_times_g,
    v_times_eta,
    w_source,
    product,
};

inline const char* to_string(ProfileLabel l) noexcept {
    switch (l) {
        case ProfileLabel::f: return "f";
        case ProfileLabel::omega: return "omega";
        case ProfileLabel::u: return "u";
        case ProfileLabel::chi: return "chi";
        case ProfileLabel::g: return "g";
        case ProfileLabel::eta_check: return "eta_check";
        case ProfileLabel::v_ell: return "v_ell";
        case ProfileLabel::d_check: return "d_check";
        case ProfileLabel::v_times_g: return "v_times_g";
        case ProfileLabel::v_times_eta: return "v_times_eta";
        case ProfileLabel::w_source: return "w_source";
        case ProfileLabel::product: return "product";
    }
    return "unknown";
}

// Piecewise-smooth radial function. The evaluator is only sampled strictly inside
// the pieces by the transform, so values exactly at a boundary never matter there.
struct RadialProfile {
    std::vector<double> breaks;
    std::function<double(double)> fn;
    ProfileLabel label = ProfileLabel::product;

    double operator()(double r) const { return fn(r); }
};

inline RadialProfile chi_profile(double R) {
    return {{0.0, R}, [](double) { return 1.0; }, ProfileLabel::chi};
}

inline RadialProfile f_profile(const NeumannSolution& s) {
    return {{s.hc_radius, s.ball_radius}, [s](double r) { return eval_f(s, r); }, ProfileLabel::f};
}

inline RadialProfile omega_profile(const NeumannSolution& s) {
    std::vector<double> br{0.0, s.hc_radius, s.ball_radius};
    if (s.hc_radius == 0.0) br = {0.0, s.ball_radius};
    return {br, [s](double r) { return eval_omega(s, r); }, ProfileLabel::omega};
}

inline RadialProfile u_profile(const NeumannSolution& s) {
    std::vector<double> br{0.0, s.hc_radius, s.ball_radius};
    if (s.hc_radius == 0.0) br = {0.0, s.ball_radius};
    return {br, [s](double r) { return eval_u(s, r); }, ProfileLabel::u};
}

// Pointwise product of two profiles, with the union of their breakpoints.
inline RadialProfile multiply(const RadialProfile& x, const RadialProfile& y,
                              ProfileLabel label = ProfileLabel::product) {
    const double lo = std::max(x.breaks.front(), y.breaks.front());
    const double hi = std::min(x.breaks.back(), y.breaks.back());
    std::vector<double> br;
    for (const auto* src : {&x.breaks, &y.breaks}) {
        for (double v : *src) {
            if (v >= lo && v <= hi) br.push_back(v);
        }
    }
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    if (br.size() < 2) br = {lo, std::max(lo, hi)};
    auto fx = x.fn;
    auto fy = y.fn;
    return {br, [fx, fy](double r) { return fx(r) * fy(r); }, label};
}

// (4 pi / p) int r h(r) sin(p r) dr, or 4 pi int r^2 h(r) dr at p = 0.
inline QuadratureResult radial_fourier_result(const RadialProfile& h, double p_norm, double tol) {
    if (!(tol > 0.0)) throw InvalidParameter("quadrature tolerance must be positive");
    constexpr double four_pi = 4.0 * std::numbers::pi;
    QuadratureOptions opt;
    if (p_norm == 0.0) {
        opt.tol = tol / four_pi;
        auto res = integrate_panels([&](double r) { return r * r * h.fn(r); }, h.breaks, opt);
        res.value *= four_pi;
        res.error *= four_pi;
        res.abs_value *= four_pi;
        return res;
    }
    const double scale = four_pi / p_norm;
    opt.tol = tol / scale;
    opt.max_panel_width = std::numbers::pi / p_norm;
    auto res = integrate_panels([&](double r) { return r * h.fn(r) * std::sin(p_norm * r); }, h.breaks, opt);
    res.value *= scale;
    res.error *= scale;
    res.abs_value *= scale;
    return res;
}

inline double radial_fourier(const RadialProfile& h, double p_norm, double tol) {
    return radial_fourier_result(h, p_norm, tol).value;
}

struct ChiMomentHats {
    double chi;      // hat of chi_R
    double chi_r2;   // hat of chi_R |x|^2
    double chi_rinv; // hat of chi_R |x|^-1
};

inline ChiMomentHats chi_moment_hats(double R, double p_norm) {
    return {special::ball_moment_hat(1, R, p_norm), special::ball_moment_hat(3, R, p_norm),
            special::ball_moment_hat(0, R, p_norm)};
}

inline double chi_hat(double R, double p_norm) { return special::ball_moment_hat(1, R, p_norm); }

namespace detail {

inline double omega_hat_formula(const NeumannSolution& s, double q) {
    constexpr double four_pi = 4.0 * std::numbers::pi;
    const double lam = s.eigenvalue;
    const double p = std::sqrt(q);
    const double cos_span = std::cos(s.wavenumber * (s.ball_radius - s.hc_radius));
    return lam / (lam - q) * chi_hat(s.ball_radius, p) -
           four_pi * std::sin(p * s.hc_radius) / (p * (lam - q) * cos_span);
}

}  // namespace detail

// Fourier coefficient of omega from its two-term closed form. Near p^2 = lambda the
// formula is 0/0; there a cubic through four nearby exact evaluations is used.
inline double omega_hat_closed(const NeumannSolution& s, double p_norm) {
    if (s.eigenvalue == 0.0) return 0.0;
    const double q = p_norm * p_norm;
    const double lam = s.eigenvalue;
    if (std::fabs(q - lam) >= 1e-6 * q) return detail::omega_hat_formula(s, q);
    const double h = 1e-3 * lam;
    const double t = (q - lam) / h;
    const double nodes[4] = {-2.0, -1.0, 1.0, 2.0};
    double value = 0.0;
    for (int i = 0; i < 4; ++i) {
        double w = 1.0;
        for (int j = 0; j < 4; ++j) {
            if (j != i) w *= (t - nodes[j]) / (nodes[i] - nodes[j]);
        }
        value += w * detail::omega_hat_formula(s, lam + nodes[i] * h);
    }
    return value;
}

}  // namespace lhy
