#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "errors.hpp"
#include "lattice.hpp"
#include "quadrature.hpp"
#include "summation.hpp"

namespace lhy {

// Multiplicity-weighted sum of term(|p|) over the given shells, in shell order.
template <class Term>
double shell_sum(const std::vector<MomentumShell>& shells, Term&& term) {
    CompensatedSum s;
    for (const auto& sh : shells) s.add(static_cast<double>(sh.multiplicity) * term(sh.norm));
    return s.value();
}

// Continuum approximation (1 / (2 pi^2)) int_P^P_far p^2 term(p) dp of a momentum-lattice
// sum beyond |p| = P; `wavelength` bounds the panel width for oscillating terms.
template <class Term>
double momentum_tail_integral(Term&& term, double P, double P_far, double wavelength, double tol = 1e-14) {
    if (!(P_far > P)) return 0.0;
    QuadratureOptions opt;
    opt.tol = tol;
    opt.max_panel_width = wavelength;
    const double breaks[2] = {P, P_far};
    const auto res = integrate_panels([&](double p) { return p * p * term(p); }, breaks, opt);
    return res.value / (2.0 * std::numbers::pi * std::numbers::pi);
}

struct ContinuumTail {
    double value = 0.0;         // (1 / (2 pi^2)) int_P^P_far p^2 term(p) dp
    double far_estimate = 0.0;  // bound on the part beyond P_far from a C / p^k envelope
    double quad_error = 0.0;
    double P = 0.0;
    double P_far = 0.0;
};

// Continuum replacement of the lattice sum of term(|p|) over |p| > P, integrated to
// P_far; beyond it |term| <= C / p^decay is assumed, with C fitted on [P_far / 2, P_far].
template <class Term>
ContinuumTail continuum_tail(Term&& term, double P, double P_far, double max_panel, double tol, int decay) {
    if (decay <= 3) throw InvalidParameter("continuum tail needs a summand decaying faster than p^-3");
    ContinuumTail out;
    out.P = P;
    out.P_far = P_far;
    if (!(P_far > P)) return out;
    const double norm = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
    QuadratureOptions opt;
    opt.tol = tol / norm;
    opt.max_panel_width = max_panel;
    const double breaks[2] = {P, P_far};
    const auto res = integrate_panels([&](double p) { return p * p * term(p); }, breaks, opt);
    out.value = norm * res.value;
    out.quad_error = norm * res.error;
    double c = 0.0;
    for (int j = 0; j <= 16; ++j) {
        const double p = P_far * (0.5 + j / 32.0);
        c = std::max(c, std::fabs(term(p)) * std::pow(p, decay));
    }
    out.far_estimate = norm * c / ((decay - 3) * std::pow(P_far, decay - 3));
    return out;
}

// Radius where the shells beyond n_max begin in the continuum picture.
inline double momentum_tail_start(std::int64_t n_max) {
    return 2.0 * std::numbers::pi * std::sqrt(static_cast<double>(n_max) + 0.5);
}

// Smooth-window average of cube partial sums S(M) over M in [M_max/2, M_max],
// weighted by exp(-1 / (t (1 - t))).
inline double smooth_window_average(const std::vector<double>& partial, std::int64_t M_max) {
    if (M_max < 8 || static_cast<std::size_t>(M_max) >= partial.size()) {
        throw InvalidParameter("smooth window needs M_max >= 8 within the available partial sums");
    }
    const std::int64_t lo = M_max / 2;
    const double width = static_cast<double>(M_max - lo);
    CompensatedSum num;
    CompensatedSum den;
    for (std::int64_t M = lo + 1; M < M_max; ++M) {
        const double t = static_cast<double>(M - lo) / width;
        const double w = std::exp(-1.0 / (t * (1.0 - t)));
        num.add(w * partial[static_cast<std::size_t>(M)]);
        den.add(w);
    }
    return num.value() / den.value();
}

// Plain average of the last `window` partial sums ending at M_max.
inline double trailing_window_average(const std::vector<double>& partial, std::int64_t M_max, std::int64_t window) {
    CompensatedSum s;
    for (std::int64_t M = M_max - window + 1; M <= M_max; ++M) s.add(partial[static_cast<std::size_t>(M)]);
    return s.value() / static_cast<double>(window);
}

}  // namespace lhy
