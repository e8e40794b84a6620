#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "correlation.hpp"
#include "errors.hpp"
#include "summation.hpp"

namespace lhy {

struct ShellCoefficients {
    std::int64_t index = 0;
    std::int64_t multiplicity = 0;
    double p = 0.0;
    double eta = 0.0;
    double d = 0.0;
    double vg = 0.0;  // (V^ * g^)(p)
    double sigma = 0.0;
    double gamma = 1.0;
    double f_coef = 0.0;
    double g_coef = 0.0;
    double f_minus_g = 0.0;  // p^2 e^{-2 eta} - 2 D
    double f_plus_g = 0.0;   // (p^2 + 2 Vg) e^{2 eta} + 2 D
    double tau = 0.0;
    double dispersion = 0.0;
};

using QuadraticCoefficients = std::vector<ShellCoefficients>;

// sigma = sinh(eta), gamma = cosh(eta);
// F = p^2 (s^2 + c^2) + Vg (c + s)^2,  G = 2 p^2 c s + Vg (c + s)^2 + 2 D.
inline ShellCoefficients make_shell_coefficients(const MomentumShell& shell, double eta, double d, double vg) {
    ShellCoefficients c;
    c.index = shell.index;
    c.multiplicity = shell.multiplicity;
    c.p = shell.norm;
    c.eta = eta;
    c.d = d;
    c.vg = vg;
    const double p2 = shell.norm * shell.norm;
    c.sigma = std::sinh(eta);
    c.gamma = std::cosh(eta);
    const double e2 = std::exp(2.0 * eta);
    const double sum_sq = c.gamma + c.sigma;
    c.f_coef = p2 * (c.sigma * c.sigma + c.gamma * c.gamma) + vg * sum_sq * sum_sq;
    c.g_coef = 2.0 * p2 * c.gamma * c.sigma + vg * sum_sq * sum_sq + 2.0 * d;
    c.f_minus_g = p2 / e2 - 2.0 * d;
    c.f_plus_g = (p2 + 2.0 * vg) * e2 + 2.0 * d;
    if (c.f_minus_g > 0.0 && c.f_plus_g > 0.0) {
        const double x = c.g_coef / c.f_coef;
        c.tau = 0.25 * (std::log1p(-x) - std::log1p(x));
        c.dispersion = std::sqrt(c.f_minus_g) * std::sqrt(c.f_plus_g);
    }
    return c;
}

inline QuadraticCoefficients build_coefficients(const CorrelationTables& t, std::int64_t n_max) {
    if (n_max > t.n_max) throw InvalidParameter("coefficient tables do not cover n_max");
    QuadraticCoefficients out;
    out.reserve(t.shells.size());
    for (std::size_t i = 0; i < t.shells.size() && t.shells[i].index <= n_max; ++i) {
        auto c = make_shell_coefficients(t.shells[i], t.eta[i], t.d[i], t.vg[i]);
        if (!(c.f_minus_g > 0.0 && c.f_plus_g > 0.0 && std::fabs(c.g_coef) < c.f_coef)) {
            std::ostringstream os;
            os.precision(17);
            os << "gap condition F_p > |G_p| fails on shell n = " << c.index << ": F = " << c.f_coef
               << ", G = " << c.g_coef;
            throw ModelRegimeError(os.str());
        }
        out.push_back(c);
    }
    return out;
}

inline double dispersion(const QuadraticCoefficients& coeffs, std::size_t shell) {
    return coeffs.at(shell).dispersion;
}

// G_p rewritten with the scattering equation p^2 eta + D + Vg/2 = W, so that no large
// terms cancel: G = 2 W + p^2 (sinh(2 eta) - 2 eta) + Vg (e^{2 eta} - 1).
inline double g_coefficient_from_scattering(double p, double eta, double vg, double w) {
    const double x = 2.0 * eta;
    const double sinh_excess = std::fabs(x) < 1e-2 ? x * x * x / 6.0 * (1.0 + x * x / 20.0 * (1.0 + x * x / 42.0))
                                                   : std::sinh(x) - x;
    return 2.0 * w + p * p * sinh_excess + vg * std::expm1(x);
}

// (-F + eps)/2 = -(sqrt(F + G) - sqrt(F - G))^2 / 4 = -G^2 / (sqrt(F + G) + sqrt(F - G))^2,
// the last form being free of cancellation at large |p|.
inline double vacuum_summand(const ShellCoefficients& c) {
    const double sum = std::sqrt(c.f_plus_g) + std::sqrt(c.f_minus_g);
    return -(c.g_coef / sum) * (c.g_coef / sum);
}

struct VacuumShift {
    double value = 0.0;
    double tail_estimate = 0.0;  // |sum beyond n_max| from a fitted |summand| <= C / p^6
    double tail_correction = 0.0;        // continuum sum beyond n_max, included in value
    double discretization_check = 0.0;   // shell sum minus continuum integral over (n_max / 2, n_max]
};

inline VacuumShift vacuum_quadratic_shift(const QuadraticCoefficients& coeffs, std::int64_t n_max,
                                          double tolerance = std::numeric_limits<double>::infinity()) {
    VacuumShift out;
    CompensatedSum sum;
    double c6 = 0.0;
    double p_last = 0.0;
    for (const auto& c : coeffs) {
        if (c.index > n_max) break;
        const double v = vacuum_summand(c);
        sum.add(static_cast<double>(c.multiplicity) * v);
        p_last = c.p;
    }
    for (const auto& c : coeffs) {
        if (c.index > n_max) break;
        if (c.p >= 0.5 * p_last) c6 = std::max(c6, std::fabs(vacuum_summand(c)) * std::pow(c.p, 6));
    }
    out.value = sum.value();
    if (p_last > 0.0) out.tail_estimate = c6 / (6.0 * std::numbers::pi * std::numbers::pi * std::pow(p_last, 3));
    if (out.tail_estimate > tolerance) {
        throw ConvergenceError("vacuum shift tail estimate " + std::to_string(out.tail_estimate) +
                               " exceeds tolerance " + std::to_string(tolerance));
    }
    return out;
}

// A_p = -4 D (Vg (c + s)^2 + D + 2 p^2 c s), so that eps^2 = p^4 + 2 p^2 Vg + A_p.
inline double dispersion_remainder(const ShellCoefficients& c) {
    const double sum_sq = c.gamma + c.sigma;
    return -4.0 * c.d * (c.vg * sum_sq * sum_sq + c.d + 2.0 * c.p * c.p * c.gamma * c.sigma);
}

}  // namespace lhy
