#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "bogoliubov.hpp"
#include "correlation.hpp"
#include "lattice.hpp"
#include "lattice_sums.hpp"
#include "scattering.hpp"
#include "summation.hpp"

namespace lhy {

namespace detail {
inline constexpr double pi = std::numbers::pi;
inline double positive_zero(double x) { return x + 0.0; }
}  // namespace detail

// p^2 + c - sqrt(p^4 + 2 c p^2) - c^2 / (2 p^2), rewritten without cancellation.
inline double lhy_bracket(double p, double c) {
    const double p2 = p * p;
    const double x = c / p2;
    const double s = std::sqrt(1.0 + 2.0 * x);
    return -p2 * x * x * x * (1.0 + 2.0 / (1.0 + s)) / (2.0 * (1.0 + x + s));
}

struct LhySum {
    double value = 0.0;
    double tail_estimate = 0.0;
    std::int64_t n_max = 0;
    std::int64_t n_ext = 0;
};

// Shell sum of lhy_bracket(p, 8 pi a) over 2 pi Z^3 \ {0}. The p^-4 and p^-6 terms of the
// large-p expansion are subtracted shell by shell and their lattice sums added back,
// each from a shell sum to n_ext plus a continuum tail.
inline LhySum lhy_sum(double a, std::int64_t n_max, std::int64_t n_ext = 0) {
    if (a < 0.0) throw InvalidParameter("scattering length must be >= 0");
    if (n_max < 1) throw InvalidParameter("n_max must be at least 1");
    LhySum out;
    out.n_max = n_max;
    out.n_ext = n_ext > 0 ? std::max(n_ext, n_max) : std::max<std::int64_t>(n_max, 1 << 18);
    if (a == 0.0) return out;

    const double c = 8.0 * detail::pi * a;
    const double a4 = -0.5 * c * c * c;
    const double a6 = 0.625 * c * c * c * c;
    const auto r3 = three_square_counts(out.n_ext);
    const double four_pi2 = 4.0 * detail::pi * detail::pi;

    CompensatedSum direct;
    CompensatedSum z4_full, z6_full, z4_half, z6_half;
    const std::int64_t n_half = out.n_ext / 2;
    for (std::int64_t n = 1; n <= out.n_ext; ++n) {
        const auto m = r3[static_cast<std::size_t>(n)];
        if (m == 0) continue;
        const double p2 = four_pi2 * static_cast<double>(n);
        const double inv4 = 1.0 / (p2 * p2);
        const double inv6 = inv4 / p2;
        const double w = static_cast<double>(m);
        if (n <= n_max) direct.add(w * (lhy_bracket(std::sqrt(p2), c) - a4 * inv4 - a6 * inv6));
        z4_full.add(w * inv4);
        z6_full.add(w * inv6);
        if (n <= n_half) {
            z4_half.add(w * inv4);
            z6_half.add(w * inv6);
        }
    }
    const double two_pi2 = 2.0 * detail::pi * detail::pi;
    auto with_tail = [&](double partial, std::int64_t n_end, int power) {
        const double P = momentum_tail_start(n_end);
        return partial + 1.0 / (two_pi2 * (power - 3) * std::pow(P, power - 3));
    };
    const double z4 = with_tail(z4_full.value(), out.n_ext, 4);
    const double z6 = with_tail(z6_full.value(), out.n_ext, 6);
    const double z4_coarse = with_tail(z4_half.value(), n_half, 4);
    const double z6_coarse = with_tail(z6_half.value(), n_half, 6);
    out.value = direct.value() + a4 * z4 + a6 * z6;

    const double P = momentum_tail_start(n_max);
    const double remainder = 0.875 * std::pow(c, 5) / (two_pi2 * 5.0 * std::pow(P, 5));
    out.tail_estimate = remainder + std::fabs(a4 * (z4 - z4_coarse)) + std::fabs(a6 * (z6 - z6_coarse));
    return out;
}

struct ConditionalSum {
    double estimate = 0.0;      // smooth-window average at M_max
    double band = 0.0;          // spread of the estimate over the last ten cutoffs
    double window10 = 0.0;      // plain average of the last ten partial sums
    double partial_first = 0.0; // S(1)
    double partial_last = 0.0;  // S(M_max)
    std::int64_t M_max = 0;
    bool stabilized = false;
};

// cos(|p|)/|p|^2 summed over cube cutoffs of h Z^3 \ {0}.
inline ConditionalSum cube_cosine_sum(std::int64_t M_max, LatticeScale scale) {
    if (M_max < 8) throw InvalidParameter("M_max must be at least 8");
    const auto partial = cosine_cube_partial_sums(M_max, scale);
    ConditionalSum out;
    out.M_max = M_max;
    out.estimate = smooth_window_average(partial, M_max);
    double lo = out.estimate;
    double hi = out.estimate;
    for (std::int64_t M = std::max<std::int64_t>(8, M_max - 9); M < M_max; ++M) {
        const double v = smooth_window_average(partial, M);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    out.band = hi - lo;
    out.window10 = trailing_window_average(partial, M_max, std::min<std::int64_t>(10, M_max));
    out.partial_first = partial[1];
    out.partial_last = partial[static_cast<std::size_t>(M_max)];
    out.stabilized = out.band < 1e-3;
    return out;
}

struct LatticeConstant {
    double value = 0.0;
    double band = 0.0;
    ConditionalSum sum;
};

// I0 = 1/(3 pi) - (2/(3 pi)) lim_M S(M). The integer lattice is the default; it is the
// one for which this value agrees with the chi-route I0.
inline LatticeConstant i_zero_from(const ConditionalSum& sum) {
    LatticeConstant out;
    out.sum = sum;
    const double k = 2.0 / (3.0 * detail::pi);
    out.value = 1.0 / (3.0 * detail::pi) - k * out.sum.estimate;
    out.band = k * out.sum.band;
    return out;
}

inline LatticeConstant i_zero(std::int64_t M_max, LatticeScale scale = LatticeScale::integer) {
    return i_zero_from(cube_cosine_sum(M_max, scale));
}

inline LatticeConstant e_lambda_from(const ConditionalSum& sum) {
    LatticeConstant out;
    out.sum = sum;
    out.value = 2.0 - out.sum.estimate;
    out.band = out.sum.band;
    return out;
}

inline LatticeConstant e_lambda(std::int64_t M_max) {
    return e_lambda_from(cube_cosine_sum(M_max, LatticeScale::integer));
}

struct ChiSquareReport {
    double ell0 = 0.0;
    std::int64_t n_max = 0;
    // With a = 1; every entry scales as a^2.
    double lhs = 0.0;                 // -(9/ell0^6) sum chi^2/p^2
    double lhs_tail = 0.0;
    std::array<double, 4> terms{};    // the four sums on the right, with their prefactors
    std::array<double, 4> term_tails{};
    double rhs = 0.0;
    double residual = 0.0;            // lhs - rhs
    double combined_tail = 0.0;
    double i0_chi_route = 0.0;        // I0 solved from the final identity
    double i0_first_term = 0.0;       // I0 solved from the first right-hand term
    double i0_cube = 0.0;
    double i0_band = 0.0;
    double final_identity_residual = 0.0;  // i0_chi_route - i0_cube
};

namespace detail {

struct ChiSums {
    double chi2_over_p2 = 0.0, chi_over_p2 = 0.0, chi_chi2 = 0.0, chi_sq = 0.0, chi_chiinv = 0.0;
};

}  // namespace detail

inline ChiSquareReport chisq_identity_check(double ell0, const LatticeConstant& i0_cube,
                                            std::int64_t n_max = 200'000) {
    if (!(ell0 > 0.0 && ell0 <= 0.5)) throw InvalidParameter("ell0 must lie in (0, 1/2]");
    ChiSquareReport out;
    out.ell0 = ell0;
    out.n_max = n_max;
    const double R = ell0;
    const auto shells = enumerate_shells(n_max);

    auto sums_at = [R](double p) {
        const auto h = chi_moment_hats(R, p);
        const double p2 = p * p;
        return std::array<double, 5>{h.chi * h.chi / p2, h.chi / p2, h.chi * h.chi_r2, h.chi * h.chi, h.chi * h.chi_rinv};
    };
    std::array<CompensatedSum, 5> acc;
    for (const auto& sh : shells) {
        const auto v = sums_at(sh.norm);
        for (int k = 0; k < 5; ++k) acc[k].add(static_cast<double>(sh.multiplicity) * v[k]);
    }
    const double P = momentum_tail_start(n_max);
    const double P_far = 64.0 * P;
    const double wave = detail::pi / R;
    auto env_chi = [R](double p) { return 4.0 * detail::pi * (R + 1.0 / p) / (p * p); };
    auto env_r2 = [R](double p) {
        return 4.0 * detail::pi * (R * R * R / (p * p) + 3.0 * R * R / (p * p * p) + 6.0 * R / std::pow(p, 4) +
                                   6.0 / std::pow(p, 5));
    };
    auto env_inv = [](double p) { return 8.0 * detail::pi / (p * p); };
    const std::array<double, 5> env_far{env_chi(P_far) * env_chi(P_far) / (P_far * P_far), env_chi(P_far) / (P_far * P_far),
                                        env_chi(P_far) * env_r2(P_far), env_chi(P_far) * env_chi(P_far),
                                        env_chi(P_far) * env_inv(P_far)};
    const std::array<int, 5> decay{6, 4, 4, 4, 4};
    // Quarter-wavelength panels resolve the oscillation of the chi products exactly enough
    // that the Kronrod-Gauss spread stays at rounding level.
    const auto cont = integrate_fixed_panels<5>(
        [&](double p) {
            auto v = sums_at(p);
            for (auto& x : v) x *= p * p / (2.0 * detail::pi * detail::pi);
            return v;
        },
        P, P_far, 0.5 * wave);
    // The continuum rule is checked against the exact shells in (n_max / 2, n_max].
    std::array<CompensatedSum, 5> band;
    for (const auto& sh : shells) {
        if (sh.index <= n_max / 2) continue;
        const auto v = sums_at(sh.norm);
        for (std::size_t k = 0; k < 5; ++k) band[k].add(static_cast<double>(sh.multiplicity) * v[k]);
    }
    const auto band_cont = integrate_fixed_panels<5>(
        [&](double p) {
            auto v = sums_at(p);
            for (auto& x : v) x *= p * p / (2.0 * detail::pi * detail::pi);
            return v;
        },
        momentum_tail_start(n_max / 2), P, 0.5 * wave);
    std::array<double, 5> total{};
    std::array<double, 5> tail{};
    for (std::size_t k = 0; k < 5; ++k) {
        const double beyond = std::pow(P_far, 3) * env_far[k] / (2.0 * detail::pi * detail::pi * (decay[k] - 3));
        total[k] = acc[k].value() + cont.value[k];
        tail[k] = std::fabs(band[k].value() - band_cont.value[k]) + cont.error[k] + beyond;
    }
    const double l3 = R * R * R;
    const double l4 = l3 * R;
    const double l6 = l3 * l3;
    out.lhs = -9.0 / l6 * total[0];
    out.lhs_tail = 9.0 / l6 * tail[0];
    const std::array<double, 4> pref{-12.0 * detail::pi / l3, 1.5 / l6, -4.5 / l4, 3.0 / l3};
    CompensatedSum rhs;
    double tails = out.lhs_tail;
    for (int k = 0; k < 4; ++k) {
        out.terms[k] = pref[k] * total[k + 1];
        out.term_tails[k] = std::fabs(pref[k]) * tail[k + 1];
        rhs.add(out.terms[k]);
        tails += out.term_tails[k];
    }
    out.rhs = rhs.value();
    out.residual = out.lhs - out.rhs;
    out.combined_tail = tails;
    const double six_pi = 6.0 * detail::pi;
    out.i0_chi_route = (out.lhs + 4.8 * detail::pi / R + 3.2 * detail::pi * detail::pi * R * R) / six_pi;
    out.i0_first_term = out.terms[0] / six_pi + 1.0 / R + (4.0 / 15.0) * detail::pi * R * R;
    out.i0_cube = i0_cube.value;
    out.i0_band = i0_cube.band;
    out.final_identity_residual = out.i0_chi_route - out.i0_cube;
    return out;
}

inline ChiSquareReport chisq_identity_check(double ell0, std::int64_t M_max, std::int64_t n_max = 200'000) {
    return chisq_identity_check(ell0, i_zero(M_max), n_max);
}

enum class ConstantRoute { i0, e_lambda };

// 4 pi a (N - 1) + constant - lhy / 2, with constant = 6 pi a^2 I0 or e_Lambda a^2.
inline double closed_form_target(std::int64_t N, double a, ConstantRoute route, double i0, double e_lam, double lhy) {
    const double constant = route == ConstantRoute::i0 ? 6.0 * detail::pi * a * a * i0 : e_lam * a * a;
    return detail::positive_zero(4.0 * detail::pi * a * static_cast<double>(N - 1) + constant - 0.5 * lhy);
}

struct CnlResult {
    double value = 0.0;
    double leading = 0.0;         // (N - 1) V^(0) / 2
    double shell_sum = 0.0;       // direct sum over shells <= n_max
    double tail_correction = 0.0; // resummed contribution of shells > n_max
    ContinuumTail remainder_tail; // continuum sum of R_p beyond n_max
    double discretization_check = 0.0;  // shell sum minus continuum integral over (n_max / 2, n_max]
    double tail_estimate = 0.0;
};

// Far end and panel width of the continuum tails beyond shell n_max: the summands
// keep a p^-4 profile out to |p| ~ 1 / ell before the faster decay sets in.
struct TailGrid {
    double P = 0.0;
    double P_far = 0.0;
    double max_panel = 0.0;
};

// The coefficient model carries adaptive-quadrature noise of order tol in p, which the
// outer tail integral cannot resolve below that level.
inline constexpr double kTailTolScale = 100.0;

inline TailGrid tail_grid(const GasParameters& gp, std::int64_t n_max) {
    TailGrid g;
    g.P = momentum_tail_start(n_max);
    g.P_far = std::max(16.0 * g.P, 64.0 / gp.short_scale);
    g.max_panel = std::numbers::pi / gp.short_scale;
    return g;
}

// R_p = p^2 (s^2 - eta^2) + V^ (s^2 + s c - eta), the part of the C_{N,ell} summand
// left after the scattering equation removes eta (V^/2 + W).
inline double cnl_remainder(double p, double eta, double v_hat) {
    const double s = std::sinh(eta);
    const double c = std::cosh(eta);
    // s^2 - eta^2 and s^2 + s c - eta, expanded where cancellation would dominate.
    double s2_minus_eta2;
    double mixed;
    if (std::fabs(eta) < 1e-3) {
        const double e2 = eta * eta;
        s2_minus_eta2 = e2 * e2 / 3.0 * (1.0 + 2.0 * e2 / 15.0);
        mixed = e2 * (1.0 + eta * (2.0 / 3.0 + eta * (1.0 / 3.0 + eta * 2.0 / 15.0)));
    } else {
        s2_minus_eta2 = s * s - eta * eta;
        mixed = s * s + s * c - eta;
    }
    return p * p * s2_minus_eta2 + v_hat * mixed;
}

// C_{N,ell}. Beyond n_max the summand is p^2 s^2 + ... = eta (V^/2 + W) + R_p by the
// scattering equation; the eta (V^/2 + W) and V^ eta parts are resummed exactly in
// position space and the fast-decaying R_p is bounded.
inline CnlResult c_nl(const CorrelationProfiles& pr, const CorrelationTables& t, const QuadraticCoefficients& coeffs,
                      std::int64_t n_max, double tol, const CoefficientModel* model = nullptr) {
    CnlResult out;
    const double n = static_cast<double>(pr.params.particle_count);
    if (pr.sol_ell.wavenumber == 0.0) return out;
    out.leading = 0.5 * (n - 1.0) * t.v_hat0;

    CompensatedSum direct, resummed_part, v_eta_part;
    double c_rem = 0.0;
    double p_last = 0.0;
    for (std::size_t i = 0; i < coeffs.size() && coeffs[i].index <= n_max; ++i) {
        const auto& c = coeffs[i];
        const double w = static_cast<double>(c.multiplicity);
        const double p2 = c.p * c.p;
        const double s = c.sigma, g = c.gamma, eta = c.eta, vh = t.v_hat[i];
        const double summand = p2 * s * s + vh * (s * s + s * g) + eta * (t.v_eta[i] - vh * t.eta0) / (2.0 * n) +
                               c.d * eta;
        direct.add(w * summand);
        resummed_part.add(w * eta * (0.5 * vh + t.w[i]));
        v_eta_part.add(w * vh * eta);
        p_last = c.p;
    }
    for (std::size_t i = 0; i < coeffs.size() && coeffs[i].index <= n_max; ++i) {
        const auto& c = coeffs[i];
        if (c.p < 0.5 * p_last) continue;
        const double rem = cnl_remainder(c.p, c.eta, t.v_hat[i]);
        c_rem = std::max(c_rem, std::fabs(rem) * std::pow(c.p, 6));
    }
    // int eta_check (W + V/2) dx, over the full support of eta_check.
    const auto v_fn = pr.v_ell.fn;
    const auto w_fn = pr.w_source.fn;
    RadialProfile source{pr.w_source.breaks, [v_fn, w_fn](double r) { return w_fn(r) + 0.5 * v_fn(r); },
                         ProfileLabel::product};
    const double full = radial_fourier(multiply(pr.eta_check, source), 0.0, tol);
    const double tail_a = full - t.eta0 * (t.w0 + 0.5 * t.v_hat0) - resummed_part.value();
    const double tail_b = -(t.eta0 / (2.0 * n)) * (t.v_eta0 - t.v_hat0 * t.eta0 - v_eta_part.value());
    out.shell_sum = direct.value();
    out.tail_correction = tail_a + tail_b;
    if (model != nullptr) {
        const auto grid = tail_grid(pr.params, n_max);
        out.remainder_tail = continuum_tail(
            [model](double p) { return cnl_remainder(p, model->eta(p), model->v_hat(p)); }, grid.P, grid.P_far,
            grid.max_panel, kTailTolScale * tol, 6);
        out.tail_correction += out.remainder_tail.value;
        // The continuum rule is checked against the exact shells in (n_max / 2, n_max].
        auto term = [model](double p) { return cnl_remainder(p, model->eta(p), model->v_hat(p)); };
        const double p_half = momentum_tail_start(n_max / 2);
        CompensatedSum band;
        for (std::size_t i = 0; i < coeffs.size() && coeffs[i].index <= n_max; ++i) {
            const auto& c = coeffs[i];
            if (c.index > n_max / 2) band.add(static_cast<double>(c.multiplicity) * cnl_remainder(c.p, c.eta, t.v_hat[i]));
        }
        const auto band_integral = continuum_tail(term, p_half, grid.P, grid.max_panel, kTailTolScale * tol, 6);
        out.discretization_check = band.value() - band_integral.value;
        out.tail_estimate = std::fabs(out.discretization_check) + out.remainder_tail.far_estimate +
                            out.remainder_tail.quad_error;
    } else {
        const double rem_bound =
            p_last > 0.0 ? c_rem / (6.0 * detail::pi * detail::pi * std::pow(p_last, 3)) : 0.0;
        out.tail_estimate = std::fabs(out.tail_correction) + rem_bound;
    }
    out.value = out.leading + out.shell_sum + out.tail_correction;
    return out;
}

// Vacuum shift with its shells beyond n_max replaced by a continuum integral.
inline VacuumShift vacuum_shift_with_tail(const GasParameters& gp, const QuadraticCoefficients& coeffs,
                                          const CoefficientModel& model, std::int64_t n_max, double tol) {
    auto out = vacuum_quadratic_shift(coeffs, n_max);
    if (coeffs.empty()) return out;
    auto term = [&model](double p) {
        const double eta = model.eta(p);
        const double vg = model.vg(p);
        auto c = make_shell_coefficients({0, 1, p}, eta, model.d(p), vg);
        c.g_coef = g_coefficient_from_scattering(p, eta, vg, model.w(p));
        return vacuum_summand(c);
    };
    const auto grid = tail_grid(gp, n_max);
    const auto tail = continuum_tail(term, grid.P, grid.P_far, grid.max_panel, kTailTolScale * tol, 6);
    CompensatedSum band;
    for (const auto& c : coeffs) {
        if (c.index > n_max) break;
        if (c.index > n_max / 2) band.add(static_cast<double>(c.multiplicity) * vacuum_summand(c));
    }
    const auto band_integral = continuum_tail(term, momentum_tail_start(n_max / 2), grid.P, grid.max_panel, kTailTolScale * tol, 6);
    out.tail_correction = tail.value;
    out.discretization_check = band.value() - band_integral.value;
    out.value += tail.value;
    out.tail_estimate = std::fabs(out.discretization_check) + tail.far_estimate + tail.quad_error;
    return out;
}

struct EnergyOptions {
    std::int64_t n_max = 10'000;
    std::int64_t m_max = 80;
    std::int64_t n_chi = 200'000;
    std::int64_t lhy_n_ext = 0;
    std::int64_t n_switch = kDefaultSwitchShell;
    double tol = 1e-10;
    unsigned workers = 1;
};

struct EnergyReport {
    GasParameters params;
    std::vector<std::string> warnings;
    EnergyOptions options;

    CnlResult cnl;
    VacuumShift vacuum;
    double mvac = 0.0;

    double closed_mean_field = 0.0;
    double i0_chi_route = 0.0;
    ChiSquareReport chi;
    LatticeConstant i0_cube;
    LatticeConstant e_lam;
    double constant_i0 = 0.0;
    double constant_elambda = 0.0;
    LhySum lhy;
    double total_i0 = 0.0;
    double total_elambda = 0.0;
    double delta = 0.0;        // mvac - total_i0
    double abs_delta = 0.0;
    double exact_bracket_half_sum = 0.0;  // (1/2) sum e_N(p) over shells <= n_max, Vg in place of 8 pi a
    double fixed_bracket_half_sum = 0.0;  // -(1/2) sum lhy_bracket(p, 8 pi a) over the same shells
    double max_spectrum_deviation = 0.0;
};

struct EnergyInputs {
    CorrelationProfiles profiles;
    CorrelationTables tables;
    QuadraticCoefficients coeffs;
};

inline EnergyInputs prepare_energy_inputs(const GasParameters& gp, const EnergyOptions& opt) {
    EnergyInputs in;
    in.profiles = build_profiles(gp);
    in.tables = build_tables(in.profiles, {opt.n_max, opt.tol, opt.workers, opt.n_switch});
    in.coeffs = build_coefficients(in.tables, opt.n_max);
    return in;
}

inline double spectrum_reference(double p, double a) {
    const double p2 = p * p;
    return std::sqrt(p2 * p2 + 16.0 * detail::pi * a * p2);
}

inline EnergyReport compute_energy(const GasParameters& gp, const EnergyOptions& opt, const EnergyInputs& in) {
    EnergyReport rep;
    rep.params = gp;
    rep.warnings = validate(gp);
    rep.options = opt;
    const double a = gp.scattering_length;

    const CoefficientModel model(in.profiles, opt.tol);
    rep.cnl = c_nl(in.profiles, in.tables, in.coeffs, opt.n_max, opt.tol, &model);
    rep.vacuum = vacuum_shift_with_tail(gp, in.coeffs, model, opt.n_max, opt.tol);
    rep.mvac = rep.cnl.value + rep.vacuum.value;

    rep.closed_mean_field = 4.0 * detail::pi * a * static_cast<double>(gp.particle_count - 1);
    const auto cube = cube_cosine_sum(opt.m_max, LatticeScale::integer);
    rep.i0_cube = i_zero_from(cube);
    rep.e_lam = e_lambda_from(cube);
    rep.chi = chisq_identity_check(gp.reference_scale, rep.i0_cube, std::max(opt.n_chi, opt.n_max));
    rep.i0_chi_route = rep.chi.i0_chi_route;
    rep.constant_i0 = 6.0 * detail::pi * a * a * rep.i0_chi_route;
    rep.constant_elambda = rep.e_lam.value * a * a;
    rep.lhy = lhy_sum(a, opt.n_max, opt.lhy_n_ext);
    rep.total_i0 = closed_form_target(gp.particle_count, a, ConstantRoute::i0, rep.i0_chi_route, 0.0, rep.lhy.value);
    rep.total_elambda =
        closed_form_target(gp.particle_count, a, ConstantRoute::e_lambda, 0.0, rep.e_lam.value, rep.lhy.value);
    rep.delta = detail::positive_zero(rep.mvac - rep.total_i0);
    rep.abs_delta = std::fabs(rep.delta);

    CompensatedSum exact, fixed;
    double dev = 0.0;
    for (const auto& c : in.coeffs) {
        const double w = static_cast<double>(c.multiplicity);
        exact.add(-0.5 * w * lhy_bracket(c.p, c.vg));
        fixed.add(-0.5 * w * lhy_bracket(c.p, 8.0 * detail::pi * a));
        const double ref = spectrum_reference(c.p, a);
        dev = std::max(dev, std::fabs(c.dispersion - ref) / ref);
    }
    rep.exact_bracket_half_sum = detail::positive_zero(exact.value());
    rep.fixed_bracket_half_sum = detail::positive_zero(fixed.value());
    rep.max_spectrum_deviation = dev;
    rep.mvac = detail::positive_zero(rep.mvac);
    return rep;
}

inline EnergyReport compute_energy(const GasParameters& gp, const EnergyOptions& opt) {
    validate(gp);
    return compute_energy(gp, opt, prepare_energy_inputs(gp, opt));
}

}  // namespace lhy
