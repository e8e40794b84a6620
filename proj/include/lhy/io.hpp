#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "energy.hpp"
#include "verify.hpp"

namespace lhy {

using Json = nlohmann::ordered_json;

// Shortest round-trip decimal form; independent of the global locale.
inline std::string format_number(double x) {
    if (!std::isfinite(x)) throw ConvergenceError("non-finite value in output");
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x + 0.0);
    return {buf, res.ptr};
}

inline std::string format_number(std::int64_t x) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

namespace detail {

inline double finite(double x) {
    if (!std::isfinite(x)) throw ConvergenceError("non-finite value in output");
    return x + 0.0;
}

inline Json params_json(const GasParameters& gp) {
    return Json{{"a", finite(gp.scattering_length)},
                {"N", gp.particle_count},
                {"ell", finite(gp.short_scale)},
                {"ell0", finite(gp.reference_scale)}};
}

inline Json continuum_tail_json(const ContinuumTail& t) {
    return Json{{"value", finite(t.value)},
                {"far_estimate", finite(t.far_estimate)},
                {"quad_error", finite(t.quad_error)},
                {"P", finite(t.P)},
                {"P_far", finite(t.P_far)}};
}

}  // namespace detail

struct CliCutoffs {
    std::int64_t conv_cutoff = 10'000;
};

inline Json energy_json(const EnergyReport& r, const CliCutoffs& extra = {}) {
    using detail::finite;
    const auto grid = tail_grid(r.params, r.options.n_max);
    Json j;
    j["params"] = detail::params_json(r.params);
    j["c_nl"] = finite(r.cnl.value);
    j["vacuum_shift"] = finite(r.vacuum.value);
    j["mvac"] = finite(r.mvac);
    j["closed_form"] = Json{{"mean_field", finite(r.closed_mean_field)},
                            {"constant_i0", finite(r.constant_i0)},
                            {"constant_elambda", finite(r.constant_elambda)},
                            {"lhy_sum", finite(r.lhy.value)},
                            {"total_i0", finite(r.total_i0)},
                            {"total_elambda", finite(r.total_elambda)}};
    j["delta"] = finite(r.delta);
    j["cutoffs"] = Json{{"n_max", r.options.n_max},
                        {"n_switch", r.options.n_switch},
                        {"conv_cutoff", extra.conv_cutoff},
                        {"m_max", r.options.m_max},
                        {"n_chi", std::max(r.options.n_chi, r.options.n_max)},
                        {"quad_tol", finite(r.options.tol)},
                        {"tail_P", finite(grid.P)},
                        {"tail_P_far", finite(grid.P_far)}};
    j["tail_estimates"] = Json{
        {"c_nl",
         {{"leading", finite(r.cnl.leading)},
          {"shell_sum", finite(r.cnl.shell_sum)},
          {"tail_correction", finite(r.cnl.tail_correction)},
          {"remainder_tail", detail::continuum_tail_json(r.cnl.remainder_tail)},
          {"discretization_check", finite(r.cnl.discretization_check)},
          {"tail_estimate", finite(r.cnl.tail_estimate)}}},
        {"vacuum_shift",
         {{"tail_correction", finite(r.vacuum.tail_correction)},
          {"discretization_check", finite(r.vacuum.discretization_check)},
          {"tail_estimate", finite(r.vacuum.tail_estimate)}}},
        {"lhy_sum", {{"tail_estimate", finite(r.lhy.tail_estimate)}, {"n_ext", r.lhy.n_ext}}},
        {"constant_i0",
         {{"i0", finite(r.i0_chi_route)},
          {"chisq_residual", finite(r.chi.residual)},
          {"chisq_tail", finite(r.chi.combined_tail)},
          {"i0_cube", finite(r.i0_cube.value)},
          {"i0_cube_band", finite(r.i0_cube.band)}}},
        {"constant_elambda", {{"e_lambda", finite(r.e_lam.value)}, {"band", finite(r.e_lam.band)}}},
        {"spectrum_max_relative_deviation", finite(r.max_spectrum_deviation)}};
    return j;
}

inline const std::vector<std::string>& spectrum_header() {
    static const std::vector<std::string> h{"n", "p", "F", "G", "tau", "epsilon", "reference", "relative_deviation"};
    return h;
}

struct SpectrumRow {
    std::int64_t n = 0;
    double p = 0.0, f = 0.0, g = 0.0, tau = 0.0, epsilon = 0.0, reference = 0.0, relative_deviation = 0.0;
};

inline std::vector<SpectrumRow> spectrum_rows(const QuadraticCoefficients& coeffs, double a) {
    std::vector<SpectrumRow> rows;
    rows.reserve(coeffs.size());
    for (const auto& c : coeffs) {
        const double ref = spectrum_reference(c.p, a);
        rows.push_back({c.index, c.p, c.f_coef, c.g_coef, c.tau, c.dispersion, ref,
                        std::fabs(c.dispersion - ref) / ref});
    }
    return rows;
}

inline void write_spectrum_csv(std::ostream& os, const std::vector<SpectrumRow>& rows) {
    const auto& h = spectrum_header();
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << '\n';
    for (const auto& r : rows) {
        os << format_number(r.n) << ',' << format_number(r.p) << ',' << format_number(r.f) << ','
           << format_number(r.g) << ',' << format_number(r.tau) << ',' << format_number(r.epsilon) << ','
           << format_number(r.reference) << ',' << format_number(r.relative_deviation) << '\n';
    }
}

inline Json spectrum_json(const GasParameters& gp, const std::vector<SpectrumRow>& rows) {
    using detail::finite;
    Json arr = Json::array();
    for (const auto& r : rows) {
        arr.push_back(Json{{"n", r.n},
                           {"p", finite(r.p)},
                           {"F", finite(r.f)},
                           {"G", finite(r.g)},
                           {"tau", finite(r.tau)},
                           {"epsilon", finite(r.epsilon)},
                           {"reference", finite(r.reference)},
                           {"relative_deviation", finite(r.relative_deviation)}});
    }
    return Json{{"params", detail::params_json(gp)}, {"rows", std::move(arr)}};
}

struct SweepRow {
    std::int64_t N = 0;
    double ell = 0.0, mvac = 0.0, closed_total = 0.0, delta = 0.0;
};

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
    os << "N,ell,mvac,closed_total,delta\n";
    for (const auto& r : rows) {
        os << format_number(r.N) << ',' << format_number(r.ell) << ',' << format_number(r.mvac) << ','
           << format_number(r.closed_total) << ',' << format_number(r.delta) << '\n';
    }
}

inline Json sweep_json(const std::vector<SweepRow>& rows) {
    using detail::finite;
    Json arr = Json::array();
    for (const auto& r : rows) {
        arr.push_back(Json{{"N", r.N},
                           {"ell", finite(r.ell)},
                           {"mvac", finite(r.mvac)},
                           {"closed_total", finite(r.closed_total)},
                           {"delta", finite(r.delta)}});
    }
    return Json{{"rows", std::move(arr)}};
}

inline const char* to_string(CheckStatus s) noexcept { return s == CheckStatus::pass ? "PASS" : "FAIL"; }

inline void write_verify_csv(std::ostream& os, const VerifyReport& rep) {
    os << "name,measured,threshold,status\n";
    for (const auto& r : rep.rows) {
        // A failing measurement may be non-finite; it is still reported.
        const std::string m = std::isfinite(r.measured) ? format_number(r.measured) : "nan";
        os << r.name << ',' << m << ',' << format_number(r.threshold) << ',' << to_string(r.status) << '\n';
    }
}

inline Json verify_json(const VerifyReport& rep) {
    Json arr = Json::array();
    for (const auto& r : rep.rows) {
        Json row{{"name", r.name}};
        row["measured"] = std::isfinite(r.measured) ? Json(r.measured + 0.0) : Json(nullptr);
        row["threshold"] = r.threshold;
        row["status"] = to_string(r.status);
        arr.push_back(std::move(row));
    }
    return Json{{"params", detail::params_json(rep.params)}, {"checks", std::move(arr)}, {"passed", rep.passed()}};
}

}  // namespace lhy
