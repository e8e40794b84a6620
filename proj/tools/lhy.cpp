#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <CLI11.hpp>

#include "lhy/io.hpp"

namespace {

enum ExitCode : int { kOk = 0, kInvalid = 1, kNumerical = 2, kVerifyFailed = 3 };

struct RunConfig {
    double a = 1.0;
    std::int64_t N = 1000;
    std::optional<double> ell;
    double ell_exponent = 0.8;
    double ell0 = 0.25;
    std::int64_t n_max = 10'000;
    std::int64_t n_switch = lhy::kDefaultSwitchShell;
    std::int64_t conv_cutoff = 10'000;
    std::int64_t m_max = 80;
    double quad_tol = 1e-10;
    std::string format = "json";
    std::string out;
    unsigned workers = 1;
    double perturb_eta = 0.0;
    std::vector<std::string> n_list;  // raw tokens; an empty flag yields no N
};

std::vector<std::int64_t> parse_n_list(const std::vector<std::string>& tokens) {
    std::vector<std::int64_t> out;
    for (const auto& t : tokens) {
        if (t.empty()) continue;
        std::int64_t v = 0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
            throw lhy::InvalidParameter("--N-list entry '" + t + "' is not an integer");
        }
        out.push_back(v);
    }
    return out;
}

lhy::GasParameters gas_parameters(const RunConfig& c, std::int64_t N) {
    const double ell = c.ell ? *c.ell : std::pow(static_cast<double>(N), -c.ell_exponent);
    return {c.a, N, ell, c.ell0};
}

lhy::EnergyOptions energy_options(const RunConfig& c) {
    if (c.n_max < 1) throw lhy::InvalidParameter("--n-max must be at least 1");
    if (c.n_switch < 1) throw lhy::InvalidParameter("--n-switch must be at least 1");
    if (c.m_max < 8) throw lhy::InvalidParameter("--m-max must be at least 8");
    if (!(c.quad_tol > 0.0)) throw lhy::InvalidParameter("--quad-tol must be positive");
    lhy::EnergyOptions o;
    o.n_max = c.n_max;
    o.n_switch = c.n_switch;
    o.m_max = c.m_max;
    o.tol = c.quad_tol;
    o.workers = c.workers;
    return o;
}

void emit(const RunConfig& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) throw lhy::InvalidParameter("cannot open output file " + c.out);
    f << text;
}

std::string dump(const lhy::Json& j) { return j.dump(2) + "\n"; }

int cmd_energy(const RunConfig& c) {
    if (c.format != "json") throw lhy::InvalidParameter("energy output is JSON only");
    const auto gp = gas_parameters(c, c.N);
    for (const auto& w : lhy::validate(gp)) std::cerr << "warning: " << w << '\n';
    const auto rep = lhy::compute_energy(gp, energy_options(c));
    emit(c, dump(lhy::energy_json(rep, {c.conv_cutoff})));
    return kOk;
}

int cmd_spectrum(const RunConfig& c) {
    const auto gp = gas_parameters(c, c.N);
    for (const auto& w : lhy::validate(gp)) std::cerr << "warning: " << w << '\n';
    const auto in = lhy::prepare_energy_inputs(gp, energy_options(c));
    const auto rows = lhy::spectrum_rows(in.coeffs, gp.scattering_length);
    if (c.format == "csv") {
        std::ostringstream os;
        lhy::write_spectrum_csv(os, rows);
        emit(c, os.str());
    } else {
        emit(c, dump(lhy::spectrum_json(gp, rows)));
    }
    return kOk;
}

int cmd_verify(const RunConfig& c) {
    const auto gp = gas_parameters(c, c.N);
    for (const auto& w : lhy::validate(gp)) std::cerr << "warning: " << w << '\n';
    const auto eo = energy_options(c);
    lhy::VerifyOptions o;
    o.n_max = eo.n_max;
    o.n_conv = c.conv_cutoff;
    o.m_max = eo.m_max;
    o.tol = eo.tol;
    o.workers = eo.workers;
    o.perturb_eta = c.perturb_eta;
    const auto rep = lhy::run_verification(gp, o);
    if (c.format == "csv") {
        std::ostringstream os;
        lhy::write_verify_csv(os, rep);
        emit(c, os.str());
    } else {
        emit(c, dump(lhy::verify_json(rep)));
    }
    for (const auto& r : rep.rows) {
        if (r.status == lhy::CheckStatus::fail) {
            std::cerr << "FAIL " << r.name << ": measured " << r.measured << " > " << r.threshold << '\n';
        }
    }
    return rep.passed() ? kOk : kVerifyFailed;
}

int cmd_sweep(const RunConfig& c) {
    const auto n_list = parse_n_list(c.n_list);
    if (n_list.empty()) throw lhy::InvalidParameter("--N-list must name at least one N");
    const auto eo = energy_options(c);
    for (auto N : n_list) lhy::validate(gas_parameters(c, N));
    std::vector<lhy::SweepRow> rows;
    for (auto N : n_list) {
        const auto gp = gas_parameters(c, N);
        const auto rep = lhy::compute_energy(gp, eo);
        rows.push_back({N, gp.short_scale, rep.mvac, rep.total_i0, rep.delta});
    }
    if (c.format == "csv") {
        std::ostringstream os;
        lhy::write_sweep_csv(os, rows);
        emit(c, os.str());
    } else {
        emit(c, dump(lhy::sweep_json(rows)));
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground-state energy of a dilute Bose gas on the unit torus: Bogoliubov numerics"};
    app.set_config("--config", "", "flat key = value file mirroring the long flags");
    app.allow_config_extras(false);
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig c;
    double ell = 0.0;
    app.add_option("--a", c.a, "scattering length")->capture_default_str();
    app.add_option("--N", c.N, "particle number")->capture_default_str();
    auto* ell_opt = app.add_option("--ell", ell, "short-range cutoff ell");
    auto* exp_opt = app.add_option("--ell-exponent", c.ell_exponent, "ell = N^-exponent")->capture_default_str();
    ell_opt->excludes(exp_opt);
    app.add_option("--ell0", c.ell0, "reference scale ell0")->capture_default_str();
    app.add_option("--n-max", c.n_max, "largest shell |p|^2 / (2 pi)^2 summed exactly")->capture_default_str();
    app.add_option("--n-switch", c.n_switch, "shells beyond this use interpolated coefficients")
        ->capture_default_str();
    app.add_option("--conv-cutoff", c.conv_cutoff, "shell cutoff of the D_p lattice convolution")
        ->capture_default_str();
    app.add_option("--m-max", c.m_max, "largest cube cutoff of the conditionally convergent sums")
        ->capture_default_str();
    app.add_option("--quad-tol", c.quad_tol, "absolute quadrature tolerance")->capture_default_str();
    app.add_option("--format", c.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--out", c.out, "output file (default: standard output)");
    app.add_option("--workers", c.workers, "worker threads")->check(CLI::Range(1u, 1024u))->capture_default_str();
    app.add_option("--perturb-eta", c.perturb_eta, "test only: scale the eta table by 1 + x before verifying");
    app.add_option("--N-list", c.n_list, "particle numbers for the sweep")
        ->expected(0, CLI::detail::expected_max_vector_size)
        ->delimiter(',');

    auto* energy = app.add_subcommand("energy", "energy report (JSON)");
    auto* spectrum = app.add_subcommand("spectrum", "per-shell Bogoliubov coefficients and dispersion");
    auto* verify = app.add_subcommand("verify", "run the invariant checks; exit 3 on any failure");
    auto* sweep = app.add_subcommand("sweep", "energies along a list of N");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalid;
    }
    if (ell_opt->count() > 0) c.ell = ell;

    try {
        if (*energy) return cmd_energy(c);
        if (*spectrum) return cmd_spectrum(c);
        if (*verify) return cmd_verify(c);
        if (*sweep) return cmd_sweep(c);
    } catch (const lhy::InvalidParameter& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kInvalid;
    } catch (const lhy::ConvergenceError& e) {
        std::cerr << "convergence failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const lhy::ModelRegimeError& e) {
        std::cerr << "model regime: " << e.what() << '\n';
        return kNumerical;
    } catch (const lhy::ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kNumerical;
    }
    return kInvalid;
}
