// Acceptance criteria 1-11. `lhy_acceptance K` checks criterion K; with no argument
// every criterion runs. One line per criterion: "criterion K: PASS|FAIL  <details>".
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "lhy/io.hpp"

namespace {

using namespace lhy;

constexpr double kPi = std::numbers::pi;
const std::array<std::int64_t, 5> kSweep{250, 500, 1000, 2000, 4000};

GasParameters sweep_point(std::int64_t N) { return {1.0, N, std::pow(static_cast<double>(N), -0.8), 0.25}; }

struct Outcome {
    bool pass = true;
    std::string details;
};

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

Outcome criterion_1() {
    const GasParameters gp{1.0, 10'000, 1e-2, 0.25};
    const auto s = solve_neumann(gp, gp.short_scale);
    const double x = gp.scattering_length / (static_cast<double>(gp.particle_count) * gp.short_scale);
    const double expansion = 3.0 * x / (gp.short_scale * gp.short_scale) * (1.0 + 1.8 * x);
    const double rel = std::fabs(s.eigenvalue - expansion) / expansion;
    constexpr int reps = 1000;
    const auto t0 = std::chrono::steady_clock::now();
    double sink = 0.0;
    for (int i = 0; i < reps; ++i) sink += solve_neumann(gp, gp.short_scale).eigenvalue;
    const double per_call = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
    Outcome o;
    o.pass = rel <= 5e-4 && s.residual < 1e-12 && per_call < 1e-3 && sink > 0.0;
    o.details = "relative deviation " + fmt(rel) + " (<= 5e-4), residual " + fmt(s.residual) + " (< 1e-12), " +
                fmt(per_call * 1e3) + " ms per solve (< 1 ms)";
    return o;
}

Outcome criterion_2() {
    double worst_flux = 0.0;
    double worst_omega = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
        for (std::int64_t N : {1000, 10000}) {
            for (double ell : {0.1, 0.01}) {
                const auto ii = measure::integral_identities({a, N, ell, 0.25});
                worst_flux = std::max(worst_flux, ii.flux_ratio);
                worst_omega = std::max(worst_omega, ii.omega_ratio);
            }
        }
    }
    Outcome o;
    o.pass = worst_flux <= 5.0 && worst_omega <= 5.0;
    o.details = "max |N lambda int chi f^2 - 4 pi a| N ell / a^2 = " + fmt(worst_flux) +
                " (<= 5), max |int omega - (2/5) pi a ell^2 / N| N^2 / (a^2 ell) = " + fmt(worst_omega) + " (<= 5)";
    return o;
}

Outcome criterion_3() {
    double omega = 0.0;
    double chi = 0.0;
    for (auto N : kSweep) {
        const auto cf = measure::closed_form_agreement(sweep_point(N), 10'000, 1e-10);
        omega = std::max(omega, cf.omega_max_rel);
        chi = std::max(chi, cf.chi_max_rel);
    }
    Outcome o;
    o.pass = omega <= 1e-8 && chi <= 1e-10;
    o.details = "omega hat max relative deviation " + fmt(omega) + " (<= 1e-8), chi hat " + fmt(chi) +
                " (<= 1e-10), shells |p| <= 200 pi over the sweep";
    return o;
}

Outcome criterion_4() {
    double worst = 0.0;
    for (auto N : kSweep) {
        const auto gp = sweep_point(N);
        const auto pr = build_profiles(gp);
        const auto t = build_tables(pr, {10'000, 1e-10, 1, kDefaultSwitchShell});
        worst = std::max(worst, measure::table_bounds(pr, t).residual_ratio);
    }
    Outcome o;
    o.pass = worst <= 1.0;
    o.details = "max |residual| / (10 tol (1 + p^2 |eta_p|)) = " + fmt(worst) + " (<= 1) over the sweep, n <= 10^4";
    return o;
}

Outcome criterion_5() {
    double worst = 0.0;
    double worst_abs = 0.0;
    for (auto N : kSweep) {
        const auto gp = sweep_point(N);
        const auto pr = build_profiles(gp);
        const auto t = build_tables(pr, {12'100, 1e-10, 1, kDefaultSwitchShell});
        const auto tr = measure::d_two_route(t, gp.short_scale, 100, 10'000);
        worst = std::max(worst, tr.worst_ratio);
        worst_abs = std::max(worst_abs, tr.worst_abs);
    }
    Outcome o;
    o.pass = worst <= 1.0;
    o.details = "max |D radial - D convolution| / tail estimate = " + fmt(worst) + " (<= 1), largest deviation " +
                fmt(worst_abs) + "; |p| <= 20 pi, convolution to 200 pi";
    return o;
}

Outcome criterion_6() {
    Outcome o;
    measure::CoefficientBounds worst;
    worst.gap_margin = INFINITY;
    for (auto N : kSweep) {
        const auto gp = sweep_point(N);
        const auto in = prepare_energy_inputs(gp, EnergyOptions{});
        const auto cb = measure::coefficient_bounds(in.coeffs, gp.scattering_length);
        worst.gap_margin = std::min(worst.gap_margin, cb.gap_margin);
        worst.g_over_f = std::max(worst.g_over_f, cb.g_over_f);
        worst.g_decay_ratio = std::max(worst.g_decay_ratio, cb.g_decay_ratio);
        worst.tau_decay_ratio = std::max(worst.tau_decay_ratio, cb.tau_decay_ratio);
        worst.diagonal_identity = std::max(worst.diagonal_identity, cb.diagonal_identity);
        worst.off_diagonal_identity = std::max(worst.off_diagonal_identity, cb.off_diagonal_identity);
        worst.tanh_identity = std::max(worst.tanh_identity, cb.tanh_identity);
    }
    o.pass = worst.gap_margin >= 0.0 && worst.g_over_f < 1.0 && worst.g_decay_ratio <= calibrated::g_decay &&
             worst.tau_decay_ratio <= calibrated::tau_decay && worst.diagonal_identity <= 1e-10 &&
             worst.off_diagonal_identity <= 1e-10;
    o.details = "min (F - p^2/2)/p^2 = " + fmt(worst.gap_margin) + ", max |G|/F = " + fmt(worst.g_over_f) +
                ", max |G| p^2 / a = " + fmt(worst.g_decay_ratio) + " (<= " + fmt(calibrated::g_decay) +
                "), max |tau| p^4 / a = " + fmt(worst.tau_decay_ratio) + " (<= " + fmt(calibrated::tau_decay) +
                "), diagonalization " + fmt(std::max(worst.diagonal_identity, worst.off_diagonal_identity)) +
                " (<= 1e-10)";
    return o;
}

struct SweepData {
    std::vector<double> spectrum;
    std::vector<double> delta;
};

const SweepData& sweep_data() {
    static const SweepData data = [] {
        SweepData d;
        for (auto N : kSweep) {
            const auto rep = compute_energy(sweep_point(N), EnergyOptions{});
            d.spectrum.push_back(rep.max_spectrum_deviation);
            d.delta.push_back(rep.abs_delta);
        }
        return d;
    }();
    return data;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s + "]";
}

Outcome criterion_7() {
    const auto& d = sweep_data();
    Outcome o;
    o.pass = strictly_decreasing(d.spectrum);
    o.details = "max relative spectrum deviation along N = 250..4000: " + list(d.spectrum);
    return o;
}

Outcome criterion_8() {
    const auto& d = sweep_data();
    const double ratio = d.delta.back() / d.delta.front();
    Outcome o;
    o.pass = strictly_decreasing(d.delta) && ratio < 0.5;
    o.details = "Delta along N = 250..4000: " + list(d.delta) + ", Delta(4000)/Delta(250) = " + fmt(ratio) + " (< 0.5)";
    return o;
}

Outcome criterion_9() {
    const auto l1 = lhy_sum(1.0, 10'000);
    const auto l2 = lhy_sum(1.0, 20'000);
    const double lhy_rel = std::fabs(l1.value - l2.value) / std::fabs(l2.value);
    const auto s60 = cube_cosine_sum(60, LatticeScale::integer);
    const auto s80 = cube_cosine_sum(80, LatticeScale::integer);
    const double di0 = std::fabs(i_zero_from(s60).value - i_zero_from(s80).value);
    const double del = std::fabs(e_lambda_from(s60).value - e_lambda_from(s80).value);
    // The 26 vectors of the M = 1 cube: 6 at |v| = 1, 12 at sqrt 2, 8 at sqrt 3.
    double hand = 0.0;
    for (int x = -1; x <= 1; ++x)
        for (int y = -1; y <= 1; ++y)
            for (int z = -1; z <= 1; ++z) {
                const int n2 = x * x + y * y + z * z;
                if (n2 > 0) hand += std::cos(std::sqrt(n2)) / n2;
            }
    const double closed = 6.0 * std::cos(1.0) + 6.0 * std::cos(std::sqrt(2.0)) + 8.0 / 3.0 * std::cos(std::sqrt(3.0));
    const double dm1 = std::max(std::fabs(s80.partial_first - hand), std::fabs(s80.partial_first - closed));
    Outcome o;
    o.pass = lhy_rel <= 1e-8 && di0 <= 1e-3 && del <= 1e-3 && dm1 <= 1e-14;
    o.details = "lhy_sum relative change 10^4 -> 2 10^4: " + fmt(lhy_rel) + " (<= 1e-8); |I0(60) - I0(80)| = " +
                fmt(di0) + ", |e_Lambda(60) - e_Lambda(80)| = " + fmt(del) + " (<= 1e-3); S(1) deviation " + fmt(dm1);
    return o;
}

Outcome criterion_10() {
    const auto i0 = i_zero(80);
    Outcome o;
    std::string detail;
    std::vector<double> totals;
    for (double ell0 : {0.125, 0.25}) {
        const auto r = chisq_identity_check(ell0, i0);
        const bool ok = std::fabs(r.residual) <= r.combined_tail;
        o.pass = o.pass && ok;
        detail += "ell0 = " + fmt(ell0) + ": |lhs - rhs| = " + fmt(std::fabs(r.residual)) + " (<= tail " +
                  fmt(r.combined_tail) + "); ";
        totals.push_back(closed_form_target(1000, 1.0, ConstantRoute::i0, r.i0_chi_route, 0.0, 0.0));
    }
    const double rel = std::fabs(totals[0] - totals[1]) / std::fabs(totals[1]);
    o.pass = o.pass && rel <= 1e-8;
    o.details = detail + "closed form at ell0 = 1/8 vs 1/4: relative " + fmt(rel) + " (<= 1e-8)";
    return o;
}

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string("\"") + LHY_CLI_PATH + "\" " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (p == nullptr) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Outcome criterion_11() {
    const std::string base = "energy --a 1 --N 500 --ell-exponent 0.8 --ell0 0.25";
    const auto r1 = run_cli(base + " --workers 1");
    const auto r1b = run_cli(base + " --workers 1");
    const auto r2 = run_cli(base + " --workers 3");
    const bool identical = r1.code == 0 && !r1.out.empty() && r1.out == r1b.out && r1.out == r2.out;
    const int c0 = run_cli("energy --a 0 --N 1000").code;
    const int c1 = run_cli("energy --ell 0.6").code;
    const int c2 = run_cli("energy --a 2 --N 5 --ell 0.45 --ell0 0.5 --n-max 50").code;
    const int c3 = run_cli("verify --N 250 --perturb-eta 0.1").code;
    Outcome o;
    o.pass = identical && c0 == 0 && c1 == 1 && c2 == 2 && c3 == 3;
    o.details = std::string("JSON byte-identical across reruns and worker counts: ") + (identical ? "yes" : "no") +
                "; exit codes " + std::to_string(c0) + "/" + std::to_string(c1) + "/" + std::to_string(c2) + "/" +
                std::to_string(c3) + " (expected 0/1/2/3)";
    return o;
}

const std::array<std::function<Outcome()>, 11> kCriteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                         criterion_5, criterion_6, criterion_7, criterion_8,
                                                         criterion_9, criterion_10, criterion_11};

bool report(int k) {
    Outcome o;
    try {
        o = kCriteria[static_cast<std::size_t>(k - 1)]();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d: %s  %s\n", k, o.pass ? "PASS" : "FAIL", o.details.c_str());
    std::fflush(stdout);
    return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) {
        const int k = std::atoi(argv[1]);
        if (k < 1 || k > 11) {
            std::fprintf(stderr, "criterion must be 1..11\n");
            return 2;
        }
        return report(k) ? 0 : 1;
    }
    bool all = true;
    for (int k = 1; k <= 11; ++k) all = report(k) && all;
    return all ? 0 : 1;
}
