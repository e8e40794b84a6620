// Measures the bound ratios behind lhy::calibrated over the reference grid and
// prints the maximum of each; used to refresh the frozen constants.
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "lhy/verify.hpp"

int main(int argc, char** argv) {
    const std::int64_t n_max = argc > 1 ? std::stoll(argv[1]) : 10'000;
    const unsigned workers = argc > 2 ? static_cast<unsigned>(std::stoul(argv[2])) : 1;
    std::vector<lhy::GasParameters> grid;
    for (double a : {0.5, 1.0, 2.0}) {
        for (std::int64_t n : {250, 500, 1000, 2000, 4000, 10000}) {
            grid.push_back({a, n, std::pow(static_cast<double>(n), -0.8), 0.25});
        }
        for (double ell : {0.1, 0.01}) grid.push_back({a, 1000, ell, 0.25});
    }
    std::map<std::string, double> worst;
    for (const auto& gp : grid) {
        lhy::VerifyOptions opt;
        opt.n_max = n_max;
        opt.workers = workers;
        opt.n_conv = 2500;
        const auto rep = lhy::run_verification(gp, opt);
        for (const auto& r : rep.rows) {
            worst[r.name] = std::max(worst[r.name], r.measured);
            if (r.status == lhy::CheckStatus::fail)
                std::printf("  fail a=%g N=%lld ell=%g %s %.6g > %.6g\n", gp.scattering_length,
                            static_cast<long long>(gp.particle_count), gp.short_scale, r.name.c_str(), r.measured,
                            r.threshold);
        }
        std::fflush(stdout);
    }
    for (const auto& [name, v] : worst) std::printf("%-32s %.6g\n", name.c_str(), v);
}
