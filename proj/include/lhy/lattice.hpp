#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "summation.hpp"

namespace lhy {

inline constexpr std::int64_t kDefaultShellBudget = 2'000'000;

// Which lattice a shell index refers to: |p|^2 = n on Z^3, |p|^2 = 4 pi^2 n on 2 pi Z^3.
enum class LatticeScale { integer, momentum };

inline constexpr double lattice_spacing(LatticeScale s) noexcept {
    return s == LatticeScale::integer ? 1.0 : 2.0 * std::numbers::pi;
}

struct MomentumShell {
    std::int64_t index = 0;
    std::int64_t multiplicity = 0;
    double norm = 0.0;
};

struct CubeCutoff {
    std::int64_t M = 1;
};

// Legendre: n is a sum of three squares unless n = 4^a (8b + 7).
inline bool is_sum_of_three_squares(std::int64_t n) noexcept {
    if (n < 0) return false;
    if (n == 0) return true;
    while (n % 4 == 0) n /= 4;
    return n % 8 != 7;
}

// r3(n) for n in [0, n_max]: r2 from a double loop, then one pass per z.
inline std::vector<std::int64_t> three_square_counts(std::int64_t n_max,
                                                     std::int64_t budget = kDefaultShellBudget) {
    if (n_max < 0) throw InvalidParameter("n_max must be nonnegative");
    if (n_max > budget) {
        throw ResourceError("n_max = " + std::to_string(n_max) + " exceeds the shell budget " +
                            std::to_string(budget));
    }
    const auto size = static_cast<std::size_t>(n_max) + 1;
    std::vector<std::int64_t> r2(size, 0);
    const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n_max))) + 1;
    for (std::int64_t x = -root; x <= root; ++x) {
        for (std::int64_t y = -root; y <= root; ++y) {
            const std::int64_t m = x * x + y * y;
            if (m <= n_max) ++r2[static_cast<std::size_t>(m)];
        }
    }
    std::vector<std::int64_t> r3(size, 0);
    for (std::int64_t z = -root; z <= root; ++z) {
        const std::int64_t z2 = z * z;
        if (z2 > n_max) continue;
        const auto limit = static_cast<std::size_t>(n_max - z2);
        std::int64_t* out = r3.data() + z2;
        const std::int64_t* in = r2.data();
        for (std::size_t m = 0; m <= limit; ++m) out[m] += in[m];
    }
    return r3;
}

inline std::vector<MomentumShell> shells_from_counts(const std::vector<std::int64_t>& r3,
                                                     LatticeScale scale = LatticeScale::momentum) {
    std::vector<MomentumShell> shells;
    const double h = lattice_spacing(scale);
    for (std::size_t n = 1; n < r3.size(); ++n) {
        if (r3[n] == 0) continue;
        shells.push_back({static_cast<std::int64_t>(n), r3[n], h * std::sqrt(static_cast<double>(n))});
    }
    return shells;
}

inline std::vector<MomentumShell> enumerate_shells(std::int64_t n_max,
                                                   LatticeScale scale = LatticeScale::momentum,
                                                   std::int64_t budget = kDefaultShellBudget) {
    if (n_max < 1) throw InvalidParameter("n_max must be at least 1");
    return shells_from_counts(three_square_counts(n_max, budget), scale);
}

// Visits every v in [-M, M]^3 \ {0} in lexicographic (x, y, z) order.
template <class Visitor>
void cube_iterate(CubeCutoff cutoff, Visitor&& visit) {
    if (cutoff.M < 1) throw InvalidParameter("cube cutoff M must be at least 1");
    const std::int64_t M = cutoff.M;
    for (std::int64_t x = -M; x <= M; ++x) {
        for (std::int64_t y = -M; y <= M; ++y) {
            for (std::int64_t z = -M; z <= M; ++z) {
                if (x == 0 && y == 0 && z == 0) continue;
                visit(x, y, z);
            }
        }
    }
}

// Partial sums S(M) = sum over the cube cutoff M of term(|v|^2), for M = 0..M_max.
// The term depends on |v|^2 only, so it is tabulated once per squared norm.
template <class Term>
std::vector<double> cube_partial_sums(std::int64_t M_max, Term&& term) {
    if (M_max < 1) throw InvalidParameter("cube cutoff M must be at least 1");
    const std::int64_t n2_max = 3 * M_max * M_max;
    std::vector<double> table(static_cast<std::size_t>(n2_max) + 1, 0.0);
    for (std::int64_t n = 1; n <= n2_max; ++n) table[static_cast<std::size_t>(n)] = term(n);

    std::vector<CompensatedSum> layer(static_cast<std::size_t>(M_max) + 1);
    cube_iterate(CubeCutoff{M_max}, [&](std::int64_t x, std::int64_t y, std::int64_t z) {
        const std::int64_t linf = std::max({std::abs(x), std::abs(y), std::abs(z)});
        layer[static_cast<std::size_t>(linf)].add(table[static_cast<std::size_t>(x * x + y * y + z * z)]);
    });
    std::vector<double> partial(static_cast<std::size_t>(M_max) + 1, 0.0);
    CompensatedSum running;
    for (std::size_t M = 1; M < partial.size(); ++M) {
        running.add(layer[M].value());
        partial[M] = running.value();
    }
    return partial;
}

// Partial sums of cos(|p|)/|p|^2 over the cube cutoff of h Z^3 \ {0}.
inline std::vector<double> cosine_cube_partial_sums(std::int64_t M_max, LatticeScale scale) {
    const double h = lattice_spacing(scale);
    return cube_partial_sums(M_max, [h](std::int64_t n2) {
        const double p = h * std::sqrt(static_cast<double>(n2));
        return std::cos(p) / (p * p);
    });
}

}  // namespace lhy
