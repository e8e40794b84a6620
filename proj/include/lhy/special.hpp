#pragma once

#include <cmath>

// Cancellation-free elementary combinations used by the scattering profiles.
namespace lhy::special {

// sin(x)/x
inline double sinc(double x) noexcept {
    const double x2 = x * x;
    if (std::fabs(x) < 1e-3) return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0));
    return std::sin(x) / x;
}

// 1 - sin(x)/x
inline double one_minus_sinc(double x) noexcept {
    const double x2 = x * x;
    if (std::fabs(x) < 0.2) {
        // x^2/6 - x^4/120 + x^6/5040 - x^8/362880 + x^10/39916800
        return x2 / 6.0 *
               (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0 * (1.0 - x2 / 156.0)))));
    }
    return 1.0 - std::sin(x) / x;
}

// (tan(x) - x) / x
inline double tan_excess(double x) noexcept {
    if (std::fabs(x) < 0.1) {
        const double x2 = x * x;
        return x2 * (1.0 / 3.0 +
                     x2 * (2.0 / 15.0 +
                           x2 * (17.0 / 315.0 +
                                 x2 * (62.0 / 2835.0 +
                                       x2 * (1382.0 / 155925.0 +
                                             x2 * (21844.0 / 6081075.0 + x2 * (929569.0 / 638512875.0)))))));
    }
    return (std::tan(x) - x) / x;
}

// d/dx of tan_excess
inline double tan_excess_derivative(double x) noexcept {
    if (std::fabs(x) < 0.1) {
        const double x2 = x * x;
        return x * (2.0 / 3.0 +
                    x2 * (8.0 / 15.0 +
                          x2 * (102.0 / 315.0 +
                                x2 * (496.0 / 2835.0 +
                                      x2 * (13820.0 / 155925.0 + x2 * (262128.0 / 6081075.0))))));
    }
    const double c = std::cos(x);
    return (x / (c * c) - std::tan(x)) / (x * x);
}

// (x cot(x) - 1) / x^2, which tends to -1/3 at the origin
inline double cot_defect(double x) noexcept {
    const double x2 = x * x;
    if (std::fabs(x) < 0.2) {
        return -(1.0 / 3.0 +
                 x2 * (1.0 / 45.0 +
                       x2 * (2.0 / 945.0 +
                             x2 * (1.0 / 4725.0 + x2 * (2.0 / 93555.0 + x2 * (1382.0 / 638512875.0))))));
    }
    return (x / std::tan(x) - 1.0) / x2;
}

// (4 pi / p) * integral_0^R r^m sin(p r) dr for m in {0, 1, 3}, closed form away from
// p R = 0 and a power series near it.
inline double ball_moment_hat(int m, double R, double p) noexcept {
    constexpr double four_pi = 4.0 * 3.14159265358979323846;
    const double x = p * R;
    if (x < 2.0) {
        // sum_k (-1)^k p^{2k} R^{2k+m+2} / ((2k+1)! (2k+m+2))
        double term = std::pow(R, m + 2);
        double fact = 1.0;
        double sum = 0.0;
        for (int k = 0; k < 26; ++k) {
            if (k > 0) {
                fact *= (2.0 * k) * (2.0 * k + 1.0);
                term *= -(p * R) * (p * R);
            }
            sum += term / (fact * (2.0 * k + m + 2.0));
        }
        return four_pi * sum;
    }
    const double s = std::sin(x);
    const double c = std::cos(x);
    const double p2 = p * p;
    switch (m) {
        case 0:
            return four_pi / p2 * (1.0 - c);
        case 1:
            return four_pi / p2 * (s / p - R * c);
        default:
            return four_pi / p2 * (-6.0 * s / (p2 * p) + 6.0 * R * c / p2 + 3.0 * R * R * s / p - R * R * R * c);
    }
}

}  // namespace lhy::special
