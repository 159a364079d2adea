// Convergence run behind the fractional-derivative tolerances used by the
// acceptance binary. Writes nu,steps,max_error,tolerance to stdout.

#include <cmath>
#include <cstdio>

#include "cq.hpp"

int main() {
    std::printf("nu,steps,max_error,tolerance\n");
    for (double nu : {0.25, 0.5, 0.75}) {
        for (int n : {160, 320, 640}) {
            const auto r = viscowave::cq::fractional_derivative_check(nu, 1.0 / n, n, 0.5);
            // Twice the observed error, rounded up to two significant digits.
            const double raw = 2.0 * r.max_error_from;
            const double scale = std::pow(10.0, std::floor(std::log10(raw)) - 1.0);
            std::printf("%g,%d,%.6e,%.1e\n", nu, n, r.max_error_from, std::ceil(raw / scale) * scale);
        }
    }
}
