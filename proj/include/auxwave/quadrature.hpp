#pragma once

#include <complex>
#include <functional>
#include <stdexcept>

namespace auxwave {

struct QuadratureSpec {
    double rel_tol = 1e-10;
    double abs_floor = 1e-14;
    int max_subdiv = 10000;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod (G7/K15) over a real interval for a complex-valued
// integrand: repeatedly bisects the subinterval with the largest Kronrod
// error estimate until the summed estimate meets
// max(spec.abs_floor, spec.rel_tol * |integral|). Deterministic: evaluation
// and accumulation order depend only on the inputs. Throws QuadratureError
// when max_subdiv bisections are not enough.
std::complex<double> integrate(const std::function<std::complex<double>(double)>& f,
                               double a, double b, const QuadratureSpec& spec);

} // namespace auxwave
