#pragma once

#include <complex>

namespace auxwave {

// erf on the complex plane. Maclaurin series after reflecting into the
// quadrant Re >= 0, Im >= 0 (odd symmetry, then conjugate symmetry, so both
// symmetries hold bit-exactly); continued fraction for erfc when Re > 2.
// Relative error in the series region is about eps * e^(2 Re(z)^2), i.e.
// full precision on the imaginary axis and ~1e-12 at the Re = 2 boundary.
// Arguments with |Im| large enough that e^(|z|^2) overflows (|z| ~ 26) are
// outside the supported domain and surface as a non-finite evaluation error.
std::complex<double> erf_complex(std::complex<double> z);

// Exponential integral E1, principal branch with the cut along (-inf, 0].
// Arguments on the cut take the limit from the upper half-plane:
// E1(-x + i0) = -Ei(x) - i*pi for x > 0. Power series for small |z|,
// continued fraction for Re >= 0 and |z| > 4, asymptotic expansion for
// Re < 0 and |z| > 20 (accuracy there degrades to ~1e-9; the catalog only
// evaluates E1 on the real axis and at moderate complex arguments).
// Throws std::domain_error at z = 0.
std::complex<double> ei1_complex(std::complex<double> z);

// Real exponential integral Ei(x) for x > 0 (used for the E1 cut limit).
double ei_real(double x);

} // namespace auxwave
