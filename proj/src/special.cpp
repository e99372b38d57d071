#include "auxwave/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace auxwave {

namespace {

using C = std::complex<double>;

constexpr double kEulerGamma = 0.5772156649015328606065120900824024;
constexpr double kPi = 3.141592653589793238462643383279503;
constexpr double kSqrtPi = 1.772453850905516027298167483341145;

// modified Lentz; a(k), b(k) supply the k-th partial numerator/denominator,
// b(0) is the leading term
template <typename FA, typename FB>
C lentz(FA a, FB b, int max_iter) {
    const double tiny = 1e-290;
    C f = b(0);
    if (std::abs(f) < tiny) f = tiny;
    C Cc = f, D = 0.0;
    for (int k = 1; k <= max_iter; ++k) {
        C ak = a(k), bk = b(k);
        D = bk + ak * D;
        if (std::abs(D) < tiny) D = tiny;
        Cc = bk + ak / Cc;
        if (std::abs(Cc) < tiny) Cc = tiny;
        D = 1.0 / D;
        C delta = Cc * D;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) return f;
    }
    return f;
}

C erf_series(C z) {
    // 2/sqrt(pi) * sum (-1)^n z^(2n+1) / (n! (2n+1))
    C z2 = z * z;
    C term = z;
    C sum = z;
    for (int n = 1; n < 600; ++n) {
        term *= -z2 / static_cast<double>(n);
        C add = term / static_cast<double>(2 * n + 1);
        sum += add;
        if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return 2.0 / kSqrtPi * sum;
}

C erfc_cf(C z) {
    // sqrt(pi) e^(z^2) erfc(z) = 1/(z + (1/2)/(z + 1/(z + (3/2)/(z + ...)))),
    // valid for Re z > 0
    C cf = lentz([](int k) { return C(k / 2.0); }, [&](int) { return z; }, 300);
    return std::exp(-z * z) / (kSqrtPi * cf);
}

C e1_series(C z) {
    // E1(z) = -gamma - Log z + sum (-1)^(n+1) z^n / (n n!)
    C term = 1.0;
    C sum = 0.0;
    for (int n = 1; n < 600; ++n) {
        term *= -z / static_cast<double>(n);
        C add = -term / static_cast<double>(n);
        sum += add;
        if (std::abs(add) < 1e-18 * (std::abs(sum) + 1e-300)) break;
    }
    return -kEulerGamma - std::log(z) + sum;
}

C e1_cf(C z) {
    // E1(z) = e^(-z) / (z + 1 - 1/(z + 3 - 4/(z + 5 - 9/(z + 7 - ...))))
    C cf = lentz(
        [](int k) { return C(-static_cast<double>(k) * static_cast<double>(k)); },
        [&](int k) { return z + C(2.0 * k + 1.0); }, 400);
    return std::exp(-z) / cf;
}

C e1_asymptotic(C z) {
    // e^(-z)/z * sum (-1)^k k!/z^k, truncated at the smallest term
    C sum = 1.0;
    C term = 1.0;
    double best = std::numeric_limits<double>::max();
    for (int k = 1; k < 200; ++k) {
        term *= -static_cast<double>(k) / z;
        double mag = std::abs(term);
        if (mag > best) break; // divergent tail reached
        best = mag;
        sum += term;
        if (mag < 1e-17 * std::abs(sum)) break;
    }
    return std::exp(-z) / z * sum;
}

} // namespace

std::complex<double> erf_complex(std::complex<double> z) {
    if (z.real() < 0 || (z.real() == 0 && z.imag() < 0)) return -erf_complex(-z);
    if (z.imag() < 0) return std::conj(erf_complex(std::conj(z)));
    if (z.real() <= 2.0) return erf_series(z);
    return 1.0 - erfc_cf(z);
}

double ei_real(double x) {
    if (!(x > 0)) throw std::domain_error("ei_real requires x > 0");
    // gamma + ln x + sum x^n/(n n!), all terms positive: no cancellation
    double term = 1.0, sum = 0.0;
    for (int n = 1; n < 5000; ++n) {
        term *= x / n;
        double add = term / n;
        sum += add;
        if (add < 1e-17 * sum) break;
    }
    return kEulerGamma + std::log(x) + sum;
}

std::complex<double> ei1_complex(std::complex<double> z) {
    if (z.real() == 0 && z.imag() == 0)
        throw std::domain_error("E1 is singular at 0");
    if (z.imag() == 0) {
        double x = z.real();
        if (x < 0) return {-ei_real(-x), -kPi}; // limit from the upper half-plane
        return x <= 4.0 ? e1_series(C(x)) : e1_cf(C(x));
    }
    double m = std::abs(z);
    if (z.real() >= 0) return m <= 4.0 ? e1_series(z) : e1_cf(z);
    return m <= 20.0 ? e1_series(z) : e1_asymptotic(z);
}

} // namespace auxwave
