#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "auxwave/expr.hpp"

namespace auxwave {

struct NotPolynomial : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A polynomial in one distinguished symbol with expression coefficients that
// are free of that symbol. coeffs[i] multiplies var^i; the zero polynomial
// has an empty coefficient list, otherwise the leading coefficient is not
// structurally zero. Coefficients are kept in expanded normal form so that
// cancellation between terms is structural.
struct PolyInZ {
    std::string var;
    std::vector<Expr> coeffs;

    long long degree() const { return static_cast<long long>(coeffs.size()) - 1; }
    Expr coeff(size_t i) const {
        return i < coeffs.size() ? coeffs[i] : Expr::num(0);
    }
    bool is_zero() const { return coeffs.empty(); }
};

// Collects e as a polynomial in z. Throws NotPolynomial if z appears inside
// a function argument or integral, or with a non-integer or negative power.
PolyInZ poly_collect(const Expr& e, const std::string& z);

// Sum c_i z^i, normalized. For inputs already in expanded form this inverts
// poly_collect structurally.
Expr poly_reconstruct(const PolyInZ& p);

PolyInZ pz_const(const Expr& c, const std::string& var);
PolyInZ pz_add(const PolyInZ& a, const PolyInZ& b);
PolyInZ pz_mul(const PolyInZ& a, const PolyInZ& b);
PolyInZ pz_scale(const PolyInZ& p, const Expr& s);
PolyInZ pz_pow(const PolyInZ& p, long long k);

// d/dxi of p(xi, z(xi)) when z satisfies the auxiliary equation
// z' = P z + Q z^n: coefficients differentiate in xi, and each z^i
// contributes i c_i P z^i + i c_i Q z^(i+n-1).
PolyInZ pz_diff_xi(const PolyInZ& p, const Expr& P, const Expr& Q, long long n,
                   const std::string& xi);

} // namespace auxwave
