#pragma once

#include <string>
#include <vector>

#include "auxwave/expr.hpp"
#include "auxwave/numeric.hpp"

namespace auxwave {

// z'(xi) = P(xi) z + Q(xi) z^n
struct AuxEquation {
    Expr P, Q;
    long long n = 2;
};

enum class SolutionForm { Closed, Quadrature };

struct AuxSolution {
    Expr z; // contains the integration-constant symbol C1
    SolutionForm form = SolutionForm::Closed;
    std::string notes;
};

// z' = a z + b z^k with constant real coefficients
struct ClassicalBernoulli {
    Rational a, b;
    long long k = 2;
    Rational xi0;
};
enum class ClassicalBranch { I, II };

// Antiderivative in xi by a closed rule table: polynomials, polynomial *
// exp(linear) (by parts), constant * exp(quadratic) (erf form; sin/cos of a
// linear argument are first rewritten through complex exponentials),
// constant * exp(b*e^(C xi) + d) (E1 form), and single sin/cos factors.
// Terms outside the table come back wrapped in an unevaluated int(f, xi)
// node; the additive constant is always dropped (absorbed downstream into
// C1).
Expr antiderivative(const Expr& f, const std::string& xi);

// exp(F) with F' = P.
Expr integrating_factor(const AuxEquation& eq);

// Linearization w = z^(1-n):
// z = [e^((1-n)F) (C1 + (1-n) Int Q e^(-(1-n)F))]^(1/(1-n)), F = Int P,
// principal branch for the fractional power when n > 2.
AuxSolution solve_general(const AuxEquation& eq);

struct CatalogEntry {
    int index = 0;
    AuxEquation eq;
    AuxSolution sol;
    // correspondence between this z's C1 and solve_general's C1 under the
    // rule-table antiderivatives (identity for every case; recorded so the
    // cross-check is explicit, not assumed)
    std::string c1_map;
};

const std::vector<CatalogEntry>& catalog();
const CatalogEntry& catalog_case(int index); // throws std::out_of_range

// Branch I:  [ a e^(a(k-1)(xi+xi0)) / (1 - b e^(a(k-1)(xi+xi0))) ]^(1/(k-1))
// Branch II: same with the numerator negated. Principal (k-1)-th root.
// The symbolic form keeps a, b, xi0 as symbols; the bound form substitutes.
Expr classical_solution(long long k, ClassicalBranch branch);
Expr classical_solution(const ClassicalBernoulli& cb, ClassicalBranch branch);

// Longest pole-free window found by scanning [-6, 6] in steps of 0.05 with
// pole checking on; additionally requires |z| <= value_cap so a residual
// with an absolute tolerance is meaningful. Among windows at least
// min_width wide the one with the smallest max |z| wins; otherwise the
// widest run is returned with found = false when it is narrower than
// min_width.
struct PoleFreeWindow {
    double lo = 0, hi = 0;
    bool found = false;
    double max_abs_z = 0;
};
PoleFreeWindow find_pole_free_interval(const Expr& z, const Bindings& params,
                                       double min_width = 2.0,
                                       double value_cap = 20.0);

// Grid residual |z' - P z - Q z^n|. z' is symbolic when z is closed-form;
// when z carries unevaluated integrals it uses order-1 numeric
// differentiation with the quadrature tightened to rel 1e-13 / abs 1e-15
// inside the stencil. Grid points where a denominator collapses are
// excluded and logged; a report with no valid points fails.
ResidualReport verify_aux(const AuxEquation& eq, const AuxSolution& sol,
                          const Bindings& params, double lo, double hi,
                          int npoints, double tol);

} // namespace auxwave
