#pragma once

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "auxwave/expr.hpp"
#include "auxwave/quadrature.hpp"

namespace auxwave {

using CNum = std::complex<double>;
using Bindings = std::map<std::string, CNum>;

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnboundSymbol : NumericError {
    explicit UnboundSymbol(const std::string& name)
        : NumericError("unbound symbol: " + name), symbol(name) {}
    std::string symbol;
};
// A denominator fell below pole_tol * (1 + |numerator|); the evaluation
// point is treated as excluded rather than returning a huge value.
struct PoleError : NumericError {
    using NumericError::NumericError;
};

struct EvalCtx {
    Bindings bindings;
    QuadratureSpec quad;
    bool pole_check = false;
    double pole_tol = 1e-6;
};

// Recursive complex evaluation. Unevaluated integrals int(f, s) integrate f
// along the real axis from 0 to the (real) bound value of s with the ctx
// quadrature spec; nested integrals recurse. Non-finite results raise
// NumericError. Deterministic: serial evaluation in canonical operand order.
CNum eval(const Expr& e, const EvalCtx& ctx);
CNum eval(const Expr& e, const Bindings& bindings);

// Central finite differences with one Richardson extrapolation step, O(h^4).
// order 1..3; default step (per order: 1e-3, 1e-3, 5e-3) * (1 + |x0|),
// h <= 0 selects the default.
CNum numeric_diff(const std::function<CNum(CNum)>& f, CNum x0, int order,
                  double h = 0.0);
CNum numeric_diff(const Expr& e, const std::string& var, CNum x0, int order,
                  const EvalCtx& ctx, double h = 0.0);

struct Sample {
    double x = 0;
    CNum value;
    bool excluded = false;
    std::string reason;
};

// Uniform grid over [a, b] with npoints samples (npoints >= 2, or 1 when
// a == b); pole checking is always on, and PoleError / non-finite values
// mark the sample excluded instead of failing the whole sweep.
std::vector<Sample> sample_curve(const Expr& e, const std::string& var,
                                 double a, double b, int npoints,
                                 EvalCtx ctx = {});

struct ExcludedPoint {
    double x = 0;
    std::string reason;
};

struct ResidualReport {
    double max_abs = 0;
    double mean_abs = 0;
    double worst_point = 0;
    std::size_t n_points = 0;
    std::vector<ExcludedPoint> excluded;
    std::vector<std::pair<std::string, double>> per_term; // label -> max |value|
    double tolerance = 0;
    bool pass = false;
};

// true iff |a-b| <= tol * max(1, |a|) at every sample row.
bool equal_numeric(const Expr& a, const Expr& b,
                   const std::vector<Bindings>& samples, double tol,
                   const QuadratureSpec& quad = {});

} // namespace auxwave
