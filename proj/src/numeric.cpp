#include "auxwave/numeric.hpp"

#include <cmath>

#include "auxwave/special.hpp"

namespace auxwave {

namespace {

constexpr double kPi = 3.141592653589793238462643383279503;

bool finite(CNum v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

CNum ipow(CNum base, long long e) {
    if (e < 0) return 1.0 / ipow(base, -e);
    CNum acc = 1.0, b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

CNum pow_value(CNum bv, const Expr& exponent, const EvalCtx& ctx);

CNum eval_impl(const Expr& e, const EvalCtx& ctx) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Num:
            return CNum(static_cast<double>(n.num.num()) /
                        static_cast<double>(n.num.den()));
        case Kind::Const:
            return n.name == "pi" ? CNum(kPi) : CNum(0.0, 1.0);
        case Kind::Sym: {
            auto it = ctx.bindings.find(n.name);
            if (it == ctx.bindings.end()) throw UnboundSymbol(n.name);
            return it->second;
        }
        case Kind::Sum: {
            CNum acc = 0.0;
            for (const auto& a : n.args) acc += eval_impl(a, ctx);
            return acc;
        }
        case Kind::Prod: {
            CNum acc = 1.0;
            double den_mag = 1.0, num_mag = 1.0;
            bool has_den = false;
            for (const auto& f : n.args) {
                CNum v;
                if (f.kind() == Kind::Pow && f.node().args[1].is_num() &&
                    f.node().args[1].as_num().is_negative()) {
                    CNum bv = eval_impl(f.node().args[0], ctx);
                    double p = -f.node().args[1].as_num().to_double();
                    den_mag *= std::pow(std::abs(bv), p);
                    has_den = true;
                    v = pow_value(bv, f.node().args[1], ctx);
                } else {
                    v = eval_impl(f, ctx);
                    num_mag *= std::abs(v);
                }
                acc *= v;
            }
            if (ctx.pole_check && has_den &&
                den_mag < ctx.pole_tol * (num_mag + 1.0))
                throw PoleError("denominator vanishes");
            return acc;
        }
        case Kind::Pow: {
            CNum bv = eval_impl(n.args[0], ctx);
            if (ctx.pole_check && n.args[1].is_num() &&
                n.args[1].as_num().is_negative()) {
                double p = -n.args[1].as_num().to_double();
                if (std::pow(std::abs(bv), p) < ctx.pole_tol * 2.0)
                    throw PoleError("denominator vanishes");
            }
            return pow_value(bv, n.args[1], ctx);
        }
        case Kind::Fun: {
            CNum a = eval_impl(n.args[0], ctx);
            switch (n.fun) {
                case FunId::Exp: return std::exp(a);
                case FunId::Ln:  return std::log(a);
                case FunId::Sin: return std::sin(a);
                case FunId::Cos: return std::cos(a);
                case FunId::Erf: return erf_complex(a);
                case FunId::Ei1:
                    try {
                        return ei1_complex(a);
                    } catch (const std::domain_error& ex) {
                        throw NumericError(ex.what());
                    }
            }
            throw NumericError("unknown function");
        }
        case Kind::Int: {
            auto it = ctx.bindings.find(n.name);
            if (it == ctx.bindings.end()) throw UnboundSymbol(n.name);
            CNum upper = it->second;
            if (std::abs(upper.imag()) > 1e-12 * (1.0 + std::abs(upper.real())))
                throw NumericError(
                    "integral bound must be real (straight real-axis path)");
            const Expr& integrand = n.args[0];
            EvalCtx inner = ctx;
            auto f = [&](double t) {
                inner.bindings[n.name] = CNum(t);
                return eval_impl(integrand, inner);
            };
            return integrate(f, 0.0, upper.real(), ctx.quad);
        }
    }
    throw NumericError("unknown node");
}

CNum pow_value(CNum bv, const Expr& exponent, const EvalCtx& ctx) {
    if (exponent.is_num()) {
        const Rational& r = exponent.as_num();
        if (r.is_integer() && r.num() >= -64 && r.num() <= 64)
            return ipow(bv, r.num());
        return std::pow(bv, CNum(r.to_double()));
    }
    return std::pow(bv, eval_impl(exponent, ctx));
}

double default_step(int order, CNum x0) {
    double base = order == 3 ? 5e-3 : 1e-3;
    return base * (1.0 + std::abs(x0));
}

} // namespace

CNum eval(const Expr& e, const EvalCtx& ctx) {
    CNum v = eval_impl(e, ctx);
    if (!finite(v)) throw NumericError("evaluation produced a non-finite value");
    return v;
}

CNum eval(const Expr& e, const Bindings& bindings) {
    EvalCtx ctx;
    ctx.bindings = bindings;
    return eval(e, ctx);
}

CNum numeric_diff(const std::function<CNum(CNum)>& f, CNum x0, int order,
                  double h) {
    if (order < 1 || order > 3)
        throw NumericError("numeric_diff supports orders 1..3");
    if (h <= 0) h = default_step(order, x0);
    auto at = [&](int k) { return f(x0 + CNum(k * h)); };
    switch (order) {
        case 1:
            return (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
        case 2:
            return (-at(-2) + 16.0 * at(-1) - 30.0 * at(0) + 16.0 * at(1) -
                    at(2)) /
                   (12.0 * h * h);
        default:
            return (at(-3) - 8.0 * at(-2) + 13.0 * at(-1) - 13.0 * at(1) +
                    8.0 * at(2) - at(3)) /
                   (8.0 * h * h * h);
    }
}

CNum numeric_diff(const Expr& e, const std::string& var, CNum x0, int order,
                  const EvalCtx& ctx, double h) {
    EvalCtx local = ctx;
    return numeric_diff(
        [&](CNum x) {
            local.bindings[var] = x;
            return eval(e, local);
        },
        x0, order, h);
}

std::vector<Sample> sample_curve(const Expr& e, const std::string& var,
                                 double a, double b, int npoints, EvalCtx ctx) {
    if (npoints < 1 || (npoints == 1 && a != b))
        throw NumericError("sample_curve needs npoints >= 2 (or 1 when a == b)");
    ctx.pole_check = true;
    std::vector<Sample> out;
    out.reserve(npoints);
    for (int i = 0; i < npoints; ++i) {
        double x = npoints == 1 ? a : a + (b - a) * i / (npoints - 1);
        Sample s;
        s.x = x;
        ctx.bindings[var] = CNum(x);
        try {
            s.value = eval(e, ctx);
        } catch (const PoleError& pe) {
            s.excluded = true;
            s.reason = pe.what();
        } catch (const UnboundSymbol&) {
            throw; // configuration problem, not a pole
        } catch (const NumericError& ne) {
            s.excluded = true;
            s.reason = ne.what();
        }
        out.push_back(std::move(s));
    }
    return out;
}

bool equal_numeric(const Expr& a, const Expr& b,
                   const std::vector<Bindings>& samples, double tol,
                   const QuadratureSpec& quad) {
    for (const auto& binding : samples) {
        EvalCtx ctx;
        ctx.bindings = binding;
        ctx.quad = quad;
        CNum va = eval(a, ctx);
        CNum vb = eval(b, ctx);
        if (std::abs(va - vb) > tol * std::max(1.0, std::abs(va))) return false;
    }
    return true;
}

} // namespace auxwave
