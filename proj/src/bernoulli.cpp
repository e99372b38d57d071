#include "auxwave/bernoulli.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "auxwave/poly.hpp"

namespace auxwave {

namespace {

// a term fell outside the antiderivative rule table
struct RuleMiss {};

std::optional<PolyInZ> as_poly(const Expr& e, const std::string& xi) {
    try {
        return poly_collect(e, xi);
    } catch (const NotPolynomial&) {
        return std::nullopt;
    }
}

Expr prodv(std::vector<Expr> v) {
    if (v.empty()) return Expr::num(1);
    if (v.size() == 1) return v[0];
    return Expr::prod(std::move(v));
}

PolyInZ pz_derivative(const PolyInZ& p, const std::string& xi) {
    PolyInZ d{p.var.empty() ? xi : p.var, {}};
    for (size_t i = 1; i < p.coeffs.size(); ++i)
        d.coeffs.push_back(expand(mul(Expr::num(static_cast<long long>(i)), p.coeffs[i])));
    while (!d.coeffs.empty() && d.coeffs.back().is_zero()) d.coeffs.pop_back();
    return d;
}

// Int p(xi) e^g dxi with g' = a constant in xi:
// e^g * sum_j (-1)^j p^(j)(xi) / a^(j+1)
Expr byparts_poly_exp(const PolyInZ& p, const Expr& g, const Expr& a,
                      const std::string& xi) {
    std::vector<Expr> terms;
    PolyInZ cur = p;
    long long j = 0;
    while (!cur.is_zero()) {
        terms.push_back(Expr::prod({Expr::num(j % 2 == 0 ? 1 : -1),
                                    poly_reconstruct(cur),
                                    Expr::pow(a, Expr::num(-(j + 1)))}));
        cur = pz_derivative(cur, xi);
        ++j;
    }
    if (terms.empty()) return Expr::num(0);
    return mul(Expr::fun(FunId::Exp, g), Expr::sum(std::move(terms)));
}

// Int c e^(s xi^2 + u xi + v) dxi, s != 0, by completing the square:
// c e^r (sqrt(pi)/2) (-s)^(-1/2) erf((-s)^(1/2) (xi + u/(2s))),
// r = v - u^2/(4s). Principal square roots throughout.
Expr gaussian_rule(const Expr& c, const Expr& s, const Expr& u, const Expr& v,
                   const std::string& xi) {
    Expr shift = div(u, mul(Expr::num(2), s));
    Expr r = sub(v, div(powi(u, 2), mul(Expr::num(4), s)));
    Expr ns = neg(s);
    Expr arg = mul(Expr::pow(ns, Expr::num(1, 2)), add(Expr::sym(xi), shift));
    return Expr::prod({Expr::num(1, 2), c, Expr::pow(Expr::pi(), Expr::num(1, 2)),
                       Expr::fun(FunId::Exp, r), Expr::pow(ns, Expr::num(-1, 2)),
                       Expr::fun(FunId::Erf, arg)});
}

struct EiParts {
    Expr beta, coef, delta; // g = beta e^(coef xi) + delta
};

// splits a factor that is (a power of) an exponential into its argument
std::optional<Expr> exp_factor_arg(const Expr& f) {
    if (f.kind() == Kind::Fun && f.node().fun == FunId::Exp)
        return f.node().args[0];
    if (f.kind() == Kind::Pow) {
        const Expr& base = f.node().args[0];
        const Expr& ex = f.node().args[1];
        if (base.kind() == Kind::Fun && base.node().fun == FunId::Exp &&
            ex.is_num() && ex.as_num().is_integer())
            return mul(ex, base.node().args[0]);
    }
    return std::nullopt;
}

std::optional<EiParts> match_exp_of_exp(const Expr& g, const std::string& xi) {
    std::vector<Expr> terms;
    if (g.kind() == Kind::Sum)
        terms = g.node().args;
    else
        terms.push_back(g);

    std::vector<Expr> deltas;
    std::optional<std::pair<Expr, Expr>> hit; // (beta, coef)
    for (const Expr& t : terms) {
        if (!contains_symbol(t, xi)) {
            deltas.push_back(t);
            continue;
        }
        std::vector<Expr> factors;
        if (t.kind() == Kind::Prod)
            factors = t.node().args;
        else
            factors.push_back(t);
        std::vector<Expr> gamma;
        std::optional<Expr> harg;
        for (const Expr& f : factors) {
            if (!contains_symbol(f, xi)) {
                gamma.push_back(f);
                continue;
            }
            auto a = exp_factor_arg(f);
            if (!a || harg) return std::nullopt;
            harg = a;
        }
        if (!harg) return std::nullopt;
        auto hp = as_poly(*harg, xi);
        if (!hp || hp->degree() != 1) return std::nullopt;
        if (hit) return std::nullopt; // exactly one exponential term
        gamma.push_back(Expr::fun(FunId::Exp, hp->coeff(0)));
        hit = std::make_pair(prodv(std::move(gamma)), hp->coeff(1));
    }
    if (!hit) return std::nullopt;
    return EiParts{hit->first, hit->second, Expr::sum(std::move(deltas))};
}

// Int c e^(beta e^(C xi) + delta) dxi = -(c e^delta / C) Ei1(-beta e^(C xi))
Expr ei1_rule(const Expr& c, const EiParts& m, const std::string& xi) {
    Expr inner = neg(mul(m.beta, Expr::fun(FunId::Exp, mul(m.coef, Expr::sym(xi)))));
    return Expr::prod({Expr::num(-1), c, Expr::fun(FunId::Exp, m.delta),
                       Expr::pow(m.coef, Expr::num(-1)),
                       Expr::fun(FunId::Ei1, inner)});
}

Expr poly_integral(const PolyInZ& p, const std::string& xi) {
    std::vector<Expr> parts;
    for (size_t i = 0; i < p.coeffs.size(); ++i)
        if (!p.coeffs[i].is_zero())
            parts.push_back(Expr::prod({Expr::num(1, static_cast<long long>(i) + 1),
                                        p.coeffs[i],
                                        powi(Expr::sym(xi), static_cast<long long>(i) + 1)}));
    return Expr::sum(std::move(parts));
}

Expr anti_term(const Expr& t, const std::string& xi) { // throws RuleMiss
    std::vector<Expr> factors;
    if (t.kind() == Kind::Prod)
        factors = t.node().args;
    else
        factors.push_back(t);

    std::vector<Expr> alpha;
    std::vector<Expr> expargs;
    std::vector<size_t> trig_idx;
    PolyInZ poly = pz_const(Expr::num(1), xi);
    for (size_t i = 0; i < factors.size(); ++i) {
        const Expr& f = factors[i];
        if (!contains_symbol(f, xi)) {
            alpha.push_back(f);
            continue;
        }
        if (auto a = exp_factor_arg(f)) {
            expargs.push_back(*a);
            continue;
        }
        if (f.kind() == Kind::Fun &&
            (f.node().fun == FunId::Sin || f.node().fun == FunId::Cos)) {
            trig_idx.push_back(i);
            continue;
        }
        if (auto p = as_poly(f, xi)) {
            poly = pz_mul(poly, *p);
            continue;
        }
        throw RuleMiss{};
    }

    if (!trig_idx.empty()) {
        const Expr& tf = factors[trig_idx[0]];
        Expr targ = tf.node().args[0];
        auto ta = as_poly(targ, xi);
        if (!ta || ta->degree() != 1) throw RuleMiss{};
        if (trig_idx.size() == 1 && expargs.empty() && poly.degree() == 0) {
            Expr c = mul(prodv(std::move(alpha)), poly.coeff(0));
            Expr a = ta->coeff(1);
            return tf.node().fun == FunId::Sin
                       ? mul(neg(div(c, a)), Expr::fun(FunId::Cos, targ))
                       : mul(div(c, a), Expr::fun(FunId::Sin, targ));
        }
        // mixed trig: rewrite one factor through complex exponentials and
        // retry, but only when the exponential arguments are polynomial
        // (otherwise no rule downstream can close the result)
        if (!expargs.empty() && !as_poly(Expr::sum(expargs), xi)) throw RuleMiss{};
        Expr iarg = mul(Expr::imag(), targ);
        Expr ep = Expr::fun(FunId::Exp, iarg);
        Expr em = Expr::fun(FunId::Exp, neg(iarg));
        Expr repl = tf.node().fun == FunId::Sin
                        ? mul(mul(Expr::num(-1, 2), Expr::imag()), sub(ep, em))
                        : mul(Expr::num(1, 2), add(ep, em));
        std::vector<Expr> rest;
        for (size_t i = 0; i < factors.size(); ++i)
            if (i != trig_idx[0]) rest.push_back(factors[i]);
        rest.push_back(repl);
        Expr conv = expand(Expr::prod(std::move(rest)));
        std::vector<Expr> terms;
        if (conv.kind() == Kind::Sum)
            terms = conv.node().args;
        else
            terms.push_back(conv);
        std::vector<Expr> parts;
        for (const Expr& sub : terms) {
            if (!contains_symbol(sub, xi))
                parts.push_back(mul(sub, Expr::sym(xi)));
            else
                parts.push_back(anti_term(sub, xi));
        }
        return Expr::sum(std::move(parts));
    }

    if (expargs.empty())
        return mul(prodv(std::move(alpha)), poly_integral(poly, xi));

    Expr g = Expr::sum(std::move(expargs));
    if (auto gp = as_poly(g, xi)) {
        if (gp->degree() <= 0) // the exponentials cancelled to a constant
            return mul(mul(prodv(std::move(alpha)), Expr::fun(FunId::Exp, g)),
                       poly_integral(poly, xi));
        if (gp->degree() == 1)
            return mul(prodv(std::move(alpha)),
                       byparts_poly_exp(poly, g, gp->coeff(1), xi));
        if (gp->degree() == 2 && poly.degree() == 0)
            return gaussian_rule(mul(prodv(std::move(alpha)), poly.coeff(0)),
                                 gp->coeff(2), gp->coeff(1), gp->coeff(0), xi);
        throw RuleMiss{};
    }
    if (poly.degree() == 0)
        if (auto m = match_exp_of_exp(g, xi))
            return ei1_rule(mul(prodv(std::move(alpha)), poly.coeff(0)), *m, xi);
    throw RuleMiss{};
}

} // namespace

Expr antiderivative(const Expr& f, const std::string& xi) {
    Expr ef = expand(f);
    std::vector<Expr> terms;
    if (ef.kind() == Kind::Sum)
        terms = ef.node().args;
    else
        terms.push_back(ef);
    std::vector<Expr> parts;
    for (const Expr& t : terms) {
        if (!contains_symbol(t, xi)) {
            parts.push_back(mul(t, Expr::sym(xi)));
            continue;
        }
        try {
            parts.push_back(anti_term(t, xi));
        } catch (const RuleMiss&) {
            parts.push_back(Expr::integral(t, xi));
        }
    }
    return Expr::sum(std::move(parts));
}

Expr integrating_factor(const AuxEquation& eq) {
    return Expr::fun(FunId::Exp, antiderivative(eq.P, "xi"));
}

AuxSolution solve_general(const AuxEquation& eq) {
    if (eq.n < 2)
        throw std::invalid_argument("solve_general requires n >= 2");
    const std::string xi = "xi";
    long long m = 1 - eq.n;
    Expr F = antiderivative(eq.P, xi);
    Expr emF = Expr::fun(FunId::Exp, mul(Expr::num(m), F));
    Expr enegmF = Expr::fun(FunId::Exp, mul(Expr::num(-m), F));
    Expr J = antiderivative(mul(Expr::num(m), mul(eq.Q, enegmF)), xi);
    Expr w = mul(emF, add(Expr::sym("C1"), J));
    Expr z = Expr::pow(w, Expr::num(1, m));

    AuxSolution sol;
    sol.z = z;
    sol.form = contains_integral(z) ? SolutionForm::Quadrature : SolutionForm::Closed;
    sol.notes = sol.form == SolutionForm::Closed
                    ? "closed form via the antiderivative rule table"
                    : "carries an unevaluated integral (quadrature from 0 at "
                      "evaluation time)";
    if (eq.n > 2) sol.notes += "; principal branch of the 1/(1-n) power";
    return sol;
}

Expr classical_solution(long long k, ClassicalBranch branch) {
    if (k < 2)
        throw std::invalid_argument("classical solution requires k >= 2");
    Expr a = Expr::sym("a");
    Expr b = Expr::sym("b");
    Expr E = Expr::fun(FunId::Exp, mul(mul(a, Expr::num(k - 1)),
                                       add(Expr::sym("xi"), Expr::sym("xi0"))));
    Expr numer = mul(a, E);
    if (branch == ClassicalBranch::II) numer = neg(numer);
    Expr den = sub(Expr::num(1), mul(b, E));
    return Expr::pow(div(numer, den), Expr::num(1, k - 1));
}

Expr classical_solution(const ClassicalBernoulli& cb, ClassicalBranch branch) {
    Expr z = classical_solution(cb.k, branch);
    z = substitute(z, "a", Expr::num(cb.a));
    z = substitute(z, "b", Expr::num(cb.b));
    z = substitute(z, "xi0", Expr::num(cb.xi0));
    return z;
}

PoleFreeWindow find_pole_free_interval(const Expr& z, const Bindings& params,
                                       double min_width, double value_cap) {
    const double lo_scan = -6.0, hi_scan = 6.0, step = 0.05;
    const int npts = static_cast<int>((hi_scan - lo_scan) / step + 0.5) + 1;
    const double margin = 0.1; // keeps finite-difference stencils inside

    std::vector<bool> ok(npts, false);
    std::vector<double> mag(npts, 0.0);
    EvalCtx ctx;
    ctx.bindings = params;
    ctx.pole_check = true;
    for (int i = 0; i < npts; ++i) {
        double x = lo_scan + step * i;
        ctx.bindings["xi"] = x;
        try {
            CNum v = eval(z, ctx);
            mag[i] = std::abs(v);
            ok[i] = mag[i] <= value_cap;
        } catch (const UnboundSymbol&) {
            throw;
        } catch (const NumericError&) {
            ok[i] = false;
        }
    }

    PoleFreeWindow best;     // best qualifying window
    double best_score = 0.0;
    PoleFreeWindow fallback; // widest run seen, reported when nothing qualifies
    double fallback_width = -1.0;
    int i = 0;
    while (i < npts) {
        if (!ok[i]) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < npts && ok[j + 1]) ++j;
        double lo = lo_scan + step * i + margin;
        double hi = lo_scan + step * j - margin;
        double width = hi - lo;
        if (width >= min_width) {
            // slide a window of exactly min_width across the run and keep
            // the position whose peak |z| is closest to order one: that is
            // where the solution is nontrivial yet gentle, so the numeric
            // differentiation used on quadrature-form solutions stays
            // accurate (steep bumps mean large higher derivatives)
            int wsteps = static_cast<int>(min_width / step + 0.5);
            int s_lo = static_cast<int>(std::ceil((lo - lo_scan) / step - 1e-9));
            int s_hi = static_cast<int>(std::floor((hi - lo_scan) / step + 1e-9)) - wsteps;
            for (int s = s_lo; s <= s_hi; ++s) {
                double peak = 0.0;
                for (int k = s; k <= s + wsteps; ++k) peak = std::max(peak, mag[k]);
                double score = std::abs(std::log10(std::max(peak, 1e-12)));
                if (!best.found || score < best_score) {
                    best = PoleFreeWindow{lo_scan + step * s,
                                          lo_scan + step * (s + wsteps), true, peak};
                    best_score = score;
                }
            }
        }
        if (width > fallback_width) {
            double peak = 0.0;
            for (int k = i; k <= j; ++k) peak = std::max(peak, mag[k]);
            fallback_width = width;
            fallback = PoleFreeWindow{lo, hi, false, peak};
        }
        i = j + 1;
    }
    return best.found ? best : fallback;
}

ResidualReport verify_aux(const AuxEquation& eq, const AuxSolution& sol,
                          const Bindings& params, double lo, double hi,
                          int npoints, double tol) {
    ResidualReport rep;
    rep.tolerance = tol;
    rep.per_term = {{"dz", 0.0}, {"P*z", 0.0}, {"Q*z^n", 0.0}};

    const bool closed = !contains_integral(sol.z);
    Expr zp;
    if (closed) zp = differentiate(sol.z, "xi");

    EvalCtx ctx;
    ctx.bindings = params;
    ctx.pole_check = true;
    if (!closed) {
        // numeric differentiation amplifies quadrature error by 1/h, so the
        // integrals inside the stencil are held to a much tighter tolerance
        ctx.quad.rel_tol = 1e-13;
        ctx.quad.abs_floor = 1e-15;
    }

    double sum_abs = 0.0;
    for (int i = 0; i < npoints; ++i) {
        double x = npoints > 1 ? lo + (hi - lo) * i / (npoints - 1) : lo;
        ctx.bindings["xi"] = x;
        try {
            CNum zv = eval(sol.z, ctx);
            // fixed small step: the default |x|-scaled step lets the h^4
            // truncation term through on windows far from the origin
            CNum dzv;
            double fd_est = 0.0;
            if (closed) {
                dzv = eval(zp, ctx);
            } else {
                CNum d1 = numeric_diff(sol.z, "xi", CNum(x, 0.0), 1, ctx, 1e-3);
                CNum d2 = numeric_diff(sol.z, "xi", CNum(x, 0.0), 1, ctx, 5e-4);
                dzv = (16.0 * d2 - d1) / 15.0; // both stencils are O(h^4)
                fd_est = std::abs(d2 - d1) / 15.0;
            }
            CNum pv = eval(eq.P, ctx);
            CNum qv = eval(eq.Q, ctx);
            CNum zn = zv;
            for (long long p = 1; p < eq.n; ++p) zn *= zv;
            // the absolute residual is only determined down to the noise of
            // its largest term; where a denominator collapse drives |z| up,
            // that floor swamps tol and the point carries no information
            double scale = std::abs(pv * zv) + std::abs(qv * zn) + std::abs(dzv);
            double eval_rel = closed ? 2.2e-16 : 1e-13;
            if (fd_est + eval_rel * scale > 0.25 * tol) {
                rep.excluded.push_back(
                    {x, "residual noise floor exceeds tol/4 here "
                        "(denominator collapse nearby)"});
                continue;
            }
            CNum resid = dzv - pv * zv - qv * zn;
            double r = std::abs(resid);
            if (r > rep.max_abs) {
                rep.max_abs = r;
                rep.worst_point = x;
            }
            sum_abs += r;
            ++rep.n_points;
            rep.per_term[0].second = std::max(rep.per_term[0].second, std::abs(dzv));
            rep.per_term[1].second = std::max(rep.per_term[1].second, std::abs(pv * zv));
            rep.per_term[2].second = std::max(rep.per_term[2].second, std::abs(qv * zn));
        } catch (const UnboundSymbol&) {
            throw;
        } catch (const NumericError& err) {
            rep.excluded.push_back({x, err.what()});
        }
    }
    if (rep.n_points > 0) rep.mean_abs = sum_abs / static_cast<double>(rep.n_points);
    rep.pass = rep.n_points > 0 && rep.max_abs <= tol;
    return rep;
}

} // namespace auxwave
