#include "auxwave/wave.hpp"

#include <array>
#include <cmath>
#include <set>

#include "json.hpp"

#include "auxwave/parse.hpp"
#include "auxwave/poly.hpp"

namespace auxwave {

namespace {

const std::map<std::string, long long>& u_orders() {
    static const std::map<std::string, long long> m{
        {"U", 0}, {"U1", 1}, {"U2", 2}, {"U3", 3}};
    return m;
}

bool mentions_u(const Expr& e) {
    for (const auto& [name, order] : u_orders()) {
        (void)order;
        if (contains_symbol(e, name)) return true;
    }
    return false;
}

std::vector<Expr> sum_terms(const Expr& e) {
    if (e.kind() == Kind::Sum) return e.node().args;
    return {e};
}

std::vector<Expr> prod_factors(const Expr& e) {
    if (e.kind() == Kind::Prod) return e.node().args;
    return {e};
}

Expr prodv(std::vector<Expr> fs) {
    if (fs.empty()) return Expr::num(1);
    if (fs.size() == 1) return fs[0];
    return Expr::prod(std::move(fs));
}

// Splits f into (base, k) for integer powers; k = 1 otherwise.
std::pair<Expr, long long> base_power(const Expr& f) {
    if (f.kind() == Kind::Pow && f.node().args[1].is_num() &&
        f.node().args[1].as_num().is_integer())
        return {f.node().args[0], f.node().args[1].as_num().num()};
    return {f, 1};
}

} // namespace

const char* reduce_mode_name(ReduceMode m) {
    return m == ReduceMode::Mechanical ? "mechanical" : "paper-eq8";
}

PDEProblem b_equation(const Expr& b) {
    Expr u = Expr::sym("u"), ux = Expr::sym("u_x"), uxx = Expr::sym("u_xx");
    Expr uxxx = Expr::sym("u_xxx"), ut = Expr::sym("u_t"), uxxt = Expr::sym("u_xxt");
    Expr lhs = sub(ut, uxxt);
    lhs = add(lhs, mul(add(b, Expr::num(1)), mul(u, ux)));
    lhs = sub(lhs, mul(b, mul(ux, uxx)));
    lhs = sub(lhs, mul(u, uxxx));
    PDEProblem p;
    p.lhs = lhs;
    p.parameters["b"] = b;
    return p;
}

TravellingODE reduce_travelling(const PDEProblem& p, ReduceMode mode) {
    if (mode == ReduceMode::PaperEq8) {
        if (!equal(expand(p.lhs), expand(b_equation(Expr::num(-2)).lhs)))
            throw std::invalid_argument(
                "paper-eq8 reduction reproduces a reported form for the b = -2 "
                "equation only");
        return {parse("c*U1 - mu^3*U3 - mu*U*U1 + 2*mu^3*U1*U2 - mu^3*U*U3"),
                mode};
    }
    static const std::vector<std::pair<const char*, const char*>> rules = {
        {"u_xxt", "-c*mu^3*U3"}, {"u_xxx", "mu^3*U3"}, {"u_xx", "mu^2*U2"},
        {"u_t", "-c*mu*U1"},     {"u_x", "mu*U1"},     {"u", "U"},
    };
    Expr e = p.lhs;
    for (const auto& [from, to] : rules) e = substitute(e, from, parse(to));
    std::set<std::string> syms;
    collect_symbols(e, syms);
    for (const auto& s : syms)
        if (!s.empty() && s[0] == 'u')
            throw std::invalid_argument("unsupported derivative symbol: " + s);
    return {expand(e), mode};
}

BalanceResult balance(const TravellingODE& ode) {
    struct Sig {
        long long alpha = 0, beta = 0;
    };
    std::vector<Sig> sigs;
    for (const Expr& term : sum_terms(expand(ode.lhs))) {
        Sig s;
        for (const Expr& f : prod_factors(term)) {
            auto [base, k] = base_power(f);
            auto it = base.kind() == Kind::Sym ? u_orders().find(base.node().name)
                                               : u_orders().end();
            if (it != u_orders().end()) {
                if (k < 1)
                    throw std::invalid_argument(
                        "balance requires nonnegative powers of U");
                s.alpha += k;
                s.beta += k * it->second;
            } else if (mentions_u(f)) {
                throw std::invalid_argument(
                    "balance requires terms polynomial in U and its derivatives");
            }
        }
        sigs.push_back(s);
    }
    std::set<long long> cand;
    for (size_t i = 0; i < sigs.size(); ++i)
        for (size_t j = i + 1; j < sigs.size(); ++j) {
            long long da = sigs[i].alpha - sigs[j].alpha;
            if (da == 0) continue;
            long long db = sigs[j].beta - sigs[i].beta;
            if (db % da != 0) continue;
            long long N = db / da;
            if (N >= 1) cand.insert(N);
        }
    if (cand.empty())
        throw NoBalance(
            "no two terms of different nonlinearity balance at a positive "
            "integer order");
    BalanceResult r;
    r.candidates.assign(cand.begin(), cand.end());
    r.N = r.candidates.front();
    return r;
}

Ansatz make_ansatz(long long N) {
    if (N < 1) throw std::invalid_argument("ansatz order must be >= 1");
    Ansatz a;
    a.N = N;
    for (long long i = 0; i <= N; ++i)
        a.coeffs.push_back("g" + std::to_string(i));
    return a;
}

CoeffSystem derive_system(const TravellingODE& ode, const Ansatz& ansatz,
                          const AuxEquation& aux) {
    if (aux.n != 2)
        throw std::invalid_argument(
            "derive_system handles auxiliary equations with n = 2");
    if (ansatz.N < 1 || ansatz.coeffs.size() != size_t(ansatz.N) + 1)
        throw std::invalid_argument("malformed ansatz");
    if (contains_symbol(ode.lhs, "z"))
        throw std::invalid_argument("the ODE may not mention the reserved symbol z");

    PolyInZ U{"z", {}};
    for (const auto& g : ansatz.coeffs) U.coeffs.push_back(Expr::sym(g));
    std::map<std::string, PolyInZ> dict;
    dict["U"] = U;
    dict["U1"] = pz_diff_xi(dict["U"], aux.P, aux.Q, aux.n, "xi");
    dict["U2"] = pz_diff_xi(dict["U1"], aux.P, aux.Q, aux.n, "xi");
    dict["U3"] = pz_diff_xi(dict["U2"], aux.P, aux.Q, aux.n, "xi");

    PolyInZ total{"z", {}};
    for (const Expr& term : sum_terms(expand(ode.lhs))) {
        PolyInZ acc = pz_const(Expr::num(1), "z");
        std::vector<Expr> scalars;
        for (const Expr& f : prod_factors(term)) {
            auto [base, k] = base_power(f);
            auto it = base.kind() == Kind::Sym ? u_orders().find(base.node().name)
                                               : u_orders().end();
            if (it != u_orders().end() && k >= 1) {
                acc = pz_mul(acc, pz_pow(dict[base.node().name], k));
            } else if (mentions_u(f)) {
                throw NotPolynomial("ODE term not polynomial in U");
            } else {
                scalars.push_back(f);
            }
        }
        if (!scalars.empty()) acc = pz_scale(acc, prodv(std::move(scalars)));
        total = pz_add(total, acc);
    }

    CoeffSystem sys;
    sys.aux = aux;
    sys.ode_mode = reduce_mode_name(ode.mode);
    for (long long i = 0; i <= total.degree(); ++i) {
        Expr ci = total.coeff(size_t(i));
        if (!ci.is_zero()) sys.equations.emplace_back(i, ci);
    }
    sys.unknowns = ansatz.coeffs;
    sys.unknowns.push_back("c");
    std::set<std::string> syms;
    for (const auto& [p, e] : sys.equations) {
        (void)p;
        collect_symbols(e, syms);
    }
    sys.depends_on_xi = syms.count("xi") > 0;
    syms.erase("xi");
    for (const auto& u : sys.unknowns) syms.erase(u);
    sys.parameters.assign(syms.begin(), syms.end());
    sys.aux_label = "P=" + render(aux.P) + "; Q=" + render(aux.Q);
    return sys;
}

std::string export_system_text(const CoeffSystem& sys) {
    std::string out;
    for (const auto& [p, e] : sys.equations)
        out += "eq[" + std::to_string(p) + "] := " + render(e) + " = 0;\n";
    return out;
}

std::string export_system_sidecar(const CoeffSystem& sys) {
    nlohmann::ordered_json j;
    j["unknowns"] = sys.unknowns;
    j["parameters"] = sys.parameters;
    j["aux_case"] = sys.aux_label;
    j["ode_mode"] = sys.ode_mode;
    return j.dump(2) + "\n";
}

ComposedSolution compose(const Assignment& a, const AuxSolution& aux_sol,
                         CNum c, double mu, const Bindings& params,
                         std::string provenance) {
    long long N = -1;
    for (const auto& [k, v] : a.values) {
        (void)v;
        if (k.size() < 2 || k[0] != 'g') continue;
        bool digits = true;
        for (size_t i = 1; i < k.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(k[i]))) digits = false;
        if (digits) N = std::max(N, std::stoll(k.substr(1)));
    }
    if (N < 0)
        throw std::invalid_argument("assignment binds no ansatz coefficients");
    for (long long i = 0; i <= N; ++i)
        if (!a.values.count("g" + std::to_string(i)))
            throw std::invalid_argument("unbound coefficient g" + std::to_string(i));

    ComposedSolution sol;
    std::vector<Expr> terms;
    for (long long i = 0; i <= N; ++i)
        terms.push_back(mul(Expr::sym("g" + std::to_string(i)),
                            powi(aux_sol.z, i)));
    sol.u = Expr::sum(std::move(terms));
    sol.bindings = params;
    for (const auto& [k, v] : a.values) sol.bindings[k] = v;
    sol.bindings["c"] = c;
    sol.bindings["mu"] = CNum(mu, 0.0);
    sol.aux_sol = aux_sol;
    sol.c = c;
    sol.mu = mu;
    sol.provenance = std::move(provenance);
    return sol;
}

namespace {

// U, U', U'', U''' of a composed profile at a point: symbolic derivatives
// for closed forms, numeric differentiation with tightened quadrature when
// the profile carries unevaluated integrals (fixed steps -- the |xi|-scaled
// defaults lose accuracy far from the origin).
struct ProfileEval {
    Expr u;
    bool closed = true;
    std::vector<Expr> du;
    EvalCtx base;

    explicit ProfileEval(const ComposedSolution& sol) {
        u = sol.u;
        closed = !contains_integral(u);
        base.bindings = sol.bindings;
        base.bindings["c"] = sol.c;
        base.bindings["mu"] = CNum(sol.mu, 0.0);
        base.pole_check = true;
        if (closed) {
            du = {u, differentiate(u, "xi")};
            du.push_back(differentiate(du[1], "xi"));
            du.push_back(differentiate(du[2], "xi"));
        } else {
            base.quad.rel_tol = 1e-13;
            base.quad.abs_floor = 1e-15;
        }
    }

    std::array<CNum, 4> at(double xi) const {
        EvalCtx ctx = base;
        ctx.bindings["xi"] = CNum(xi, 0.0);
        std::array<CNum, 4> v;
        if (closed) {
            for (int i = 0; i < 4; ++i) v[i] = eval(du[size_t(i)], ctx);
        } else {
            static const double steps[3] = {1e-3, 1e-3, 5e-3};
            v[0] = eval(u, ctx);
            for (int o = 1; o <= 3; ++o)
                v[o] = numeric_diff(u, "xi", CNum(xi, 0.0), o, ctx, steps[o - 1]);
        }
        return v;
    }
};

CNum ode_terms_at(const std::vector<Expr>& terms, const ProfileEval& pe,
                  double xi, std::vector<double>* term_max) {
    auto v = pe.at(xi);
    EvalCtx ctx = pe.base;
    ctx.bindings["xi"] = CNum(xi, 0.0);
    ctx.bindings["U"] = v[0];
    ctx.bindings["U1"] = v[1];
    ctx.bindings["U2"] = v[2];
    ctx.bindings["U3"] = v[3];
    CNum acc(0.0, 0.0);
    for (size_t j = 0; j < terms.size(); ++j) {
        CNum tv = eval(terms[j], ctx);
        if (term_max) (*term_max)[j] = std::max((*term_max)[j], std::abs(tv));
        acc += tv;
    }
    return acc;
}

CNum pde_terms_at(const std::vector<Expr>& terms, const ProfileEval& pe,
                  CNum cval, double mu, double x, double t,
                  std::vector<double>* term_max) {
    auto profile = [&](CNum xiv) {
        EvalCtx ctx = pe.base;
        ctx.bindings["xi"] = xiv;
        return eval(pe.u, ctx);
    };
    auto u_at = [&](CNum xv, CNum tv) {
        return profile(CNum(mu, 0.0) * (xv - cval * tv));
    };
    CNum x0(x, 0.0), t0(t, 0.0);
    auto fx = [&](CNum xv) { return u_at(xv, t0); };
    auto ft = [&](CNum tv) { return u_at(x0, tv); };
    auto uxx_of_t = [&](CNum tv) {
        auto g = [&](CNum xv) { return u_at(xv, tv); };
        return numeric_diff(g, x0, 2);
    };
    EvalCtx ctx = pe.base;
    ctx.bindings["u"] = u_at(x0, t0);
    ctx.bindings["u_x"] = numeric_diff(fx, x0, 1);
    ctx.bindings["u_xx"] = numeric_diff(fx, x0, 2);
    ctx.bindings["u_xxx"] = numeric_diff(fx, x0, 3);
    ctx.bindings["u_t"] = numeric_diff(ft, t0, 1);
    ctx.bindings["u_xxt"] = numeric_diff(uxx_of_t, t0, 1);
    CNum acc(0.0, 0.0);
    for (size_t j = 0; j < terms.size(); ++j) {
        CNum tv = eval(terms[j], ctx);
        if (term_max) (*term_max)[j] = std::max((*term_max)[j], std::abs(tv));
        acc += tv;
    }
    return acc;
}

} // namespace

CNum eval_ode_residual(const TravellingODE& ode, const ComposedSolution& sol,
                       double xi) {
    ProfileEval pe(sol);
    auto terms = sum_terms(ode.lhs);
    return ode_terms_at(terms, pe, xi, nullptr);
}

CNum eval_pde_residual(const PDEProblem& pde, const ComposedSolution& sol,
                       double x, double t) {
    ProfileEval pe(sol);
    auto terms = sum_terms(pde.lhs);
    return pde_terms_at(terms, pe, sol.c, sol.mu, x, t, nullptr);
}

ResidualReport verify_solution(const TravellingODE& ode,
                               const ComposedSolution& sol, double lo,
                               double hi, int npoints, double tol) {
    ResidualReport rep;
    rep.tolerance = tol;
    ProfileEval pe(sol);
    auto terms = sum_terms(ode.lhs);
    std::vector<double> term_max(terms.size(), 0.0);
    double sum = 0;
    for (int i = 0; i < npoints; ++i) {
        double x = npoints == 1 ? lo : lo + (hi - lo) * i / (npoints - 1);
        try {
            double r = std::abs(ode_terms_at(terms, pe, x, &term_max));
            if (r > rep.max_abs) {
                rep.max_abs = r;
                rep.worst_point = x;
            }
            sum += r;
            ++rep.n_points;
        } catch (const UnboundSymbol&) {
            throw;
        } catch (const NumericError& err) {
            rep.excluded.push_back({x, err.what()});
        }
    }
    if (rep.n_points) rep.mean_abs = sum / double(rep.n_points);
    for (size_t j = 0; j < terms.size(); ++j)
        rep.per_term.emplace_back(render(terms[j]), term_max[j]);
    rep.pass = rep.n_points > 0 && rep.max_abs <= tol;
    return rep;
}

ResidualReport verify_solution(const PDEProblem& pde,
                               const ComposedSolution& sol, double x_lo,
                               double x_hi, int nx, double t_lo, double t_hi,
                               int nt, double tol) {
    ResidualReport rep;
    rep.tolerance = tol;
    ProfileEval pe(sol);
    auto terms = sum_terms(pde.lhs);
    std::vector<double> term_max(terms.size(), 0.0);
    double sum = 0;
    for (int i = 0; i < nx; ++i) {
        double x = nx == 1 ? x_lo : x_lo + (x_hi - x_lo) * i / (nx - 1);
        for (int j = 0; j < nt; ++j) {
            double t = nt == 1 ? t_lo : t_lo + (t_hi - t_lo) * j / (nt - 1);
            try {
                double r =
                    std::abs(pde_terms_at(terms, pe, sol.c, sol.mu, x, t, &term_max));
                if (r > rep.max_abs) {
                    rep.max_abs = r;
                    rep.worst_point = x;
                }
                sum += r;
                ++rep.n_points;
            } catch (const UnboundSymbol&) {
                throw;
            } catch (const NumericError& err) {
                rep.excluded.push_back(
                    {x, std::string(err.what()) + " (t=" + std::to_string(t) + ")"});
            }
        }
    }
    if (rep.n_points) rep.mean_abs = sum / double(rep.n_points);
    for (size_t j = 0; j < terms.size(); ++j)
        rep.per_term.emplace_back(render(terms[j]), term_max[j]);
    rep.pass = rep.n_points > 0 && rep.max_abs <= tol;
    return rep;
}

} // namespace auxwave
