#include "auxwave/expr.hpp"

#include <algorithm>
#include <map>

namespace auxwave {

const char* fun_name(FunId f) {
    switch (f) {
        case FunId::Exp: return "exp";
        case FunId::Ln:  return "ln";
        case FunId::Sin: return "sin";
        case FunId::Cos: return "cos";
        case FunId::Erf: return "erf";
        case FunId::Ei1: return "Ei1";
    }
    return "?";
}

Expr Expr::raw(Node n) {
    return Expr(std::make_shared<const Node>(std::move(n)));
}

Expr::Expr() { *this = num(0); }

Expr Expr::num(const Rational& r) {
    Node n;
    n.kind = Kind::Num;
    n.num = r;
    return raw(std::move(n));
}
Expr Expr::num(long long v) { return num(Rational(v)); }
Expr Expr::num(long long p, long long q) { return num(Rational(p, q)); }

Expr Expr::pi() {
    Node n;
    n.kind = Kind::Const;
    n.name = "pi";
    return raw(std::move(n));
}
Expr Expr::imag() {
    Node n;
    n.kind = Kind::Const;
    n.name = "I";
    return raw(std::move(n));
}
Expr Expr::sym(std::string name) {
    Node n;
    n.kind = Kind::Sym;
    n.name = std::move(name);
    return raw(std::move(n));
}

namespace {

int kind_rank(Kind k) {
    switch (k) {
        case Kind::Num:   return 0;
        case Kind::Const: return 1;
        case Kind::Sym:   return 2;
        case Kind::Pow:   return 3;
        case Kind::Fun:   return 4;
        case Kind::Int:   return 5;
        case Kind::Prod:  return 6;
        case Kind::Sum:   return 7;
    }
    return 8;
}

struct ExprLess {
    bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

// Splits a normalized product term into (rational coefficient, monomial part).
// The monomial part of a pure number is Expr::num(1).
std::pair<Rational, Expr> coeff_split(const Expr& t) {
    if (t.is_num()) return {t.as_num(), Expr::num(1)};
    if (t.kind() == Kind::Prod) {
        const auto& args = t.node().args;
        if (!args.empty() && args.front().is_num()) {
            std::vector<Expr> rest(args.begin() + 1, args.end());
            Expr monom = rest.size() == 1 ? rest.front() : Expr::prod(std::move(rest));
            return {args.front().as_num(), monom};
        }
    }
    return {Rational(1), t};
}

} // namespace

Expr Expr::sum(std::vector<Expr> terms) {
    // flatten
    std::vector<Expr> flat;
    flat.reserve(terms.size());
    for (auto& t : terms) {
        if (t.kind() == Kind::Sum) {
            for (const auto& a : t.node().args) flat.push_back(a);
        } else {
            flat.push_back(t);
        }
    }
    // merge like terms on the monomial key
    Rational constant(0);
    std::map<Expr, Rational, ExprLess> monoms;
    for (const auto& t : flat) {
        if (t.is_zero()) continue;
        auto [coeff, monom] = coeff_split(t);
        if (monom.is_one()) {
            constant = constant + coeff;
        } else {
            auto it = monoms.find(monom);
            if (it == monoms.end()) monoms.emplace(monom, coeff);
            else it->second = it->second + coeff;
        }
    }
    std::vector<Expr> out;
    if (!constant.is_zero()) out.push_back(num(constant));
    for (const auto& [monom, coeff] : monoms) {
        if (coeff.is_zero()) continue;
        if (coeff.is_one()) out.push_back(monom);
        else out.push_back(prod({num(coeff), monom}));
    }
    if (out.empty()) return num(0);
    if (out.size() == 1) return out.front();
    // map iteration is already canonical, but the constant slot and coeff
    // wrapping can perturb order, so sort once more
    std::sort(out.begin(), out.end(), ExprLess{});
    Node n;
    n.kind = Kind::Sum;
    n.args = std::move(out);
    return raw(std::move(n));
}

Expr Expr::prod(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    flat.reserve(factors.size());
    for (auto& f : factors) {
        if (f.kind() == Kind::Prod) {
            for (const auto& a : f.node().args) flat.push_back(a);
        } else {
            flat.push_back(f);
        }
    }
    Rational coeff(1);
    // base -> exponents accumulated
    std::map<Expr, std::vector<Expr>, ExprLess> bases;
    for (const auto& f : flat) {
        if (f.is_num()) {
            if (f.as_num().is_zero()) return num(0);
            coeff = coeff * f.as_num();
            continue;
        }
        if (f.kind() == Kind::Pow) {
            bases[f.node().args[0]].push_back(f.node().args[1]);
        } else {
            bases[f].push_back(num(1));
        }
    }
    std::vector<Expr> out;
    bool redo = false;
    for (const auto& [base, exps] : bases) {
        Expr e = exps.size() == 1 ? exps.front() : sum(std::vector<Expr>(exps));
        Expr rebuilt = pow(base, e);
        if (rebuilt.is_num()) {
            if (rebuilt.as_num().is_zero()) return num(0);
            coeff = coeff * rebuilt.as_num();
        } else {
            // pow() may have distributed an integer power over a product,
            // exposing factors that still need merging with the others
            if (rebuilt.kind() == Kind::Prod) redo = true;
            out.push_back(rebuilt);
        }
    }
    if (coeff.is_zero()) return num(0);
    if (redo) {
        out.push_back(num(coeff));
        return prod(std::move(out));
    }
    if (out.empty()) return num(coeff);
    std::sort(out.begin(), out.end(), ExprLess{});
    if (!coeff.is_one()) out.insert(out.begin(), num(coeff));
    if (out.size() == 1) return out.front();
    Node n;
    n.kind = Kind::Prod;
    n.args = std::move(out);
    return raw(std::move(n));
}

Expr Expr::pow(const Expr& base, const Expr& exponent) {
    if (exponent.is_num()) {
        const Rational& e = exponent.as_num();
        if (e.is_zero()) return num(1); // convention: 0^0 == 1
        if (e.is_one()) return base;
        if (base.is_num() && e.is_integer()) {
            try {
                return num(base.as_num().pow_int(e.num()));
            } catch (const std::overflow_error&) {
                // fall through: keep symbolic
            }
        }
        if (e.is_integer()) {
            if (base.kind() == Kind::Pow) {
                // (b^r)^k -> b^(r k), safe for integer outer exponent
                return pow(base.node().args[0],
                           mul(base.node().args[1], exponent));
            }
            if (base.kind() == Kind::Fun && base.node().fun == FunId::Exp) {
                // exp(a)^k -> exp(k a), exact for integer k only
                return fun(FunId::Exp, mul(exponent, base.node().args[0]));
            }
            if (base.kind() == Kind::Prod) {
                std::vector<Expr> fs;
                fs.reserve(base.node().args.size());
                for (const auto& f : base.node().args) fs.push_back(pow(f, exponent));
                return prod(std::move(fs));
            }
        }
    }
    if (base.is_num()) {
        if (base.as_num().is_one()) return num(1);
        if (base.as_num().is_zero()) {
            if (exponent.is_num() && !exponent.as_num().is_negative()) return num(0);
            if (exponent.is_num() && exponent.as_num().is_negative())
                throw std::domain_error("0 raised to a negative power");
        }
    }
    Node n;
    n.kind = Kind::Pow;
    n.args = {base, exponent};
    return raw(std::move(n));
}

Expr Expr::fun(FunId f, const Expr& arg) {
    if (arg.is_zero()) {
        switch (f) {
            case FunId::Exp: return num(1);
            case FunId::Sin: return num(0);
            case FunId::Cos: return num(1);
            case FunId::Erf: return num(0);
            default: break; // ln(0), Ei1(0) singular: keep symbolic
        }
    }
    if (arg.is_one() && f == FunId::Ln) return num(0);
    Node n;
    n.kind = Kind::Fun;
    n.fun = f;
    n.args = {arg};
    return raw(std::move(n));
}

Expr Expr::integral(const Expr& integrand, const std::string& var) {
    if (integrand.is_zero()) return num(0);
    Node n;
    n.kind = Kind::Int;
    n.name = var;
    n.args = {integrand};
    return raw(std::move(n));
}

int compare(const Expr& a, const Expr& b) {
    if (a.p_ == b.p_) return 0;
    const Node& x = a.node();
    const Node& y = b.node();
    int rx = kind_rank(x.kind), ry = kind_rank(y.kind);
    if (rx != ry) return rx < ry ? -1 : 1;
    switch (x.kind) {
        case Kind::Num: {
            if (x.num == y.num) return 0;
            return x.num < y.num ? -1 : 1;
        }
        case Kind::Const:
        case Kind::Sym:
            return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
        case Kind::Fun: {
            if (x.fun != y.fun)
                return static_cast<int>(x.fun) < static_cast<int>(y.fun) ? -1 : 1;
            return compare(x.args[0], y.args[0]);
        }
        case Kind::Int: {
            int c = x.name.compare(y.name);
            if (c != 0) return c < 0 ? -1 : 1;
            return compare(x.args[0], y.args[0]);
        }
        case Kind::Pow:
        case Kind::Prod:
        case Kind::Sum: {
            size_t n = std::min(x.args.size(), y.args.size());
            for (size_t i = 0; i < n; ++i) {
                int c = compare(x.args[i], y.args[i]);
                if (c != 0) return c;
            }
            if (x.args.size() != y.args.size())
                return x.args.size() < y.args.size() ? -1 : 1;
            return 0;
        }
    }
    return 0;
}

bool equal(const Expr& a, const Expr& b) { return compare(a, b) == 0; }

Expr normalize(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Num:
        case Kind::Const:
        case Kind::Sym:
            return e;
        case Kind::Sum: {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(normalize(a));
            return Expr::sum(std::move(args));
        }
        case Kind::Prod: {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(normalize(a));
            return Expr::prod(std::move(args));
        }
        case Kind::Pow:
            return Expr::pow(normalize(n.args[0]), normalize(n.args[1]));
        case Kind::Fun:
            return Expr::fun(n.fun, normalize(n.args[0]));
        case Kind::Int:
            return Expr::integral(normalize(n.args[0]), n.name);
    }
    return e;
}

namespace {

// multiplies two expanded expressions, distributing over sums
Expr mul_distribute(const Expr& a, const Expr& b) {
    const auto terms = [](const Expr& e) -> std::vector<Expr> {
        if (e.kind() == Kind::Sum) return e.node().args;
        return {e};
    };
    std::vector<Expr> out;
    for (const auto& ta : terms(a))
        for (const auto& tb : terms(b)) out.push_back(Expr::prod({ta, tb}));
    return Expr::sum(std::move(out));
}

} // namespace

Expr expand(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Num:
        case Kind::Const:
        case Kind::Sym:
            return e;
        case Kind::Sum: {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(expand(a));
            return Expr::sum(std::move(args));
        }
        case Kind::Prod: {
            Expr acc = Expr::num(1);
            for (const auto& a : n.args) acc = mul_distribute(acc, expand(a));
            return acc;
        }
        case Kind::Pow: {
            Expr b = expand(n.args[0]);
            Expr p = expand(n.args[1]);
            if (b.kind() == Kind::Sum && p.is_num() && p.as_num().is_integer()) {
                long long k = p.as_num().num();
                if (k >= 2 && k <= 64) {
                    Expr acc = b;
                    for (long long i = 1; i < k; ++i) acc = mul_distribute(acc, b);
                    return acc;
                }
            }
            // Expr::pow may distribute an integer power over a product the
            // expansion just exposed; its factors then need expanding again
            Expr rebuilt = Expr::pow(b, p);
            if (rebuilt.kind() == Kind::Prod || rebuilt.kind() == Kind::Sum) {
                if (!equal(rebuilt, e)) return expand(rebuilt);
            }
            return rebuilt;
        }
        case Kind::Fun:
            return Expr::fun(n.fun, expand(n.args[0]));
        case Kind::Int:
            return Expr::integral(expand(n.args[0]), n.name);
    }
    return e;
}

Expr add(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr sub(const Expr& a, const Expr& b) { return Expr::sum({a, neg(b)}); }
Expr mul(const Expr& a, const Expr& b) { return Expr::prod({a, b}); }
Expr div(const Expr& a, const Expr& b) { return Expr::prod({a, Expr::pow(b, Expr::num(-1))}); }
Expr neg(const Expr& a) { return Expr::prod({Expr::num(-1), a}); }
Expr powi(const Expr& a, long long k) { return Expr::pow(a, Expr::num(k)); }

Expr differentiate(const Expr& e, const std::string& s) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Num:
        case Kind::Const:
            return Expr::num(0);
        case Kind::Sym:
            return Expr::num(n.name == s ? 1 : 0);
        case Kind::Sum: {
            std::vector<Expr> parts;
            parts.reserve(n.args.size());
            for (const auto& a : n.args) parts.push_back(differentiate(a, s));
            return Expr::sum(std::move(parts));
        }
        case Kind::Prod: {
            std::vector<Expr> parts;
            for (size_t i = 0; i < n.args.size(); ++i) {
                std::vector<Expr> fs = n.args;
                fs[i] = differentiate(n.args[i], s);
                parts.push_back(Expr::prod(std::move(fs)));
            }
            return Expr::sum(std::move(parts));
        }
        case Kind::Pow: {
            const Expr& b = n.args[0];
            const Expr& p = n.args[1];
            Expr db = differentiate(b, s);
            if (!contains_symbol(p, s)) {
                // p * b^(p-1) * b'
                return Expr::prod({p, Expr::pow(b, sub(p, Expr::num(1))), db});
            }
            // b^p * (p' ln b + p b'/b)
            Expr dp = differentiate(p, s);
            Expr term1 = mul(dp, Expr::fun(FunId::Ln, b));
            Expr term2 = Expr::prod({p, db, Expr::pow(b, Expr::num(-1))});
            return mul(e, add(term1, term2));
        }
        case Kind::Fun: {
            const Expr& a = n.args[0];
            Expr da = differentiate(a, s);
            if (da.is_zero()) return Expr::num(0);
            Expr outer;
            switch (n.fun) {
                case FunId::Exp: outer = e; break;
                case FunId::Ln:  outer = Expr::pow(a, Expr::num(-1)); break;
                case FunId::Sin: outer = Expr::fun(FunId::Cos, a); break;
                case FunId::Cos: outer = neg(Expr::fun(FunId::Sin, a)); break;
                case FunId::Erf:
                    // 2/sqrt(pi) * exp(-a^2)
                    outer = Expr::prod({Expr::num(2),
                                        Expr::pow(Expr::pi(), Expr::num(-1, 2)),
                                        Expr::fun(FunId::Exp, neg(powi(a, 2)))});
                    break;
                case FunId::Ei1:
                    // d/dx E1(x) = -exp(-x)/x
                    outer = Expr::prod({Expr::num(-1), Expr::fun(FunId::Exp, neg(a)),
                                        Expr::pow(a, Expr::num(-1))});
                    break;
            }
            return mul(outer, da);
        }
        case Kind::Int: {
            if (n.name == s) return n.args[0]; // fundamental theorem of calculus
            Expr di = differentiate(n.args[0], s);
            return Expr::integral(di, n.name);
        }
    }
    return Expr::num(0);
}

Expr substitute(const Expr& e, const std::string& s, const Expr& replacement) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Num:
        case Kind::Const:
            return e;
        case Kind::Sym:
            return n.name == s ? replacement : e;
        case Kind::Sum: {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(substitute(a, s, replacement));
            return Expr::sum(std::move(args));
        }
        case Kind::Prod: {
            std::vector<Expr> args;
            args.reserve(n.args.size());
            for (const auto& a : n.args) args.push_back(substitute(a, s, replacement));
            return Expr::prod(std::move(args));
        }
        case Kind::Pow:
            return Expr::pow(substitute(n.args[0], s, replacement),
                             substitute(n.args[1], s, replacement));
        case Kind::Fun:
            return Expr::fun(n.fun, substitute(n.args[0], s, replacement));
        case Kind::Int: {
            if (n.name == s)
                throw std::invalid_argument(
                    "cannot substitute the integration variable of an integral");
            return Expr::integral(substitute(n.args[0], s, replacement), n.name);
        }
    }
    return e;
}

bool contains_symbol(const Expr& e, const std::string& s) {
    const Node& n = e.node();
    if (n.kind == Kind::Sym) return n.name == s;
    for (const auto& a : n.args)
        if (contains_symbol(a, s)) return true;
    return false;
}

bool contains_integral(const Expr& e) {
    const Node& n = e.node();
    if (n.kind == Kind::Int) return true;
    for (const auto& a : n.args)
        if (contains_integral(a)) return true;
    return false;
}

void collect_symbols(const Expr& e, std::set<std::string>& out) {
    const Node& n = e.node();
    if (n.kind == Kind::Sym) out.insert(n.name);
    for (const auto& a : n.args) collect_symbols(a, out);
}

} // namespace auxwave
