#include "auxwave/poly.hpp"

#include <algorithm>
#include <map>

namespace auxwave {

namespace {

void trim(PolyInZ& p) {
    while (!p.coeffs.empty() && p.coeffs.back().is_zero()) p.coeffs.pop_back();
}

PolyInZ make_poly(std::string var, std::vector<Expr> coeffs) {
    PolyInZ p{std::move(var), std::move(coeffs)};
    trim(p);
    return p;
}

} // namespace

PolyInZ poly_collect(const Expr& e, const std::string& z) {
    Expr ex = expand(e);
    std::vector<Expr> terms;
    if (ex.kind() == Kind::Sum) terms = ex.node().args;
    else terms = {ex};

    std::map<long long, std::vector<Expr>> buckets;
    for (const auto& t : terms) {
        std::vector<Expr> factors;
        if (t.kind() == Kind::Prod) factors = t.node().args;
        else factors = {t};

        long long zpow = 0;
        std::vector<Expr> rest;
        for (const auto& f : factors) {
            if (f.kind() == Kind::Sym && f.node().name == z) {
                zpow += 1;
                continue;
            }
            if (f.kind() == Kind::Pow && f.node().args[0].kind() == Kind::Sym &&
                f.node().args[0].node().name == z) {
                const Expr& p = f.node().args[1];
                if (!p.is_num() || !p.as_num().is_integer() ||
                    p.as_num().is_negative())
                    throw NotPolynomial("non-integer or negative power of " + z);
                zpow += p.as_num().num();
                continue;
            }
            if (contains_symbol(f, z))
                throw NotPolynomial(z + " occurs in a non-polynomial position");
            rest.push_back(f);
        }
        Expr coeff = rest.empty()   ? Expr::num(1)
                     : rest.size() == 1 ? rest.front()
                                        : Expr::prod(std::move(rest));
        buckets[zpow].push_back(coeff);
    }

    std::vector<Expr> coeffs;
    if (!buckets.empty()) coeffs.resize(buckets.rbegin()->first + 1, Expr::num(0));
    for (auto& [k, parts] : buckets) coeffs[k] = Expr::sum(std::move(parts));
    return make_poly(z, std::move(coeffs));
}

Expr poly_reconstruct(const PolyInZ& p) {
    std::vector<Expr> terms;
    terms.reserve(p.coeffs.size());
    Expr z = Expr::sym(p.var);
    for (size_t i = 0; i < p.coeffs.size(); ++i)
        terms.push_back(expand(mul(p.coeffs[i], powi(z, static_cast<long long>(i)))));
    return Expr::sum(std::move(terms));
}

PolyInZ pz_const(const Expr& c, const std::string& var) {
    return make_poly(var, {expand(c)});
}

PolyInZ pz_add(const PolyInZ& a, const PolyInZ& b) {
    std::vector<Expr> coeffs(std::max(a.coeffs.size(), b.coeffs.size()),
                             Expr::num(0));
    for (size_t i = 0; i < coeffs.size(); ++i)
        coeffs[i] = expand(add(a.coeff(i), b.coeff(i)));
    return make_poly(a.var, std::move(coeffs));
}

PolyInZ pz_mul(const PolyInZ& a, const PolyInZ& b) {
    if (a.is_zero() || b.is_zero()) return PolyInZ{a.var, {}};
    std::vector<Expr> coeffs(a.coeffs.size() + b.coeffs.size() - 1, Expr::num(0));
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            coeffs[i + j] = add(coeffs[i + j], mul(a.coeffs[i], b.coeffs[j]));
    for (auto& c : coeffs) c = expand(c);
    return make_poly(a.var, std::move(coeffs));
}

PolyInZ pz_scale(const PolyInZ& p, const Expr& s) {
    std::vector<Expr> coeffs;
    coeffs.reserve(p.coeffs.size());
    for (const auto& c : p.coeffs) coeffs.push_back(expand(mul(c, s)));
    return make_poly(p.var, std::move(coeffs));
}

PolyInZ pz_pow(const PolyInZ& p, long long k) {
    PolyInZ acc = pz_const(Expr::num(1), p.var);
    for (long long i = 0; i < k; ++i) acc = pz_mul(acc, p);
    return acc;
}

PolyInZ pz_diff_xi(const PolyInZ& p, const Expr& P, const Expr& Q, long long n,
                   const std::string& xi) {
    if (p.is_zero()) return p;
    size_t top = p.coeffs.size() - 1 + static_cast<size_t>(n - 1);
    std::vector<Expr> coeffs(top + 1, Expr::num(0));
    for (size_t i = 0; i < p.coeffs.size(); ++i) {
        Expr ii = Expr::num(static_cast<long long>(i));
        coeffs[i] = add(coeffs[i], differentiate(p.coeffs[i], xi));
        if (i > 0) {
            coeffs[i] = add(coeffs[i], Expr::prod({ii, p.coeffs[i], P}));
            coeffs[i + n - 1] = add(coeffs[i + n - 1], Expr::prod({ii, p.coeffs[i], Q}));
        }
    }
    for (auto& c : coeffs) c = expand(c);
    return make_poly(p.var, std::move(coeffs));
}

} // namespace auxwave
