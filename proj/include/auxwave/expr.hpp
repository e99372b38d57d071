#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "auxwave/rational.hpp"

namespace auxwave {

// Immutable symbolic expression tree.
//
// Node variants: Num (exact rational), Const ("pi", "I"), Sym (named symbol),
// Sum, Prod, Pow (base, exponent), Fun (exp/ln/sin/cos/erf/Ei1), Int (an
// unevaluated integral of the integrand over its variable from 0 to that
// variable's current value).
//
// All factory functions return normalized expressions; normalization is
// shallow and idempotent:
//   * Sum/Prod are flattened, rational constants folded, operands sorted by
//     the canonical order below; Sum merges like terms (equal monomial part,
//     rational coefficients added); Prod merges equal bases by adding
//     exponents; a Prod keeps at most one leading rational coefficient.
//   * Pow folds rational^integer, strips exponents 0 and 1, rewrites
//     (b^r)^k -> b^(r*k), (a*b)^k -> a^k*b^k and exp(a)^k -> exp(k*a) for
//     integer k only.
//   * Fun folds the exact anchors exp(0)=1, ln(1)=0, sin(0)=0, cos(0)=1,
//     erf(0)=0; nothing else (no trigonometric identities, no expansion of
//     powers of sums).
//
// Canonical order (total, documented so rendered output and golden files are
// stable): first by variant rank Num < Const < Sym < Pow < Fun < Int < Prod
// < Sum, then within a variant by value/name, by (base, exponent) for Pow,
// by (function id, argument) for Fun, by (variable, integrand) for Int, and
// lexicographically by operand list for Prod/Sum.
class Expr;

enum class Kind : unsigned char { Num, Const, Sym, Sum, Prod, Pow, Fun, Int };
enum class FunId : unsigned char { Exp, Ln, Sin, Cos, Erf, Ei1 };

const char* fun_name(FunId f);

struct Node {
    Kind kind;
    Rational num;           // Num
    std::string name;       // Const/Sym; integration variable for Int
    FunId fun{FunId::Exp};   // Fun
    std::vector<Expr> args;  // Sum/Prod operands; Pow {base, exponent};
                             // Fun {argument}; Int {integrand}
};

class Expr {
public:
    Expr(); // zero

    static Expr num(const Rational& r);
    static Expr num(long long n);
    static Expr num(long long n, long long d);
    static Expr pi();
    static Expr imag(); // the imaginary unit, rendered "I"
    static Expr sym(std::string name);
    static Expr sum(std::vector<Expr> terms);
    static Expr prod(std::vector<Expr> factors);
    static Expr pow(const Expr& base, const Expr& exponent);
    static Expr fun(FunId f, const Expr& arg);
    static Expr integral(const Expr& integrand, const std::string& var);

    const Node& node() const { return *p_; }
    Kind kind() const { return p_->kind; }

    bool is_num() const { return p_->kind == Kind::Num; }
    bool is_zero() const { return is_num() && p_->num.is_zero(); }
    bool is_one() const { return is_num() && p_->num.is_one(); }
    const Rational& as_num() const { return p_->num; }

private:
    explicit Expr(std::shared_ptr<const Node> p) : p_(std::move(p)) {}
    static Expr raw(Node n);
    std::shared_ptr<const Node> p_;

    friend int compare(const Expr& a, const Expr& b);
};

// Canonical total order; 0 iff structurally equal.
int compare(const Expr& a, const Expr& b);
bool equal(const Expr& a, const Expr& b);

// Re-normalizes bottom-up. Factories already normalize, so this is the
// identity on anything they produced; it exists so the idempotence contract
// is testable and so hand-assembled trees can be repaired.
Expr normalize(const Expr& e);

// Distributes products over sums and expands integer powers of sums
// (exponents 2..64), recursively, including inside function arguments.
// Combined with like-term merging this gives a canonical expanded form for
// polynomial expressions; non-polynomial atoms stay opaque.
Expr expand(const Expr& e);

// Arithmetic sugar over the factories.
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr neg(const Expr& a);
Expr powi(const Expr& a, long long k);

// d/ds. Total on well-formed input. The derivative of an Int node with
// respect to its own variable is the integrand (fundamental theorem of
// calculus); with respect to any other symbol it differentiates under the
// integral sign.
Expr differentiate(const Expr& e, const std::string& s);

// Replaces every free occurrence of s. Substituting the integration variable
// of an Int node is rejected (the node cannot represent a shifted limit).
Expr substitute(const Expr& e, const std::string& s, const Expr& replacement);

bool contains_symbol(const Expr& e, const std::string& s);
bool contains_integral(const Expr& e);
void collect_symbols(const Expr& e, std::set<std::string>& out);

} // namespace auxwave
