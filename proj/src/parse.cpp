#include "auxwave/parse.hpp"

#include <cctype>
#include <limits>
#include <utility>
#include <vector>

namespace auxwave {

namespace {

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) {}

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eof() {
        skip_ws();
        return i_ >= s_.size();
    }
    char peek() {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    size_t pos() {
        skip_ws();
        return i_;
    }
    bool consume(char c) {
        skip_ws();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!consume(c)) throw ParseError(std::string("expected '") + c + "' " + what, pos());
    }

    bool at_ident() {
        char c = peek();
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
    }
    std::string ident() {
        skip_ws();
        size_t start = i_;
        while (i_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
            ++i_;
        return s_.substr(start, i_ - start);
    }

    bool at_number() { return std::isdigit(static_cast<unsigned char>(peek())); }

    Expr number() {
        skip_ws();
        size_t start = i_;
        __int128 mant = 0;
        long long frac_digits = 0;
        bool any = false;
        auto digit_run = [&](bool counting_frac) {
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                mant = mant * 10 + (s_[i_] - '0');
                if (mant > static_cast<__int128>(std::numeric_limits<long long>::max()))
                    throw ParseError("numeric literal too large", start);
                if (counting_frac) ++frac_digits;
                any = true;
                ++i_;
            }
        };
        digit_run(false);
        if (i_ < s_.size() && s_[i_] == '.') {
            ++i_;
            digit_run(true);
        }
        if (!any) throw ParseError("malformed number", start);
        long long exp10 = 0;
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
            size_t save = i_;
            ++i_;
            long long sign = 1;
            if (i_ < s_.size() && (s_[i_] == '+' || s_[i_] == '-')) {
                if (s_[i_] == '-') sign = -1;
                ++i_;
            }
            if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                long long e = 0;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
                    e = e * 10 + (s_[i_] - '0');
                    if (e > 50) throw ParseError("exponent too large", start);
                    ++i_;
                }
                exp10 = sign * e;
            } else {
                i_ = save; // not an exponent; leave 'e' for the caller (it will fail as junk)
            }
        }
        Rational r(static_cast<long long>(mant));
        long long shift = exp10 - frac_digits;
        Rational ten(10);
        while (shift > 0) { r = r * ten; --shift; }
        while (shift < 0) { r = r / ten; ++shift; }
        return Expr::num(r);
    }

private:
    const std::string& s_;
    size_t i_ = 0;
};

class Parser {
public:
    explicit Parser(const std::string& s) : lex_(s) {}

    Expr run() {
        Expr e = expr();
        if (!lex_.eof())
            throw ParseError("unexpected trailing input", lex_.pos());
        return e;
    }

private:
    Expr expr() {
        Expr acc = term();
        for (;;) {
            if (lex_.consume('+')) acc = add(acc, term());
            else if (lex_.consume('-')) acc = sub(acc, term());
            else return acc;
        }
    }

    Expr term() {
        Expr acc = unary();
        for (;;) {
            if (lex_.consume('*')) acc = mul(acc, unary());
            else if (lex_.consume('/')) acc = div(acc, unary());
            else return acc;
        }
    }

    Expr unary() {
        if (lex_.consume('-')) return neg(unary());
        return postfix();
    }

    Expr postfix() {
        Expr base = primary();
        if (lex_.consume('^')) {
            // right-associative; exponent is a unary expression (use
            // parentheses for negative or compound exponents)
            Expr e = postfix_exponent();
            return Expr::pow(base, e);
        }
        return base;
    }

    Expr postfix_exponent() {
        size_t p = lex_.pos();
        if (lex_.at_number()) {
            Expr n = lex_.number();
            if (lex_.consume('^')) return Expr::pow(n, postfix_exponent());
            return n;
        }
        if (lex_.peek() == '(') return primary();
        if (lex_.at_ident()) return postfix();
        throw ParseError("expected exponent", p);
    }

    Expr primary() {
        size_t p = lex_.pos();
        if (lex_.at_number()) return lex_.number();
        if (lex_.consume('(')) {
            Expr e = expr();
            lex_.expect(')', "to close parenthesis");
            return e;
        }
        if (lex_.at_ident()) {
            std::string name = lex_.ident();
            if (lex_.peek() == '(') {
                lex_.consume('(');
                if (name == "int") {
                    Expr f = expr();
                    lex_.expect(',', "between integrand and variable");
                    size_t vp = lex_.pos();
                    if (!lex_.at_ident())
                        throw ParseError("expected integration variable", vp);
                    std::string var = lex_.ident();
                    lex_.expect(')', "to close int(...)");
                    return Expr::integral(f, var);
                }
                FunId f;
                if (name == "exp") f = FunId::Exp;
                else if (name == "ln") f = FunId::Ln;
                else if (name == "sin") f = FunId::Sin;
                else if (name == "cos") f = FunId::Cos;
                else if (name == "erf") f = FunId::Erf;
                else if (name == "Ei1") f = FunId::Ei1;
                else throw ParseError("unknown function name '" + name + "'", p);
                Expr a = expr();
                lex_.expect(')', "to close function call");
                return Expr::fun(f, a);
            }
            if (name == "pi") return Expr::pi();
            if (name == "I") return Expr::imag();
            return Expr::sym(name);
        }
        throw ParseError("expected expression", p);
    }

    Lexer lex_;
};

// ---- renderer ----

std::string render_impl(const Expr& e);

bool atom_like(const Expr& e) {
    switch (e.kind()) {
        case Kind::Sym:
        case Kind::Const:
        case Kind::Fun:
        case Kind::Int:
            return true;
        case Kind::Num:
            return e.as_num().is_integer() && !e.as_num().is_negative();
        default:
            return false;
    }
}

std::string render_pow_base(const Expr& b) {
    if (atom_like(b)) return render_impl(b);
    return "(" + render_impl(b) + ")";
}

std::string render_exponent(const Expr& p) {
    if (p.is_num() && p.as_num().is_integer() && !p.as_num().is_negative())
        return p.as_num().str();
    if (p.kind() == Kind::Sym || p.kind() == Kind::Const) return p.node().name;
    return "(" + render_impl(p) + ")";
}

// base^e with e > 0 (e == 1 allowed), for numerators and denominators
std::string render_pos_pow(const Expr& base, const Rational& e) {
    if (e.is_one()) {
        if (atom_like(base)) return render_impl(base);
        return "(" + render_impl(base) + ")";
    }
    return render_pow_base(base) + "^" + render_exponent(Expr::num(e));
}

std::string render_product_factor(const Expr& f) {
    if (f.kind() == Kind::Sum) return "(" + render_impl(f) + ")";
    if (f.is_num()) return f.as_num().str();
    return render_impl(f);
}

std::string render_prod(const Expr& e) {
    Rational coeff(1);
    std::vector<Expr> pos;
    std::vector<std::pair<Expr, Rational>> negs; // (base, positive exponent)
    for (const auto& f : e.node().args) {
        if (f.is_num()) {
            coeff = coeff * f.as_num();
        } else if (f.kind() == Kind::Pow && f.node().args[1].is_num() &&
                   f.node().args[1].as_num().is_negative()) {
            negs.emplace_back(f.node().args[0], -f.node().args[1].as_num());
        } else {
            pos.push_back(f);
        }
    }
    std::string sign;
    if (coeff.is_negative()) {
        sign = "-";
        coeff = -coeff;
    }
    std::vector<std::string> pieces;
    if (!coeff.is_one() || pos.empty()) pieces.push_back(coeff.str());
    for (const auto& f : pos) pieces.push_back(render_product_factor(f));
    std::string out = sign;
    for (size_t i = 0; i < pieces.size(); ++i) {
        if (i) out += "*";
        out += pieces[i];
    }
    if (!negs.empty()) {
        out += "/";
        if (negs.size() == 1) {
            out += render_pos_pow(negs[0].first, negs[0].second);
        } else {
            out += "(";
            for (size_t i = 0; i < negs.size(); ++i) {
                if (i) out += "*";
                out += render_pos_pow(negs[i].first, negs[i].second);
            }
            out += ")";
        }
    }
    return out;
}

std::string render_impl(const Expr& e) {
    const Node& n = e.node();
    switch (n.kind) {
        case Kind::Num:
            return n.num.str();
        case Kind::Const:
        case Kind::Sym:
            return n.name;
        case Kind::Fun:
            return std::string(fun_name(n.fun)) + "(" + render_impl(n.args[0]) + ")";
        case Kind::Int:
            return "int(" + render_impl(n.args[0]) + "," + n.name + ")";
        case Kind::Pow: {
            const Expr& b = n.args[0];
            const Expr& p = n.args[1];
            if (p.is_num() && p.as_num().is_negative())
                return "1/" + render_pos_pow(b, -p.as_num());
            return render_pow_base(b) + "^" + render_exponent(p);
        }
        case Kind::Prod:
            return render_prod(e);
        case Kind::Sum: {
            std::string out;
            bool first = true;
            for (const auto& t : n.args) {
                std::string s = render_impl(t);
                if (first) {
                    out = s;
                    first = false;
                } else if (!s.empty() && s[0] == '-') {
                    out += " - " + s.substr(1);
                } else {
                    out += " + " + s;
                }
            }
            return out;
        }
    }
    return "";
}

} // namespace

Expr parse(const std::string& text) { return Parser(text).run(); }

std::string render(const Expr& e) { return render_impl(e); }

} // namespace auxwave
