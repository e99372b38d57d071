#include <cmath>
#include <cstdio>

#include "auxwave/parse.hpp"
#include "auxwave/wave.hpp"

namespace auxwave {

namespace {

// Reported Case-1 coefficient block, transcribed term-for-term in the
// printed order. g1 = 0 and g0 stays free; g2 comes back as a rational
// function of xi even though the ansatz declares constant coefficients --
// kept verbatim for the reproduction report below.
const char* kReportedG2 =
    "-(27*c*B^4 - c*A^2*xi^2 + 4*c*A^6*xi^6 + g0*A^2*xi^2 + 4*g0*A^6*xi^6"
    " - 2*c*A*xi*B + 60*c*A^4*xi^4*B^2 + 80*c*A^3*xi^3*B^3 + 60*c*A^2*xi^2*B^4"
    " + 24*c*A*xi*B^5 + 2*g0*A*xi*B + 60*g0*A^4*xi^4*B^2 + 80*g0*A^3*xi^3*B^3"
    " + 60*g0*A^2*xi^2*B^4 + 24*g0*A*xi*B^5 + 22*c*A*B^2 + 36*c*A^2*B^2*xi"
    " + 22*c*A^3*xi^2 + 36*c*A^3*xi^2*B + 44*c*A^2*xi*B - c*B^2 + 4*c*B^6"
    " + g0*B^2 + 4*g0*B^6 + 2*c*A^2 + 2*g0*A^2 + 24*c*A^5*xi^5*B"
    " + 24*g0*A^5*xi^5*B + 27*g0*A^4*xi^4 + 9*g0*A*B + 9*g0*A^2*xi + g0*A*xi"
    " + 19*g0*A^5*xi^5 + 22*g0*A*B^2 + 22*g0*A^3*xi^2 + 12*c*A*B^3"
    " + 12*c*A^4*xi^3 - c*B + 36*g0*A^2*B^2*xi + 36*g0*A^3*xi^2*B"
    " + 27*c*A^4*xi^4 + 9*c*A*B + 9*c*A^2*xi + 19*c*A^5*xi^5 - c*A*xi"
    " + 12*g0*A*B^3 + 12*g0*A^4*xi^3 + 108*c*A^3*xi^3*B + 162*c*A^2*xi^2*B^2"
    " + 108*c*A*xi*B^3 + 95*c*A^4*xi^4*B + 190*c*A^3*xi^3*B^2"
    " + 190*c*A^2*xi^2*B^3 + 95*c*A*xi*B^4 + 19*c*B^5 + g0*B + 19*g0*B^5"
    " + 27*g0*B^4 + 108*g0*A^3*xi^3*B + 162*g0*A^2*xi^2*B^2 + 108*g0*A*xi*B^3"
    " + 95*g0*A^4*xi^4*B + 190*g0*A^3*xi^3*B^2 + 190*g0*A^2*xi^2*B^3"
    " + 95*g0*A*xi*B^4 + 44*g0*A^2*xi*B)"
    " / (8*A*B^3 + 2*A*xi*B + 24*A^2*B^2*xi + 24*A^3*xi^2*B + B^2 + 2*A^2"
    " + 8*A^4*xi^3 + A^2*xi^2)";

// Reported top equation of the same block (linear in g2).
const char* kReportedEq6 =
    "-14*g2*A - 22*g2*A^3*xi^3 - 66*g2*A^2*xi^2*B - 66*g2*A*xi*B^2"
    " - 22*g2*B^3";

} // namespace

Expr reported_case1_g2() {
    static const Expr g2 = parse(kReportedG2);
    return g2;
}

CrosscheckReport reported_case1_crosscheck() {
    CrosscheckReport rep;
    auto ode = reduce_travelling(b_equation(Expr::num(-2)), ReduceMode::PaperEq8);
    CoeffSystem sys = derive_system(ode, make_ansatz(2), catalog_case(1).eq);
    for (const auto& [p, e] : sys.equations) {
        (void)e;
        rep.powers.push_back(p);
    }
    const Expr g2 = reported_case1_g2();
    const Expr eq6 = parse(kReportedEq6);

    std::string& t = rep.text;
    t += "reported-coefficient cross-check: aux case 1, reduction mode paper-eq8\n";
    t += "bindings: A=1/4, B=1, c=1, mu=1, g1=0, g0=1 (g0 is not listed in the\n";
    t += "reported block; pinned to 1, the figure-anchor convention), g2 = the\n";
    t += "reported closed form, which varies with xi\n\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%8s", "xi");
    t += buf;
    for (long long p : rep.powers) {
        std::snprintf(buf, sizeof buf, " | eq[%lld] %5s", p, "");
        t += buf;
    }
    t += " | reported eq6\n";

    for (int i = 0; i <= 8; ++i) {
        double xi = -2.0 + 0.5 * i;
        Bindings b{{"A", 0.25}, {"B", 1.0}, {"c", 1.0},
                   {"mu", 1.0}, {"g0", 1.0}, {"g1", 0.0},
                   {"xi", xi}};
        b["g2"] = eval(g2, b);
        CrosscheckRow row;
        row.xi = xi;
        std::snprintf(buf, sizeof buf, "%8.3f", xi);
        t += buf;
        for (const auto& [p, e] : sys.equations) {
            (void)p;
            double r = std::abs(eval(e, b));
            row.eq_abs.push_back(r);
            std::snprintf(buf, sizeof buf, " | %11.4e", r);
            t += buf;
        }
        row.reported_eq6_abs = std::abs(eval(eq6, b));
        std::snprintf(buf, sizeof buf, " | %11.4e\n", row.reported_eq6_abs);
        t += buf;
        rep.rows.push_back(std::move(row));
    }

    t += "\nnotes:\n";
    t += "  - columns are |coefficient of z^power| from our derived system at the\n";
    t += "    bindings above; the last column evaluates the reported top equation\n";
    t += "    itself at the same bindings.\n";
    t += "  - the reported g2 depends on xi although the ansatz declares constant\n";
    t += "    coefficients, so nonzero residuals are expected; this table is a\n";
    t += "    reproduction record, not a pass/fail gate.\n";
    t += "  - our top (z^6) coefficient is quadratic in the ansatz coefficients\n";
    t += "    while the reported top equation is linear in g2: the reported\n";
    t += "    collection weight z^i*sqrt(a2*z^2 + a6*z^6) is not plain-power\n";
    t += "    collection, and the ratio of the two is not constant in xi.\n";
    return rep;
}

} // namespace auxwave
