#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "auxwave/numeric.hpp"
#include "auxwave/parse.hpp"
#include "auxwave/special.hpp"

using namespace auxwave;
using doctest::Approx;

static double rel_err(CNum got, CNum want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-30);
}

TEST_CASE("erf at reference points") {
    struct Row {
        CNum z, want;
        double tol;
    };
    // reference values computed with 40-digit arithmetic before this
    // implementation existed, then frozen here
    const Row rows[] = {
        {{1.0, 0.0}, {0.8427007929497148693412206350826092592961, 0.0}, 1e-14},
        {{0.0, 1.0}, {0.0, 1.650425758797542876025337729561362443896}, 1e-14},
        {{1.0, 1.0},
         {1.316151281697947644880271080243670369028,
          0.1904534692378346862841088619691624424378},
         1e-13},
        {{2.0, -3.0},
         {-20.82946142761456838910308845198111287444,
          -8.687318271470163144428078754541871553052},
         5e-12},
        {{-3.5, 0.5},
         {-1.000000834600656020355330133085385466295,
          -0.0000004460332277965414226950798573043949611125},
         1e-12},
        {{6.0, 1.0}, {0.9999999999999999469220019939195899054301, 0.0}, 1e-13},
        {{0.0, 0.25}, {0.0, 0.2880836197949719840347000657269359169307}, 1e-14},
        {{0.0, 5.5}, {0.0, 1432099172039.832821476869289855699288226}, 1e-13},
        {{7.0, 6.0},
         {1.000000137188744699199575846660047359701,
          0.00000001656442419357414510725617590604264022831},
         1e-12},
    };
    for (const auto& r : rows) {
        CAPTURE(r.z.real());
        CAPTURE(r.z.imag());
        CHECK(rel_err(erf_complex(r.z), r.want) < r.tol);
    }
    CHECK(erf_complex(CNum(0, 0)) == CNum(0, 0));
}

TEST_CASE("erf symmetries are bit-exact") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        CNum w(d(rng), d(rng));
        CNum ew = erf_complex(w);
        CHECK(erf_complex(-w) == -ew);
        CHECK(erf_complex(std::conj(w)) == std::conj(ew));
        CHECK(rel_err(erf_complex(-w), -ew) <= 1e-12);
    }
}

TEST_CASE("E1 at reference points") {
    CHECK(std::abs(ei1_complex(CNum(1.0)).real() -
                   0.219383934395520273677163775460121649031) < 1e-15);
    CHECK(ei1_complex(CNum(1.0)).imag() == 0.0);

    // on the cut: limit from the upper half-plane, E1(-x+i0) = -Ei(x) - i pi
    CNum m1 = ei1_complex(CNum(-1.0));
    CHECK(std::abs(m1.real() - (-1.895117816355936755466520934331634269017)) < 1e-14);
    CHECK(std::abs(m1.imag() - (-3.141592653589793238462643383279502884197)) < 1e-15);
    CNum m2 = ei1_complex(CNum(-2.0));
    CHECK(std::abs(m2.real() - (-4.954234356001890163379505130227035275518)) < 1e-13);

    struct Row {
        CNum z, want;
        double tol;
    };
    const Row rows[] = {
        {{0.5, 2.0},
         {-0.2381269378926718684853687864615761408494,
          -0.02587711559005396457592883385773869065653},
         1e-13},
        {{-3.0, 4.0},
         {4.154091651642689822535359302871661650484,
          1.152825966434564238522891977639279145698},
         1e-12},
        {{8.0, 0.0}, {0.00003766562284392490177255799595075272089049, 0.0}, 1e-13},
        {{2.0, -5.0},
         {0.02242578617883370548332245012604712201389,
          -0.005247685132882677258805868940012869452523},
         1e-12},
        {{20.0, 3.0},
         {-0.0000000000973554679021167103291581602838525460992,
          0.0000000000000835159435565281651326436780278},
         1e-11},
        {{0.001, 0.0}, {6.331539364136149332002786376386335575402, 0.0}, 1e-14},
    };
    for (const auto& r : rows) {
        CAPTURE(r.z.real());
        CAPTURE(r.z.imag());
        CHECK(rel_err(ei1_complex(r.z), r.want) < r.tol);
    }
    CHECK_THROWS_AS(ei1_complex(CNum(0, 0)), std::domain_error);
}

TEST_CASE("quadrature basics") {
    QuadratureSpec spec;
    auto poly = [](double t) { return CNum(t * t); };
    CHECK(std::abs(integrate(poly, 0, 3, spec) - CNum(9.0)) < 1e-12);
    auto osc = [](double t) { return CNum(std::cos(10 * t)); };
    CHECK(std::abs(integrate(osc, 0, 2, spec).real() - std::sin(20.0) / 10.0) < 1e-12);
    CHECK(integrate(poly, 1, 1, spec) == CNum(0.0));
    CHECK(std::abs(integrate(poly, 3, 0, spec) + CNum(9.0)) < 1e-12);

    QuadratureSpec tiny;
    tiny.max_subdiv = 1;
    auto spike = [](double t) { return CNum(1.0 / (1e-4 + t * t)); };
    CHECK_THROWS_AS(integrate(spike, -1, 1, tiny), QuadratureError);
}

TEST_CASE("quadrature additivity on catalog-style integrands") {
    QuadratureSpec spec;
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> pt(-3.0, 3.0);
    std::vector<std::function<CNum(double)>> integrands = {
        [](double t) { return CNum(std::exp(std::sin(t))); },
        [](double t) { return std::exp(CNum(0, 1) * t) * t; },
        [](double t) { return CNum(std::exp(t / 3.0) * std::cos(3 * t)); },
        [](double t) {
            double u = t / 2 + 0.3;
            return CNum(std::exp(u * u * u / 10.0));
        },
    };
    for (const auto& f : integrands) {
        for (int i = 0; i < 5; ++i) {
            double a = pt(rng), b = pt(rng);
            CNum whole = integrate(f, 0, b, spec);
            CNum split = integrate(f, 0, a, spec) + integrate(f, a, b, spec);
            CHECK(std::abs(whole - split) <= 1e-9 * std::max(1.0, std::abs(whole)));
        }
    }
}

TEST_CASE("eval basics") {
    Bindings b{{"x", CNum(2, 0)}, {"y", CNum(0, 1)}};
    CHECK(eval(parse("x^2 + 1"), b) == CNum(5, 0));
    CHECK(std::abs(eval(parse("exp(I*pi)"), Bindings{}) - CNum(-1, 0)) < 1e-15);
    CHECK(std::abs(eval(parse("y^2"), b) - CNum(-1, 0)) < 1e-15);
    CHECK(eval(parse("erf(0)"), Bindings{}) == CNum(0, 0));
    CHECK(std::abs(eval(parse("Ei1(1)"), Bindings{}).real() - 0.2193839344) < 1e-9);
    CHECK(std::abs(eval(parse("(-2)^(1/2)"), Bindings{}) - CNum(0, std::sqrt(2.0))) < 1e-15);
    CHECK_THROWS_AS(eval(parse("nope"), Bindings{}), UnboundSymbol);
    CHECK_THROWS_AS(eval(parse("ln(x)"), Bindings{{"x", CNum(0, 0)}}), NumericError);
}

TEST_CASE("eval of integral nodes") {
    // int(t^2, t) from 0 to x
    Bindings b{{"xi", CNum(3, 0)}};
    CHECK(std::abs(eval(parse("int(xi^2, xi)"), b) - CNum(9.0)) < 1e-10);
    // parameterized integrand
    Bindings b2{{"xi", CNum(2, 0)}, {"A", CNum(1, 0)}};
    double expected = std::exp(2.0) - 1.0;
    CHECK(std::abs(eval(parse("int(A*exp(xi), xi)"), b2) - CNum(expected)) < 1e-9);
    // complex bound rejected
    Bindings bc{{"xi", CNum(1, 1)}};
    CHECK_THROWS_AS(eval(parse("int(xi, xi)"), bc), NumericError);
}

TEST_CASE("derivative of integral matches integrand") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    Expr f = parse("exp(sin(xi))*(1+xi^2)");
    Expr F = parse("int(exp(sin(xi))*(1+xi^2), xi)");
    EvalCtx ctx;
    for (int i = 0; i < 20; ++i) {
        double x = pt(rng);
        CNum want = eval(f, Bindings{{"xi", CNum(x)}});
        CNum got = numeric_diff(F, "xi", CNum(x), 1, ctx);
        CHECK(std::abs(got - want) <= 1e-6 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("numeric_diff known derivatives") {
    auto fexp = [](CNum x) { return std::exp(x); };
    CHECK(std::abs(numeric_diff(fexp, CNum(0), 1, 1e-2) - CNum(1.0)) < 1e-8);
    auto fsin = [](CNum x) { return std::sin(x); };
    CHECK(std::abs(numeric_diff(fsin, CNum(0), 3) - CNum(-1.0)) < 1e-6);
    CHECK(std::abs(numeric_diff(fexp, CNum(1), 2) - std::exp(CNum(1))) < 1e-8);
    CHECK_THROWS_AS(numeric_diff(fexp, CNum(0), 4), NumericError);
}

TEST_CASE("pole detection and sampling") {
    Expr e = parse("1/(xi - 1)");
    EvalCtx ctx;
    auto samples = sample_curve(e, "xi", 0.0, 2.0, 5); // grid hits xi = 1
    REQUIRE(samples.size() == 5);
    CHECK(samples[2].excluded);
    CHECK_FALSE(samples[0].excluded);
    CHECK(samples[0].value == CNum(-1.0));

    // constant expression on [0,1], 3 points
    auto flat = sample_curve(parse("1"), "xi", 0.0, 1.0, 3);
    REQUIRE(flat.size() == 3);
    for (const auto& s : flat) {
        CHECK_FALSE(s.excluded);
        CHECK(s.value == CNum(1.0));
    }
    CHECK(flat[1].x == 0.5);

    // sigmoid stays within (0,1) and increases
    auto sig = sample_curve(parse("1/(1+exp(-xi))"), "xi", -5.0, 5.0, 21);
    double prev = -1;
    for (const auto& s : sig) {
        CHECK_FALSE(s.excluded);
        CHECK(s.value.real() > 0.0);
        CHECK(s.value.real() < 1.0);
        CHECK(s.value.real() > prev);
        CHECK(std::abs(s.value.imag()) < 1e-15);
        prev = s.value.real();
    }
}

TEST_CASE("eval determinism: bit-identical reruns") {
    Expr e = parse("erf(xi/3) + Ei1(xi^2+1) + int(exp(sin(xi))*xi, xi)");
    Bindings b{{"xi", CNum(1.7, 0)}};
    CNum v1 = eval(e, b);
    CNum v2 = eval(e, b);
    CHECK(v1.real() == v2.real());
    CHECK(v1.imag() == v2.imag());
}

TEST_CASE("equal_numeric") {
    std::vector<Bindings> pts = {{{"z", CNum(0.3, 0)}},
                                 {{"z", CNum(0, 2.1)}},
                                 {{"z", CNum(-4, 0)}}};
    CHECK(equal_numeric(parse("z^2 - 1"), parse("(z-1)*(z+1)"), pts, 1e-12));
    std::vector<Bindings> xs = {{{"xi", CNum(0.5, 0)}}};
    CHECK_FALSE(equal_numeric(parse("xi"), parse("xi + 0.001"), xs, 1e-6));
}
