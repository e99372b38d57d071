#include <stdexcept>

#include "auxwave/bernoulli.hpp"
#include "auxwave/parse.hpp"

namespace auxwave {

namespace {

struct Row {
    int index;
    const char* P;
    const char* Q;
    const char* z;
    const char* notes;
};

// Variable-coefficient cases with n = 2. A, B, C are free parameters, C1 the
// integration constant; every integral runs from 0. The closed-form entries
// use principal square roots, so they are complex-valued for parameter signs
// that put the radicand on the negative axis; that is fine for verification,
// which works over the complex field.
const Row kRows[] = {
    {1, "(A*xi+B)^2", "A*xi+B",
     "exp(1/3*A^2*xi^3+A*xi^2*B+xi*B^2)/"
     "(int(-exp(1/3*A^2*xi^3+A*xi^2*B+xi*B^2)*(A*xi+B),xi)+C1)",
     "closed integrating factor, denominator kept in quadrature form; simple "
     "pole where the denominator vanishes"},
    {2, "A*cos(xi)", "B*sin(xi)",
     "exp(A*sin(xi))/(int(-exp(A*sin(xi))*B*sin(xi),xi)+C1)",
     "denominator kept in quadrature form"},
    {3, "A", "(C*xi+B)^2",
     "A^3/(-A^2*B^2+2*A*C*B-2*C^2-2*A^2*C*xi*B+2*A*C^2*xi-C^2*xi^2*A^2+"
     "exp(-A*xi)*C1*A^3)",
     "fully closed; needs A != 0"},
    {4, "A", "B", "A/(-B+exp(-A*xi)*C1*A)",
     "logistic-type; needs A != 0; pole where C1*A*exp(-A*xi) = B"},
    {5, "A", "exp(C*xi)",
     "(A+C)/(-exp(C*xi)+exp(-A*xi)*C1*A+exp(-A*xi)*C1*C)",
     "fully closed; needs A + C != 0"},
    {6, "A", "exp(C*xi)+B",
     "(A+C)*A/(-A*exp(C*xi)-A*B-B*C+exp(-A*xi)*C1*A^2+exp(-A*xi)*C1*A*C)",
     "fully closed; needs A != 0 and A + C != 0"},
    {7, "A*sin(xi)", "C*xi+B",
     "exp(-A*cos(xi))/(int(-exp(-A*cos(xi))*(C*xi+B),xi)+C1)",
     "denominator kept in quadrature form"},
    {8, "A*cos(xi)", "C*xi+B",
     "exp(A*sin(xi))/(int(-exp(A*sin(xi))*(C*xi+B),xi)+C1)",
     "denominator kept in quadrature form"},
    {9, "exp(C*xi)", "A",
     "C*exp(exp(C*xi)/C)/(Ei1(-exp(C*xi)/C)*A+C1*C)",
     "closed via Ei1; for real C > 0 the Ei1 argument lies on the cut "
     "(-inf, 0] and takes the limit from above, so z is complex there"},
    {10, "exp(C*xi)", "A*xi+B",
     "exp(exp(C*xi)/C)/(int(-exp(exp(C*xi)/C)*(A*xi+B),xi)+C1)",
     "denominator kept in quadrature form"},
    {11, "A*xi+B", "exp(C*xi)",
     "(-2*A)^(1/2)*exp(1/2*A*xi^2+B*xi)/"
     "(pi^(1/2)*exp(-(B+C)^2/(2*A))*erf((A*xi+B+C)/(-2*A)^(1/2))+"
     "C1*(-2*A)^(1/2))",
     "closed via erf; (-2*A)^(1/2) principal, complex-valued for A > 0"},
    {12, "A*sin(xi)", "exp(C*xi)",
     "exp(-A*cos(xi))/(int(-exp(-A*cos(xi))*exp(C*xi),xi)+C1)",
     "denominator kept in quadrature form"},
    {13, "exp(C*xi)", "A*sin(xi)",
     "exp(exp(C*xi)/C)/(int(-exp(exp(C*xi)/C)*sin(xi)*A,xi)+C1)",
     "denominator kept in quadrature form"},
    {14, "A*cos(xi)", "exp(C*xi)",
     "exp(A*sin(xi))/(int(-exp(A*sin(xi))*exp(C*xi),xi)+C1)",
     "denominator kept in quadrature form"},
    {15, "exp(C*xi)", "A*cos(xi)",
     "exp(exp(C*xi)/C)/(int(-exp(exp(C*xi)/C)*cos(xi)*A,xi)+C1)",
     "denominator kept in quadrature form"},
    {16, "A*sin(xi)", "B*cos(xi)",
     "exp(-A*cos(xi))/(int(-exp(-A*cos(xi))*B*cos(xi),xi)+C1)",
     "denominator kept in quadrature form"},
    {17, "C*xi+B", "A",
     "(-2*C)^(1/2)*exp(1/2*C*xi^2+B*xi)/"
     "(A*pi^(1/2)*exp(-B^2/(2*C))*erf((C*xi+B)/(-2*C)^(1/2))+"
     "C1*(-2*C)^(1/2))",
     "closed via erf; (-2*C)^(1/2) principal, complex-valued for C > 0"},
    {18, "exp(C*xi)", "exp(B*xi)",
     "exp(exp(C*xi)/C)/(int(-exp(exp(C*xi)/C)*exp(B*xi),xi)+C1)",
     "denominator kept in quadrature form"},
    {19, "C*xi+B", "A*cos(xi)",
     "2*(-2*C)^(1/2)*exp(1/2*C*xi^2+B*xi)/"
     "(A*pi^(1/2)*exp(-(B+I)^2/(2*C))*erf((C*xi+B+I)/(-2*C)^(1/2))+"
     "A*pi^(1/2)*exp(-(B-I)^2/(2*C))*erf((C*xi+B-I)/(-2*C)^(1/2))+"
     "2*C1*(-2*C)^(1/2))",
     "closed via an erf pair with complex-shifted arguments; real-valued "
     "combinations exist but the printed form is taken verbatim"},
    {20, "C*xi+B", "A*sin(xi)",
     "2*I*(-2*C)^(1/2)*exp(1/2*C*xi^2+B*xi)/"
     "(A*pi^(1/2)*exp(-(B+I)^2/(2*C))*erf((C*xi+B+I)/(-2*C)^(1/2))-"
     "A*pi^(1/2)*exp(-(B-I)^2/(2*C))*erf((C*xi+B-I)/(-2*C)^(1/2))+"
     "2*C1*(-2*C)^(1/2))",
     "closed via an erf pair with complex-shifted arguments"},
};

std::vector<CatalogEntry> build() {
    std::vector<CatalogEntry> v;
    v.reserve(std::size(kRows));
    for (const Row& r : kRows) {
        CatalogEntry e;
        e.index = r.index;
        e.eq.P = parse(r.P);
        e.eq.Q = parse(r.Q);
        e.eq.n = 2;
        e.sol.z = parse(r.z);
        e.sol.form = contains_integral(e.sol.z) ? SolutionForm::Quadrature
                                                : SolutionForm::Closed;
        e.sol.notes = r.notes;
        // Both the tabulated z and solve_general use antiderivatives with no
        // added constant (every closed rule and every quadrature runs from
        // the same normalization), so the integration constants coincide.
        e.c1_map = "C1 (catalog) = C1 (solve_general)";
        v.push_back(std::move(e));
    }
    return v;
}

} // namespace

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> v = build();
    return v;
}

const CatalogEntry& catalog_case(int index) {
    const auto& v = catalog();
    if (index < 1 || index > static_cast<int>(v.size()))
        throw std::out_of_range("catalog case index must be in 1.." +
                                std::to_string(v.size()) + ", got " +
                                std::to_string(index));
    return v[static_cast<size_t>(index - 1)];
}

} // namespace auxwave
