#include "auxwave/quadrature.hpp"

#include <cmath>
#include <set>
#include <vector>

namespace auxwave {

namespace {

using C = std::complex<double>;

// Kronrod-15 abscissae on [0,1] side (symmetric) and weights; Gauss-7 weights
// sit on the odd-indexed abscissae.
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    C kronrod;
    double err;
};

Segment evaluate(const std::function<C(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    C gauss = 0.0, kron = 0.0;
    for (int i = 0; i < 8; ++i) {
        C fsum;
        if (i == 7) {
            fsum = f(mid);
        } else {
            fsum = f(mid - half * xgk[i]) + f(mid + half * xgk[i]);
        }
        kron += wgk[i] * fsum;
        if (i % 2 == 1) gauss += wg[i / 2] * fsum; // Gauss-7 nodes, center included
    }
    kron *= half;
    gauss *= half;
    return {a, b, kron, std::abs(kron - gauss)};
}

struct SegOrder {
    bool operator()(const Segment& x, const Segment& y) const {
        if (x.err != y.err) return x.err > y.err;
        return x.a < y.a;
    }
};

} // namespace

C integrate(const std::function<C(double)>& f, double a, double b,
            const QuadratureSpec& spec) {
    if (a == b) return 0.0;
    if (a > b) return -integrate(f, b, a, spec);

    std::multiset<Segment, SegOrder> segs;
    Segment whole = evaluate(f, a, b);
    C total = whole.kronrod;
    double err = whole.err;
    segs.insert(whole);

    int splits = 0;
    while (err > std::max(spec.abs_floor, spec.rel_tol * std::abs(total))) {
        if (splits >= spec.max_subdiv)
            throw QuadratureError("quadrature did not converge");
        Segment worst = *segs.begin();
        segs.erase(segs.begin());
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b)
            throw QuadratureError("quadrature interval collapsed");
        Segment left = evaluate(f, worst.a, mid);
        Segment right = evaluate(f, mid, worst.b);
        total += left.kronrod + right.kronrod - worst.kronrod;
        err += left.err + right.err - worst.err;
        segs.insert(left);
        segs.insert(right);
        ++splits;
    }
    return total;
}

} // namespace auxwave
