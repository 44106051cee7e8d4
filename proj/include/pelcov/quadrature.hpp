// Adaptive Gauss-Kronrod (7-15) quadrature on finite intervals.
#pragma once

#include <cmath>
#include <stdexcept>

namespace pelcov {

namespace detail {

// 15-point Kronrod nodes/weights on [-1, 1] with the embedded 7-point Gauss rule.
inline constexpr double gk_nodes[8] = {
    0.000000000000000000000000000000000e+00, 2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01, 5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01, 8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01, 9.914553711208126392068546975263285e-01};
inline constexpr double gk_wk[8] = {
    2.094821410847278280129991748917143e-01, 2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01, 1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01, 1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02, 2.293532201052922496373200805896959e-02};
inline constexpr double gk_wg[4] = {
    4.179591836734693877551020408163265e-01, 3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01, 1.294849661688696932706114326790820e-01};

template <typename F>
inline void gk15(const F& f, double a, double b, double& value, double& err) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    const double fc = f(c);
    double resk = gk_wk[0] * fc;
    double resg = gk_wg[0] * fc;
    for (int j = 1; j < 8; ++j) {
        const double x = hw * gk_nodes[j];
        const double fs = f(c - x) + f(c + x);
        resk += gk_wk[j] * fs;
        if (j % 2 == 0) resg += gk_wg[j / 2] * fs;
    }
    value = resk * hw;
    err = std::fabs((resk - resg) * hw);
}

template <typename F>
inline double adapt(const F& f, double a, double b, double tol, int depth) {
    double v, e;
    gk15(f, a, b, v, e);
    if (e <= tol || depth >= 48) return v;
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1) + adapt(f, m, b, 0.5 * tol, depth + 1);
}

} // namespace detail

/// Integrate f over [a, b] to the requested absolute tolerance.
template <typename F>
inline double integrate(const F& f, double a, double b, double abs_tol = 1e-10) {
    if (!(std::isfinite(a) && std::isfinite(b))) throw std::domain_error("integrate: finite bounds required");
    if (a == b) return 0.0;
    const double sign = a < b ? 1.0 : -1.0;
    if (sign < 0) std::swap(a, b);
    return sign * detail::adapt(f, a, b, abs_tol, 0);
}

} // namespace pelcov
