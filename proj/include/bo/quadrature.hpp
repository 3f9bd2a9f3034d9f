#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include "bo/errors.hpp"

namespace bo {

// Adaptive Gauss(7)/Kronrod(15) quadrature for complex-valued integrands on a
// finite interval. Bisects until the G7/K15 discrepancy on each panel is below
// the panel's share of the tolerance. Endpoint-integrable singularities (log)
// are handled by the bisection cascade as long as they sit at panel endpoints.
namespace gk {

// Kronrod nodes/weights on [-1,1] (positive half; symmetric).
inline constexpr double xk[8] = {
    0.0, 0.2077849550078985, 0.4058451513773972, 0.5860872354676911,
    0.7415311855993945, 0.8648644233597691, 0.9491079123427585, 0.9914553711208126};
inline constexpr double wk[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854, 0.1690047266392679,
    0.1406532597155259, 0.1047900103222502, 0.0630920926299786, 0.0229353220105292};
inline constexpr double wg[4] = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767, 0.1294849661688697};

template <typename F>
inline void panel(const F& f, double a, double b, std::complex<double>& kres, double& err) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::complex<double> fv[15];
    fv[7] = f(c);
    for (int i = 1; i < 8; ++i) {
        fv[7 - i] = f(c - h * xk[i]);
        fv[7 + i] = f(c + h * xk[i]);
    }
    std::complex<double> resk = wk[0] * fv[7], resg = wg[0] * fv[7];
    for (int i = 1; i < 8; ++i) resk += wk[i] * (fv[7 - i] + fv[7 + i]);
    for (int i = 1; i < 4; ++i) resg += wg[i] * (fv[7 - 2 * i] + fv[7 + 2 * i]);
    kres = resk * h;
    err = std::abs(resk - resg) * h;
}

template <typename F>
inline std::complex<double> adapt(const F& f, double a, double b, double tol, int depth) {
    std::complex<double> res;
    double err;
    panel(f, a, b, res, err);
    if (err < tol || depth > 47) return res;
    const double c = 0.5 * (a + b);
    return adapt(f, a, c, 0.5 * tol, depth + 1) + adapt(f, c, b, 0.5 * tol, depth + 1);
}

} // namespace gk

inline std::complex<double> integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                               double a, double b, double tol = 1e-12) {
    if (!(b > a)) return (a == b) ? 0.0 : -integrate_adaptive(f, b, a, tol);
    return gk::adapt(f, a, b, tol, 0);
}

inline double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                                      double tol = 1e-12) {
    return integrate_adaptive([&](double x) { return std::complex<double>(f(x), 0.0); }, a, b, tol)
        .real();
}

} // namespace bo
