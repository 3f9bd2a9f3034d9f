#pragma once

#include <complex>

namespace bo {

using cd = std::complex<double>;

inline constexpr double euler_gamma = 0.5772156649015328606;

namespace expint {

// Entire part of the exponential integral:
//   E1(z) = entire(z) - euler_gamma - log(z),   entire(z) = sum_{n>=1} (-1)^{n+1} z^n / (n n!).
// Accurate for |z| <= ~48 when |z| + Re z is moderate (no catastrophic
// cancellation near the negative axis, where the series is same-signed).
cd entire_series(cd z);

// e^{-t} Ei(t) for t > 0.
double exp_ei(double t);

// Principal-branch F(z) = e^z E1(z), z not on (-inf, 0].
cd expE1(cd z);

// Boundary values of F on the cut: z = -t (t > 0), approached from
// Im z > 0 (side = +1) or Im z < 0 (side = -1):
//   E1(-t -+/+ i0) = -Ei(t) -/+ i pi  =>  F = -e^{-t} Ei(t) - side * i pi e^{-t}.
cd expE1_cut(double t, int side);

// E1 itself (principal branch), via e^{-z} F(z).
cd E1(cd z);

} // namespace expint
} // namespace bo
