#pragma once

#include <functional>
#include <vector>

#include "bo/expint.hpp"
#include "bo/grid.hpp"

namespace bo {

// Point on the glued spectral domain: the cut plane C \ [0, inf) plus the two
// boundary copies lambda +- 0i of the positive half-line, plus the origin
// (valid only for the modified kernels).
enum class Side { off_axis, plus, minus, zero };

struct SpectralPoint {
    cd k;
    Side side = Side::off_axis;

    static SpectralPoint off(cd k);
    static SpectralPoint boundary(double lambda, Side s);
    static SpectralPoint origin();

    bool on_cut() const { return side == Side::plus || side == Side::minus; }
    double lambda() const { return k.real(); }
};

// Smooth cutoff chi(xi) = s(xi) + i c s(1-s), identically 1 on [0,1] and 0 on
// [2,inf). A nonzero imaginary bump (Im int_1^2 chi/xi != 0) is required by
// the modified solvers; the constants c1, c2 entering the closed form of the
// k = 0 kernel are precomputed by adaptive quadrature and cached.
struct CutoffChi {
    double c = 1.0;
    cd c1, c2;
    double im_integral = 0.0;

    static CutoffChi make(double c_amplitude = 1.0);

    double smooth_step(double xi) const;
    cd chi(double xi) const;

    // l(k) - (1/2pi) log k with the log branch cut on [0, inf); analytic near 0.
    cd l_analytic_part(cd k) const;
};

// Pointwise kernel evaluation. x != 0 in all cases (logarithmic singularity).
cd eval_Gtilde(cd k, double x);                       // k off (-inf, 0]
cd eval_G(const SpectralPoint& k, double x);          // side != zero
cd eval_l(const SpectralPoint& k, const CutoffChi&);  // side != zero
cd eval_G0(const SpectralPoint& k, double x, const CutoffChi&);
cd eval_G00(double x, const CutoffChi&);

// --- Nystrom lag weights ----------------------------------------------------
//
// Quadrature for (K * g)(x_i) ~ sum_j lag(i-j) g(x_j) on the uniform grid.
// The kernel is split as K = K_rest + eta(d) [Q(d) ln|d| + Rg(d) sgn(d)] with
// entire Q, Rg and a smooth window eta supported on |d| < w2*dx. The smooth
// remainder is integrated by the trapezoid rule (spectrally accurate for
// decayed smooth data); the windowed singular part by product integration
// against a 6-point local polynomial interpolant of the density, with cell
// moments computed adaptively once per kernel.
struct AssemblyParams {
    int w1 = 8;  // eta == 1 on |d| <= w1*dx
    int w2 = 32; // eta == 0 on |d| >= w2*dx; clamped to N/8 on coarse grids
};

struct KernelFamily {
    std::function<cd(double)> point; // K(d), d != 0
    std::function<cd(double)> Q;     // ln|d| coefficient (entire)
    std::function<cd(double)> Rg;    // sgn(d) coefficient (entire)
    cd P0;                           // lim_{d->0} K - Q ln|d| - Rg sgn(d)
    bool conj_mirror = false;        // S(d) = conj(S(-d)); mirror cell weights
    double osc_scale = 0.0;          // |k| of the e^{ikd}-type oscillation
};

KernelFamily family_G(const SpectralPoint& k);
KernelFamily family_G_efactored(double lambda, Side side); // e^{-i la d} G_{la+-0i}(d)
KernelFamily family_G00(const CutoffChi& chi);

struct ToeplitzKernel {
    Grid grid;
    std::vector<cd> lags; // size 2N-1
    cd lag(int m) const { return lags[m + grid.N - 1]; }
};

ToeplitzKernel build_kernel_lags(const KernelFamily& fam, const Grid& g,
                                 const AssemblyParams& p = {});

// Cut-boundary lag pair with the discrete reflection identity and the Plemelj
// difference (plus - minus = i dx e-factor) enforced exactly; the minus side
// is derived from the symmetrized plus side.
struct BoundaryLags {
    ToeplitzKernel plus, minus;
};
BoundaryLags boundary_lag_pair(double lambda, bool efactored, const Grid& g,
                               const AssemblyParams& p = {});
ToeplitzKernel cut_lags(double lambda, Side side, bool efactored, const Grid& g,
                        const AssemblyParams& p = {});

// Trapezoid lags of the plain one-sided exponential part
//   S_k(d) = sign * i * e^{ikd} H(sign*d), H(0) = 1/2  (sign = +1 / -1),
// optionally with the e^{ikd} factor dropped (e-factored form).
ToeplitzKernel plain_triangular_lags(cd k, int sign, const Grid& g, bool efactored);

} // namespace bo
