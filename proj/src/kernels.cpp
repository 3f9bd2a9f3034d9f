#include "bo/kernels.hpp"

#include <array>
#include <cmath>

#include "bo/quadrature.hpp"

namespace bo {

namespace {
constexpr double two_pi = 2.0 * M_PI;
const cd I(0.0, 1.0);
} // namespace

SpectralPoint SpectralPoint::off(cd k) {
    if (k.imag() == 0.0 && k.real() >= 0.0)
        throw ConfigError("off-axis spectral point must avoid the cut [0, inf)");
    return {k, Side::off_axis};
}

SpectralPoint SpectralPoint::boundary(double lambda, Side s) {
    if (s != Side::plus && s != Side::minus)
        throw ConfigError("boundary spectral point needs side plus or minus");
    if (!(lambda > 0.0)) throw ConfigError("boundary spectral point needs lambda > 0");
    return {cd(lambda, 0.0), s};
}

SpectralPoint SpectralPoint::origin() { return {cd(0.0, 0.0), Side::zero}; }

// --- CutoffChi ---------------------------------------------------------------

double CutoffChi::smooth_step(double xi) const {
    if (xi <= 1.0) return 1.0;
    if (xi >= 2.0) return 0.0;
    const double a = std::exp(-1.0 / (2.0 - xi));
    const double b = std::exp(-1.0 / (xi - 1.0));
    return a / (a + b);
}

cd CutoffChi::chi(double xi) const {
    const double s = smooth_step(xi);
    return cd(s, c * s * (1.0 - s));
}

CutoffChi CutoffChi::make(double c_amplitude) {
    CutoffChi out;
    out.c = c_amplitude;
    const cd ichi = integrate_adaptive(
        [&](double xi) { return out.chi(xi) / xi; }, 1.0, 2.0, 1e-14);
    out.im_integral = ichi.imag();
    // Universal constant int_0^1 (e^{i xi}-1)/xi + int_1^inf e^{i xi}/xi = -gamma + i pi/2.
    const cd u = integrate_adaptive(
                     [](double xi) { return (std::exp(I * xi) - 1.0) / xi; }, 0.0, 1.0, 1e-14) +
                 expint::E1(cd(0.0, -1.0));
    out.c1 = u - ichi;
    out.c2 = std::conj(u) - ichi;
    return out;
}

// Analytic remainder of the small-k split of l(k). With the log branch cut on
// [0, inf), l(k) = -(1/2pi) log k + h(k) with h analytic around k = 0; this
// returns h(k) = l(k) + (1/2pi) log k.
cd CutoffChi::l_analytic_part(cd k) const {
    if (k.imag() == 0.0 && k.real() >= 0.0)
        throw ConfigError("l_analytic_part needs k off the cut [0, inf)");
    SpectralPoint sp = SpectralPoint::off(k);
    double theta = std::arg(k);
    if (theta < 0.0) theta += two_pi;
    const cd logk(std::log(std::abs(k)), theta);
    return eval_l(sp, *this) + logk / two_pi;
}

// --- pointwise kernels -------------------------------------------------------

cd eval_Gtilde(cd k, double x) {
    if (x == 0.0) throw Error("Gtilde has a logarithmic singularity at x = 0");
    if (k.imag() == 0.0 && k.real() <= 0.0)
        throw ConfigError("Gtilde requires k off the cut (-inf, 0]");
    const cd z = I * k * x;
    cd F;
    if (z.imag() == 0.0 && z.real() < 0.0) {
        // k on the imaginary axis; the Abel limit approaches the E1 cut from
        // the side of Im k.
        F = expint::expE1_cut(-z.real(), k.imag() > 0.0 ? +1 : -1);
    } else {
        F = expint::expE1(z);
        // Analytic continuation across the E1 cut: the product i*k*x leaves the
        // principal sheet when k crosses the imaginary axis.
        const double ak = std::arg(k);
        if (x > 0.0 && ak > M_PI_2) F -= two_pi * I * std::exp(z);
        else if (x < 0.0 && ak < -M_PI_2) F += two_pi * I * std::exp(z);
    }
    return -F / two_pi;
}

cd eval_G(const SpectralPoint& sp, double x) {
    if (sp.side == Side::zero) throw ConfigError("G_k is not defined at k = 0; use the modified kernels");
    if (x == 0.0) throw Error("G_k has a logarithmic singularity at x = 0");
    const cd k = sp.k;
    switch (sp.side) {
        case Side::plus:
            return (x > 0.0 ? I * std::exp(I * k * x) : cd(0.0)) - eval_Gtilde(k, x);
        case Side::minus:
            return (x < 0.0 ? -I * std::exp(I * k * x) : cd(0.0)) - eval_Gtilde(k, x);
        default:
            break;
    }
    if (k.imag() > 0.0)
        return (x > 0.0 ? I * std::exp(I * k * x) : cd(0.0)) - eval_Gtilde(k, x);
    if (k.imag() < 0.0)
        return (x < 0.0 ? -I * std::exp(I * k * x) : cd(0.0)) - eval_Gtilde(k, x);
    // negative real axis: z = ikx purely imaginary, principal branch
    return expint::expE1(I * k * x) / two_pi;
}

cd eval_l(const SpectralPoint& sp, const CutoffChi& chi) {
    if (sp.side == Side::zero) throw ConfigError("l(k) is not defined at k = 0");
    const cd k = sp.k;
    cd closed;
    if (sp.on_cut()) {
        const double la = sp.lambda();
        if (!(la < 1.0))
            throw ConfigError("boundary l(lambda +- 0i) implemented for lambda < 1 only");
        closed = cd(std::log((1.0 - la) / la), sp.side == Side::plus ? M_PI : -M_PI);
    } else {
        closed = std::log(1.0 - k) - std::log(-k);
    }
    const cd tail = integrate_adaptive(
        [&](double xi) { return chi.chi(xi) / (xi - k); }, 1.0, 2.0, 1e-13);
    return (closed + tail) / two_pi;
}

cd eval_G0(const SpectralPoint& sp, double x, const CutoffChi& chi) {
    return eval_G(sp, x) - eval_l(sp, chi);
}

cd eval_G00(double x, const CutoffChi& chi) {
    if (x == 0.0) throw Error("G00 has a logarithmic singularity at x = 0");
    const cd c = x > 0.0 ? chi.c1 : chi.c2;
    return (c - std::log(std::abs(x))) / two_pi;
}

// --- kernel families ----------------------------------------------------------

KernelFamily family_G(const SpectralPoint& sp) {
    KernelFamily f;
    const cd k = sp.k;
    f.osc_scale = std::abs(k);
    f.point = [sp](double d) { return eval_G(sp, d); };
    f.Q = [k](double d) { return -std::exp(I * k * d) / two_pi; };
    f.Rg = [k](double d) { return (I / 4.0) * std::exp(I * k * d); };
    if (sp.side == Side::plus) {
        f.P0 = I * 0.5 - (euler_gamma + std::log(k.real())) / two_pi;
        f.conj_mirror = true;
    } else if (sp.side == Side::minus) {
        f.P0 = -I * 0.5 - (euler_gamma + std::log(k.real())) / two_pi;
        f.conj_mirror = true;
    } else if (k.imag() > 0.0) {
        f.P0 = I * 0.5 - (euler_gamma + std::log(k)) / two_pi;
    } else if (k.imag() < 0.0) {
        f.P0 = -I * 0.5 - (euler_gamma + std::log(k)) / two_pi;
    } else {
        // negative real axis
        f.P0 = -(euler_gamma + std::log(std::abs(k))) / two_pi;
        f.conj_mirror = true;
    }
    return f;
}

KernelFamily family_G_efactored(double lambda, Side side) {
    if (side != Side::plus && side != Side::minus)
        throw ConfigError("e-factored kernel needs a boundary side");
    KernelFamily f;
    const double la = lambda;
    const double sgn_chi = (side == Side::plus) ? 1.0 : -1.0;
    f.osc_scale = la; // E1(i la d) oscillates at frequency la
    f.point = [la, sgn_chi](double d) {
        const cd z = I * la * d;
        const cd e1 = std::exp(-z) * expint::expE1(z);
        cd chi_part(0.0);
        if (sgn_chi > 0 && d > 0) chi_part = I;
        if (sgn_chi < 0 && d < 0) chi_part = -I;
        return chi_part + e1 / two_pi;
    };
    f.Q = [](double) { return cd(-1.0 / two_pi); };
    f.Rg = [](double) { return I / 4.0; };
    f.P0 = I * (0.5 * sgn_chi) - (euler_gamma + std::log(la)) / two_pi;
    f.conj_mirror = true;
    return f;
}

KernelFamily family_G00(const CutoffChi& chi) {
    KernelFamily f;
    const cd c1 = chi.c1, c2 = chi.c2;
    f.point = [c1, c2](double d) {
        return (-std::log(std::abs(d)) + (d > 0.0 ? c1 : c2)) / two_pi;
    };
    f.Q = [](double) { return cd(-1.0 / two_pi); };
    f.Rg = [c1, c2](double) { return (c1 - c2) / (2.0 * two_pi); };
    f.P0 = (c1 + c2) / (2.0 * two_pi);
    f.conj_mirror = false;
    return f;
}

// --- lag construction ----------------------------------------------------------

namespace {

double eta_window(double cells, const AssemblyParams& p) {
    const double t = std::abs(cells);
    if (t <= p.w1) return 1.0;
    if (t >= p.w2) return 0.0;
    const double s = (t - p.w1) / double(p.w2 - p.w1);
    const double a = std::exp(-1.0 / (1.0 - s));
    const double b = std::exp(-1.0 / s);
    return a / (a + b);
}

// Lagrange basis on nodes {-2.5,...,2.5} expanded in monomials of the
// cell-centered coordinate.
std::array<std::array<double, 6>, 6> lagrange6_coeffs() {
    std::array<std::array<double, 6>, 6> L{};
    const double nodes[6] = {-2.5, -1.5, -0.5, 0.5, 1.5, 2.5};
    for (int s = 0; s < 6; ++s) {
        std::array<double, 6> poly{};
        poly[0] = 1.0;
        int deg = 0;
        double denom = 1.0;
        for (int r = 0; r < 6; ++r) {
            if (r == s) continue;
            denom *= nodes[s] - nodes[r];
            for (int q = deg; q >= 0; --q) {
                poly[q + 1] += poly[q];
                poly[q] *= -nodes[r];
            }
            ++deg;
        }
        for (int q = 0; q < 6; ++q) L[s][q] = poly[q] / denom;
    }
    return L;
}

} // namespace

ToeplitzKernel build_kernel_lags(const KernelFamily& fam, const Grid& g, const AssemblyParams& p0) {
    const int N = g.N;
    const double dx = g.dx();
    AssemblyParams p = p0;
    p.w2 = std::min(p.w2, std::max(8, N / 8));
    p.w1 = std::min(p.w1, p.w2 / 2);
    ToeplitzKernel tk;
    tk.grid = g;
    tk.lags.assign(2 * N - 1, cd(0.0));

    // Kernels oscillating on a subgrid scale get the whole windowed kernel
    // integrated by moments; the trapezoid then only sees the windowed-out
    // far field.
    const bool stiff = fam.osc_scale * dx > 0.25;

    auto S = [&](double d) -> cd {
        if (d == 0.0) return cd(0.0);
        const double e = eta_window(d / dx, p);
        if (e == 0.0) return cd(0.0);
        if (stiff) return e * fam.point(d);
        return e * (fam.Q(d) * std::log(std::abs(d)) + fam.Rg(d) * (d > 0.0 ? 1.0 : -1.0));
    };

    // Trapezoid part of the smooth remainder K - S.
    for (int m = -(N - 1); m <= N - 1; ++m) {
        cd v;
        if (m == 0) {
            v = stiff ? cd(0.0) : fam.P0;
        } else {
            const double d = m * dx;
            v = fam.point(d);
            if (std::abs(m) < p.w2) v -= S(d);
        }
        tk.lags[m + N - 1] = dx * v;
    }

    // Windowed singular part by 6-point product integration per cell. For
    // conjugate-symmetric singular parts the mirror cells reuse conjugated
    // weights, which keeps the discrete reflection identity exact; the stiff
    // path integrates the full (one-sided) kernel, so both sides are built
    // directly there.
    const bool mirror = fam.conj_mirror && !stiff;
    static const auto L6 = lagrange6_coeffs();
    auto add_cell = [&](int c) {
        const double a = c * dx, b = (c + 1) * dx;
        const double center = 0.5 * (a + b);
        std::array<cd, 6> mu{};
        for (int q = 0; q < 6; ++q) {
            mu[q] = integrate_adaptive(
                [&](double d) {
                    const double t = (d - center) / dx;
                    return S(d) * std::pow(t, q);
                },
                a, b, 1e-14);
        }
        for (int s = 0; s < 6; ++s) {
            cd w(0.0);
            for (int q = 0; q < 6; ++q) w += L6[s][q] * mu[q];
            const int m = c - 2 + s;
            if (std::abs(m) <= N - 1) tk.lags[m + N - 1] += w;
            if (mirror && std::abs(m) <= N - 1) tk.lags[-m + N - 1] += std::conj(w);
        }
    };
    for (int c = 0; c < p.w2; ++c) {
        add_cell(c);
        if (!mirror) add_cell(-c - 1);
    }
    return tk;
}

BoundaryLags boundary_lag_pair(double lambda, bool efactored, const Grid& g,
                               const AssemblyParams& p) {
    const KernelFamily fam = efactored ? family_G_efactored(lambda, Side::plus)
                                       : family_G(SpectralPoint::boundary(lambda, Side::plus));
    ToeplitzKernel plus = build_kernel_lags(fam, g, p);
    const int N = g.N;
    const double dx = g.dx();
    auto w = [&](int m) {
        return efactored ? cd(dx) : dx * std::exp(I * lambda * double(m) * dx);
    };
    // enforce Psi(m) = conj(Psi(-m)) + i w(m) exactly (a no-op up to roundoff
    // in the mirror-built smooth mode, a symmetrization of quadrature noise in
    // the stiff mode)
    for (int m = 0; m <= N - 1; ++m) {
        const cd a = plus.lag(m), b = plus.lag(-m);
        plus.lags[m + N - 1] = 0.5 * (a + std::conj(b) + I * w(m));
        plus.lags[-m + N - 1] = 0.5 * (b + std::conj(a) + I * w(-m));
    }
    BoundaryLags out;
    out.minus = plus;
    for (int m = -(N - 1); m <= N - 1; ++m) out.minus.lags[m + N - 1] -= I * w(m);
    out.plus = std::move(plus);
    return out;
}

ToeplitzKernel cut_lags(double lambda, Side side, bool efactored, const Grid& g,
                        const AssemblyParams& p) {
    BoundaryLags pair = boundary_lag_pair(lambda, efactored, g, p);
    return side == Side::plus ? std::move(pair.plus) : std::move(pair.minus);
}

ToeplitzKernel plain_triangular_lags(cd k, int sign, const Grid& g, bool efactored) {
    const int N = g.N;
    const double dx = g.dx();
    ToeplitzKernel tk;
    tk.grid = g;
    tk.lags.assign(2 * N - 1, cd(0.0));
    const cd coef = cd(0.0, double(sign)) * dx;
    for (int m = -(N - 1); m <= N - 1; ++m) {
        const double h = (sign * m > 0) ? 1.0 : (m == 0 ? 0.5 : 0.0);
        if (h == 0.0) continue;
        const cd phase = efactored ? cd(1.0) : std::exp(I * k * double(m) * dx);
        tk.lags[m + N - 1] = coef * h * phase;
    }
    return tk;
}

} // namespace bo
