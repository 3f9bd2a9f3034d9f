#include "bo/modified_jost.hpp"

#include <cmath>

namespace bo {

namespace {

const cd I(0.0, 1.0);
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

void require_chi(const CutoffChi& chi) {
    if (!(std::abs(chi.im_integral) > chi_floor))
        throw ChiViolationError("cutoff chi violates the nonzero-imaginary-integral condition");
}

struct ModSolver {
    Grid g;
    ToeplitzKernel lags;
    Mat T;
    Eigen::PartialPivLU<Mat> lu;
    double cond = 0.0;

    ModSolver(const Potential& u, const SpectralPoint& k, const CutoffChi& chi,
              const SolveOptions& opts) {
        g = u.grid;
        lags = modified_lags(u, k, chi, opts.assembly);
        const int N = g.N;
        T.resize(N, N);
        for (int j = 0; j < N; ++j) {
            const double uj = u.u[j];
            for (int i = 0; i < N; ++i) T(i, j) = lags.lag(i - j) * uj;
        }
        lu.compute(Mat::Identity(N, N) - T);
        const double rc = lu.rcond();
        cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
        if (!(cond < opts.cond_limit))
            throw IllConditionedError("modified system condition estimate above limit", cond);
    }

    Vec solve(const Vec& b) const {
        Vec x = lu.solve(b);
        Vec r = b - (x - T * x);
        x += lu.solve(r);
        return x;
    }

    double residual(const Vec& x, const Vec& b) const {
        return (b - (x - T * x)).lpNorm<Eigen::Infinity>();
    }
};

JostFunction solve_mod(const Potential& u, const SpectralPoint& k, const CutoffChi& chi,
                       const SolveOptions& opts, JostKind kind) {
    require_chi(chi);
    const Grid& g = u.grid;
    const int N = g.N;
    ModSolver s(u, k, chi, opts);
    Vec b(N);
    for (int i = 0; i < N; ++i)
        b(i) = (kind == JostKind::m1_mod) ? cd(1.0) : std::exp(I * k.k * g.x(i));
    Vec x = s.solve(b);
    const double resid = s.residual(x, b);
    if (!(resid < opts.solver_tol)) throw NoConvergenceError("modified solve residual above tolerance");
    JostFunction jf;
    jf.which = kind;
    jf.at = k;
    jf.values = SampledFunction(g, {x.data(), x.data() + N});
    jf.residual_inf = resid;
    jf.solve_path = SolvePath::nystrom;
    return jf;
}

cd inner_with_u(const SampledFunction& f, const Potential& u) {
    cd s = 0.0;
    for (int i = 0; i < u.grid.N; ++i) s += f[i] * u.u[i];
    return s * u.grid.dx();
}

} // namespace

ToeplitzKernel modified_lags(const Potential& u, const SpectralPoint& k, const CutoffChi& chi,
                             const AssemblyParams& p) {
    if (k.side == Side::zero) return build_kernel_lags(family_G00(chi), u.grid, p);
    ToeplitzKernel tk = k.on_cut() ? cut_lags(k.lambda(), k.side, false, u.grid, p)
                                   : build_kernel_lags(family_G(k), u.grid, p);
    const cd shift = eval_l(k, chi) * u.grid.dx();
    for (auto& v : tk.lags) v -= shift;
    return tk;
}

JostFunction solve_m1_mod(const Potential& u, const SpectralPoint& k, const CutoffChi& chi,
                          const SolveOptions& opts) {
    return solve_mod(u, k, chi, opts, JostKind::m1_mod);
}

JostFunction solve_me_mod(const Potential& u, double lambda, Side side, const CutoffChi& chi,
                          const SolveOptions& opts) {
    return solve_mod(u, SpectralPoint::boundary(lambda, side), chi, opts, JostKind::me_mod);
}

JostFunction reconstruct_m1(const JostFunction& m1_mod, const Potential& u, const CutoffChi& chi,
                            const SolveOptions& opts) {
    const SpectralPoint k = m1_mod.at;
    if (k.side == Side::zero)
        throw ConfigError("reconstruct_m1: the original Jost function is not defined at k = 0");
    const cd l = eval_l(k, chi);
    const cd denom = 1.0 - l * inner_with_u(m1_mod.values, u);
    if (std::abs(denom) < 1e-10)
        throw DegenerateDenominatorError("reconstruct_m1: 1 - l(k) <m1^0, u> vanishes");
    JostFunction out;
    out.which = JostKind::m1;
    out.at = k;
    out.solve_path = SolvePath::nystrom;
    out.values = SampledFunction(u.grid);
    for (int i = 0; i < u.grid.N; ++i) out.values[i] = m1_mod.values[i] / denom;

    // residual against the unmodified operator (I - T_k) m1 = 1
    ToeplitzKernel full = k.on_cut() ? cut_lags(k.lambda(), k.side, false, u.grid, opts.assembly)
                                     : build_kernel_lags(family_G(k), u.grid, opts.assembly);
    std::vector<cd> tm = apply_T(full, u.u, out.values.values);
    double resid = 0.0;
    for (int i = 0; i < u.grid.N; ++i)
        resid = std::max(resid, std::abs(1.0 - (out.values[i] - tm[i])));
    out.residual_inf = resid;
    return out;
}

JostFunction reconstruct_me(const JostFunction& me_mod, const JostFunction& m1_mod,
                            const Potential& u, const CutoffChi& chi, const SolveOptions& opts) {
    const SpectralPoint k = me_mod.at;
    JostFunction m1 = reconstruct_m1(m1_mod, u, chi, opts);
    const cd l = eval_l(k, chi);
    const cd w = l * inner_with_u(me_mod.values, u);
    JostFunction out;
    out.which = JostKind::me;
    out.at = k;
    out.solve_path = SolvePath::nystrom;
    out.values = SampledFunction(u.grid);
    for (int i = 0; i < u.grid.N; ++i)
        out.values[i] = me_mod.values[i] + w * m1.values[i];

    ToeplitzKernel full = k.on_cut() ? cut_lags(k.lambda(), k.side, false, u.grid, opts.assembly)
                                     : build_kernel_lags(family_G(k), u.grid, opts.assembly);
    std::vector<cd> tm = apply_T(full, u.u, out.values.values);
    double resid = 0.0;
    for (int i = 0; i < u.grid.N; ++i) {
        const cd e = std::exp(I * k.k * u.grid.x(i));
        resid = std::max(resid, std::abs(e - (out.values[i] - tm[i])));
    }
    out.residual_inf = resid;
    return out;
}

GenericityReport classify_genericity(const Potential& u, const CutoffChi& chi,
                                     const SolveOptions& opts) {
    GenericityReport rep;
    rep.chi_c = chi.c;
    rep.threshold_used = std::max(1e-8 * u.l1_norm, 1e-10);
    if (u.is_zero()) {
        rep.inner_product = 0.0;
        rep.is_generic = false;
        return rep;
    }
    JostFunction m0 = solve_m1_mod(u, SpectralPoint::origin(), chi, opts);
    rep.inner_product = inner_with_u(m0.values, u);
    rep.is_generic = std::abs(rep.inner_product) > rep.threshold_used;
    return rep;
}

BoundaryBundle boundary_bundle_modified(const Potential& u, double lambda, const CutoffChi& chi,
                                        const SolveOptions& opts) {
    const Grid& g = u.grid;
    const int N = g.N;
    const double dx = g.dx();

    BoundaryBundle b;
    b.lambda = lambda;
    b.path = SolvePath::nystrom;

    double cond = 0.0;
    auto side_solve = [&](Side side, JostFunction& m1_out, JostFunction& me_out) {
        const SpectralPoint sp = SpectralPoint::boundary(lambda, side);
        ModSolver s(u, sp, chi, opts);
        cond = std::max(cond, s.cond);
        Vec ones = Vec::Ones(N), e(N);
        for (int i = 0; i < N; ++i) e(i) = std::exp(I * lambda * g.x(i));
        Vec x1 = s.solve(ones);
        Vec xe = s.solve(e);
        JostFunction m1m;
        m1m.which = JostKind::m1_mod;
        m1m.at = sp;
        m1m.values = SampledFunction(g, {x1.data(), x1.data() + N});
        m1m.residual_inf = s.residual(x1, ones);
        JostFunction mem;
        mem.which = JostKind::me_mod;
        mem.at = sp;
        mem.values = SampledFunction(g, {xe.data(), xe.data() + N});
        mem.residual_inf = s.residual(xe, e);
        m1_out = reconstruct_m1(m1m, u, chi, opts);
        me_out = reconstruct_me(mem, m1m, u, chi, opts);
    };
    side_solve(Side::plus, b.m1p, b.mep);
    side_solve(Side::minus, b.m1m, b.mem);
    b.condition_estimate = cond;

    cd beta = 0.0, gp = 0.0, gm = 0.0, f = 0.0;
    for (int i = 0; i < N; ++i) {
        const cd ebar = std::exp(-I * lambda * g.x(i));
        beta += u.u[i] * b.m1p.values[i] * ebar;
        gp += u.u[i] * b.mep.values[i] * ebar;
        gm += u.u[i] * b.mem.values[i] * ebar;
        f += u.u[i] * b.mem.values[i];
    }
    b.beta = I * dx * beta;
    b.Gamma = 1.0 + I * dx * gp;
    b.Gamma_minus_form = 1.0 / (1.0 - I * dx * gm);
    b.f = -f * dx / (2.0 * M_PI * lambda);
    return b;
}

Potential make_nongeneric_potential(const Grid& g, const CutoffChi& chi, const SolveOptions& opts) {
    auto bump = [](double x, double w) {
        const double t = x / w;
        return std::exp(-t * t);
    };
    // The mix parameter steers Re <m1^0(0), u_t> through zero; the imaginary
    // part is slaved to |<.>|^2 by the chi reflection identity, so a real
    // bisection reaches the non-generic point.
    auto member = [&](double t) {
        std::vector<double> v(g.N);
        for (int i = 0; i < g.N; ++i) {
            const double x = g.x(i);
            v[i] = 0.6 * bump(x, 1.0) - t * bump(x - 1.5, 1.2);
        }
        return Potential::from_samples(g, std::move(v), TabulatedFamily{"nongeneric-family"});
    };
    auto re_inner = [&](double t) {
        return classify_genericity(member(t), chi, opts).inner_product.real();
    };

    double lo = 0.0, hi = 3.0;
    double flo = re_inner(lo);
    double bracket_lo = lo, bracket_hi = hi, f_bracket_lo = flo;
    bool found = false;
    const int scan = 13;
    double prev_t = lo, prev_f = flo;
    for (int i = 1; i <= scan; ++i) {
        const double t = lo + (hi - lo) * i / scan;
        const double ft = re_inner(t);
        if (prev_f == 0.0 || ft == 0.0 || (prev_f < 0) != (ft < 0)) {
            bracket_lo = prev_t;
            bracket_hi = t;
            f_bracket_lo = prev_f;
            found = true;
            break;
        }
        prev_t = t;
        prev_f = ft;
    }
    if (!found)
        throw NoConvergenceError("make_nongeneric_potential: no sign change of Re<m1^0,u> found");
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (bracket_lo + bracket_hi);
        const double fm = re_inner(mid);
        if ((fm < 0) == (f_bracket_lo < 0)) {
            bracket_lo = mid;
            f_bracket_lo = fm;
        } else {
            bracket_hi = mid;
        }
        if (bracket_hi - bracket_lo < 1e-13 * std::max(1.0, std::abs(bracket_hi))) break;
    }
    return member(0.5 * (bracket_lo + bracket_hi));
}

} // namespace bo
