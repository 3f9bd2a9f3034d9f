#include "bo/fredholm.hpp"

#include <algorithm>
#include <cmath>

namespace bo {

namespace {

const cd I(0.0, 1.0);
constexpr double efactor_threshold = 1.0; // boundary assemblies factor out e^{i la x} above this

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

struct ToeplitzApplier {
    int N = 0;
    std::vector<cd> spec; // DFT of wrapped lags, size 2N

    explicit ToeplitzApplier(const ToeplitzKernel& tk) : N(tk.grid.N), spec(2 * N, cd(0.0)) {
        for (int m = -(N - 1); m <= N - 1; ++m) spec[(m + 2 * N) % (2 * N)] = tk.lag(m);
        dft_inplace(spec, true);
    }

    std::vector<cd> apply(const std::vector<cd>& w) const {
        std::vector<cd> W(2 * N, cd(0.0));
        std::copy(w.begin(), w.end(), W.begin());
        dft_inplace(W, true);
        for (int i = 0; i < 2 * N; ++i) W[i] *= spec[i];
        dft_inplace(W, false);
        std::vector<cd> y(N);
        const double s = 1.0 / (2.0 * N);
        for (int i = 0; i < N; ++i) y[i] = W[i] * s;
        return y;
    }
};

std::vector<cd> weighted(const std::vector<double>& u, const std::vector<cd>& phi) {
    std::vector<cd> w(phi.size());
    for (size_t i = 0; i < phi.size(); ++i) w[i] = u[i] * phi[i];
    return w;
}

double vec_norm_inf(const std::vector<cd>& v) {
    double m = 0.0;
    for (const cd& x : v) m = std::max(m, std::abs(x));
    return m;
}

void guard_exclusion(const SpectralPoint& k, const SolveOptions& opts) {
    for (double lj : opts.eigenvalues) {
        if (std::abs(k.k - cd(lj, 0.0)) < opts.exclusion_radius)
            throw NearEigenvalueError("spectral point inside the eigenvalue exclusion radius",
                                      k.k.real(), lj);
    }
}

Vec to_eigen(const std::vector<cd>& v) {
    return Eigen::Map<const Vec>(v.data(), static_cast<long>(v.size()));
}

std::vector<cd> from_eigen(const Vec& v) { return {v.data(), v.data() + v.size()}; }

// --- dense cut-boundary solver ------------------------------------------------
//
// One LU factorization of (I - T_{la+0i}) serves both boundary sides: the two
// discretized operators differ by the exact rank-one update p q^T inherited
// from G_{la+0i} - G_{la-0i} = i e(la) e(la)^*.
struct DenseCutSolver {
    const Potential& u;
    double lambda;
    bool efac;
    Grid g;
    ToeplitzKernel lags;
    Mat T;
    Eigen::PartialPivLU<Mat> lu;
    double cond = 0.0;
    Vec p;  // rank-one column
    Vec q;  // rank-one row (conjugated already: q^T x below is a plain sum)
    Vec Finv_p;
    cd gamma_denom{1.0};

    DenseCutSolver(const Potential& pot, double la, bool efactored, const SolveOptions& opts)
        : u(pot), lambda(la), efac(efactored), g(pot.grid) {
        const int N = g.N;
        lags = cut_lags(la, Side::plus, efac, g, opts.assembly);
        T.resize(N, N);
        for (int j = 0; j < N; ++j) {
            const double uj = u.u[j];
            for (int i = 0; i < N; ++i) T(i, j) = lags.lag(i - j) * uj;
        }
        Mat F = Mat::Identity(N, N) - T;
        lu.compute(F);
        const double rc = lu.rcond();
        cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
        if (!(cond < opts.cond_limit))
            throw IllConditionedError("boundary system condition estimate above limit", cond);

        p.resize(N);
        q.resize(N);
        const double dx = g.dx();
        for (int i = 0; i < N; ++i) {
            const cd e = std::exp(I * la * g.x(i));
            p(i) = efac ? cd(1.0) : e;
            q(i) = I * dx * u.u[i] * (efac ? cd(1.0) : std::conj(e));
        }
        Finv_p = solve_plus(p);
        gamma_denom = 1.0 + qdot(Finv_p);
    }

    // plain (unconjugated) sum q_i x_i
    cd qdot(const Vec& x) const { return (q.array() * x.array()).sum(); }

    // (I - T_plus)^{-1} b with one step of iterative refinement.
    Vec solve_plus(const Vec& b) const {
        Vec x = lu.solve(b);
        Vec r = b - (x - T * x);
        x += lu.solve(r);
        return x;
    }

    // (I - T_minus)^{-1} b via Sherman-Morrison, refined against the minus operator.
    Vec solve_minus(const Vec& b) const {
        auto sm = [&](const Vec& rhs) -> Vec {
            Vec x0 = lu.solve(rhs);
            return x0 - Finv_p * (qdot(x0) / gamma_denom);
        };
        Vec x = sm(b);
        Vec r = b - (x - (T * x - p * qdot(x)));
        x += sm(r);
        return x;
    }

    double residual_plus(const Vec& x, const Vec& b) const {
        return (b - (x - T * x)).lpNorm<Eigen::Infinity>();
    }
    double residual_minus(const Vec& x, const Vec& b) const {
        return (b - (x - (T * x - p * qdot(x)))).lpNorm<Eigen::Infinity>();
    }
};

JostFunction make_jost(JostKind kind, const SpectralPoint& at, const Grid& g, const Vec& vals,
                       double resid, SolvePath path, const SolveOptions& opts, double rhs_norm) {
    if (!(resid < opts.solver_tol * rhs_norm))
        throw NoConvergenceError("Jost solve residual above tolerance");
    JostFunction jf;
    jf.which = kind;
    jf.at = at;
    jf.values = SampledFunction(g, from_eigen(vals));
    jf.residual_inf = resid;
    jf.solve_path = path;
    return jf;
}

// --- triangular + Neumann machinery -------------------------------------------

// Solve (I - S_plain) x = g where S is the one-sided exponential part. sign=+1
// integrates from -inf (lower triangular, needs Im k >= 0), sign=-1 from +inf.
std::vector<cd> solve_triangular(const Grid& g, const std::vector<double>& u, cd k, bool efac,
                                 int sign, const std::vector<cd>& rhs) {
    const int N = g.N;
    const double dx = g.dx();
    std::vector<cd> x(N);
    const cd step = efac ? cd(1.0) : std::exp(I * k * dx);
    if (sign > 0) {
        cd r = 0.0;
        for (int i = 0; i < N; ++i) {
            x[i] = (rhs[i] + I * dx * r) / (1.0 - I * dx * u[i] * 0.5);
            r = step * (r + u[i] * x[i]);
        }
    } else {
        cd r = 0.0;
        for (int i = N - 1; i >= 0; --i) {
            x[i] = (rhs[i] - I * dx * r) / (1.0 + I * dx * u[i] * 0.5);
            r = (r + u[i] * x[i]) / step;
        }
    }
    return x;
}

struct NeumannResult {
    std::vector<cd> x;
    double residual = 0.0;
    int terms = 0;
};

// x = sum_n (-(I-S)^{-1} Teff)^n (I-S)^{-1} rhs, converging to the solution of
// the full discretized (I - T) x = rhs.
NeumannResult neumann_right(const Grid& g, const std::vector<double>& u, cd k, bool efac, int sign,
                            const ToeplitzApplier& Teff, const ToeplitzApplier& Tfull,
                            const std::vector<cd>& rhs, const SolveOptions& opts) {
    NeumannResult out;
    std::vector<cd> t = solve_triangular(g, u, k, efac, sign, rhs);
    out.x = t;
    double prev = vec_norm_inf(t);
    for (int n = 1; n <= opts.max_terms; ++n) {
        std::vector<cd> w = Teff.apply(weighted(u, t));
        for (auto& v : w) v = -v;
        t = solve_triangular(g, u, k, efac, sign, w);
        for (int i = 0; i < g.N; ++i) out.x[i] += t[i];
        const double nt = vec_norm_inf(t);
        out.terms = n;
        if (nt < opts.series_tol * std::max(1.0, vec_norm_inf(out.x))) break;
        if (n > 4 && nt > 0.95 * prev)
            throw NoConvergenceError("Neumann series failed to contract (right-half split)");
        prev = nt;
    }
    std::vector<cd> Tx = Tfull.apply(weighted(u, out.x));
    double res = 0.0;
    for (int i = 0; i < g.N; ++i) res = std::max(res, std::abs(rhs[i] - (out.x[i] - Tx[i])));
    out.residual = res;
    return out;
}

NeumannResult neumann_left(const Grid& g, const std::vector<double>& u, const ToeplitzApplier& T,
                           const std::vector<cd>& rhs, const SolveOptions& opts) {
    NeumannResult out;
    out.x = rhs;
    std::vector<cd> t = rhs;
    double prev = vec_norm_inf(t);
    for (int n = 1; n <= opts.max_terms; ++n) {
        t = T.apply(weighted(u, t));
        for (int i = 0; i < g.N; ++i) out.x[i] += t[i];
        const double nt = vec_norm_inf(t);
        out.terms = n;
        if (nt < opts.series_tol * std::max(1.0, vec_norm_inf(out.x))) break;
        if (n > 4 && nt > 0.95 * prev)
            throw NoConvergenceError("Neumann series failed to contract (resolvent path)");
        prev = nt;
    }
    std::vector<cd> Tx = T.apply(weighted(u, out.x));
    double res = 0.0;
    for (int i = 0; i < g.N; ++i) res = std::max(res, std::abs(rhs[i] - (out.x[i] - Tx[i])));
    out.residual = res;
    return out;
}

double norm_proxy(const ToeplitzKernel& lags, const std::vector<double>& u) {
    const int N = lags.grid.N;
    double umax = 0.0;
    for (int j = 0; j < N; ++j) umax = std::max(umax, std::abs(u[j]));
    std::vector<int> support;
    for (int j = 0; j < N; ++j)
        if (std::abs(u[j]) > 1e-15 * umax) support.push_back(j);
    std::vector<double> abslag(2 * N - 1);
    for (size_t i = 0; i < abslag.size(); ++i) abslag[i] = std::abs(lags.lags[i]);
    double best = 0.0;
    for (int i = 0; i < N; ++i) {
        double s = 0.0;
        for (int j : support) s += abslag[i - j + N - 1] * std::abs(u[j]);
        best = std::max(best, s);
    }
    return best;
}

ToeplitzKernel subtract_lags(const ToeplitzKernel& a, const ToeplitzKernel& b) {
    ToeplitzKernel out = a;
    for (size_t i = 0; i < out.lags.size(); ++i) out.lags[i] -= b.lags[i];
    return out;
}

bool right_half_route(const SpectralPoint& k) {
    if (k.on_cut()) return true;
    return k.k.real() > 0.0 && k.k.imag() != 0.0;
}

int route_sign(const SpectralPoint& k) {
    if (k.side == Side::plus) return +1;
    if (k.side == Side::minus) return -1;
    return k.k.imag() > 0.0 ? +1 : -1;
}

} // namespace

NystromSystem assemble(const Potential& u, const SpectralPoint& k, const SolveOptions& opts) {
    if (k.side == Side::zero)
        throw ConfigError("assemble: k = 0 requires the modified kernels");
    NystromSystem sys;
    sys.grid = u.grid;
    sys.k = k;
    sys.lags = k.on_cut() ? cut_lags(k.lambda(), k.side, false, u.grid, opts.assembly)
                          : build_kernel_lags(family_G(k), u.grid, opts.assembly);
    for (const cd& v : sys.lags.lags)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw Error("assemble: non-finite kernel weight (node coincidence mishandled)");
    const int N = u.grid.N;
    sys.kernel_matrix.resize(N, N);
    for (int j = 0; j < N; ++j) {
        const double uj = u.u[j];
        for (int i = 0; i < N; ++i) sys.kernel_matrix(i, j) = sys.lags.lag(i - j) * uj;
    }
    return sys;
}

std::vector<cd> apply_T(const ToeplitzKernel& lags, const std::vector<double>& u,
                        const std::vector<cd>& phi) {
    return ToeplitzApplier(lags).apply(weighted(u, phi));
}

JostFunction solve_m1(const Potential& u, const SpectralPoint& k, const SolveOptions& opts) {
    guard_exclusion(k, opts);
    const Grid& g = u.grid;
    const int N = g.N;
    if (k.on_cut()) {
        const double la = k.lambda();
        const bool efac = la >= efactor_threshold;
        DenseCutSolver s(u, la, efac, opts);
        Vec b(N);
        for (int i = 0; i < N; ++i) b(i) = efac ? std::exp(-I * la * g.x(i)) : cd(1.0);
        Vec x = (k.side == Side::plus) ? s.solve_plus(b) : s.solve_minus(b);
        const double resid =
            (k.side == Side::plus) ? s.residual_plus(x, b) : s.residual_minus(x, b);
        if (efac)
            for (int i = 0; i < N; ++i) x(i) *= std::exp(I * la * g.x(i));
        return make_jost(JostKind::m1, k, g, x, resid, SolvePath::nystrom, opts, 1.0);
    }
    NystromSystem sys = assemble(u, k, opts);
    Mat F = Mat::Identity(N, N) - sys.kernel_matrix;
    Eigen::PartialPivLU<Mat> lu(F);
    const double rc = lu.rcond();
    const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(cond < opts.cond_limit))
        throw IllConditionedError("resolvent system condition estimate above limit", cond);
    const Vec ones = Vec::Ones(N);
    Vec x = lu.solve(ones);
    Vec r = ones - (x - sys.kernel_matrix * x);
    x += lu.solve(r);
    const double resid = (ones - (x - sys.kernel_matrix * x)).lpNorm<Eigen::Infinity>();
    return make_jost(JostKind::m1, k, g, x, resid, SolvePath::nystrom, opts, 1.0);
}

JostFunction solve_me(const Potential& u, double lambda, Side side, const SolveOptions& opts) {
    const SpectralPoint sp = SpectralPoint::boundary(lambda, side);
    const Grid& g = u.grid;
    const int N = g.N;
    const bool efac = lambda >= efactor_threshold;
    DenseCutSolver s(u, lambda, efac, opts);
    Vec b(N);
    for (int i = 0; i < N; ++i) b(i) = efac ? cd(1.0) : std::exp(I * lambda * g.x(i));
    Vec x = (side == Side::plus) ? s.solve_plus(b) : s.solve_minus(b);
    const double resid =
        (side == Side::plus) ? s.residual_plus(x, b) : s.residual_minus(x, b);
    if (efac)
        for (int i = 0; i < N; ++i) x(i) *= std::exp(I * lambda * g.x(i));
    return make_jost(JostKind::me, sp, g, x, resid, SolvePath::nystrom, opts, 1.0);
}

double largek_norm_proxy(const Potential& u, const SpectralPoint& k, const SolveOptions& opts) {
    if (right_half_route(k)) {
        const double la = k.k.real();
        ToeplitzKernel full = k.on_cut()
                                  ? cut_lags(la, k.side, true, u.grid, opts.assembly)
                                  : build_kernel_lags(family_G(k), u.grid, opts.assembly);
        ToeplitzKernel plain =
            plain_triangular_lags(k.k, route_sign(k), u.grid, k.on_cut());
        return norm_proxy(subtract_lags(plain, full), u.u);
    }
    ToeplitzKernel full = build_kernel_lags(family_G(k), u.grid, opts.assembly);
    return norm_proxy(full, u.u);
}

double estimate_k_switch(const Potential& u, const SolveOptions& opts) {
    double la = 0.2;
    for (int j = 0; j < 24; ++j) {
        const double proxy =
            largek_norm_proxy(u, SpectralPoint::boundary(la, Side::plus), opts);
        if (proxy < opts.contraction_limit) return la;
        la *= 1.3;
    }
    return la;
}

JostFunction solve_largek(const Potential& u, const SpectralPoint& k, RhsKind rhs_kind,
                          const SolveOptions& opts) {
    if (k.side == Side::zero) throw ConfigError("solve_largek: k = 0 not in regime");
    guard_exclusion(k, opts);
    const Grid& g = u.grid;
    const int N = g.N;
    const double proxy = largek_norm_proxy(u, k, opts);
    if (!(proxy < opts.contraction_limit))
        throw NotInRegimeError("solve_largek: contraction proxy " + std::to_string(proxy) +
                               " not below limit; |k| too small for the explicit inversion");

    if (right_half_route(k)) {
        const double la = k.k.real();
        const int sign = route_sign(k);
        if (rhs_kind == RhsKind::plane_wave && !k.on_cut())
            throw ConfigError("solve_largek: plane-wave rhs is defined on the cut boundary only");
        // On the cut the whole solve lives in the e-factored variables (the
        // same realization the dense boundary solver uses), with the right
        // side carrying the remaining phase.
        const bool efac_space = k.on_cut();
        ToeplitzKernel full = efac_space ? cut_lags(la, k.side, true, g, opts.assembly)
                                         : build_kernel_lags(family_G(k), g, opts.assembly);
        ToeplitzKernel teff = subtract_lags(plain_triangular_lags(k.k, sign, g, efac_space), full);
        ToeplitzApplier Tfull(full), Teff(teff);
        std::vector<cd> rhs(N, cd(1.0));
        if (efac_space && rhs_kind == RhsKind::one)
            for (int i = 0; i < N; ++i) rhs[i] = std::exp(-I * la * g.x(i));
        NeumannResult nr = neumann_right(g, u.u, k.k, efac_space, sign, Teff, Tfull, rhs, opts);
        if (efac_space)
            for (int i = 0; i < N; ++i) nr.x[i] *= std::exp(I * la * g.x(i));
        return make_jost(rhs_kind == RhsKind::one ? JostKind::m1 : JostKind::me, k, g,
                         to_eigen(nr.x), nr.residual, SolvePath::ode_right, opts, 1.0);
    }

    ToeplitzKernel full = build_kernel_lags(family_G(k), g, opts.assembly);
    ToeplitzApplier T(full);
    std::vector<cd> rhs(N, cd(1.0));
    NeumannResult nr = neumann_left(g, u.u, T, rhs, opts);
    return make_jost(JostKind::m1, k, g, to_eigen(nr.x), nr.residual, SolvePath::neumann_left, opts,
                     1.0);
}

double boundary_condition_estimate(const Potential& u, double lambda, Side side,
                                   const SolveOptions& opts) {
    const Grid& g = u.grid;
    const int N = g.N;
    ToeplitzKernel lags = cut_lags(lambda, side, false, g, opts.assembly);
    Mat F(N, N);
    for (int j = 0; j < N; ++j) {
        const double uj = u.u[j];
        for (int i = 0; i < N; ++i) F(i, j) = (i == j ? 1.0 : 0.0) - lags.lag(i - j) * uj;
    }
    Eigen::PartialPivLU<Mat> lu(F);
    const double rc = lu.rcond();
    return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

BoundaryBundle boundary_bundle_nystrom(const Potential& u, double lambda, const SolveOptions& opts) {
    const Grid& g = u.grid;
    const int N = g.N;
    const bool efac = lambda >= efactor_threshold;
    DenseCutSolver s(u, lambda, efac, opts);

    Vec e(N), ebar(N);
    for (int i = 0; i < N; ++i) {
        e(i) = std::exp(I * lambda * g.x(i));
        ebar(i) = std::conj(e(i));
    }
    const Vec ones = Vec::Ones(N);
    const Vec& rhs_me = efac ? ones : e;
    const Vec& rhs_m1 = efac ? ebar : ones;

    Vec sol_mep = s.Finv_p; // rhs_me == p in both spaces
    Vec sol_m1p = s.solve_plus(rhs_m1);
    const cd Gamma = s.gamma_denom;
    const cd beta = s.qdot(sol_m1p);
    Vec sol_mem = sol_mep / Gamma;
    Vec sol_m1m = sol_m1p - sol_mep * (beta / Gamma);

    BoundaryBundle b;
    b.lambda = lambda;
    b.path = SolvePath::nystrom;
    b.condition_estimate = s.cond;
    b.beta = beta;
    b.Gamma = Gamma;
    b.Gamma_minus_form = 1.0 / (1.0 - s.qdot(sol_mem));

    const SpectralPoint kp = SpectralPoint::boundary(lambda, Side::plus);
    const SpectralPoint km = SpectralPoint::boundary(lambda, Side::minus);
    auto unfactor = [&](Vec v) {
        if (efac)
            for (int i = 0; i < N; ++i) v(i) *= e(i);
        return v;
    };
    b.mep = make_jost(JostKind::me, kp, g, unfactor(sol_mep), s.residual_plus(sol_mep, rhs_me),
                      SolvePath::nystrom, opts, 1.0);
    b.m1p = make_jost(JostKind::m1, kp, g, efac ? unfactor(sol_m1p) : sol_m1p,
                      s.residual_plus(sol_m1p, rhs_m1), SolvePath::nystrom, opts, 1.0);
    b.mem = make_jost(JostKind::me, km, g, unfactor(sol_mem), s.residual_minus(sol_mem, rhs_me),
                      SolvePath::nystrom, opts, 1.0);
    b.m1m = make_jost(JostKind::m1, km, g, efac ? unfactor(sol_m1m) : sol_m1m,
                      s.residual_minus(sol_m1m, rhs_m1), SolvePath::nystrom, opts, 1.0);

    const double dx = g.dx();
    cd f = 0.0;
    for (int i = 0; i < N; ++i) f += u.u[i] * b.mem.values[i];
    b.f = -f * dx / (2.0 * M_PI * lambda);
    return b;
}

BoundaryBundle boundary_bundle_largek(const Potential& u, double lambda, const SolveOptions& opts) {
    const Grid& g = u.grid;
    const int N = g.N;
    const double dx = g.dx();

    BoundaryBundle b;
    b.lambda = lambda;
    b.path = SolvePath::ode_right;
    b.condition_estimate = 0.0;

    std::vector<cd> e(N), ebar(N);
    for (int i = 0; i < N; ++i) {
        e[i] = std::exp(I * lambda * g.x(i));
        ebar[i] = std::conj(e[i]);
    }

    // All four functions are solved in the e-factored variables so the two
    // sides and both kinds share one consistent operator pair.
    BoundaryLags pair = boundary_lag_pair(lambda, true, g, opts.assembly);
    auto solve_side = [&](Side side, JostKind kind) -> JostFunction {
        const SpectralPoint sp = SpectralPoint::boundary(lambda, side);
        const int sign = route_sign(sp);
        const ToeplitzKernel& full = side == Side::plus ? pair.plus : pair.minus;
        ToeplitzKernel teff = subtract_lags(plain_triangular_lags(sp.k, sign, g, true), full);
        ToeplitzApplier Tfull(full), Teff(teff);
        const double proxy = norm_proxy(teff, u.u);
        if (!(proxy < opts.contraction_limit))
            throw NotInRegimeError("boundary_bundle_largek: contraction proxy not below limit");
        std::vector<cd> rhs(N, cd(1.0));
        if (kind == JostKind::m1)
            for (int i = 0; i < N; ++i) rhs[i] = ebar[i];
        NeumannResult nr = neumann_right(g, u.u, sp.k, true, sign, Teff, Tfull, rhs, opts);
        for (int i = 0; i < N; ++i) nr.x[i] *= e[i];
        return make_jost(kind, sp, g, to_eigen(nr.x), nr.residual, SolvePath::ode_right, opts, 1.0);
    };

    b.m1p = solve_side(Side::plus, JostKind::m1);
    b.m1m = solve_side(Side::minus, JostKind::m1);
    b.mep = solve_side(Side::plus, JostKind::me);
    b.mem = solve_side(Side::minus, JostKind::me);

    cd beta = 0.0, gp = 0.0, gm = 0.0, f = 0.0;
    for (int i = 0; i < N; ++i) {
        beta += u.u[i] * b.m1p.values[i] * ebar[i];
        gp += u.u[i] * b.mep.values[i] * ebar[i];
        gm += u.u[i] * b.mem.values[i] * ebar[i];
        f += u.u[i] * b.mem.values[i];
    }
    b.beta = I * dx * beta;
    b.Gamma = 1.0 + I * dx * gp;
    b.Gamma_minus_form = 1.0 / (1.0 - I * dx * gm);
    b.f = -f * dx / (2.0 * M_PI * lambda);
    return b;
}

} // namespace bo
