#include "bo/asymptotics.hpp"

#include <cmath>

namespace bo {

namespace {

const cd I(0.0, 1.0);

JostFunction m1_at(const Potential& u, const SpectralPoint& k, const TransformOptions& topts) {
    // prefer the explicit large-k path when it contracts
    try {
        return solve_largek(u, k, RhsKind::one, topts.solve);
    } catch (const NotInRegimeError&) {
        return solve_m1(u, k, topts.solve);
    }
}

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double mx = 0, my = 0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double num = 0, den = 0;
    for (int i = 0; i < n; ++i) {
        num += (x[i] - mx) * (y[i] - my);
        den += (x[i] - mx) * (x[i] - mx);
    }
    return num / den;
}

} // namespace

K0Report check_k0(const Potential& u, const CutoffChi& chi, const TransformOptions& topts) {
    K0Report rep;
    GenericityReport gen = classify_genericity(u, chi, topts.solve);
    rep.is_generic = gen.is_generic;

    JostFunction m0 = solve_m1_mod(u, SpectralPoint::origin(), chi, topts.solve);
    const double m0_norm = norm_inf(m0.values);

    rep.lambda_probes = {1e-3, 1e-4};
    for (double la : rep.lambda_probes) {
        BoundaryBundle b = boundary_bundle_modified(u, la, chi, topts.solve);
        // log(la + 0i) with the [0, inf) cut approached from above is real
        rep.beta_log_ratio.push_back(b.beta * std::log(la) / (2.0 * M_PI * I));
        // finite-lambda prediction from the k = 0 modified data alone
        cd ume = 0.0;
        for (int i = 0; i < u.grid.N; ++i)
            ume += u.u[i] * m0.values[i] * std::exp(-I * la * u.grid.x(i));
        ume *= u.grid.dx();
        const cd denom = 1.0 - eval_l(SpectralPoint::boundary(la, Side::plus), chi) *
                                   gen.inner_product;
        rep.beta_refined_ratio.push_back(b.beta * denom / (I * ume));
    }

    rep.k_probes = {1e-2, 1e-3, 1e-4, 1e-5};
    std::vector<double> lx, ly;
    for (double kk : rep.k_probes) {
        const SpectralPoint sp = SpectralPoint::off(cd(-kk, 0.0));
        JostFunction m1m = solve_m1_mod(u, sp, chi, topts.solve);
        JostFunction m1 = reconstruct_m1(m1m, u, chi, topts.solve);
        if (rep.is_generic) {
            const cd logk(std::log(kk), M_PI); // principal value on the negative axis, cut [0,inf)
            const double ratio =
                norm_inf(m1.values) * std::abs(gen.inner_product * logk) / (2.0 * M_PI * m0_norm);
            rep.m1_coeff_ratio.push_back(ratio);
        } else {
            double dev = 0.0;
            for (int i = 0; i < u.grid.N; ++i)
                dev = std::max(dev, std::abs(m1.values[i] - m0.values[i]));
            rep.m1_deviation.push_back(dev);
            lx.push_back(std::log(kk));
            ly.push_back(std::log(std::max(dev, 1e-300)));
        }
    }
    if (!rep.is_generic) rep.rate_slope = lsq_slope(lx, ly);
    return rep;
}

KinfReport check_kinf(const Potential& u, const TransformOptions& topts) {
    KinfReport rep;
    const Grid& g = u.grid;
    SampledFunction cplus_u = cauchy_project(u.sampled(), HalfLine::plus);

    rep.K = {20.0, 40.0, 80.0, 160.0};
    std::vector<double> lx, ly;
    for (double K : rep.K) {
        JostFunction m1 = m1_at(u, SpectralPoint::off(cd(0.0, K)), topts);
        double dev = 0.0, hot = 0.0;
        for (int i = 0; i < g.N; ++i) {
            // interior window: at the truncation edge an O(1/(K L)) tail
            // artifact of the cut-off convolution dominates the K^{-2} term
            if (std::abs(g.x(i)) > g.L / 2.0) continue;
            dev = std::max(dev, std::abs(m1.values[i] - 1.0));
            hot = std::max(hot, std::abs(m1.values[i] - 1.0 + cplus_u[i] / (I * K)));
        }
        rep.m1_dev.push_back(dev);
        rep.hot2.push_back(hot);
        lx.push_back(std::log(K));
        ly.push_back(std::log(std::max(hot, 1e-300)));
    }
    rep.hot2_slope = lsq_slope(lx, ly);

    std::vector<double> cum = cumulative_integral(g, u.u);
    rep.lambda_me = {20.0, 50.0};
    for (double la : rep.lambda_me) {
        JostFunction me =
            solve_largek(u, SpectralPoint::boundary(la, Side::plus), RhsKind::plane_wave,
                         topts.solve);
        double dev = 0.0;
        for (int i = 0; i < g.N; ++i) {
            const cd want = std::exp(I * la * g.x(i)) * std::exp(I * cum[i]);
            dev = std::max(dev, std::abs(me.values[i] - want));
        }
        rep.me_dev.push_back(dev);
    }

    const cd gamma_limit = std::exp(I * u.total_integral);
    rep.lambda_gamma = {25.0, 50.0, 100.0};
    for (double la : rep.lambda_gamma) {
        BoundaryBundle b = boundary_bundle_largek(u, la, topts.solve);
        rep.gamma_err.push_back(std::abs(b.Gamma - gamma_limit));
    }

    rep.lambda_beta = {10.0, 20.0, 50.0};
    std::vector<double> bx, by;
    for (double la : rep.lambda_beta) {
        BoundaryBundle b = boundary_bundle_largek(u, la, topts.solve);
        rep.beta_abs.push_back(std::abs(b.beta));
        bx.push_back(std::log(la));
        by.push_back(std::log(std::max(std::abs(b.beta), 1e-300)));
    }
    rep.beta_slope = lsq_slope(bx, by);
    return rep;
}

RecoveryResult recover_potential(const Potential& u_true, const std::vector<double>& K_list,
                                 const TransformOptions& topts) {
    if (K_list.size() != 3 || !(K_list[0] < K_list[1] && K_list[1] < K_list[2]))
        throw ConfigError("recover_potential needs three increasing K values", "recover.K_list");
    const Grid& g = u_true.grid;
    const int N = g.N;

    std::vector<std::vector<double>> r;
    RecoveryResult out;
    out.K_list = K_list;
    for (double K : K_list) {
        JostFunction m1 = m1_at(u_true, SpectralPoint::off(cd(0.0, K)), topts);
        std::vector<double> rk(N);
        double err = 0.0;
        for (int i = 0; i < N; ++i) {
            const cd field = I * K * (1.0 - m1.values[i]);
            rk[i] = 2.0 * field.real();
            err = std::max(err, std::abs(rk[i] - u_true.u[i]));
        }
        r.push_back(std::move(rk));
        out.raw_errors.push_back(err);
        if (K == K_list.back()) {
            out.cplus_field = SampledFunction(g);
            for (int i = 0; i < N; ++i) out.cplus_field[i] = I * K * (1.0 - m1.values[i]);
        }
    }

    // two-point extrapolants (kill 1/K), then the three-point value (kill 1/K^2)
    double div12 = 0.0, div23 = 0.0;
    for (int i = 0; i < N; ++i) {
        const double e12 = 2.0 * r[1][i] - r[0][i];
        const double e23 = 2.0 * r[2][i] - r[1][i];
        div12 = std::max(div12, std::abs(e12 - r[1][i]));
        div23 = std::max(div23, std::abs(e23 - e12));
    }
    if (div23 > 2.0 * div12 + 1e-12)
        throw NoConvergenceError("recover_potential: successive extrapolants diverge");

    out.u_recovered.resize(N);
    out.sup_error = 0.0;
    for (int i = 0; i < N; ++i) {
        out.u_recovered[i] = (8.0 * r[2][i] - 6.0 * r[1][i] + r[0][i]) / 3.0;
        out.sup_error = std::max(out.sup_error, std::abs(out.u_recovered[i] - u_true.u[i]));
    }
    return out;
}

} // namespace bo
