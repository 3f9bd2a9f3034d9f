#include "bo/evolution.hpp"

#include <cmath>
#include <future>

namespace bo {

namespace {
const cd I(0.0, 1.0);

struct BurgersWorkspace {
    Grid g;
    double frac;
    std::vector<cd> buf;

    explicit BurgersWorkspace(const Grid& grid, double dealias_fraction)
        : g(grid), frac(dealias_fraction), buf(grid.N) {}

    void dealias(std::vector<cd>& spec) const {
        const int cut = static_cast<int>(frac * (g.N / 2));
        for (int b = 0; b < g.N; ++b)
            if (std::abs(g.freq_index(b)) > cut) spec[b] = 0.0;
    }

    // rhs of u_t = -(u^2)_x, dealiased pseudo-spectral
    std::vector<double> rhs(const std::vector<double>& u) {
        const int N = g.N;
        for (int i = 0; i < N; ++i) buf[i] = u[i] * u[i];
        dft_inplace(buf, true);
        dealias(buf);
        for (int b = 0; b < N; ++b) buf[b] *= I * g.xi(b);
        dft_inplace(buf, false);
        std::vector<double> out(N);
        for (int i = 0; i < N; ++i) out[i] = -buf[i].real() / N;
        return out;
    }

    void rk4(std::vector<double>& u, double dt) {
        const int N = g.N;
        std::vector<double> k1 = rhs(u), tmp(N);
        for (int i = 0; i < N; ++i) tmp[i] = u[i] + 0.5 * dt * k1[i];
        std::vector<double> k2 = rhs(tmp);
        for (int i = 0; i < N; ++i) tmp[i] = u[i] + 0.5 * dt * k2[i];
        std::vector<double> k3 = rhs(tmp);
        for (int i = 0; i < N; ++i) tmp[i] = u[i] + dt * k3[i];
        std::vector<double> k4 = rhs(tmp);
        for (int i = 0; i < N; ++i)
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }

    // exact flow of u_t = H u_xx: uhat *= e^{i sgn(xi) xi^2 dt}
    void dispersive(std::vector<double>& u, double dt) {
        const int N = g.N;
        for (int i = 0; i < N; ++i) buf[i] = u[i];
        dft_inplace(buf, true);
        for (int b = 0; b < N; ++b) {
            const double xi = g.xi(b);
            const double sgn = (xi > 0) - (xi < 0);
            buf[b] *= std::exp(I * sgn * xi * xi * dt);
        }
        dft_inplace(buf, false);
        for (int i = 0; i < N; ++i) u[i] = buf[i].real() / N;
    }
};

} // namespace

ScatteringData evolve_data(const ScatteringData& data, double t) {
    ScatteringData out = data;
    for (EigenPair& p : out.eigen) p.gamma_j += 2.0 * p.lambda_j * t;
    for (std::size_t i = 0; i < out.lambda_grid.size(); ++i) {
        const double la = out.lambda_grid[i];
        out.beta[i] = std::exp(I * la * la * t) * data.beta[i];
        out.f[i] = std::conj(out.beta[i]) / (2.0 * M_PI * I * la);
    }
    return out;
}

Potential pde_step(const Potential& u0, const EvolutionConfig& cfg, ConservationReport* report) {
    if (!(cfg.dt > 0.0)) throw ConfigError("evolution dt must be positive", "evolve.dt");
    if (!(cfg.dealias_fraction > 0.0 && cfg.dealias_fraction <= 1.0))
        throw ConfigError("dealias_fraction must lie in (0, 1]", "evolve.dealias_fraction");
    const Grid& g = u0.grid;
    BurgersWorkspace ws(g, cfg.dealias_fraction);

    std::vector<double> u = u0.u;
    const double umax0 = [&] {
        double m = 0.0;
        for (double v : u) m = std::max(m, std::abs(v));
        return m;
    }();
    // the discretely conserved functionals are the plain Riemann sums on the
    // periodic grid
    auto mass = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x;
        return s * g.dx();
    };
    auto momentum = [&](const std::vector<double>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return s * g.dx();
    };
    const double mass0 = mass(u), mom0 = momentum(u);

    const int steps = std::max(1, static_cast<int>(std::lround(cfg.t_final / cfg.dt)));
    const double dt = cfg.t_final / steps;
    for (int s = 0; s < steps; ++s) {
        ws.rk4(u, 0.5 * dt);
        ws.dispersive(u, dt);
        ws.rk4(u, 0.5 * dt);
        double m = 0.0;
        for (double v : u) m = std::max(m, std::abs(v));
        if (umax0 > 0.0 && !(m <= 10.0 * umax0))
            throw BlowupError("pde_step: solution grew tenfold, time step too large");
    }

    Potential out = Potential::from_samples(g, std::move(u), TabulatedFamily{"evolved"});
    if (report) {
        report->mass_drift = std::abs(mass(out.u) - mass0);
        report->momentum_drift = std::abs(momentum(out.u) - mom0);
        report->cfl_ratio = dt / (g.dx() * g.dx());
    }
    return out;
}

CrossValidation crossvalidate(const Potential& u0, double t, const EvolutionConfig& cfg,
                              const TransformOptions& topts) {
    EvolutionConfig run = cfg;
    run.t_final = t;

    auto arm_a = std::async(std::launch::async, [&] {
        ScatteringData d0 = direct_transform(u0, topts);
        return evolve_data(d0, t);
    });
    auto arm_b = std::async(std::launch::async, [&] {
        Potential ut = pde_step(u0, run);
        return direct_transform(ut, topts);
    });

    CrossValidation cv;
    cv.evolved = arm_a.get();
    cv.recomputed = arm_b.get();

    if (cv.evolved.eigen.size() != cv.recomputed.eigen.size())
        throw Error("crossvalidate: eigenvalue count changed under the PDE flow");
    for (std::size_t j = 0; j < cv.evolved.eigen.size(); ++j) {
        cv.d_lambda.push_back(
            std::abs(cv.evolved.eigen[j].lambda_j - cv.recomputed.eigen[j].lambda_j));
        cv.d_gamma.push_back(std::abs(cv.evolved.eigen[j].gamma_j - cv.recomputed.eigen[j].gamma_j));
    }
    for (std::size_t i = 0; i < cv.evolved.lambda_grid.size(); ++i) {
        cv.sup_beta = std::max(cv.sup_beta, std::abs(cv.evolved.beta[i] - cv.recomputed.beta[i]));
        cv.sup_Gamma =
            std::max(cv.sup_Gamma, std::abs(cv.evolved.Gamma[i] - cv.recomputed.Gamma[i]));
    }
    return cv;
}

} // namespace bo
