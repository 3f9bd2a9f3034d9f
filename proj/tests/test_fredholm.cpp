#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bo/fredholm.hpp"

using namespace bo;

namespace {
const cd I(0.0, 1.0);

Grid test_grid() { return Grid(20.0, 512); }

Potential gauss_potential(double a = 0.5) {
    return Potential::make(test_grid(), GaussianFamily{a, 1.0, 0.0});
}
} // namespace

TEST_CASE("zero potential gives trivial Jost functions") {
    Potential u = Potential::zero(test_grid());
    JostFunction m1 = solve_m1(u, SpectralPoint::off(cd(-1.5, 0.7)));
    for (int i = 0; i < u.grid.N; ++i) CHECK(std::abs(m1.values[i] - 1.0) < 1e-14);
    JostFunction me = solve_me(u, 2.0, Side::plus);
    for (int i = 0; i < u.grid.N; ++i)
        CHECK(std::abs(me.values[i] - std::exp(I * 2.0 * u.grid.x(i))) < 1e-13);
    JostFunction lk = solve_largek(u, SpectralPoint::off(cd(-50.0, 0.0)), RhsKind::one);
    for (int i = 0; i < u.grid.N; ++i) CHECK(std::abs(lk.values[i] - 1.0) < 1e-14);
}

TEST_CASE("Picard fixed-point oracle at k = -1") {
    Potential u = gauss_potential();
    SolveOptions opts;
    const SpectralPoint k = SpectralPoint::off(cd(-1.0, 0.0));
    NystromSystem sys = assemble(u, k, opts);

    // fixed-point iteration m <- 1 + T m, independent of the LU path
    std::vector<cd> m(u.grid.N, cd(1.0));
    for (int it = 0; it < 200; ++it) {
        std::vector<cd> tm = apply_T(sys.lags, u.u, m);
        double delta = 0.0;
        for (int i = 0; i < u.grid.N; ++i) {
            const cd next = 1.0 + tm[i];
            delta = std::max(delta, std::abs(next - m[i]));
            m[i] = next;
        }
        if (delta < 1e-14) break;
    }
    JostFunction direct = solve_m1(u, k);
    double worst = 0.0;
    for (int i = 0; i < u.grid.N; ++i) worst = std::max(worst, std::abs(direct.values[i] - m[i]));
    CHECK(worst < 1e-8);
    CHECK(direct.residual_inf < 1e-10);
}

TEST_CASE("m1 tends to one at the free end") {
    Potential u = gauss_potential();
    JostFunction m1 = solve_m1(u, SpectralPoint::off(cd(-1.0, 0.0)));
    CHECK(std::abs(m1.values[0] - 1.0) < 2e-2);
    CHECK(std::abs(m1.values[u.grid.N - 1] - 1.0) < 2e-2);
    // lambda + 0i: m1 - 1 -> 0 as x -> -inf
    JostFunction m1p = solve_m1(u, SpectralPoint::boundary(0.8, Side::plus));
    CHECK(std::abs(m1p.values[0] - 1.0) < 2e-2);
}

TEST_CASE("boundary bundle satisfies the exact discrete relations") {
    Potential u = gauss_potential();
    for (double la : {0.45, 1.7}) { // both the plain and e-factored assemblies
        BoundaryBundle b = boundary_bundle_nystrom(u, la);
        CHECK(std::abs(std::abs(b.Gamma) - 1.0) < 1e-11);
        CHECK(std::abs(b.Gamma - b.Gamma_minus_form) < 1e-11);
        double r1 = 0.0, r2 = 0.0;
        for (int i = 0; i < u.grid.N; ++i) {
            r1 = std::max(r1, std::abs(b.mep.values[i] - b.Gamma * b.mem.values[i]));
            r2 = std::max(r2, std::abs(b.m1p.values[i] - b.m1m.values[i] -
                                       b.beta * b.mem.values[i]));
        }
        CHECK(r1 < 1e-11);
        CHECK(r2 < 1e-11);
    }
}

TEST_CASE("me approaches the plane wave at the free end") {
    Potential u = gauss_potential();
    const double la = 1.3;
    JostFunction me = solve_me(u, la, Side::plus, SolveOptions{});
    // asymptotic condition me - e^{i la x} -> 0 as x -> -inf (plus side)
    const cd e0 = std::exp(I * la * u.grid.x(0));
    CHECK(std::abs(me.values[0] - e0) < 2e-2);
}

TEST_CASE("me side ratio is x-independent and equals Gamma") {
    Potential u = gauss_potential();
    BoundaryBundle b = boundary_bundle_nystrom(u, 2.0);
    double worst = 0.0;
    for (int i = 0; i < u.grid.N; ++i) {
        const cd ratio = b.mep.values[i] / b.mem.values[i];
        worst = std::max(worst, std::abs(ratio - b.Gamma));
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("large-k paths agree with dense solves") {
    Potential u = gauss_potential();
    SolveOptions opts;

    SUBCASE("left half plane, k = -100") {
        const SpectralPoint k = SpectralPoint::off(cd(-100.0, 0.0));
        JostFunction a = solve_m1(u, k, opts);
        JostFunction b = solve_largek(u, k, RhsKind::one, opts);
        CHECK(b.solve_path == SolvePath::neumann_left);
        double worst = 0.0;
        for (int i = 0; i < u.grid.N; ++i)
            worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
        CHECK(worst < 1e-7);
    }

    SUBCASE("cut boundary, lambda = 12") {
        JostFunction a = solve_m1(u, SpectralPoint::boundary(12.0, Side::plus), opts);
        JostFunction b =
            solve_largek(u, SpectralPoint::boundary(12.0, Side::plus), RhsKind::one, opts);
        CHECK(b.solve_path == SolvePath::ode_right);
        double worst = 0.0;
        for (int i = 0; i < u.grid.N; ++i)
            worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
        CHECK(worst < 1e-7);
    }

    SUBCASE("bundles agree where both converge") {
        BoundaryBundle a = boundary_bundle_nystrom(u, 8.0);
        BoundaryBundle b = boundary_bundle_largek(u, 8.0);
        CHECK(std::abs(a.beta - b.beta) < 1e-8);
        CHECK(std::abs(a.Gamma - b.Gamma) < 1e-8);
        double worst = 0.0;
        for (int i = 0; i < u.grid.N; ++i)
            worst = std::max(worst, std::abs(a.mep.values[i] - b.mep.values[i]));
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("explicit right-half inversion reproduces the closed form on plane waves") {
    // (I + R_{la+0i}) e = e^{i la x} e^{i int_{-inf}^x u}; the full solve then
    // equals that plus O(Ttilde) corrections, so me at large la approaches it.
    Potential u = gauss_potential();
    const double la = 40.0;
    JostFunction me = solve_largek(u, SpectralPoint::boundary(la, Side::plus), RhsKind::plane_wave);
    std::vector<double> cumint = cumulative_integral(u.grid, u.u);
    double worst = 0.0;
    for (int i = 0; i < u.grid.N; ++i) {
        const cd closed = std::exp(I * la * u.grid.x(i)) * std::exp(I * cumint[i]);
        worst = std::max(worst, std::abs(me.values[i] - closed));
    }
    CHECK(worst < 5e-3); // residual Ttilde correction is O(1/la)
}

TEST_CASE("largek regime guard") {
    Potential u = Potential::make(test_grid(), GaussianFamily{3.0, 1.0, 0.0});
    CHECK_THROWS_AS(solve_largek(u, SpectralPoint::boundary(0.3, Side::plus), RhsKind::one),
                    NotInRegimeError);
    const double ks = estimate_k_switch(u);
    CHECK(ks > 0.2);
    CHECK(ks < 60.0);
    CHECK_NOTHROW(solve_largek(u, SpectralPoint::boundary(2.0 * ks, Side::plus), RhsKind::one));
}

TEST_CASE("eigenvalue exclusion guard") {
    Potential u = gauss_potential();
    SolveOptions opts;
    opts.eigenvalues = {-0.42};
    opts.exclusion_radius = 1e-3;
    CHECK_THROWS_AS(solve_m1(u, SpectralPoint::off(cd(-0.4205, 0.0)), opts), NearEigenvalueError);
    CHECK_NOTHROW(solve_m1(u, SpectralPoint::off(cd(-0.50, 0.0)), opts));
}

TEST_CASE("condition limit guard") {
    Potential u = gauss_potential();
    SolveOptions opts;
    opts.cond_limit = 1.5; // everything is worse-conditioned than this
    CHECK_THROWS_AS(solve_m1(u, SpectralPoint::off(cd(-1.0, 0.0)), opts), IllConditionedError);
}

TEST_CASE("no embedded eigenvalues: boundary systems stay well conditioned") {
    Potential u = gauss_potential();
    for (double la : {0.1, 0.5, 2.0, 10.0}) {
        const double c_plus = boundary_condition_estimate(u, la, Side::plus);
        const double c_minus = boundary_condition_estimate(u, la, Side::minus);
        CHECK(c_plus < 1e6);
        CHECK(c_minus < 1e6);
    }
}

TEST_CASE("analyticity of m1 in k: vanishing loop integral") {
    Potential u = gauss_potential();
    const cd center(-2.0, 0.0);
    const double radius = 0.25;
    const int M = 12;
    std::vector<std::vector<cd>> vals;
    for (int j = 0; j < M; ++j) {
        const double th = 2.0 * M_PI * j / M;
        const cd k = center + radius * std::exp(I * th);
        vals.push_back(solve_m1(u, SpectralPoint::off(k)).values.values);
    }
    double worst = 0.0;
    double scale = 0.0;
    for (int i = 0; i < u.grid.N; ++i) {
        cd loop = 0.0;
        for (int j = 0; j < M; ++j) {
            const double th0 = 2.0 * M_PI * j / M, th1 = 2.0 * M_PI * (j + 1) / M;
            const cd dk = radius * (std::exp(I * th1) - std::exp(I * th0));
            loop += vals[j][i] * dk;
        }
        worst = std::max(worst, std::abs(loop));
        scale = std::max(scale, std::abs(vals[0][i]));
    }
    CHECK(worst / (2.0 * M_PI * radius * scale) < 1e-6);
}

TEST_CASE("Hardy property: windowed negative-frequency energy is negligible") {
    Potential u = gauss_potential();
    JostFunction m1 = solve_m1(u, SpectralPoint::off(cd(-2.0, 0.0)));
    const Grid& g = u.grid;
    SampledFunction f(g);
    for (int i = 0; i < g.N; ++i) {
        const double w = std::exp(-std::pow(g.x(i) / (g.L / 4.0), 2));
        f[i] = (m1.values[i] - 1.0) * w;
    }
    SampledFunction fh = fourier_forward(f);
    double e_neg = 0.0, e_tot = 0.0;
    for (int b = 0; b < g.N; ++b) {
        const double e = std::norm(fh[b]);
        e_tot += e;
        if (g.xi(b) < -1.0) e_neg += e; // buffer zone |xi| < 1 excluded
    }
    CHECK(e_neg / e_tot < 1e-8);
}

TEST_CASE("assemble rejects the origin and reports structure") {
    Potential u = gauss_potential();
    CHECK_THROWS_AS(assemble(u, SpectralPoint::origin()), ConfigError);
    NystromSystem sys = assemble(u, SpectralPoint::off(cd(-1.0, 0.0)));
    // column j carries the u(x_j) weight
    const int N = u.grid.N;
    for (int j : {N / 4, N / 2}) {
        if (u.u[j] == 0.0) continue;
        CHECK(std::abs(sys.kernel_matrix(j / 2, j) / u.u[j] - sys.lags.lag(j / 2 - j)) < 1e-15);
    }
}
