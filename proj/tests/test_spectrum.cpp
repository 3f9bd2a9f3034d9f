#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bo/spectrum.hpp"

using namespace bo;

namespace {
const cd I(0.0, 1.0);
}

TEST_CASE("zero potential has empty discrete spectrum") {
    Potential u = Potential::zero(Grid(20.0, 256));
    CHECK(discrete_spectrum(u).empty());
}

TEST_CASE("build_Lu is Hermitian for real potentials") {
    Grid g(20.0, 256);
    std::mt19937 rng(17);
    std::normal_distribution<double> d(0.0, 1.0);
    std::vector<double> v(g.N);
    for (int i = 0; i < g.N; ++i) v[i] = d(rng) * std::exp(-std::pow(g.x(i) / 5.0, 2));
    Potential u = Potential::from_samples(g, std::move(v));
    Eigen::MatrixXcd A = build_Lu(u);
    const double asym = (A - A.adjoint()).norm() / A.norm();
    CHECK(asym < 1e-12);
}

TEST_CASE("lorentzian well binds exactly one state at this scale") {
    Grid g(20.0, 512);
    Potential u = Potential::make(g, LorentzianFamily{2.0, 1.0, 0.0});
    std::vector<EigenPair> sp = discrete_spectrum(u);
    REQUIRE(sp.size() == 1);
    CHECK(sp[0].lambda_j < -1e-3);

    SUBCASE("doubled-resolution oracle") {
        Grid g2(20.0, 1024);
        Potential u2 = Potential::make(g2, LorentzianFamily{2.0, 1.0, 0.0});
        std::vector<EigenPair> sp2 = discrete_spectrum(u2);
        REQUIRE(sp2.size() == 1);
        CHECK(std::abs(sp2[0].lambda_j - sp[0].lambda_j) < 1e-6);
    }

    SUBCASE("refinement uncertainty is already tight") {
        CHECK(sp[0].uncertainty < 1e-6);
    }

    SUBCASE("eigen relation holds for the Galerkin pair") {
        // residual against the (weighted) Galerkin operator the pair came from
        const int M = g.N / 2 - 1;
        Eigen::MatrixXcd A = build_Lu(u, M);
        SampledFunction ph = fourier_forward(sp[0].phi_j);
        Eigen::VectorXcd psi(M);
        for (int m = 1; m <= M; ++m) psi(m - 1) = ph[m] * (m == 1 ? std::sqrt(1.5) : 1.0);
        const double rel =
            (A * psi - sp[0].lambda_seed * psi).norm() / psi.norm();
        CHECK(rel < 1e-6);

        // the x-space spectral application differs only by the edge-cell
        // quadrature convention; cross-discretization agreement is O(dxi)
        SampledFunction lphi = apply_Lu(u, sp[0].phi_j);
        SampledFunction res(g);
        for (int i = 0; i < g.N; ++i) res[i] = lphi[i] - sp[0].lambda_seed * sp[0].phi_j[i];
        SampledFunction rh = fourier_forward(res);
        double num = 0.0, den = 0.0;
        for (int b = 0; b < g.N; ++b) {
            if (g.freq_index(b) <= 0) continue;
            num += std::norm(rh[b]);
            den += std::norm(fourier_forward(sp[0].phi_j)[b]);
        }
        CHECK(std::sqrt(num / den) < 0.15);
    }

    SUBCASE("residue eigenfunction satisfies the integral eigen-equation") {
        std::vector<double> evs{sp[0].lambda_j};
        EigenPair pair = sp[0];
        phase_constant(u, pair, evs);
        SolveOptions opts;
        ToeplitzKernel lags = build_kernel_lags(
            family_G(SpectralPoint::off(cd(pair.lambda_j, 0.0))), g, opts.assembly);
        std::vector<cd> tphi = apply_T(lags, u.u, pair.phi_j.values);
        double num = 0.0, den = 0.0;
        for (int i = 0; i < g.N; ++i) {
            num += std::norm(pair.phi_j[i] - tphi[i]);
            den += std::norm(pair.phi_j[i]);
        }
        CHECK(std::sqrt(num / den) < 1e-3);
    }

    SUBCASE("eigenvector has no negative-frequency content") {
        SampledFunction ph = fourier_forward(sp[0].phi_j);
        double neg = 0.0, tot = 0.0;
        for (int b = 0; b < g.N; ++b) {
            tot += std::norm(ph[b]);
            if (g.freq_index(b) < 0) neg += std::norm(ph[b]);
        }
        CHECK(neg / tot < 1e-20);
    }
}

TEST_CASE("weak repulsive potential binds nothing") {
    Grid g(20.0, 512);
    Potential u = Potential::make(g, LorentzianFamily{-0.1, 1.0, 0.0});
    CHECK(discrete_spectrum(u).empty());
}

TEST_CASE("eigenvalues are translation invariant") {
    Grid g(20.0, 512);
    Potential u = Potential::make(g, GaussianFamily{2.5, 1.0, 0.0});
    std::vector<EigenPair> a = discrete_spectrum(u);
    // shift by three grid cells via resampling
    std::vector<double> shifted(g.N, 0.0);
    for (int i = 3; i < g.N; ++i) shifted[i] = u.u[i - 3];
    Potential us = Potential::from_samples(g, std::move(shifted));
    std::vector<EigenPair> b = discrete_spectrum(us);
    REQUIRE(a.size() == b.size());
    for (size_t j = 0; j < a.size(); ++j)
        CHECK(std::abs(a[j].lambda_j - b[j].lambda_j) < 1e-7);
}

TEST_CASE("synthetic Laurent data returns the planted phase constant") {
    Grid g(20.0, 256);
    const double lj = -0.8;
    const cd gamma0(1.7, 0.0);
    SampledFunction phi(g);
    for (int i = 0; i < g.N; ++i) phi[i] = std::exp(-0.5 * std::pow(g.x(i), 2));
    auto sampler = [&](double delta) {
        SampledFunction m(g);
        for (int i = 0; i < g.N; ++i) {
            const double x = g.x(i);
            m[i] = -I * phi[i] / delta + (x + gamma0) * phi[i];
        }
        return m;
    };
    LaurentExtraction ex = extract_laurent(g, 0.01, sampler, g.L / 2.0);
    CHECK(std::abs(ex.gamma - gamma0) < 1e-8);
    CHECK(ex.misfit < 1e-10);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i) worst = std::max(worst, std::abs(ex.phi[i] - phi[i]));
    CHECK(worst < 1e-10);
}

TEST_CASE("phase constant extraction is refinement-consistent") {
    Grid g(20.0, 512);
    Potential u = Potential::make(g, GaussianFamily{2.5, 1.0, 0.0});
    std::vector<EigenPair> sp = discrete_spectrum(u);
    REQUIRE(!sp.empty());
    std::vector<double> evs;
    for (const EigenPair& p : sp) evs.push_back(p.lambda_j);

    EigenPair pair = sp[0];
    phase_constant(u, pair, evs);
    CHECK(pair.gamma_valid);
    CHECK(pair.residue_residual < 1e-3);
    // the imaginary part of the phase constant is pinned by the residue
    // normalization: Im gamma_j = -1/(2 lambda_j)
    CHECK(std::abs(pair.gamma_j.imag() + 1.0 / (2.0 * pair.lambda_j)) <
          5e-3 * std::abs(1.0 / (2.0 * pair.lambda_j)));

    // h vs h/2 consistency of the extraction itself
    SolveOptions opts;
    opts.eigenvalues = evs;
    const double lj = pair.lambda_j;
    auto sampler = [&](double delta) {
        return solve_m1(u, SpectralPoint::off(cd(lj + delta, 0.0)), opts).values;
    };
    const double h = std::max(2e-3, 0.007 * std::abs(lj));
    LaurentExtraction a = extract_laurent(g, h, sampler, g.L / 2.0);
    LaurentExtraction b = extract_laurent(g, 0.5 * h, sampler, g.L / 2.0);
    CHECK(std::abs(a.gamma - b.gamma) < 1e-5);
    double worst = 0.0;
    for (int i = 0; i < g.N; ++i) worst = std::max(worst, std::abs(a.phi[i] - b.phi[i]));
    CHECK(worst / norm_inf(a.phi) < 1e-4);
}

TEST_CASE("spectral bottom is stable under cutoff refinement") {
    Grid g(20.0, 512);
    Potential u = Potential::make(g, GaussianFamily{2.5, 1.0, 0.0});
    const int M = g.N / 2 - 1;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> full(build_Lu(u, M), Eigen::EigenvaluesOnly);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> half(build_Lu(u, M / 2),
                                                         Eigen::EigenvaluesOnly);
    CHECK(std::abs(full.eigenvalues()(0) - half.eigenvalues()(0)) < 1e-8);
}
