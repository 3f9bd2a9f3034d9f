#pragma once

#include "bo/scattering.hpp"

namespace bo {

struct EvolutionConfig {
    double t_final = 0.25;
    double dt = 2e-4;
    double dealias_fraction = 2.0 / 3.0;
    enum class Scheme { strang_split } scheme = Scheme::strang_split;
};

struct ConservationReport {
    double mass_drift = 0.0;     // drift of int u
    double momentum_drift = 0.0; // drift of int u^2
    double cfl_ratio = 0.0;      // dt / dx^2, reported sanity figure
};

// Exact evolution of the scattering data: lambda_j frozen, gamma_j -> gamma_j
// + 2 lambda_j t, Gamma frozen, beta -> e^{i lambda^2 t} beta, f recomputed.
ScatteringData evolve_data(const ScatteringData& data, double t);

// Reference solver for u_t + 2 u u_x - H u_xx = 0: Strang splitting of the
// exact dispersive flow (Fourier multiplier e^{i sgn(xi) xi^2 dt}) with a
// dealiased pseudo-spectral Burgers half-step advanced by RK4.
Potential pde_step(const Potential& u0, const EvolutionConfig& cfg,
                   ConservationReport* report = nullptr);

struct CrossValidation {
    ScatteringData evolved;    // transform at t=0, evolved by the exact laws
    ScatteringData recomputed; // transform of the PDE solution at time t
    std::vector<double> d_lambda;
    std::vector<double> d_gamma;
    double sup_beta = 0.0;
    double sup_Gamma = 0.0;
};

CrossValidation crossvalidate(const Potential& u0, double t, const EvolutionConfig& cfg,
                              const TransformOptions& topts = {});

} // namespace bo
