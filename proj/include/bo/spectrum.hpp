#pragma once

#include <Eigen/Dense>

#include "bo/fredholm.hpp"
#include "bo/grid.hpp"

namespace bo {

// Discrete eigenpair of L_u = (1/i) d/dx - C+ u C+ on the Hardy space.
// phi_j carries the residue normalization once the phase constant has been
// extracted: m1(k) = -i phi_j / (k - lambda_j) + (x + gamma_j) phi_j + O(k - lambda_j).
struct EigenPair {
    double lambda_j = 0.0;      // pole of the discrete resolvent (see below)
    double lambda_seed = 0.0;   // Galerkin eigenvalue used as the seed
    SampledFunction phi_j;
    cd gamma_j{0.0, 0.0};
    double residue_residual = 0.0;
    double uncertainty = 0.0; // refinement-based eigenvalue uncertainty
    bool gamma_valid = false;
};

struct SpectrumOptions {
    double tol_edge = 1e-3;  // eigenvalues above -tol_edge belong to the edge, not the spectrum
    double gap_min = 1e-8;   // simplicity guard
    bool refine = true;      // estimate uncertainties from a half-cutoff run
    // Polish each eigenvalue to the pole of the Nystrom resolvent, the anchor
    // used by the Laurent extraction of the phase constants.
    bool refine_poles = true;
};

// Galerkin matrix of L_u on the positive-frequency modes xi_m = m pi / L,
// m = 1 .. modes (default N/2 - 1): A = diag(xi) - (1/2pi) uhat(xi_r - xi_c) dxi.
Eigen::MatrixXcd build_Lu(const Potential& u, int modes = -1);

// L_u applied on the grid (spectral derivative + Cauchy projection).
SampledFunction apply_Lu(const Potential& u, const SampledFunction& phi);

std::vector<EigenPair> discrete_spectrum(const Potential& u, const SpectrumOptions& sopts = {},
                                         const SolveOptions& opts = {});

// Locates the nearby zero of the smallest eigenvalue of (I - T_k) by complex
// secant iteration (inverse iteration inside each factorization).
double refine_nystrom_pole(const Potential& u, double seed, const SolveOptions& opts = {});

// Richardson extraction of the residue and regular part of the Laurent
// expansion from samples of m1 at lambda_j + {h, 2h, 4h}. The probe returns
// m1 values at the given offset delta > 0.
struct LaurentExtraction {
    SampledFunction phi; // residue-normalized eigenfunction
    cd gamma;
    double misfit; // relative least-squares misfit on the fit window
};

LaurentExtraction extract_laurent(const Grid& g, double h,
                                  const std::function<SampledFunction(double)>& m1_probe,
                                  double window_half_width);

// Fills gamma_j and replaces phi_j by the residue-normalized eigenfunction,
// via Richardson extrapolation of m1 at k = lambda_j + {4h, 2h, h}.
void phase_constant(const Potential& u, EigenPair& pair, const std::vector<double>& eigenvalues,
                    const SolveOptions& opts = {});

} // namespace bo
