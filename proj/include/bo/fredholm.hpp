#pragma once

#include <Eigen/Dense>
#include <vector>

#include "bo/grid.hpp"
#include "bo/kernels.hpp"

namespace bo {

enum class RhsKind { one, plane_wave };
enum class SolvePath { nystrom, neumann_left, ode_right };
enum class JostKind { m1, me, m1_mod, me_mod };

struct JostFunction {
    JostKind which = JostKind::m1;
    SpectralPoint at;
    SampledFunction values;
    double residual_inf = 0.0;
    SolvePath solve_path = SolvePath::nystrom;
};

struct SolveOptions {
    double solver_tol = 1e-8;  // accept when residual_inf < solver_tol * ||rhs||_inf
    double cond_limit = 1e12;
    std::vector<double> eigenvalues; // known discrete spectrum, for the exclusion guard
    double exclusion_radius = 1e-3;
    AssemblyParams assembly;
    double contraction_limit = 0.5; // Neumann regime requires the norm proxy below this
    double series_tol = 1e-13;
    int max_terms = 400;
};

// Dense realization of T_k: kernel_matrix(i, j) = lag(i-j) * u(x_j), the
// product-quadrature discretization of phi -> G_k * (u phi).
struct NystromSystem {
    Grid grid;
    SpectralPoint k;
    bool efactored = false;
    ToeplitzKernel lags;
    Eigen::MatrixXcd kernel_matrix;
    Eigen::VectorXcd rhs;
    double condition_estimate = 0.0;
};

NystromSystem assemble(const Potential& u, const SpectralPoint& k, const SolveOptions& opts = {});

// (T phi)_i = sum_j lag(i-j) u_j phi_j, dense-free application.
std::vector<cd> apply_T(const ToeplitzKernel& lags, const std::vector<double>& u,
                        const std::vector<cd>& phi);

JostFunction solve_m1(const Potential& u, const SpectralPoint& k, const SolveOptions& opts = {});
JostFunction solve_me(const Potential& u, double lambda, Side side, const SolveOptions& opts = {});
JostFunction solve_largek(const Potential& u, const SpectralPoint& k, RhsKind rhs_kind,
                          const SolveOptions& opts = {});

// Sup-norm proxy for the Neumann contraction factor of the right-half-plane
// split at boundary lambda (and of T_k itself for k away from the cut).
double largek_norm_proxy(const Potential& u, const SpectralPoint& k, const SolveOptions& opts = {});

// Smallest lambda on a geometric ladder whose contraction proxy is below
// opts.contraction_limit.
double estimate_k_switch(const Potential& u, const SolveOptions& opts = {});

double boundary_condition_estimate(const Potential& u, double lambda, Side side,
                                   const SolveOptions& opts = {});

// All four boundary Jost functions at one lambda from a single factorization
// (the two sides differ by a rank-one update), together with the scattering
// coefficients they induce.
struct BoundaryBundle {
    double lambda = 0.0;
    JostFunction m1p, m1m, mep, mem;
    cd beta, Gamma, Gamma_minus_form, f;
    double condition_estimate = 0.0;
    SolvePath path = SolvePath::nystrom;
};

BoundaryBundle boundary_bundle_nystrom(const Potential& u, double lambda,
                                       const SolveOptions& opts = {});
BoundaryBundle boundary_bundle_largek(const Potential& u, double lambda,
                                      const SolveOptions& opts = {});

} // namespace bo
