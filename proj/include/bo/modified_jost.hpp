#pragma once

#include "bo/fredholm.hpp"
#include "bo/kernels.hpp"

namespace bo {

struct GenericityReport {
    cd inner_product; // int u(x) m1^0(x, 0) dx
    bool is_generic = false;
    double threshold_used = 0.0;
    double chi_c = 0.0; // imaginary amplitude of the chi used
};

// Small-k handoff: below this the modified pipeline applies.
inline constexpr double default_k0 = 0.3;
inline constexpr double chi_floor = 1e-3;

// Lags of the modified operator T^0_k realizing G^0_k = G_k - l(k); at k = 0
// the closed-form kernel G^0_0. The rank-one relation
//   T_k = T^0_k + l(k) <., u> dx
// holds exactly at the lag level.
ToeplitzKernel modified_lags(const Potential& u, const SpectralPoint& k, const CutoffChi& chi,
                             const AssemblyParams& p = {});

JostFunction solve_m1_mod(const Potential& u, const SpectralPoint& k, const CutoffChi& chi,
                          const SolveOptions& opts = {});
JostFunction solve_me_mod(const Potential& u, double lambda, Side side, const CutoffChi& chi,
                          const SolveOptions& opts = {});

// m1 = m1^0 / (1 - l(k) <m1^0, u>), exact Sherman-Morrison inversion of the
// rank-one relation between the two operators.
JostFunction reconstruct_m1(const JostFunction& m1_mod, const Potential& u, const CutoffChi& chi,
                            const SolveOptions& opts = {});
// me = me^0 + l <me^0, u> m1.
JostFunction reconstruct_me(const JostFunction& me_mod, const JostFunction& m1_mod,
                            const Potential& u, const CutoffChi& chi,
                            const SolveOptions& opts = {});

GenericityReport classify_genericity(const Potential& u, const CutoffChi& chi,
                                     const SolveOptions& opts = {});

// Boundary bundle through the modified pipeline (for 0 < lambda < k0).
BoundaryBundle boundary_bundle_modified(const Potential& u, double lambda, const CutoffChi& chi,
                                        const SolveOptions& opts = {});

// Manufactures a non-generic potential by bisecting Re <m1^0(0), u_t> to zero
// along a one-parameter family of mean-zero profiles.
Potential make_nongeneric_potential(const Grid& g, const CutoffChi& chi,
                                    const SolveOptions& opts = {});

} // namespace bo
