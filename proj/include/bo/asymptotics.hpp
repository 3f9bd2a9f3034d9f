#pragma once

#include "bo/scattering.hpp"

namespace bo {

// Quantitative checks of the k -> 0 limit laws. For generic potentials the
// leading behavior is logarithmic (beta ~ 2 pi i / log lambda); for
// non-generic ones the Jost function converges to the modified one with an
// algebraic-log rate.
struct K0Report {
    bool is_generic = false;
    std::vector<double> lambda_probes;
    std::vector<cd> beta_log_ratio; // beta(la) log(la + 0i) / (2 pi i)
    // beta divided by its finite-lambda prediction built from k = 0 objects
    // only: P(la) = i <u m1^0(0) ebar> / (1 - l(la+0i) <m1^0(0), u>); the limit
    // theorem asserts this ratio tends to 1
    std::vector<cd> beta_refined_ratio;
    std::vector<double> k_probes;   // |k| along the negative axis
    std::vector<double> m1_coeff_ratio; // generic: ||m1|| |<m1^0,u> log k| / (2 pi ||m1^0||)
    std::vector<double> m1_deviation;   // non-generic: ||m1(k) - m1^0(0)||_inf
    double rate_slope = 0.0;            // d log(dev)/d log|k| (non-generic branch)
};

K0Report check_k0(const Potential& u, const CutoffChi& chi, const TransformOptions& topts = {});

struct KinfReport {
    std::vector<double> K;        // imaginary-axis magnitudes
    std::vector<double> m1_dev;   // ||m1(iK) - 1||_inf
    std::vector<double> hot2;     // ||m1(iK) - 1 + C+u/(iK)||_inf
    double hot2_slope = 0.0;      // least-squares log-log slope
    std::vector<double> lambda_me;
    std::vector<double> me_dev;   // ||me(la+0i) - e^{i la x} e^{i int_-inf^x u}||_inf
    std::vector<double> lambda_gamma;
    std::vector<double> gamma_err; // |Gamma(la) - e^{i int u}|
    std::vector<double> lambda_beta;
    std::vector<double> beta_abs;
    double beta_slope = 0.0;
};

KinfReport check_kinf(const Potential& u, const TransformOptions& topts = {});

// Potential recovery from the imaginary-axis expansion u = 2 Re lim k(1 - m1).
struct RecoveryResult {
    std::vector<double> K_list;
    std::vector<double> u_recovered;
    std::vector<double> raw_errors; // sup|2 Re iK(1 - m1(iK)) - u| per K
    double sup_error = 0.0;
    SampledFunction cplus_field; // K(1 - m1(x, iK_max)), approximates C+u
};

RecoveryResult recover_potential(const Potential& u_true, const std::vector<double>& K_list,
                                 const TransformOptions& topts = {});

} // namespace bo
