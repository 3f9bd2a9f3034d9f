#pragma once

#include <map>
#include <string>

#include "bo/fredholm.hpp"
#include "bo/modified_jost.hpp"
#include "bo/spectrum.hpp"

namespace bo {

struct TransformOptions {
    SolveOptions solve;
    SpectrumOptions spectrum;
    double chi_c = 1.0;
    double k0 = default_k0;     // modified-pipeline handoff radius
    double largek_factor = 1.2; // explicit-inversion route above max(1, factor * k_switch)
    double r6_step = 1e-3;      // centered-difference step for the dGamma/dlambda relation
    bool with_relations = true;
    unsigned workers = 0;              // 0 = hardware
    std::vector<double> lambda_grid;   // empty = default log grid
};

std::vector<double> default_lambda_grid(double lo = 0.05, double hi = 50.0, int count = 48);

enum class BundleRoute { automatic, nystrom, largek, modified };

// All boundary data at one lambda, routed by magnitude: modified pipeline
// below k0, dense Nystrom in the middle, explicit large-k inversion beyond.
BoundaryBundle solve_bundle(const Potential& u, double lambda, const CutoffChi& chi,
                            double k_switch, const TransformOptions& topts,
                            BundleRoute route = BundleRoute::automatic);

cd compute_beta(const Potential& u, double lambda, const TransformOptions& topts = {});
cd compute_Gamma(const Potential& u, double lambda, const TransformOptions& topts = {});
cd compute_f(const Potential& u, double lambda, const TransformOptions& topts = {});

// Residuals of the six boundary relations at one lambda.
struct RelationResiduals {
    double r1 = 0, r2 = 0, r3 = 0, r4 = 0, r5 = 0, r6 = 0;
    double gamma_form = 0; // disagreement of the two defining forms of Gamma
};

RelationResiduals relation_residuals_at(const Potential& u, double lambda, const CutoffChi& chi,
                                        double k_switch, const TransformOptions& topts,
                                        BundleRoute route = BundleRoute::automatic);

std::map<std::string, double> verify_relations(const Potential& u,
                                               const std::vector<double>& lambda_grid,
                                               const TransformOptions& topts = {});

struct ScatteringData {
    std::vector<EigenPair> eigen;
    std::vector<double> lambda_grid;
    std::vector<cd> beta;
    std::vector<cd> Gamma;
    std::vector<cd> f;
    GenericityReport genericity;
    double u_integral = 0.0;
    std::map<std::string, double> relation_residuals;
};

ScatteringData direct_transform(const Potential& u, const TransformOptions& topts = {});

} // namespace bo
