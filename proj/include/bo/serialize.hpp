#pragma once

#include <string>

#include "bo/asymptotics.hpp"
#include "bo/evolution.hpp"
#include "bo/scattering.hpp"

// nlohmann/json single header, vendored
#include <json.hpp>

namespace bo {

inline constexpr const char* schema_version = "1.0.0";

// Single-document run configuration; unknown keys are rejected with the
// offending path in the error.
struct RunConfig {
    Grid grid{40.0, 2048};
    PotentialFamily potential = GaussianFamily{0.5, 1.0, 0.0};
    std::string potential_path; // tabulated source, when used
    double lambda_min = 0.05, lambda_max = 50.0;
    int lambda_count = 48;
    bool lambda_log = true;
    double chi_c = 1.0;
    unsigned workers = 0;
    std::string output_dir = ".";
    std::map<std::string, double> tolerances; // verify thresholds, overrides
    EvolutionConfig evolve;
    double evolve_t = 0.25;
    std::vector<double> recover_K; // required by the recover command

    std::vector<double> lambda_grid() const;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

Potential make_potential(const RunConfig& cfg);

nlohmann::json to_json(const ScatteringData& d, const RunConfig& cfg);
ScatteringData scattering_from_json(const nlohmann::json& j); // checks schema major

// CSV writers; each file starts with a single timestamp header line, the only
// non-deterministic output field.
void write_beta_csv(const std::string& path, const ScatteringData& d);
void write_gamma_csv(const std::string& path, const ScatteringData& d);
void write_eigen_csv(const std::string& path, const ScatteringData& d);
void write_recovered_csv(const std::string& path, const Potential& u_true,
                         const RecoveryResult& rec);
void write_potential_csv(const std::string& path, const Potential& u);

struct VerifyCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyCheck> checks;
    bool pass = true;
};

VerifyReport run_verify(const Potential& u, const RunConfig& cfg);
nlohmann::json to_json(const VerifyReport& rep);

nlohmann::json evolution_report_json(const CrossValidation& cv, const RunConfig& cfg,
                                     const ConservationReport& cons);

} // namespace bo
