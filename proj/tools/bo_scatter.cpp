// Command-line driver: direct scattering transform, identity verification,
// scattering-data time evolution with a PDE cross-check, and potential
// recovery. One JSON config per run; JSON + CSV out.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bo/serialize.hpp"

namespace fs = std::filesystem;
using namespace bo;
using nlohmann::json;

namespace {

struct CliArgs {
    std::string config_path;
    std::string output_dir_flag;
    bool verbose = false;
};

void emit_error(int code, const std::string& type, const std::string& message,
                const std::string& field = {}) {
    json err;
    err["error"] = {{"code", code}, {"type", type}, {"message", message}};
    if (!field.empty()) err["error"]["field"] = field;
    std::cerr << err.dump() << std::endl;
}

fs::path resolve_output_dir(const RunConfig& cfg, const CliArgs& args) {
    // priority: flag > environment override > config
    if (!args.output_dir_flag.empty()) return args.output_dir_flag;
    if (const char* env = std::getenv("BO_OUTPUT_DIR"); env && *env) return env;
    return cfg.output_dir;
}

void write_json_file(const fs::path& p, const json& j) {
    std::ofstream out(p);
    if (!out) throw Error("cannot open output file: " + p.string());
    out << j.dump(2) << '\n';
}

TransformOptions transform_options(const RunConfig& cfg) {
    TransformOptions t;
    t.chi_c = cfg.chi_c;
    t.workers = cfg.workers;
    t.lambda_grid = cfg.lambda_grid();
    return t;
}

int cmd_transform(const RunConfig& cfg, const fs::path& outdir, bool verbose) {
    Potential u = make_potential(cfg);
    ScatteringData d = direct_transform(u, transform_options(cfg));
    write_json_file(outdir / "scattering_data.json", to_json(d, cfg));
    write_beta_csv((outdir / "beta.csv").string(), d);
    write_gamma_csv((outdir / "gamma_coeff.csv").string(), d);
    write_eigen_csv((outdir / "eigen.csv").string(), d);
    if (verbose) {
        std::cout << "eigenvalues: " << d.eigen.size() << '\n';
        for (const EigenPair& p : d.eigen)
            std::cout << "  lambda = " << p.lambda_j << ", gamma = " << p.gamma_j << '\n';
    }
    std::cout << "wrote scattering_data.json, beta.csv, gamma_coeff.csv, eigen.csv to " << outdir
              << std::endl;
    return 0;
}

int cmd_verify(const RunConfig& cfg, const fs::path& outdir, bool) {
    Potential u = make_potential(cfg);
    VerifyReport rep = run_verify(u, cfg);
    write_json_file(outdir / "verify_report.json", to_json(rep));
    for (const VerifyCheck& c : rep.checks)
        std::cout << (c.pass ? "[pass] " : "[FAIL] ") << c.name << " = " << c.value
                  << " (threshold " << c.threshold << ")\n";
    std::cout << (rep.pass ? "verify: all checks passed" : "verify: threshold breach")
              << std::endl;
    return rep.pass ? 0 : 1;
}

int cmd_evolve(const RunConfig& cfg, const fs::path& outdir, bool) {
    Potential u = make_potential(cfg);
    EvolutionConfig ecfg = cfg.evolve;
    ConservationReport cons;
    // run the oracle once separately for the conservation figures and the
    // evolved-potential output
    Potential ut = pde_step(u, ecfg, &cons);
    write_potential_csv((outdir / "evolved_u.csv").string(), ut);
    TransformOptions topts = transform_options(cfg);
    topts.with_relations = false;
    CrossValidation cv = crossvalidate(u, ecfg.t_final, ecfg, topts);
    write_json_file(outdir / "evolution_report.json", evolution_report_json(cv, cfg, cons));
    std::cout << "evolution cross-check at t = " << ecfg.t_final << ": sup|dbeta| = " << cv.sup_beta
              << ", sup|dGamma| = " << cv.sup_Gamma;
    for (std::size_t j = 0; j < cv.d_lambda.size(); ++j)
        std::cout << ", |dlambda_" << j + 1 << "| = " << cv.d_lambda[j];
    std::cout << std::endl;
    return 0;
}

int cmd_recover(const RunConfig& cfg, const fs::path& outdir, bool) {
    if (cfg.recover_K.empty())
        throw ConfigError("recover command requires recover.K_list", "recover.K_list");
    Potential u = make_potential(cfg);
    RecoveryResult rec = recover_potential(u, cfg.recover_K, transform_options(cfg));
    write_recovered_csv((outdir / "recovered_u.csv").string(), u, rec);
    std::cout << "recovered potential sup error = " << rec.sup_error << std::endl;
    return 0;
}

int cmd_spectrum(const RunConfig& cfg, const fs::path& outdir, bool verbose) {
    Potential u = make_potential(cfg);
    TransformOptions topts = transform_options(cfg);
    ScatteringData d;
    d.eigen = discrete_spectrum(u, topts.spectrum, topts.solve);
    std::vector<double> evs;
    for (const EigenPair& p : d.eigen) evs.push_back(p.lambda_j);
    for (EigenPair& p : d.eigen) phase_constant(u, p, evs, topts.solve);
    write_eigen_csv((outdir / "eigen.csv").string(), d);
    std::cout << "discrete spectrum: " << d.eigen.size() << " eigenvalue(s)\n";
    if (verbose)
        for (const EigenPair& p : d.eigen)
            std::cout << "  lambda = " << p.lambda_j << ", gamma = " << p.gamma_j
                      << ", misfit = " << p.residue_residual << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"direct scattering transform toolkit for the Benjamin-Ono equation"};
    app.require_subcommand(1);

    CliArgs args;
    std::string command;
    for (const char* name : {"transform", "verify", "evolve", "recover", "spectrum"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", args.config_path, "JSON run configuration")->required();
        sub->add_option("-o,--output-dir", args.output_dir_flag,
                        "output directory (overrides config and BO_OUTPUT_DIR)");
        sub->add_flag("-v,--verbose", args.verbose, "chatty progress output");
        sub->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        RunConfig cfg = load_config(args.config_path);
        const fs::path outdir = resolve_output_dir(cfg, args);
        fs::create_directories(outdir);
        if (command == "transform") return cmd_transform(cfg, outdir, args.verbose);
        if (command == "verify") return cmd_verify(cfg, outdir, args.verbose);
        if (command == "evolve") return cmd_evolve(cfg, outdir, args.verbose);
        if (command == "recover") return cmd_recover(cfg, outdir, args.verbose);
        if (command == "spectrum") return cmd_spectrum(cfg, outdir, args.verbose);
        emit_error(2, "ConfigError", "no command selected");
        return 2;
    } catch (const ConfigError& e) {
        emit_error(2, "ConfigError", e.what(), e.field);
        return 2;
    } catch (const Error& e) {
        emit_error(3, "SolverError", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error(3, "InternalError", e.what());
        return 3;
    }
}
