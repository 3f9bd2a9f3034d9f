#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "bo/serialize.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bo;

namespace {

#ifndef BO_SCATTER_BIN
#define BO_SCATTER_BIN "bo_scatter"
#endif
#ifndef BO_GOLDEN_DIR
#define BO_GOLDEN_DIR "."
#endif

struct RunResult {
    int exit_code = -1;
    std::string stderr_text;
};

fs::path fresh_dir(const std::string& tag) {
    fs::path p = fs::temp_directory_path() / ("bo_cli_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

RunResult run_cli(const std::string& subcmd, const json& config, const fs::path& dir) {
    const fs::path cfg = dir / "config.json";
    {
        std::ofstream out(cfg);
        out << config.dump(2);
    }
    const fs::path errfile = dir / "stderr.txt";
    const std::string cmd = std::string(BO_SCATTER_BIN) + " " + subcmd + " -c " + cfg.string() +
                            " -o " + dir.string() + " 2> " + errfile.string() + " > /dev/null";
    const int rc = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(rc);
    std::ifstream in(errfile);
    r.stderr_text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return r;
}

json base_config(int N = 256, double L = 20.0) {
    return json{{"grid", {{"L", L}, {"N", N}}},
                {"potential", {{"family", "gaussian"}, {"a", 2.5}, {"sigma", 1.0}, {"x0", 0.0}}},
                {"lambda_grid", {{"min", 0.1}, {"max", 20.0}, {"count", 8}, {"log", true}}},
                {"workers", 2}};
}

// read a file with the timestamp header stripped
std::string file_body(const fs::path& p) {
    std::ifstream in(p);
    std::string line, body;
    bool first = true;
    while (std::getline(in, line)) {
        if (first && line.rfind("#", 0) == 0) {
            first = false;
            continue;
        }
        first = false;
        body += line;
        body += '\n';
    }
    return body;
}

void compare_json_numeric(const json& a, const json& b, double tol, const std::string& where) {
    REQUIRE_MESSAGE(a.type() == b.type(), where);
    if (a.is_number_float() || b.is_number_float()) {
        const std::string msg = where + ": " + a.dump() + " vs " + b.dump();
        CHECK_MESSAGE(std::abs(a.get<double>() - b.get<double>()) <=
                          tol * std::max(1.0, std::abs(b.get<double>())),
                      msg);
        return;
    }
    if (a.is_object()) {
        REQUIRE_MESSAGE(a.size() == b.size(), where);
        for (auto it = a.begin(); it != a.end(); ++it) {
            REQUIRE_MESSAGE(b.contains(it.key()), (where + "." + it.key()));
            compare_json_numeric(it.value(), b.at(it.key()), tol, where + "." + it.key());
        }
        return;
    }
    if (a.is_array()) {
        REQUIRE_MESSAGE(a.size() == b.size(), where);
        for (std::size_t i = 0; i < a.size(); ++i)
            compare_json_numeric(a[i], b[i], tol, where + "[" + std::to_string(i) + "]");
        return;
    }
    CHECK_MESSAGE(a == b, where);
}

} // namespace

TEST_CASE("zero potential transform writes trivial data") {
    fs::path dir = fresh_dir("zero");
    json cfg = base_config();
    cfg["potential"] = {{"family", "gaussian"}, {"a", 0.0}};
    RunResult r = run_cli("transform", cfg, dir);
    REQUIRE(r.exit_code == 0);
    json d;
    std::ifstream(dir / "scattering_data.json") >> d;
    CHECK(d.at("eigen").empty());
    for (const auto& b : d.at("beta")) {
        CHECK(std::abs(b.at(0).get<double>()) < 1e-12);
        CHECK(std::abs(b.at(1).get<double>()) < 1e-12);
    }
}

TEST_CASE("malformed config is rejected with the field name") {
    fs::path dir = fresh_dir("badN");
    json cfg = base_config(255); // odd N
    RunResult r = run_cli("transform", cfg, dir);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("grid.N") != std::string::npos);

    json cfg2 = base_config();
    cfg2["grid"]["M"] = 3; // unknown key
    RunResult r2 = run_cli("transform", cfg2, dir);
    CHECK(r2.exit_code == 2);
    CHECK(r2.stderr_text.find("grid.M") != std::string::npos);
}

TEST_CASE("recover requires K_list") {
    fs::path dir = fresh_dir("noK");
    RunResult r = run_cli("recover", base_config(), dir);
    CHECK(r.exit_code == 2);
    CHECK(r.stderr_text.find("K_list") != std::string::npos);

    json cfg = base_config(512);
    cfg["potential"]["a"] = 0.5;
    cfg["recover"] = {{"K_list", {40.0, 80.0, 160.0}}};
    RunResult ok = run_cli("recover", cfg, dir);
    CHECK(ok.exit_code == 0);
    CHECK(fs::exists(dir / "recovered_u.csv"));
}

TEST_CASE("evolve surfaces blowup as a solver failure") {
    fs::path dir = fresh_dir("blowup");
    json cfg = base_config(512);
    cfg["potential"]["a"] = 3.0;
    cfg["evolve"] = {{"t_final", 4.0}, {"dt", 0.2}};
    RunResult r = run_cli("evolve", cfg, dir);
    CHECK(r.exit_code == 3);
    CHECK(r.stderr_text.find("tenfold") != std::string::npos);
}

TEST_CASE("verify fails on a deliberately coarse grid") {
    // the centered-difference dGamma relation R6 breaks down at N = 64 (the
    // windowed product quadrature holds it to 1e-3 down to N ~ 128)
    fs::path dir = fresh_dir("coarse");
    json cfg = base_config(64);
    cfg["potential"]["a"] = 0.5;
    cfg["lambda_grid"] = {{"min", 0.3}, {"max", 5.0}, {"count", 5}, {"log", true}};
    RunResult r = run_cli("verify", cfg, dir);
    CHECK(r.exit_code == 1);
    json rep;
    std::ifstream(dir / "verify_report.json") >> rep;
    bool r6_failed = false;
    for (const auto& c : rep.at("checks"))
        if (c.at("name") == "R6" && !c.at("pass").get<bool>()) r6_failed = true;
    CHECK(r6_failed);
}

TEST_CASE("transform output is deterministic") {
    fs::path d1 = fresh_dir("det1"), d2 = fresh_dir("det2");
    json cfg = base_config();
    REQUIRE(run_cli("transform", cfg, d1).exit_code == 0);
    REQUIRE(run_cli("transform", cfg, d2).exit_code == 0);
    // JSON byte-identical; CSVs identical after the timestamp header
    std::ifstream a(d1 / "scattering_data.json"), b(d2 / "scattering_data.json");
    std::string sa(std::istreambuf_iterator<char>(a), {});
    std::string sb(std::istreambuf_iterator<char>(b), {});
    CHECK(sa == sb);
    CHECK(file_body(d1 / "beta.csv") == file_body(d2 / "beta.csv"));
    CHECK(file_body(d1 / "eigen.csv") == file_body(d2 / "eigen.csv"));
}

TEST_CASE("golden gaussian transform") {
    const fs::path golden = fs::path(BO_GOLDEN_DIR) / "scattering_data.json";
    REQUIRE(fs::exists(golden));
    fs::path dir = fresh_dir("golden");
    json cfg = base_config(512);
    cfg["lambda_grid"] = {{"min", 0.1}, {"max", 20.0}, {"count", 12}, {"log", true}};
    RunResult r = run_cli("transform", cfg, dir);
    REQUIRE(r.exit_code == 0);
    json have, want;
    std::ifstream(dir / "scattering_data.json") >> have;
    std::ifstream(golden) >> want;
    compare_json_numeric(have, want, 1e-9, "scattering_data");
}

TEST_CASE("tabulated potential input") {
    fs::path dir = fresh_dir("tab");
    Grid g(20.0, 256);
    {
        std::ofstream out(dir / "u.txt");
        out.precision(17);
        for (int i = 0; i < g.N; ++i)
            out << g.x(i) << ' ' << 2.5 * std::exp(-g.x(i) * g.x(i)) << '\n';
    }
    json cfg = base_config();
    cfg["potential"] = {{"family", "tabulated"}, {"path", (dir / "u.txt").string()}};
    RunResult r = run_cli("spectrum", cfg, dir);
    REQUIRE(r.exit_code == 0);
    // same bound state as the analytic family
    std::ifstream in(dir / "eigen.csv");
    std::string line;
    std::getline(in, line); // timestamp
    std::getline(in, line); // header
    REQUIRE(std::getline(in, line));
    const double lambda = std::stod(line.substr(0, line.find(',')));
    CHECK(lambda == doctest::Approx(-0.6036).epsilon(2e-3));
}

TEST_CASE("schema version guard") {
    json j;
    j["schema_version"] = "2.0.0";
    CHECK_THROWS_AS(scattering_from_json(j), ConfigError);
}
