#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "kvn/config.hpp"
#include "kvn/csv.hpp"
#include "kvn/runner.hpp"

using namespace kvn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("kvn_cli_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p.parent_path());
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::size_t data_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) ++n;
    return n - 1;
}

int run_tool(const std::string& args) {
    const std::string cmd = std::string(KVN_RUN_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("minimal box config") {
    const auto c = parse_config("[box]\n");
    CHECK(c.scenario == ScenarioName::Box);
    CHECK(c.length == 1.0);
    CHECK(c.n_q == 256);
    CHECK(c.times == std::vector<double>{0.25, 0.75, 2.0});
    const auto echo = c.echo();
    CHECK(echo.front() == std::pair<std::string, std::string>{"scenario", "box"});
    // echo text parses back to the same configuration
    std::string text = "[box]\n";
    for (std::size_t k = 1; k < echo.size(); ++k) text += echo[k].first + " = " + echo[k].second + "\n";
    CHECK(parse_config(text).echo() == echo);
}

TEST_CASE("config errors") {
    const auto unknown = error_of("[box]\n# comment\ndampening = 1\n");
    CHECK(unknown.find("dampening") != std::string::npos);
    CHECK(unknown.find("line 3") != std::string::npos);
    CHECK(error_of("[box]\ntimes = \"0, 0.5, 0.25\"\n").find("increasing") != std::string::npos);
    CHECK_FALSE(error_of("[box]\nn_q = 12x\n").empty());
    CHECK_FALSE(error_of("[pendulum]\n").empty());
    CHECK_FALSE(error_of("n_q = 12\n[box]\n").empty());
    CHECK_FALSE(error_of("").empty());
    CHECK_FALSE(error_of("[box]\nn_q = 128\nn_q = 256\n").empty());
    CHECK_FALSE(error_of("[box]\ng = 1\n").empty());  // key of another scenario
    CHECK(error_of("[gravity]\ng = -1   # upward\ntimes = 0, 0.4\n").empty());
}

TEST_CASE("csv formatting") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(-0.0) == "0");
    CHECK(format_double(3.0) == "3");
    CHECK(std::stod(format_double(M_PI)) == M_PI);
}

TEST_CASE("spectrum scenario") {
    auto c = parse_config("[spectrum]\n");
    c.output_dir = scratch("spectrum").string();
    const auto r = run_scenario(c);
    CHECK(r.physics_ok());
    CHECK(r.bands.size() == 33);
    REQUIRE(r.quantum.size() == 3);
    CHECK(r.quantum[0].energy == doctest::Approx(M_PI * M_PI / 2.0).epsilon(1e-15));
    CHECK(data_rows(fs::path(c.output_dir) / "spectrum_bands.csv") == 33);
    CHECK(data_rows(fs::path(c.output_dir) / "spectrum_quantum.csv") == 3);
    CHECK(fs::exists(fs::path(c.output_dir) / "manifest.txt"));
}

TEST_CASE("box scenario") {
    auto c = parse_config("[box]\nn_samples = 200000\n");
    c.output_dir = scratch("box").string();
    const auto r = run_scenario(c);
    CHECK(r.physics_ok());
    CHECK(r.max_wall_current <= 1e-8);
    CHECK(r.max_parity_asymmetry <= 1e-8);
    CHECK(r.observables.size() == 3);
    CHECK(r.oracle.size() == 3);
    for (const auto& o : r.oracle) CHECK(o.l1 <= o.budget);
    for (const char* f : {"report.txt", "observables.csv", "density_t0.csv", "density_t2.csv", "oracle.csv", "walls.csv"})
        CHECK(fs::exists(fs::path(c.output_dir) / f));
    const std::string report = slurp(fs::path(c.output_dir) / "report.txt");
    CHECK(report.find("n_samples = 200000") != std::string::npos);
    CHECK(report.find(kToolVersion) != std::string::npos);
}

TEST_CASE("two-slit scenario") {
    auto c = parse_config("[two-slit]\n");
    c.output_dir = scratch("two_slit").string();
    const auto r = run_scenario(c);
    REQUIRE(r.two_slit);
    CHECK(r.two_slit->kvn_cross_term_max <= 1e-12);
    CHECK(r.two_slit->quantum_fringe_visibility >= 0.5);
    CHECK(r.physics_ok());
}

TEST_CASE("runner exit codes and reproducibility") {
    const fs::path dir = scratch("tool");
    fs::create_directories(dir);
    {
        std::ofstream(dir / "ok.cfg") << "[gravity]\nn_samples = 50000\ntimes = 0.25, 0.75\n";
        std::ofstream(dir / "bad.cfg") << "[box]\ndampening = 1\n";
        std::ofstream(dir / "fail.cfg") << "[kappa-dial]\nprotocol = fixed-moments\nsigma_q = 0.2\nsigma_p = 1.0\n"
                                           "kappas = 0.4, 0.2\nt_final = 0.2\n";
    }
    const std::string ok = "--config " + (dir / "ok.cfg").string() + " --quiet --output ";
    CHECK(run_tool(ok + (dir / "a").string()) == 0);
    CHECK(run_tool(ok + (dir / "b").string() + " --seed 1") == 0);
    for (const char* f : {"observables.csv", "oracle.csv", "density_t0.csv", "density_t1.csv"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    CHECK(slurp(dir / "b" / "report.txt").find("seed = 1 (--seed)") != std::string::npos);
    CHECK(run_tool(ok + (dir / "c").string() + " --seed 2") == 0);
    CHECK(slurp(dir / "a" / "oracle.csv") != slurp(dir / "c" / "oracle.csv"));

    CHECK(run_tool("--config " + (dir / "bad.cfg").string()) == 2);
    CHECK(run_tool("--config " + (dir / "missing.cfg").string()) == 2);
    CHECK(run_tool("--quiet") == 2);
    // fixed-moment protocol: L1 grows as kappa shrinks, a physics-check failure
    CHECK(run_tool("--config " + (dir / "fail.cfg").string() + " --quiet --output " + (dir / "f").string()) == 1);
    CHECK(fs::exists(dir / "f" / "contraction.csv"));
}
