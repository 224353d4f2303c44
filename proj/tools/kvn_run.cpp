// Scenario runner: kvn_run --config <file> [--output <dir>] [--seed <int>] [--quiet]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "kvn/error.hpp"
#include "kvn/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"KvN scenario runner"};
    std::string config_path, output;
    std::uint64_t seed = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "scenario configuration file")->required();
    auto* out_opt = app.add_option("--output", output, "output directory (overrides output_dir)");
    auto* seed_opt = app.add_option("--seed", seed, "oracle seed (overrides seed)");
    app.add_flag("--quiet", quiet, "suppress the summary on stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    kvn::ScenarioConfig cfg;
    try {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw kvn::ConfigError("cannot read config file " + config_path);
        std::ostringstream text;
        text << in.rdbuf();
        cfg = kvn::parse_config(text.str());
        if (*out_opt) {
            cfg.output_dir = output;
            cfg.overrides.push_back("output_dir = " + output + " (--output)");
        }
        if (*seed_opt) {
            cfg.seed = seed;
            cfg.overrides.push_back("seed = " + std::to_string(seed) + " (--seed)");
        }
    } catch (const kvn::ConfigError& e) {
        std::cerr << "kvn_run: " << e.what() << "\n";
        return 2;
    }

    try {
        const kvn::RunReport rep = kvn::run_scenario(cfg);
        if (!quiet) {
            std::cout << rep.tool_version << ": scenario " << kvn::to_string(cfg.scenario) << " -> "
                      << cfg.output_dir << "\n";
            for (const auto& f : rep.files) std::cout << "  wrote " << f << "\n";
            if (rep.physics_ok()) std::cout << "all physics checks passed\n";
        }
        for (const auto& f : rep.failures) std::cerr << "physics check failed: " << f << "\n";
        return rep.physics_ok() ? 0 : 1;
    } catch (const kvn::ConfigError& e) {
        std::cerr << "kvn_run: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "kvn_run: " << e.what() << "\n";
        return 1;
    }
}
