#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinkin/config.hpp"
#include "spinkin/scenario.hpp"
#include "spinkin/suites.hpp"

namespace {

struct Common {
    std::string config_path;
    std::string preset;
    std::string out_dir;
    bool svg = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config_path, "Scenario config file (key = value)");
    cmd->add_option("--preset", c.preset, "Built-in preset")->check(CLI::IsMember({"rb87"}));
    cmd->add_option("--out", c.out_dir, "Output directory");
    cmd->add_flag("--svg", c.svg, "Also write SVG plots");
}

spinkin::ScenarioConfig load(const Common& c) {
    spinkin::Config cfg;
    if (!c.config_path.empty()) cfg = spinkin::Config::load(c.config_path);
    std::string preset = c.preset;
    if (preset.empty() && c.config_path.empty()) preset = "rb87";
    auto scenario = spinkin::ScenarioConfig::from_config(cfg, preset);
    if (!c.out_dir.empty()) scenario.output_dir = c.out_dir;
    if (c.svg) scenario.svg = true;
    return scenario;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-1 kinetic dynamics, damping force and thermal gauge potentials"};
    app.require_subcommand(1);

    Common sim_opts, damp_opts, gauge_opts;
    auto* simulate = app.add_subcommand("simulate", "Evolve the single-mode spin density matrix");
    add_common(simulate, sim_opts);

    auto* damping = app.add_subcommand("damping", "Damping force profiles at several temperatures");
    add_common(damping, damp_opts);
    std::vector<double> temps;
    std::optional<double> t_eval;
    damping->add_option("--temps", temps, "Temperatures in K")->delimiter(',');
    damping->add_option("--t-eval", t_eval, "Evaluation time in s");

    auto* gauge = app.add_subcommand("gauge", "Thermal U(1) and SU(3) potentials");
    add_common(gauge, gauge_opts);
    std::string from_dir;
    bool inline_run = false;
    auto* from_opt = gauge->add_option("--from", from_dir, "Directory holding damping.csv");
    auto* inline_opt = gauge->add_flag("--inline", inline_run, "Recompute the damping force");
    from_opt->excludes(inline_opt);

    auto* validate = app.add_subcommand("validate", "Run the oracle suites");
    std::string suite;
    validate->add_option("--suite", suite, "Run a single suite")->check(CLI::IsMember(spinkin::validation::suite_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*simulate) {
            spinkin::run_simulate(load(sim_opts), std::cout);
        } else if (*damping) {
            auto config = load(damp_opts);
            if (!temps.empty()) config.temperatures = temps;
            if (t_eval) config.t_eval = *t_eval;
            spinkin::run_damping(config, std::cout);
        } else if (*gauge) {
            auto config = load(gauge_opts);
            if (!inline_run && from_dir.empty()) from_dir = config.output_dir;
            spinkin::run_gauge(config, inline_run ? std::string() : from_dir, std::cout);
        } else if (*validate) {
            const auto results = spinkin::validation::run_suites(suite);
            std::cout << spinkin::validation::format_report(results);
            for (const auto& r : results)
                if (!r.passed) return 3;
        }
    } catch (const spinkin::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const spinkin::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
