// Command-line harness: run scenarios with the conservative Gauss family or
// the explicit rk4 baseline, compare two runs, and list built-in scenarios.
//
// Exit codes: 0 success, 2 usage/config error, 3 run aborted.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nbody/simulation.hpp"

namespace {

struct SimulateArgs {
    CLI::Option* config = nullptr;
    CLI::Option* scenario = nullptr;
    CLI::Option* scheme = nullptr;
    CLI::Option* dt = nullptr;
    CLI::Option* t_end = nullptr;
    CLI::Option* drift_tol = nullptr;
    CLI::Option* residual_tol = nullptr;
    CLI::Option* max_iters = nullptr;
    CLI::Option* max_halvings = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* stride = nullptr;

    std::string config_path;
    std::string scenario_name;
    std::string scheme_name;
    double dt_value = 0.0;
    double t_end_value = 0.0;
    double drift_tol_value = 0.0;
    double residual_tol_value = 0.0;
    long long max_iters_value = 0;
    long long max_halvings_value = 0;
    std::string out_dir;
    long long stride_value = 1;
};

void add_simulate_options(CLI::App& sim, SimulateArgs& args) {
    args.config = sim.add_option("--config", args.config_path,
                                 "JSON config document; the flags below override its fields");
    args.scenario =
        sim.add_option("--scenario", args.scenario_name,
                       "built-in scenario name or path to a scenario JSON file");
    args.scheme = sim.add_option("--scheme", args.scheme_name,
                                 "integration scheme: midpoint, gauss2, gauss3 or rk4");
    args.dt = sim.add_option("--dt", args.dt_value,
                             "initial step size (default: the scenario's dt0)");
    args.t_end = sim.add_option("--t-end", args.t_end_value,
                                "end time (default: the scenario's t_end)");
    args.drift_tol = sim.add_option("--drift-tol", args.drift_tol_value,
                                    "invariant-drift corridor for step acceptance [1e-8]");
    args.residual_tol = sim.add_option("--residual-tol", args.residual_tol_value,
                                       "fixed-point iteration convergence tolerance [1e-12]");
    args.max_iters = sim.add_option("--max-iters", args.max_iters_value,
                                    "fixed-point iteration cap per step [50]");
    args.max_halvings = sim.add_option("--max-halvings", args.max_halvings_value,
                                       "step-halving cap before the run aborts [20]");
    args.out = sim.add_option(
        "--out", args.out_dir, "directory for trajectory.csv, drift.csv and summary.json");
    args.stride = sim.add_option("--stride", args.stride_value,
                                 "sample every k-th accepted step [1]");
}

nlohmann::json merge_simulate_args(const SimulateArgs& args) {
    nlohmann::json doc = args.config->count()
                             ? nbody::load_json_file(args.config_path)
                             : nlohmann::json::object();
    if (!doc.is_object()) {
        throw nbody::ConfigError("config must be a JSON object");
    }
    if (args.scenario->count()) doc["scenario"] = args.scenario_name;
    if (args.scheme->count()) doc["scheme"] = args.scheme_name;
    if (args.dt->count()) doc["dt"] = args.dt_value;
    if (args.t_end->count()) doc["t_end"] = args.t_end_value;
    if (args.drift_tol->count()) doc["drift_tol"] = args.drift_tol_value;
    if (args.residual_tol->count()) doc["residual_tol"] = args.residual_tol_value;
    if (args.max_iters->count()) doc["max_iters"] = args.max_iters_value;
    if (args.max_halvings->count()) doc["max_halvings"] = args.max_halvings_value;
    if (args.out->count()) doc["out"] = args.out_dir;
    if (args.stride->count()) doc["stride"] = args.stride_value;

    if (!doc.contains("scheme")) {
        throw nbody::ConfigError("simulate needs --scheme (or a config file that names one)");
    }
    return doc;  // scenario presence is enforced by resolve_config
}

int run_simulate(const SimulateArgs& args) {
    const nbody::RunConfig cfg = nbody::resolve_config(merge_simulate_args(args));
    const nbody::SimulationOutput out = nbody::run_simulation(cfg);
    std::cout << nbody::summary_to_json(cfg, out.summary).dump(2) << '\n';
    if (out.summary.aborted()) {
        std::cerr << "run aborted: " << *out.summary.abort_reason << '\n';
        return 3;
    }
    return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path,
                const std::string& out_dir) {
    const nbody::RunConfig a = nbody::resolve_config(nbody::load_json_file(a_path));
    const nbody::RunConfig b = nbody::resolve_config(nbody::load_json_file(b_path));
    const nbody::CompareOutput out = nbody::run_compare(a, b, out_dir);
    std::cout << out.report.dump(2) << '\n';
    const bool aborted = out.a.summary.aborted() || out.b.summary.aborted();
    if (aborted) {
        std::cerr << "at least one run aborted; see the report for details\n";
        return 3;
    }
    return 0;
}

int run_list_scenarios(bool as_json) {
    const std::vector<nbody::ScenarioSpec>& all = nbody::builtin_scenarios();
    if (as_json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const nbody::ScenarioSpec& s : all) arr.push_back(nbody::to_json(s));
        std::cout << arr.dump(2) << '\n';
        return 0;
    }
    for (const nbody::ScenarioSpec& s : all) {
        std::cout << s.name << '\n';
        std::cout << "  bodies: " << s.params.n() << "  gamma: " << s.params.gamma
                  << "  dt0: " << s.dt0 << "  t_end: " << s.t_end << '\n';
        if (!s.notes.empty()) std::cout << "  " << s.notes << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "N-body integration with quadratic invariants preserved exactly by "
        "symplectic Runge-Kutta schemes on an extended state"};
    app.require_subcommand(1);

    CLI::App* sim = app.add_subcommand("simulate", "Run one scenario with one scheme");
    SimulateArgs sim_args;
    add_simulate_options(*sim, sim_args);

    CLI::App* cmp =
        app.add_subcommand("compare", "Run two configs and align their drift series");
    std::string a_path;
    std::string b_path;
    std::string cmp_out;
    cmp->add_option("--a", a_path, "JSON config document for run A")->required();
    cmp->add_option("--b", b_path, "JSON config document for run B")->required();
    cmp->add_option("--out", cmp_out, "output directory for the comparison")->required();

    CLI::App* ls = app.add_subcommand("list-scenarios", "Show the built-in scenarios");
    bool ls_json = false;
    ls->add_flag("--json", ls_json, "machine-readable scenario specs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << '\n';
        return 2;
    }

    try {
        if (sim->parsed()) return run_simulate(sim_args);
        if (cmp->parsed()) return run_compare(a_path, b_path, cmp_out);
        if (ls->parsed()) return run_list_scenarios(ls_json);
        std::cerr << app.help() << '\n';
        return 2;
    } catch (const nbody::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
