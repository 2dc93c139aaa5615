#include "nbody/simulation.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <set>
#include <sstream>
#include <string_view>

#include "nbody/model.hpp"

namespace nbody {

std::string format_full(double x) {
    // Shortest decimal that parses back to exactly the same binary64 value.
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

namespace {

double parse_double(std::string_view field, const std::string& where) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw std::runtime_error(where + ": cannot parse number '" + std::string(field) + "'");
    }
    return value;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

void write_row(std::ostream& os, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_full(values[i]);
    }
    os << '\n';
}

}  // namespace

void write_trajectory_header(std::ostream& os, std::size_t n) {
    os << 't';
    for (std::size_t i = 1; i <= n; ++i) os << ",x" << i << ",y" << i << ",z" << i;
    for (std::size_t i = 1; i <= n; ++i) os << ",u" << i << ",v" << i << ",w" << i;
    for (std::size_t k = 0; k < pair_count(n); ++k) {
        const auto [i, j] = pair_bodies(k, n);
        os << ",r_" << (i + 1) << (j + 1);
    }
    for (std::size_t k = 0; k < pair_count(n); ++k) {
        const auto [i, j] = pair_bodies(k, n);
        os << ",rho_" << (i + 1) << (j + 1);
    }
    os << '\n';
}

void write_trajectory_row(std::ostream& os, const ExtendedState& s) {
    write_row(os, to_flat(s));
}

void write_drift_header(std::ostream& os) {
    os << "t,d_px,d_py,d_pz,d_Lx,d_Ly,d_Lz,d_Cx,d_Cy,d_Cz,d_E,max_c_dist,max_c_recip,"
          "max_drift\n";
}

void write_drift_row(std::ostream& os, const DriftRecord& d) {
    write_row(os, {d.t, d.d_momentum.x, d.d_momentum.y, d.d_momentum.z, d.d_angular_momentum.x,
                   d.d_angular_momentum.y, d.d_angular_momentum.z, d.d_com.x, d.d_com.y,
                   d.d_com.z, d.d_energy, d.max_c_dist, d.max_c_recip, d.max_drift});
}

namespace {

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::vector<ExtendedState> read_trajectory_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) {
        throw std::runtime_error(path.string() + ": missing trajectory header");
    }
    const std::size_t cols = split_csv_line(lines[0]).size();
    // cols = 1 + 6n + n(n-1); solve the quadratic for the body count.
    const double nd = (-5.0 + std::sqrt(25.0 + 4.0 * (static_cast<double>(cols) - 1.0))) / 2.0;
    const auto n = static_cast<std::size_t>(std::lround(nd));
    if (cols != flat_size(n)) {
        throw std::runtime_error(path.string() + ": header column count fits no body count");
    }
    std::vector<ExtendedState> states;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split_csv_line(lines[r]);
        if (fields.size() != cols) {
            throw std::runtime_error(path.string() + ": ragged row " + std::to_string(r));
        }
        std::vector<double> flat;
        flat.reserve(cols);
        for (const auto f : fields) flat.push_back(parse_double(f, path.string()));
        states.push_back(from_flat(flat, n));
    }
    return states;
}

std::vector<DriftRecord> read_drift_csv(const std::filesystem::path& path) {
    const std::vector<std::string> lines = read_lines(path);
    if (lines.empty()) {
        throw std::runtime_error(path.string() + ": missing drift header");
    }
    std::vector<DriftRecord> records;
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto fields = split_csv_line(lines[r]);
        if (fields.size() != 14) {
            throw std::runtime_error(path.string() + ": ragged row " + std::to_string(r));
        }
        std::array<double, 14> v{};
        for (std::size_t c = 0; c < 14; ++c) v[c] = parse_double(fields[c], path.string());
        DriftRecord d;
        d.t = v[0];
        d.d_momentum = {v[1], v[2], v[3]};
        d.d_angular_momentum = {v[4], v[5], v[6]};
        d.d_com = {v[7], v[8], v[9]};
        d.d_energy = v[10];
        d.max_c_dist = v[11];
        d.max_c_recip = v[12];
        d.max_drift = v[13];
        records.push_back(d);
    }
    return records;
}

nlohmann::json load_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
}

namespace {

long long int_field(const nlohmann::json& doc, const char* key, long long fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer()) {
        throw ConfigError(std::string{key} + " must be an integer");
    }
    return v.get<long long>();
}

}  // namespace

RunConfig resolve_config(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::set<std::string> known = {"scenario", "scheme",      "dt",
                                                "t_end",    "drift_tol",   "residual_tol",
                                                "max_iters", "max_halvings", "out",
                                                "stride"};
    for (const auto& item : doc.items()) {
        if (!known.count(item.key())) {
            throw ConfigError("unknown config key: " + item.key());
        }
    }
    if (!doc.contains("scenario")) {
        throw ConfigError("config needs a scenario (built-in name, file path or inline object)");
    }
    RunConfig cfg;
    try {
        const auto& sc = doc.at("scenario");
        if (sc.is_string()) {
            const auto name = sc.get<std::string>();
            if (const ScenarioSpec* builtin = find_builtin(name)) {
                cfg.scenario = *builtin;
            } else if (std::filesystem::exists(name)) {
                cfg.scenario = scenario_from_json(load_json_file(name));
            } else {
                std::ostringstream msg;
                msg << "unknown scenario '" << name << "' (built-ins:";
                for (const ScenarioSpec& b : builtin_scenarios()) msg << ' ' << b.name;
                msg << "; or give a path to a scenario JSON file)";
                throw ConfigError(msg.str());
            }
        } else if (sc.is_object()) {
            cfg.scenario = scenario_from_json(sc);
        } else {
            throw ConfigError("scenario must be a name, a file path or an inline object");
        }

        cfg.scheme = doc.value("scheme", std::string{"midpoint"});
        {
            const auto names = scheme_names();
            if (std::find(names.begin(), names.end(), cfg.scheme) == names.end()) {
                throw ConfigError("unknown scheme '" + cfg.scheme +
                                  "' (expected midpoint, gauss2, gauss3 or rk4)");
            }
        }

        const bool solver_keys = doc.contains("drift_tol") || doc.contains("residual_tol") ||
                                 doc.contains("max_iters") || doc.contains("max_halvings");
        if (cfg.scheme == "rk4" && solver_keys) {
            throw ConfigError(
                "scheme rk4 is explicit: it has no iterative solve and no acceptance "
                "corridor, so drift_tol/residual_tol/max_iters/max_halvings do not apply");
        }

        cfg.dt = doc.value("dt", cfg.scenario.dt0);
        cfg.t_end = doc.value("t_end", cfg.scenario.t_end);
        cfg.iteration.drift_tol = doc.value("drift_tol", IterationConfig{}.drift_tol);
        cfg.iteration.residual_tol = doc.value("residual_tol", IterationConfig{}.residual_tol);

        const long long iters =
            int_field(doc, "max_iters", static_cast<long long>(IterationConfig{}.max_iters));
        const long long halvings = int_field(
            doc, "max_halvings", static_cast<long long>(IterationConfig{}.max_halvings));
        const long long stride = int_field(doc, "stride", 1);
        if (iters < 1) throw ConfigError("max_iters must be >= 1");
        if (halvings < 1) throw ConfigError("max_halvings must be >= 1");
        if (stride < 1) throw ConfigError("stride must be >= 1");
        cfg.iteration.max_iters = static_cast<std::size_t>(iters);
        cfg.iteration.max_halvings = static_cast<std::size_t>(halvings);
        cfg.stride = static_cast<std::size_t>(stride);

        cfg.out_dir = doc.value("out", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string{"config: "} + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.iteration.drift_tol > 0.0)) throw ConfigError("drift_tol must be positive");
    if (!(cfg.iteration.residual_tol > 0.0)) throw ConfigError("residual_tol must be positive");
    if (cfg.t_end < cfg.scenario.initial.t) {
        throw ConfigError("t_end precedes the scenario's starting time");
    }
    return cfg;
}

namespace {

nlohmann::json drift_to_json(const DriftRecord& d) {
    return nlohmann::json{
        {"t", d.t},
        {"d_momentum", {d.d_momentum.x, d.d_momentum.y, d.d_momentum.z}},
        {"d_angular_momentum",
         {d.d_angular_momentum.x, d.d_angular_momentum.y, d.d_angular_momentum.z}},
        {"d_com", {d.d_com.x, d.d_com.y, d.d_com.z}},
        {"d_energy", d.d_energy},
        {"max_c_dist", d.max_c_dist},
        {"max_c_recip", d.max_c_recip},
        {"max_drift", d.max_drift},
    };
}

}  // namespace

nlohmann::json summary_to_json(const RunConfig& cfg, const RunSummary& summary) {
    nlohmann::json j;
    j["scenario"] = cfg.scenario.name;
    j["scheme"] = cfg.scheme;
    j["dt"] = cfg.dt;
    j["t_end"] = cfg.t_end;
    j["stride"] = cfg.stride;
    if (cfg.scheme != "rk4") {
        j["drift_tol"] = cfg.iteration.drift_tol;
        j["residual_tol"] = cfg.iteration.residual_tol;
        j["max_iters"] = cfg.iteration.max_iters;
        j["max_halvings"] = cfg.iteration.max_halvings;
    }
    j["energy_convention"] = "potential summed over unordered pairs (i<j)";
    j["drift_convention"] = "absolute deviation from the run-start invariant values";
    j["steps_accepted"] = summary.steps_accepted;
    j["steps_rejected"] = summary.steps_rejected;
    j["halvings"] = summary.halvings;
    j["min_dt_used"] = summary.min_dt_used;
    j["final_t"] = summary.final_state.t;
    j["max_drift"] = drift_to_json(summary.max_drift);
    j["wall_time_s"] = summary.wall_time_s;
    j["abort_reason"] =
        summary.abort_reason ? nlohmann::json(*summary.abort_reason) : nlohmann::json(nullptr);
    return j;
}

SimulationOutput run_simulation(const RunConfig& cfg) {
    try {
        validate(cfg.scenario);
        validate(cfg.iteration);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.stride == 0) throw ConfigError("stride must be >= 1");
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    const ButcherTableau tab = tableau_by_name(cfg.scheme);

    SimulationOutput out;
    const Parameters& p = cfg.scenario.params;
    const ExtendedState start = init_extended(cfg.scenario.initial, p);
    const InvariantVector reference = evaluate_invariants(start, p);

    // The sink rebuilds the full drift record (the step stats only carry its
    // max) so the CSV rows can be audited against the trajectory rows.
    out.sampled_states.push_back(start);
    out.sampled_drift.push_back(drift(reference, reference, start.t));
    std::size_t seen = 0;
    std::size_t last_sampled = 0;
    ExtendedState last_state;
    DriftRecord last_drift;
    const StepSink sink = [&](const ExtendedState& s, const StepStats&) {
        ++seen;
        const DriftRecord d = drift(reference, evaluate_invariants(s, p), s.t);
        last_state = s;
        last_drift = d;
        if (seen % cfg.stride == 0) {
            out.sampled_states.push_back(s);
            out.sampled_drift.push_back(d);
            last_sampled = seen;
        }
    };

    if (tab.implicit) {
        out.summary =
            adaptive_run(start, cfg.t_end, cfg.dt, tab, p, cfg.iteration, sink);
    } else {
        out.summary = rk4_run(cfg.scenario.initial, cfg.t_end, cfg.dt, p, sink);
    }

    if (seen == 0) {
        out.sampled_states.clear();  // zero-step run: header-only files
        out.sampled_drift.clear();
    } else if (last_sampled != seen) {
        out.sampled_states.push_back(last_state);  // always keep the final step
        out.sampled_drift.push_back(last_drift);
    }

    if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        out.trajectory_csv = cfg.out_dir / "trajectory.csv";
        out.drift_csv = cfg.out_dir / "drift.csv";
        out.summary_json = cfg.out_dir / "summary.json";
        {
            std::ofstream os(out.trajectory_csv);
            if (!os) throw std::runtime_error("cannot write " + out.trajectory_csv.string());
            write_trajectory_header(os, p.n());
            for (const ExtendedState& s : out.sampled_states) write_trajectory_row(os, s);
        }
        {
            std::ofstream os(out.drift_csv);
            if (!os) throw std::runtime_error("cannot write " + out.drift_csv.string());
            write_drift_header(os);
            for (const DriftRecord& d : out.sampled_drift) write_drift_row(os, d);
        }
        {
            std::ofstream os(out.summary_json);
            if (!os) throw std::runtime_error("cannot write " + out.summary_json.string());
            os << summary_to_json(cfg, out.summary).dump(2) << '\n';
        }
    }
    return out;
}

namespace {

double body_position_gap(const ExtendedState& a, const ExtendedState& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.pos.size(); ++i) {
        worst = std::max(worst, norm(a.pos[i] - b.pos[i]));
    }
    return worst;
}

}  // namespace

CompareOutput run_compare(RunConfig a, RunConfig b, const std::filesystem::path& out_dir) {
    if (a.scenario.params != b.scenario.params) {
        throw ConfigError(
            "compare needs structurally identical scenarios: same body count, masses and "
            "gravitational constant (initial states may differ)");
    }
    if (!out_dir.empty()) {
        a.out_dir = out_dir / "a";
        b.out_dir = out_dir / "b";
    }
    auto future_a = std::async(std::launch::async, [&a] { return run_simulation(a); });
    CompareOutput out;
    out.b = run_simulation(b);
    out.a = future_a.get();

    // Drive the alignment from the run with fewer samples; match each of its
    // times against the nearest sample of the other run.
    const bool a_drives = out.a.sampled_states.size() <= out.b.sampled_states.size();
    const auto& drive_states = a_drives ? out.a.sampled_states : out.b.sampled_states;
    const auto& other_states = a_drives ? out.b.sampled_states : out.a.sampled_states;
    const auto& drive_drift = a_drives ? out.a.sampled_drift : out.b.sampled_drift;
    const auto& other_drift = a_drives ? out.b.sampled_drift : out.a.sampled_drift;

    std::ostringstream csv;
    csv << "t,t_partner,d_E_a,d_E_b,position_deviation\n";
    std::size_t rows = 0;
    std::size_t j = 0;
    double final_de_a = 0.0;
    double final_de_b = 0.0;
    if (!other_states.empty()) {
        for (std::size_t i = 0; i < drive_states.size(); ++i) {
            const double t = drive_states[i].t;
            while (j + 1 < other_states.size() &&
                   std::abs(other_states[j + 1].t - t) <= std::abs(other_states[j].t - t)) {
                ++j;
            }
            const double gap = body_position_gap(drive_states[i], other_states[j]);
            const double de_a = a_drives ? drive_drift[i].d_energy : other_drift[j].d_energy;
            const double de_b = a_drives ? other_drift[j].d_energy : drive_drift[i].d_energy;
            write_row(csv, {t, other_states[j].t, de_a, de_b, gap});
            ++rows;
            out.max_position_deviation = std::max(out.max_position_deviation, gap);
            out.final_position_deviation = gap;
            final_de_a = de_a;
            final_de_b = de_b;
        }
    }

    out.report = nlohmann::json{
        {"scenario_a", a.scenario.name},
        {"scenario_b", b.scenario.name},
        {"scheme_a", a.scheme},
        {"scheme_b", b.scheme},
        {"rows", rows},
        {"max_position_deviation", out.max_position_deviation},
        {"final_position_deviation", out.final_position_deviation},
        {"final_energy_drift_a", final_de_a},
        {"final_energy_drift_b", final_de_b},
        {"aborted_a",
         out.a.summary.abort_reason ? nlohmann::json(*out.a.summary.abort_reason)
                                    : nlohmann::json(nullptr)},
        {"aborted_b",
         out.b.summary.abort_reason ? nlohmann::json(*out.b.summary.abort_reason)
                                    : nlohmann::json(nullptr)},
        {"summary_a", summary_to_json(a, out.a.summary)},
        {"summary_b", summary_to_json(b, out.b.summary)},
    };

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        out.compare_csv = out_dir / "compare.csv";
        out.compare_json = out_dir / "compare.json";
        {
            std::ofstream os(out.compare_csv);
            if (!os) throw std::runtime_error("cannot write " + out.compare_csv.string());
            os << csv.str();
        }
        {
            std::ofstream os(out.compare_json);
            if (!os) throw std::runtime_error("cannot write " + out.compare_json.string());
            os << out.report.dump(2) << '\n';
        }
    }
    return out;
}

}  // namespace nbody
