#include "dicke/cli.hpp"

#include "dicke/dynamics.hpp"
#include "dicke/errors.hpp"
#include "dicke/export.hpp"
#include "dicke/ladder.hpp"
#include "dicke/optimizer.hpp"
#include "dicke/oracle.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>

namespace dicke::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rad_per_ms(double khz) { return kTwoPi * khz; }

std::ofstream open_output(const RunConfig& c, const std::string& name) {
    std::ofstream file(fs::path(c.out) / name, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open " + (fs::path(c.out) / name).string() + " for writing");
    return file;
}

void write_json(const RunConfig& c, const std::string& name, const json& doc) {
    auto file = open_output(c, name);
    file << doc.dump(2) << '\n';
}

OptimizerOptions optimizer_options(const RunConfig& c) {
    OptimizerOptions opts;
    if (c.horizon_ms > 0.0) opts.horizon = c.horizon_ms;
    return opts;
}

void warn_if_flagged(const OptimizationResult& r, std::ostream& err) {
    if (r.horizon_limited) {
        err << "warning: fidelity peak for " << r.n_ions << " ions still at the end of the time window\n";
    }
    if (r.at_bracket_edge) {
        err << "warning: optimal detuning for " << r.n_ions << " ions sits on the search bracket edge\n";
    }
}

int run_spectrum(const RunConfig& c, std::ostream& out) {
    EffectiveParams p;
    p.n_pairs = c.ions / 2;
    p.g = rad_per_ms(c.chi_khz) / 2.0;
    const SpectrumResult s =
        spectrum_scan(p, linear_grid(rad_per_ms(c.delta_min_khz), rad_per_ms(c.delta_max_khz), c.points));
    {
        auto file = open_output(c, "spectrum.csv");
        write_spectrum_csv(file, s);
    }
    const double chi = p.chi();
    json summary;
    summary["chi_rad_per_ms"] = chi;
    for (const auto& [name, side] : {std::pair{"highest", GapSide::highest}, std::pair{"lowest", GapSide::lowest}}) {
        const GapResult gap = min_gap(s, side);
        json entry = dicke::to_json(gap);
        entry["gap_over_chi"] = gap.gap / chi;
        entry["delta_at_min_over_chi"] = gap.delta_at_min / chi;
        summary[name] = entry;
    }
    write_json(c, "gap.json", summary);
    out << json{{"command", "spectrum"}, {"curves", s.curves()}, {"highest_gap_over_chi", summary["highest"]["gap_over_chi"]}}
               .dump()
        << '\n';
    return exit_ok;
}

int run_evolve(const RunConfig& c, std::ostream& out, std::ostream& err) {
    EffectiveParams p;
    p.n_pairs = c.ions / 2;
    const double chi = rad_per_ms(c.chi_khz);
    p.g = chi / 2.0;

    PulseSchedule schedule;
    json extra = json::object();
    if (c.pulse == "rap") {
        schedule = PulseSchedule::rap(c.duration_ms, rad_per_ms(c.delta_start_khz), rad_per_ms(c.delta_end_khz), chi,
                                      c.width_ms);
    } else {
        double delta = rad_per_ms(c.delta_khz);
        if (c.optimized) {
            const OptimizationResult r = optimize_detuning(p.n_pairs, chi, optimizer_options(c));
            warn_if_flagged(r, err);
            delta = r.delta_opt;
            extra["delta_opt_rad_per_ms"] = r.delta_opt;
            extra["delta_opt_khz"] = r.delta_opt / kTwoPi;
        }
        schedule = PulseSchedule::square(c.duration_ms, delta, chi);
    }

    PropagationOptions opts;
    opts.output_samples = c.samples;
    const SimulationTrace trace = propagate(initial_state(p.n_pairs), schedule, p, c.steps, opts);
    {
        auto file = open_output(c, "trace.csv");
        write_trace_csv(file, trace);
    }
    double peak = 0.0;
    for (double f : trace.fidelity) peak = std::max(peak, f);
    json summary{{"command", "evolve"},
                 {"final_fidelity", trace.fidelity.back()},
                 {"peak_fidelity", peak},
                 {"steps", trace.steps}};
    summary.update(extra);
    out << summary.dump() << '\n';
    return exit_ok;
}

int run_optimize(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const OptimizationResult r = optimize_detuning(c.ions / 2, rad_per_ms(c.chi_khz), optimizer_options(c));
    warn_if_flagged(r, err);
    json doc = dicke::to_json(r);
    doc["delta_opt_khz"] = r.delta_opt / kTwoPi;
    write_json(c, "optimize.json", doc);
    {
        auto file = open_output(c, "scan.csv");
        write_scan_csv(file, r);
    }
    out << json{{"command", "optimize"}, {"delta_opt_khz", r.delta_opt / kTwoPi}, {"best_fidelity", r.best_fidelity}}
               .dump()
        << '\n';
    return exit_ok;
}

int run_scaling(const RunConfig& c, std::ostream& out, std::ostream& err) {
    std::vector<int> counts;
    for (int n : c.ion_counts) {
        if (n <= c.max_ions) counts.push_back(n);
        else err << "note: skipping " << n << " ions (max_ions = " << c.max_ions << ")\n";
    }
    const ScalingResult s = scaling_study(counts, rad_per_ms(c.chi_khz), optimizer_options(c));
    {
        auto file = open_output(c, "scaling.csv");
        write_scaling_csv(file, s);
    }
    json failures = json::array();
    for (const auto& e : s.entries) {
        if (e.result) warn_if_flagged(*e.result, err);
        else {
            err << "error: " << e.n_ions << " ions: " << e.error << '\n';
            failures.push_back({{"n_ions", e.n_ions}, {"error", e.error}});
        }
    }
    json doc{{"fidelity_fit", dicke::to_json(s.fidelity_fit)},
             {"delta_opt_fit", dicke::to_json(s.delta_fit)},
             {"complete", s.complete},
             {"failures", failures}};
    write_json(c, "fit.json", doc);
    out << json{{"command", "scaling"},
                {"fidelity_exponent", s.fidelity_fit.exponent},
                {"delta_opt_exponent", s.delta_fit.exponent},
                {"complete", s.complete}}
               .dump()
        << '\n';
    return s.complete ? exit_ok : exit_numerical;
}

int run_validate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const ValidationReport report = run_validation(c.max_ions);
    write_json(c, "validation.json", dicke::to_json(report));
    for (const auto& check : report.checks) {
        if (!check.passed) err << "check failed: " << check.name << " deviation " << check.deviation << '\n';
    }
    out << json{{"command", "validate"}, {"checks", report.checks.size()}, {"passed", report.passed()}}.dump() << '\n';
    return report.passed() ? exit_ok : exit_validation;
}

json error_line(const std::string& kind, const std::string& message) {
    return json{{"error", kind}, {"message", message}};
}

} // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
    } catch (const ConfigError& e) {
        err << e.line() << '\n';
        return exit_config;
    }
    try {
        fs::create_directories(config.out);
        write_json(config, "metadata.json",
                   json{{"tool", "dicke"}, {"version", DICKE_VERSION}, {"config", to_json(config)}});
        if (config.command == "spectrum") return run_spectrum(config, out);
        if (config.command == "evolve") return run_evolve(config, out, err);
        if (config.command == "optimize") return run_optimize(config, out, err);
        if (config.command == "scaling") return run_scaling(config, out, err);
        return run_validate(config, out, err);
    } catch (const DomainError& e) {
        err << json{{"error", "config"}, {"key", ""}, {"message", e.what()}}.dump() << '\n';
        return exit_config;
    } catch (const std::exception& e) {
        err << error_line("numerical", e.what()).dump() << '\n';
        return exit_numerical;
    }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dicke-ladder simulator for 2N three-level ions. Frequencies in kHz (2 pi applied internally), "
                 "times in ms."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(DICKE_VERSION));

    struct Flag {
        CLI::Option* option;
        std::function<void(RunConfig&)> apply;
    };
    std::vector<Flag> flags;
    std::string preset;
    std::string config_path;

    // Flag storage; only options present on the command line are copied into the resolved config.
    RunConfig given;
    bool full = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--preset", preset, "Figure preset (fig2a, fig2b, fig3a-fig3f, fig4)");
        sub->add_option("--config", config_path, "JSON config file; flags override its values")
            ->check(CLI::ExistingFile);
        flags.push_back({sub->add_option("--out", given.out, "Output directory"),
                         [&](RunConfig& c) { c.out = given.out; }});
    };
    auto add = [&](CLI::App* sub, const std::string& name, auto RunConfig::*field, const std::string& help) {
        auto* opt = sub->add_option(name, given.*field, help);
        flags.push_back({opt, [&given, field](RunConfig& c) { c.*field = given.*field; }});
        return opt;
    };
    auto add_flag = [&](CLI::App* sub, const std::string& name, bool RunConfig::*field, const std::string& help) {
        auto* opt = sub->add_flag(name, given.*field, help);
        flags.push_back({opt, [&given, field](RunConfig& c) { c.*field = given.*field; }});
    };

    auto* spectrum = app.add_subcommand("spectrum", "Ladder eigenvalues against detuning, with minimal gaps");
    common(spectrum);
    add(spectrum, "--ions", &RunConfig::ions, "Number of ions (even)");
    add(spectrum, "--chi-khz", &RunConfig::chi_khz, "Ising strength chi / 2 pi");
    add(spectrum, "--delta-min-khz", &RunConfig::delta_min_khz, "Lower end of the detuning grid");
    add(spectrum, "--delta-max-khz", &RunConfig::delta_max_khz, "Upper end of the detuning grid");
    add(spectrum, "--points", &RunConfig::points, "Detuning grid size");

    auto* evolve = app.add_subcommand("evolve", "Time evolution under a square or RAP pulse");
    common(evolve);
    add(evolve, "--ions", &RunConfig::ions, "Number of ions (even)");
    add(evolve, "--chi-khz", &RunConfig::chi_khz, "Ising strength (peak value for RAP)");
    add(evolve, "--pulse", &RunConfig::pulse, "square or rap");
    add(evolve, "--delta-khz", &RunConfig::delta_khz, "Square-pulse detuning");
    add(evolve, "--duration-ms", &RunConfig::duration_ms, "Pulse duration");
    add(evolve, "--delta-start-khz", &RunConfig::delta_start_khz, "RAP detuning at t = 0");
    add(evolve, "--delta-end-khz", &RunConfig::delta_end_khz, "RAP detuning at the end");
    add(evolve, "--width-ms", &RunConfig::width_ms, "RAP envelope e^-1 full width");
    add_flag(evolve, "--optimized", &RunConfig::optimized, "Use the optimized square-pulse detuning");
    add(evolve, "--horizon-ms", &RunConfig::horizon_ms, "Optimizer time window (0 = automatic)");
    add(evolve, "--steps", &RunConfig::steps, "Initial number of integration steps");
    add(evolve, "--samples", &RunConfig::samples, "Output grid intervals (the trace has samples + 1 rows)");

    auto* optimize = app.add_subcommand("optimize", "Square-pulse detuning that maximizes the fidelity");
    common(optimize);
    add(optimize, "--ions", &RunConfig::ions, "Number of ions (even)");
    add(optimize, "--chi-khz", &RunConfig::chi_khz, "Ising strength");
    add(optimize, "--horizon-ms", &RunConfig::horizon_ms, "Time window (0 = automatic)");

    auto* scaling = app.add_subcommand("scaling", "Optimized fidelity and detuning against ion number");
    common(scaling);
    add(scaling, "--chi-khz", &RunConfig::chi_khz, "Ising strength");
    add(scaling, "--ion-counts", &RunConfig::ion_counts, "Ion numbers to study")->delimiter(',');
    add(scaling, "--max-ions", &RunConfig::max_ions, "Skip counts above this value");
    scaling->add_flag("--full", full, "Include counts up to 300 ions");
    add(scaling, "--horizon-ms", &RunConfig::horizon_ms, "Time window (0 = automatic)");

    auto* validate_cmd = app.add_subcommand("validate", "Oracle cross-checks of the ladder reduction");
    common(validate_cmd);
    add(validate_cmd, "--max-ions", &RunConfig::max_ions, "Largest register checked");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << DICKE_VERSION << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << json{{"error", "config"}, {"key", "argv"}, {"message", e.what()}}.dump() << '\n';
        return exit_config;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunConfig config;
    try {
        config = defaults_for(command);
        nlohmann::json file_doc;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            try {
                file_doc = nlohmann::json::parse(in);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("config", std::string("invalid JSON: ") + e.what());
            }
            if (file_doc.is_object() && file_doc.contains("command") && file_doc["command"] != command) {
                throw ConfigError("command", "config file is for another command");
            }
        }
        if (preset.empty() && file_doc.is_object() && file_doc.contains("preset") && file_doc["preset"].is_string()) {
            preset = file_doc["preset"].get<std::string>();
        }
        if (!preset.empty()) config = apply_preset(config, preset);
        if (!config_path.empty()) config = overlay_json(config, file_doc);
        for (const auto& flag : flags) {
            if (flag.option->count() > 0) flag.apply(config);
        }
        if (full) config.max_ions = 300;
    } catch (const ConfigError& e) {
        err << e.line() << '\n';
        return exit_config;
    }
    return run(config, out, err);
}

} // namespace dicke::cli
