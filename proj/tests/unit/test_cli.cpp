#include "doctest.h"

#include "dicke/cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace dicke::cli;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code = 0;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "dicke");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Invocation r;
    r.code = main(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("dicke_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

int count_columns(const std::string& header) {
    return static_cast<int>(std::count(header.begin(), header.end(), ',')) + 1;
}

} // namespace

TEST_CASE("config round-trips through JSON") {
    for (const std::string command : {"spectrum", "evolve", "optimize", "scaling", "validate"}) {
        const RunConfig c = defaults_for(command);
        CHECK(overlay_json(RunConfig{}, nlohmann::json::parse(to_json(c).dump())) == c);
    }
    for (const std::string preset : {"fig2a", "fig2b", "fig3a", "fig3b", "fig3c", "fig3d", "fig3e", "fig3f", "fig4"}) {
        const RunConfig c = apply_preset(RunConfig{}, preset);
        CHECK_NOTHROW(validate(c));
        CHECK(overlay_json(RunConfig{}, nlohmann::json::parse(to_json(c).dump())) == c);
    }
    RunConfig odd = defaults_for("evolve");
    odd.chi_khz = 0.1 + 0.2;
    odd.duration_ms = 1.0 / 3.0;
    CHECK(overlay_json(RunConfig{}, nlohmann::json::parse(to_json(odd).dump())) == odd);
}

TEST_CASE("rejected configs name the offending key") {
    auto key_of = [](auto&& f) {
        try {
            f();
        } catch (const ConfigError& e) {
            CHECK(e.line().find('\n') == std::string::npos);
            const auto doc = nlohmann::json::parse(e.line());
            CHECK(doc["error"] == "config");
            return e.key();
        }
        return std::string("<none>");
    };
    CHECK(key_of([] { overlay_json(defaults_for("spectrum"), {{"ionz", 4}}); }) == "ionz");
    CHECK(key_of([] { overlay_json(defaults_for("spectrum"), {{"ions", "four"}}); }) == "ions");
    CHECK(key_of([] { overlay_json(defaults_for("spectrum"), {{"ions", 4.5}}); }) == "ions");
    CHECK(key_of([] { overlay_json(defaults_for("scaling"), {{"ion_counts", {2, "x"}}}); }) == "ion_counts");
    CHECK(key_of([] {
              RunConfig c = defaults_for("spectrum");
              c.ions = 7;
              validate(c);
          }) == "ions");
    CHECK(key_of([] {
              RunConfig c = defaults_for("evolve");
              c.pulse = "triangle";
              validate(c);
          }) == "pulse");
    CHECK(key_of([] {
              RunConfig c = defaults_for("spectrum");
              c.delta_max_khz = c.delta_min_khz;
              validate(c);
          }) == "delta_max_khz");
    CHECK(key_of([] { apply_preset(defaults_for("spectrum"), "fig2b"); }) == "preset");
    CHECK(key_of([] { apply_preset(RunConfig{}, "fig9"); }) == "preset");
    CHECK(key_of([] { defaults_for("plot"); }) == "command");
}

TEST_CASE("command-line exit codes") {
    const fs::path dir = scratch("codes");
    {
        const auto r = invoke({"spectrum", "--ions", "5", "--out", dir.string()});
        CHECK(r.code == exit_config);
        CHECK(nlohmann::json::parse(first_line(r.err))["key"] == "ions");
        CHECK(r.err.find('\n') == r.err.size() - 1);
    }
    CHECK(invoke({"spectrum", "--bogus"}).code == exit_config);
    CHECK(invoke({}).code == exit_config);
    CHECK(invoke({"evolve", "--preset", "fig4"}).code == exit_config);
    CHECK(invoke({"validate", "--max-ions", "3", "--out", dir.string()}).code == exit_config);
    CHECK(invoke({"spectrum", "--help"}).code == exit_ok);
}

TEST_CASE("validate writes its report and succeeds") {
    const fs::path dir = scratch("validate");
    const auto r = invoke({"validate", "--max-ions", "8", "--out", dir.string()});
    CHECK(r.code == exit_ok);
    const auto report = nlohmann::json::parse(slurp(dir / "validation.json"));
    CHECK(report["passed"] == true);
    const auto meta = nlohmann::json::parse(slurp(dir / "metadata.json"));
    CHECK(meta["config"]["max_ions"] == 8);
    CHECK(meta.contains("version"));
}

TEST_CASE("spectrum columns follow the register size") {
    const fs::path dir = scratch("spectrum");
    const auto r = invoke({"spectrum", "--ions", "16", "--delta-min-khz", "-28", "--delta-max-khz", "28", "--chi-khz",
                           "3", "--points", "57", "--out", dir.string()});
    REQUIRE(r.code == exit_ok);
    const std::string csv = slurp(dir / "spectrum.csv");
    CHECK(first_line(csv) == "delta_rad_per_ms,E_0,E_1,E_2,E_3,E_4,E_5,E_6,E_7,E_8");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 58);
    const auto gap = nlohmann::json::parse(slurp(dir / "gap.json"));
    CHECK(gap.contains("highest"));
    CHECK(gap.contains("lowest"));
}

TEST_CASE("config file with flag override, bit-identical reruns") {
    const fs::path dir = scratch("evolve");
    fs::create_directories(dir);
    const fs::path cfg = dir / "run.json";
    {
        std::ofstream f(cfg);
        f << R"({"command":"evolve","ions":6,"chi_khz":3,"pulse":"square","duration_ms":0.5,"samples":101})";
    }
    const fs::path a = dir / "a", b = dir / "b";
    const auto ra = invoke({"evolve", "--config", cfg.string(), "--ions", "4", "--out", a.string()});
    const auto rb = invoke({"evolve", "--config", cfg.string(), "--ions", "4", "--out", b.string()});
    REQUIRE(ra.code == exit_ok);
    REQUIRE(rb.code == exit_ok);
    const std::string trace = slurp(a / "trace.csv");
    CHECK(first_line(trace) == "t_ms,pop_0,pop_1,pop_2,fidelity,norm_error");
    CHECK(std::count(trace.begin(), trace.end(), '\n') == 103);
    CHECK(trace == slurp(b / "trace.csv"));
    const auto meta = nlohmann::json::parse(slurp(a / "metadata.json"));
    CHECK(meta["config"]["ions"] == 4);
    CHECK(meta["config"]["duration_ms"] == 0.5);
    CHECK(overlay_json(RunConfig{}, meta["config"]).samples == 101);

    {
        std::ofstream f(cfg);
        f << R"({"command":"evolve","ions":6,"chi":3})";
    }
    const auto bad = invoke({"evolve", "--config", cfg.string(), "--out", a.string()});
    CHECK(bad.code == exit_config);
    CHECK(nlohmann::json::parse(first_line(bad.err))["key"] == "chi");
}

TEST_CASE("presets run end to end") {
    const fs::path dir = scratch("presets");
    {
        const auto r = invoke({"evolve", "--preset", "fig3d", "--samples", "200", "--out", (dir / "3d").string()});
        REQUIRE(r.code == exit_ok);
        const auto summary = nlohmann::json::parse(first_line(r.out));
        CHECK(summary["peak_fidelity"].get<double>() > 0.999);
    }
    {
        const auto r = invoke({"optimize", "--ions", "6", "--out", (dir / "opt").string()});
        REQUIRE(r.code == exit_ok);
        const auto doc = nlohmann::json::parse(slurp(dir / "opt" / "optimize.json"));
        CHECK(doc["best_fidelity"].get<double>() > 0.9);
        CHECK(first_line(slurp(dir / "opt" / "scan.csv")) == "delta_rad_per_ms,peak_fidelity");
    }
    {
        const auto r = invoke({"scaling", "--preset", "fig4", "--max-ions", "16", "--out", (dir / "fig4").string()});
        REQUIRE(r.code == exit_ok);
        const std::string csv = slurp(dir / "fig4" / "scaling.csv");
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
        const auto fit = nlohmann::json::parse(slurp(dir / "fig4" / "fit.json"));
        CHECK(fit["complete"] == true);
    }
}
