#include "dicke/export.hpp"

#include <cstdio>

namespace dicke {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", value);
    return buf;
}

void write_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum) {
    out << "delta_rad_per_ms";
    for (int c = 0; c < spectrum.curves(); ++c) out << ",E_" << c;
    out << '\n';
    for (std::size_t i = 0; i < spectrum.delta_grid.size(); ++i) {
        out << format_number(spectrum.delta_grid[i]);
        for (int c = 0; c < spectrum.curves(); ++c) out << ',' << format_number(spectrum.tracked(static_cast<Eigen::Index>(i), c));
        out << '\n';
    }
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
    const auto dim = trace.populations.cols();
    out << "t_ms";
    for (Eigen::Index p = 0; p < dim; ++p) out << ",pop_" << p;
    out << ",fidelity,norm_error\n";
    for (std::size_t j = 0; j < trace.times.size(); ++j) {
        out << format_number(trace.times[j]);
        for (Eigen::Index p = 0; p < dim; ++p) out << ',' << format_number(trace.populations(static_cast<Eigen::Index>(j), p));
        out << ',' << format_number(trace.fidelity[j]) << ',' << format_number(trace.norm_error[j]) << '\n';
    }
}

void write_scaling_csv(std::ostream& out, const ScalingResult& scaling) {
    out << "n_ions,delta_opt_rad_per_ms,best_fidelity,time_of_peak_ms\n";
    for (const auto& e : scaling.entries) {
        if (!e.result) continue;
        out << e.n_ions << ',' << format_number(e.result->delta_opt) << ',' << format_number(e.result->best_fidelity)
            << ',' << format_number(e.result->time_of_peak) << '\n';
    }
}

void write_scan_csv(std::ostream& out, const OptimizationResult& result) {
    out << "delta_rad_per_ms,peak_fidelity\n";
    for (const auto& [delta, f] : result.scan_trace) out << format_number(delta) << ',' << format_number(f) << '\n';
}

nlohmann::json to_json(const PowerLawFit& fit) {
    return {{"coefficient", fit.coefficient},
            {"exponent", fit.exponent},
            {"rms_log_residual", fit.rms_log_residual},
            {"points", fit.points}};
}

nlohmann::json to_json(const OptimizationResult& r) {
    return {{"n_ions", r.n_ions},
            {"chi_rad_per_ms", r.chi},
            {"delta_opt_rad_per_ms", r.delta_opt},
            {"best_fidelity", r.best_fidelity},
            {"time_of_peak_ms", r.time_of_peak},
            {"horizon_ms", r.horizon},
            {"fidelity_at_zero_detuning", r.fidelity_at_zero},
            {"horizon_limited", r.horizon_limited},
            {"at_bracket_edge", r.at_bracket_edge}};
}

nlohmann::json to_json(const ValidationReport& report) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"deviation", c.deviation}, {"threshold", c.threshold}, {"passed", c.passed}});
    }
    return {{"max_ions", report.max_ions}, {"passed", report.passed()}, {"checks", checks}};
}

nlohmann::json to_json(const GapResult& gap) {
    return {{"delta_at_min_rad_per_ms", gap.delta_at_min}, {"gap_rad_per_ms", gap.gap}, {"at_grid_edge", gap.at_grid_edge}};
}

} // namespace dicke
