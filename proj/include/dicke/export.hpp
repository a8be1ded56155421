#pragma once

// CSV and JSON emitters. CSV: ',' separator, '.' decimal, 17 significant digits.

#include "dicke/dynamics.hpp"
#include "dicke/ladder.hpp"
#include "dicke/optimizer.hpp"
#include "dicke/oracle.hpp"

#include "json.hpp"

#include <ostream>
#include <string>

namespace dicke {

std::string format_number(double value);

/// Header `delta_rad_per_ms,E_0,...,E_N`, energies in tracked order.
void write_spectrum_csv(std::ostream& out, const SpectrumResult& spectrum);

/// Header `t_ms,pop_0,...,pop_N,fidelity,norm_error`.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

/// Header `n_ions,delta_opt_rad_per_ms,best_fidelity,time_of_peak_ms`; failed counts are skipped.
void write_scaling_csv(std::ostream& out, const ScalingResult& scaling);

/// Coarse detuning scan of an optimization, header `delta_rad_per_ms,peak_fidelity`.
void write_scan_csv(std::ostream& out, const OptimizationResult& result);

nlohmann::json to_json(const PowerLawFit& fit);
nlohmann::json to_json(const OptimizationResult& result);
nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const GapResult& gap);

} // namespace dicke
