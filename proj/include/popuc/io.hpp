#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "popuc/dynamics.hpp"
#include "popuc/oracles.hpp"

namespace popuc::io {

using nlohmann::json;

/// Measure from {"ac": {...}, "masses": [{"gamma": "...", "omega": "..."}]}.
Measure parse_measure(const json& j);
json measure_to_json(const Measure& m);

Complex parse_complex(const json& j);
/// "re,im" as used by the command-line flags.
Complex parse_complex_text(const std::string& text);
/// "START:STOP:STEPS".
void parse_grid_text(const std::string& text, SweepConfig& cfg);

struct RunConfig {
  SweepConfig sweep;
  std::optional<double> t;
  std::optional<std::string> csv_path;
  std::optional<std::string> json_path;
};

/// Optional "scenario" key seeds the config; every other key overrides.
RunConfig parse_run_config(const json& j);
RunConfig load_run_config(const std::string& path);
json run_config_to_json(const SweepConfig& cfg);

json complex_to_json(Complex z);
json coeffs_to_json(const Coeffs& c);

json moments_to_json(const MomentSequence& ms);
json opuc_to_json(const OpucFamily& fam, double t);
json zeros_to_json(const PipelinePoint& pt);
json verdict_to_json(const VerdictReport& r);
json balance_to_json(const BalanceEntry& e);
json analysis_to_json(const PointAnalysis& a);

/// Shortest round-trip decimal text.
std::string format_double(double v);

/// Columns t,k,phase,residual.
void write_zero_csv(std::ostream& os, double t, const ZeroSet& zs, bool header = true);
/// Columns t,zero_index,phase,velocity,residual.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace popuc::io
