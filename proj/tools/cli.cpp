#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "popuc/error.hpp"
#include "popuc/io.hpp"
#include "popuc/verify.hpp"

namespace popuc::cli {

namespace {

using io::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Flags {
  std::string config;
  std::optional<double> t;
  std::string grid;
  std::optional<int> degree;
  std::string fix_zero;
  std::string b;
  std::string theorem;
  std::optional<int> nodes;
  std::string out;
  std::string only;
  std::optional<double> tolerance;
  std::string scenario;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("--t", f.t, "parameter value");
  cmd->add_option("--degree", f.degree, "degree (moment order K, OPUC n, or POPUC n+1)");
  cmd->add_option("--nodes", f.nodes, "quadrature nodes for custom weights");
  cmd->add_option("--out", f.out, "output path (stdout when omitted)");
}

void add_policy(CLI::App* cmd, Flags& f) {
  auto* xi = cmd->add_option("--fix-zero", f.fix_zero, "prescribed zero \"re,im\"");
  auto* b = cmd->add_option("--b", f.b, "paraorthogonality parameter \"re,im\"");
  xi->excludes(b);
}

io::RunConfig build_config(const Flags& f) {
  io::RunConfig rc;
  if (!f.config.empty()) rc = io::load_run_config(f.config);
  SweepConfig& s = rc.sweep;
  if (f.t) rc.t = *f.t;
  if (!f.grid.empty()) io::parse_grid_text(f.grid, s);
  if (f.degree) s.degree = *f.degree;
  if (!f.fix_zero.empty()) s.policy = ZeroPolicy::fix_zero(io::parse_complex_text(f.fix_zero));
  if (!f.b.empty()) s.policy = ZeroPolicy::fix_b(io::parse_complex_text(f.b));
  if (!f.theorem.empty()) s.theorem = parse_theorem(f.theorem);
  if (f.nodes) s.nodes = *f.nodes;
  if (s.nodes < 16) throw ValidationError("--nodes must be at least 16");
  if (s.measure.masses.empty() && !s.measure.ac.present())
    throw ValidationError("no measure given (use --config with a 'measure' or 'scenario' entry)");
  return rc;
}

double point_t(const io::RunConfig& rc) { return rc.t.value_or(rc.sweep.t_start); }

void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("cannot write '" + path + "'");
  file << text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_moments(const Flags& f, std::ostream& out) {
  const io::RunConfig rc = build_config(f);
  const int K = rc.sweep.degree;
  if (K < 0) throw ValidationError("moment order must be nonnegative");
  const MomentSequence ms = moments(rc.sweep.measure, point_t(rc), K, rc.sweep.nodes);
  emit(f.out, io::moments_to_json(ms).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_opuc(const Flags& f, std::ostream& out) {
  const io::RunConfig rc = build_config(f);
  const int n = rc.sweep.degree;
  const double t = point_t(rc);
  const MomentSequence ms = moments(rc.sweep.measure, t, std::max(n, 0), rc.sweep.nodes);
  const OpucFamily fam = gram_opuc(ms, n);
  emit(f.out, io::opuc_to_json(fam, t).dump(2) + "\n", out);
  return kExitOk;
}

int cmd_zeros(const Flags& f, std::ostream& out) {
  const io::RunConfig rc = build_config(f);
  const PipelinePoint pt = solve_point(rc.sweep, point_t(rc));
  if (ends_with(f.out, ".csv")) {
    std::ostringstream os;
    io::write_zero_csv(os, pt.t, pt.zeros);
    emit(f.out, os.str(), out);
  } else {
    emit(f.out, io::zeros_to_json(pt).dump(2) + "\n", out);
  }
  return kExitOk;
}

int cmd_sweep(const Flags& f, std::ostream& out) {
  io::RunConfig rc = build_config(f);
  const SweepConfig& cfg = rc.sweep;
  cfg.check();
  const Trajectory traj = sweep(cfg);

  json verdicts = json::array();
  for (double t : traj.t) verdicts.push_back(io::analysis_to_json(analyze_point(cfg, solve_point(cfg, t))));

  std::ostringstream csv;
  io::write_trajectory_csv(csv, traj);
  const std::string csv_path = !f.out.empty() ? f.out : rc.csv_path.value_or("");
  emit(csv_path, csv.str(), out);

  std::string json_path = rc.json_path.value_or("");
  if (json_path.empty() && !csv_path.empty())
    json_path = std::filesystem::path(csv_path).replace_extension(".verdict.json").string();
  if (!json_path.empty()) {
    json doc = {{"config", io::run_config_to_json(cfg)}, {"max_jump", traj.max_jump}, {"points", verdicts}};
    emit(json_path, doc.dump(2) + "\n", out);
  }
  return kExitOk;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  verify::Options opts;
  if (!f.only.empty()) opts.only = f.only;
  opts.tolerance = f.tolerance;
  const auto results = verify::run(opts, &out);
  if (results.empty()) throw ValidationError("no criterion matches --only " + f.only);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;

  if (!f.config.empty()) {
    // Consistency of a user configuration: balance identity and verdict/velocity signs.
    io::RunConfig rc = io::load_run_config(f.config);
    rc.sweep.check();
    double worst = 0.0;
    int disagreements = 0;
    for (double t : rc.sweep.grid()) {
      const PointAnalysis a = analyze_point(rc.sweep, solve_point(rc.sweep, t));
      for (const auto& ta : a.tracked) {
        if (ta.balance) worst = std::max(worst, ta.balance->mismatch);
        if (ta.report.verdict == Verdict::ccw && !(ta.velocity > 0)) ++disagreements;
        if (ta.report.verdict == Verdict::cw && !(ta.velocity < 0)) ++disagreements;
      }
    }
    const double tol = f.tolerance.value_or(1e-4);
    const bool pass = worst <= tol && disagreements == 0;
    out << (pass ? "[PASS] " : "[FAIL] ") << "config " << f.config << ": max balance mismatch "
        << io::format_double(worst) << " (tol " << io::format_double(tol) << "), sign disagreements "
        << disagreements << "\n";
    ok = ok && pass;
  }
  return ok ? kExitOk : kExitVerifyFailed;
}

int cmd_scenario(const Flags& f, std::ostream& out) {
  const ScenarioId id = parse_scenario(f.scenario);
  json j = io::run_config_to_json(scenario_config(id));
  j["scenario_name"] = to_string(id);
  emit(f.out, j.dump(2) + "\n", out);
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"POPUC zeros, trajectories and monotonicity predicates"};
  app.require_subcommand(1);
  Flags f;

  auto* moments_cmd = app.add_subcommand("moments", "trigonometric moments c_{-K..K} as JSON");
  add_common(moments_cmd, f);
  auto* opuc_cmd = app.add_subcommand("opuc", "monic OPUC Q_0..Q_n as JSON");
  add_common(opuc_cmd, f);
  auto* zeros_cmd = app.add_subcommand("zeros", "POPUC zeros at one t (JSON, or CSV for --out *.csv)");
  add_common(zeros_cmd, f);
  add_policy(zeros_cmd, f);
  auto* sweep_cmd = app.add_subcommand("sweep", "trajectory CSV and per-t verdict JSON");
  add_common(sweep_cmd, f);
  add_policy(sweep_cmd, f);
  sweep_cmd->add_option("--grid", f.grid, "START:STOP:STEPS");
  sweep_cmd->add_option("--theorem", f.theorem, "t21, t22 or t23")->check(CLI::IsMember({"t21", "t22", "t23"}));
  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance criteria");
  verify_cmd->add_option("--config", f.config, "additionally check a user configuration");
  verify_cmd->add_option("--only", f.only, "criterion id, or name prefix");
  verify_cmd->add_option("--tolerance", f.tolerance, "override every accuracy tolerance");
  auto* scenario_cmd = app.add_subcommand("scenario", "print a built-in scenario configuration");
  scenario_cmd->add_option("name", f.scenario, "bs_mass_gamma, bs_mass_omega or lebesgue_mass_b")->required();
  scenario_cmd->add_option("--out", f.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }

  try {
    if (*moments_cmd) return cmd_moments(f, out);
    if (*opuc_cmd) return cmd_opuc(f, out);
    if (*zeros_cmd) return cmd_zeros(f, out);
    if (*sweep_cmd) return cmd_sweep(f, out);
    if (*verify_cmd) return cmd_verify(f, out);
    if (*scenario_cmd) return cmd_scenario(f, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}

}  // namespace popuc::cli
