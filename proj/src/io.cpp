#include "popuc/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "popuc/error.hpp"

namespace popuc::io {

namespace {

Expr expr_field(const json& j, const char* key, const char* fallback) {
  if (!j.contains(key)) return parse(fallback);
  if (!j.at(key).is_string()) {
    if (j.at(key).is_number()) return Expr::constant(j.at(key).get<double>());
    throw ValidationError(std::string("field '") + key + "' must be an expression string");
  }
  return parse(j.at(key).get<std::string>());
}

const char* ac_kind_name(ACWeight::Kind k) {
  switch (k) {
    case ACWeight::Kind::none: return "none";
    case ACWeight::Kind::lebesgue: return "lebesgue";
    case ACWeight::Kind::bernstein_szego: return "bernstein_szego";
    case ACWeight::Kind::custom: return "custom";
  }
  return "none";
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Complex parse_complex(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ValidationError("complex value must be a number or [re, im]");
}

Complex parse_complex_text(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::exception&) {
    throw ValidationError("malformed complex value '" + text + "' (expected \"re,im\")");
  }
}

void parse_grid_text(const std::string& text, SweepConfig& cfg) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) || c.empty())
    throw ValidationError("grid must be START:STOP:STEPS, got '" + text + "'");
  try {
    cfg.t_start = parse(a).eval({});
    cfg.t_stop = parse(b).eval({});
    std::size_t used = 0;
    cfg.steps = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw ValidationError("grid must be START:STOP:STEPS, got '" + text + "'");
  }
}

Measure parse_measure(const json& j) {
  if (!j.is_object()) throw ValidationError("measure must be a JSON object");
  Measure m;
  if (j.contains("ac")) {
    const json& ac = j.at("ac");
    const std::string kind = ac.is_string() ? ac.get<std::string>() : get_as<std::string>(ac, "kind");
    const json empty = json::object();
    const json& obj = ac.is_object() ? ac : empty;
    if (kind == "none") {
      m.ac = ACWeight::none();
    } else if (kind == "lebesgue") {
      m.ac = ACWeight::lebesgue(expr_field(obj, "scale", "1"));
    } else if (kind == "bernstein_szego") {
      if (!obj.contains("lambda")) throw ValidationError("bernstein_szego needs 'lambda'");
      m.ac = ACWeight::bernstein_szego(parse_complex(obj.at("lambda")), expr_field(obj, "scale", "1"));
    } else if (kind == "custom") {
      if (!obj.contains("w")) throw ValidationError("custom weight needs 'w'");
      const double theta0 = obj.contains("theta0") ? get_as<double>(obj, "theta0") : 0.0;
      m.ac = ACWeight::custom(expr_field(obj, "w", "0"), theta0);
    } else {
      throw ValidationError("unknown continuous weight kind '" + kind + "'");
    }
  }
  if (j.contains("masses")) {
    const json& masses = j.at("masses");
    if (!masses.is_array()) throw ValidationError("'masses' must be an array");
    for (const auto& mp : masses) {
      if (!mp.is_object()) throw ValidationError("each mass must be an object");
      m.masses.emplace_back(expr_field(mp, "gamma", "0"), expr_field(mp, "omega", "0"));
    }
  }
  return m;
}

json measure_to_json(const Measure& m) {
  json ac = {{"kind", ac_kind_name(m.ac.kind())}};
  switch (m.ac.kind()) {
    case ACWeight::Kind::none: break;
    case ACWeight::Kind::lebesgue: ac["scale"] = m.ac.scale().to_string(); break;
    case ACWeight::Kind::bernstein_szego:
      ac["lambda"] = complex_to_json(m.ac.lambda());
      ac["scale"] = m.ac.scale().to_string();
      break;
    case ACWeight::Kind::custom:
      ac["w"] = m.ac.w().to_string();
      ac["theta0"] = m.ac.theta0();
      break;
  }
  json masses = json::array();
  for (const auto& p : m.masses) masses.push_back({{"gamma", p.gamma().to_string()}, {"omega", p.omega().to_string()}});
  return {{"ac", ac}, {"masses", masses}};
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  RunConfig rc;
  if (j.contains("scenario")) rc.sweep = scenario_config(parse_scenario(get_as<std::string>(j, "scenario")));
  SweepConfig& s = rc.sweep;
  if (j.contains("measure")) s.measure = parse_measure(j.at("measure"));
  if (j.contains("degree")) s.degree = get_as<int>(j, "degree");
  if (j.contains("t")) rc.t = get_as<double>(j, "t");
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    if (g.is_string()) {
      parse_grid_text(g.get<std::string>(), s);
    } else {
      s.t_start = get_as<double>(g, "start");
      s.t_stop = get_as<double>(g, "stop");
      s.steps = get_as<int>(g, "steps");
    }
  }
  if (j.contains("fix_zero") && j.contains("b")) throw ValidationError("give either 'fix_zero' or 'b', not both");
  if (j.contains("fix_zero")) s.policy = ZeroPolicy::fix_zero(parse_complex(j.at("fix_zero")));
  if (j.contains("b")) s.policy = ZeroPolicy::fix_b(parse_complex(j.at("b")));
  if (j.contains("theorem")) s.theorem = parse_theorem(get_as<std::string>(j, "theorem"));
  if (j.contains("nodes")) s.nodes = get_as<int>(j, "nodes");
  if (j.contains("h")) s.h = get_as<double>(j, "h");
  if (j.contains("theta_ref")) s.theta_ref = get_as<double>(j, "theta_ref");
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    if (o.contains("csv")) rc.csv_path = get_as<std::string>(o, "csv");
    if (o.contains("json")) rc.json_path = get_as<std::string>(o, "json");
  }
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_run_config(j);
}

json run_config_to_json(const SweepConfig& cfg) {
  json j = {{"measure", measure_to_json(cfg.measure)},
            {"degree", cfg.degree},
            {"grid", {{"start", cfg.t_start}, {"stop", cfg.t_stop}, {"steps", cfg.steps}}},
            {"theorem", to_string(cfg.theorem)},
            {"nodes", cfg.nodes},
            {"h", cfg.h}};
  if (cfg.policy.kind == ZeroPolicy::Kind::fixed_xi) {
    j["fix_zero"] = complex_to_json(cfg.policy.value);
  } else {
    j["b"] = complex_to_json(cfg.policy.value);
  }
  if (cfg.theta_ref) j["theta_ref"] = *cfg.theta_ref;
  return j;
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json coeffs_to_json(const Coeffs& c) {
  json out = json::array();
  for (Eigen::Index k = 0; k < c.size(); ++k) out.push_back(complex_to_json(c(k)));
  return out;
}

json moments_to_json(const MomentSequence& ms) {
  json c = json::array();
  for (int k = -ms.order(); k <= ms.order(); ++k) c.push_back(complex_to_json(ms(k)));
  return {{"t", ms.t()}, {"K", ms.order()}, {"c", c}};
}

json opuc_to_json(const OpucFamily& fam, double t) {
  json polys = json::array();
  for (int k = 0; k <= fam.degree(); ++k) {
    json p = {{"degree", k}, {"coeffs", coeffs_to_json(fam.q[k].coeffs())}, {"kappa", fam.kappa[k]}};
    if (k < fam.degree()) p["verblunsky"] = complex_to_json(fam.alpha[k]);
    polys.push_back(std::move(p));
  }
  return {{"t", t}, {"degree", fam.degree()}, {"polynomials", polys}};
}

json zeros_to_json(const PipelinePoint& pt) {
  const ZeroSet& zs = pt.zeros;
  json zeros = json::array();
  for (std::size_t k = 0; k < zs.size(); ++k) {
    zeros.push_back({{"k", k}, {"phase", zs.phases[k]}, {"residual", zs.residuals[k]}});
  }
  json j = {{"t", pt.t},
            {"degree", pt.popuc.p.degree()},
            {"b", complex_to_json(pt.popuc.b)},
            {"coeffs", coeffs_to_json(pt.popuc.p.coeffs())},
            {"theta_ref", zs.theta_ref},
            {"zeros", zeros},
            {"max_modulus_deviation", zs.max_modulus_deviation},
            {"min_gap", zs.min_gap}};
  if (zs.fixed_index) j["fixed_index"] = *zs.fixed_index;
  return j;
}

json verdict_to_json(const VerdictReport& r) {
  json j = {{"theorem", to_string(r.theorem)},
            {"verdict", to_string(r.verdict)},
            {"W", r.w},
            {"continuous_min", r.continuous_min},
            {"continuous_max", r.continuous_max},
            {"scale", r.scale},
            {"flags",
             {{"applicable", r.applicable},
              {"collision", r.collision},
              {"f_nondecreasing", r.f_nondecreasing},
              {"f_nonincreasing", r.f_nonincreasing},
              {"mirrored", r.mirrored}}}};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

json balance_to_json(const BalanceEntry& e) {
  return {{"t", e.t},     {"tracked", e.tracked}, {"phase", e.phase}, {"C", e.C},
          {"dphi_dt", e.dphi}, {"lhs", e.lhs},   {"rhs", e.rhs},     {"mismatch", e.mismatch}};
}

json analysis_to_json(const PointAnalysis& a) {
  json tracked = json::array();
  for (const auto& ta : a.tracked) {
    json item = {{"zero", ta.index}, {"phase", ta.phase}, {"velocity", ta.velocity}, {"report", verdict_to_json(ta.report)}};
    if (ta.balance) item["balance"] = balance_to_json(*ta.balance);
    tracked.push_back(std::move(item));
  }
  json j = {{"t", a.t}, {"tracked", tracked}};
  if (a.fixed) j["fixed_zero"] = *a.fixed;
  return j;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, end);
}

void write_zero_csv(std::ostream& os, double t, const ZeroSet& zs, bool header) {
  if (header) os << "t,k,phase,residual\n";
  for (std::size_t k = 0; k < zs.size(); ++k)
    os << format_double(t) << ',' << k << ',' << format_double(zs.phases[k]) << ',' << format_double(zs.residuals[k])
       << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,zero_index,phase,velocity,residual\n";
  std::vector<std::vector<double>> v;
  for (std::size_t k = 0; k < traj.zero_count(); ++k) v.push_back(fd_velocity(traj, k));
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    for (std::size_t k = 0; k < traj.zero_count(); ++k) {
      os << format_double(traj.t[i]) << ',' << k << ',' << format_double(traj.chains[k][i]) << ','
         << format_double(v[k][i]) << ',' << format_double(traj.sets[i].residuals[traj.slot[i][k]]) << '\n';
    }
  }
}

}  // namespace popuc::io
