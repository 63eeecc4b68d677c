#include "bdkin/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace bdkin {

namespace {
using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

Config Config::from_string(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("config: expected key=value, got '" + line + "'");
    cfg.kv_[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return cfg;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

void Config::set(const std::string& key, const std::string& value) { kv_[key] = value; }

bool Config::has(const std::string& key) const { return kv_.count(key) > 0; }

std::string Config::get_string(const std::string& key, const std::string& def) const {
  auto it = kv_.find(key);
  return it == kv_.end() ? def : it->second;
}

double Config::get_double(const std::string& key, double def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  try {
    return std::stod(it->second);
  } catch (...) {
    throw ValidationError("config: key '" + key + "' is not a number");
  }
}

double Config::require_double(const std::string& key) const {
  if (!has(key)) throw ValidationError("config: missing required key '" + key + "'");
  return get_double(key, 0);
}

long Config::get_long(const std::string& key, long def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  try {
    return std::stol(it->second);
  } catch (...) {
    throw ValidationError("config: key '" + key + "' is not an integer");
  }
}

bool Config::get_bool(const std::string& key, bool def) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return def;
  const std::string& v = it->second;
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ValidationError("config: key '" + key + "' is not a boolean");
}

std::vector<double> Config::get_array(const std::string& key) const {
  auto it = kv_.find(key);
  if (it == kv_.end()) return {};
  std::string payload = it->second;
  if (!payload.empty() && payload.front() == '@') {  // @file: one value per line or commas
    std::ifstream in(payload.substr(1));
    if (!in) throw ValidationError("config: cannot open array file " + payload.substr(1));
    std::stringstream ss;
    ss << in.rdbuf();
    payload = ss.str();
    std::replace(payload.begin(), payload.end(), '\n', ',');
  }
  std::vector<double> out;
  std::stringstream ss(payload);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    try {
      out.push_back(std::stod(tok));
    } catch (...) {
      throw ValidationError("config: array key '" + key + "' has a non-numeric entry");
    }
  }
  return out;
}

void Config::validate_keys(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : kv_) {
    (void)v;
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
      throw ValidationError("config: unknown key '" + k + "'");
  }
}

CoefficientModel model_from_config(const Config& cfg) {
  const std::string family = cfg.get_string("family");
  if (family == "pt") {
    return CoefficientModel::power_law_pt(cfg.require_double("gamma"), cfg.require_double("zs"),
                                          cfg.require_double("q"), cfg.require_double("mu"));
  }
  if (family == "cf") {
    return CoefficientModel::power_law_cf(cfg.require_double("gamma"), cfg.require_double("zs"),
                                          cfg.require_double("sigma"), cfg.require_double("mu"));
  }
  if (family == "custom") {
    auto a = cfg.get_array("a_table");
    auto b = cfg.get_array("b_table");
    if (a.empty() || b.empty())
      throw ValidationError("config: custom family requires a_table and b_table");
    std::optional<double> zs;
    if (cfg.has("zs")) zs = cfg.require_double("zs");
    return CoefficientModel::custom(std::move(a), std::move(b), zs);
  }
  throw ValidationError("config: family must be one of pt|cf|custom");
}

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_state_csv(const std::string& path, const Vector& c) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "i,c\n";
  for (Index i = 0; i < c.size(); ++i) out << (i + 1) << "," << format_double(c[i]) << "\n";
}

Vector read_state_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state csv: " + path);
  std::string line;
  std::vector<std::pair<long, double>> rows;
  bool first = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (first && line.rfind("i,", 0) == 0) {
      first = false;
      continue;
    }
    first = false;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("state csv: expected i,c columns");
    rows.emplace_back(std::stol(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  if (rows.empty()) throw ValidationError("state csv: empty");
  long n = 0;
  for (auto& [i, v] : rows) n = std::max(n, i);
  Vector c = Vector::Zero(n);
  for (auto& [i, v] : rows) {
    if (i < 1) throw ValidationError("state csv: indices start at 1");
    c[i - 1] = v;
  }
  return c;
}

namespace {
void write_sample_row(std::ofstream& out, const TrajectorySample& s) {
  out << format_double(s.t) << "," << format_double(s.c1) << "," << format_double(s.mass) << ","
      << format_double(s.H_rel) << "," << format_double(s.D) << "," << format_double(s.D_lower)
      << "," << format_double(s.M_beta) << "," << format_double(s.envelope) << "\n";
}
}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "t,c1,mass,H_rel,D,D_lower,M_beta,envelope\n";
  for (const auto& s : traj.samples) write_sample_row(out, s);
}

void write_cf_trajectory_csv(const std::string& path, const CFTrajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "t,c1,mass,H_rel,D,D_lower,M_beta,envelope\n";
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    TrajectorySample s = traj.samples[k];
    s.envelope = traj.moment_bound[k];  // bound curve rides in the envelope column
    write_sample_row(out, s);
  }
}

void write_ratio_csv(const std::string& path, const std::vector<RatioRow>& rows) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << "eps,D,H,ratio,ratio_s2,ratio_s5\n";
  for (const auto& r : rows)
    out << format_double(r.eps) << "," << format_double(r.D) << "," << format_double(r.H) << ","
        << format_double(r.ratio) << "," << format_double(r.ratio_s2) << ","
        << format_double(r.ratio_s5) << "\n";
}

namespace {
const char* regime_name(CercignaniReport::Regime r) {
  switch (r) {
    case CercignaniReport::Regime::Gamma1:
      return "gamma1";
    case CercignaniReport::Regime::GammaLt1:
      return "gamma_lt1";
    case CercignaniReport::Regime::SmallOrLargeC1:
      return "small_or_large_c1";
    case CercignaniReport::Regime::ExpMoment:
      return "exp_moment";
  }
  return "unknown";
}
}  // namespace

std::string cercignani_report_json(const CercignaniReport& rep) {
  json j;
  j["regime"] = regime_name(rep.regime);
  j["K"] = rep.K;
  j["exponent"] = rep.exponent;
  j["epsilon"] = rep.epsilon;
  j["lambda"] = rep.lambda;
  j["m"] = rep.m;
  j["D1"] = rep.D1;
  j["D2"] = rep.D2;
  j["B1"] = rep.B1;
  j["B2"] = rep.B2;
  j["flags"] = rep.flags;
  if (rep.K_closed > 0) j["K_closed"] = rep.K_closed;
  if (rep.regime == CercignaniReport::Regime::ExpMoment) {
    j["K1"] = rep.K1;
    j["K2"] = rep.K2;
  }
  return j.dump(2);
}

std::string functional_json(const std::string& name, double value, double tolerance) {
  json j;
  j["name"] = name;
  j["value"] = value;
  j["tolerance"] = tolerance;
  return j.dump();
}

std::string logsob_report_json(const LogSobReport& rep) {
  json j;
  j["lambda"] = rep.lambda;
  j["m"] = rep.m;
  j["D1"] = rep.D1;
  j["D2"] = rep.D2;
  j["B1"] = rep.B1;
  j["B2"] = rep.B2;
  j["flags"] = rep.flags;
  return j.dump(2);
}

}  // namespace bdkin
