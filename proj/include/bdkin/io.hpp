#ifndef BDKIN_IO_HPP_
#define BDKIN_IO_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bdkin/counterexample.hpp"
#include "bdkin/dynamics.hpp"
#include "bdkin/logsob.hpp"
#include "bdkin/model.hpp"
#include "bdkin/types.hpp"

namespace bdkin {

// Flat key=value config with '#' comments; arrays are comma-separated.
class Config {
 public:
  Config() = default;
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  void set(const std::string& key, const std::string& value);  // flags override file
  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def = "") const;
  double get_double(const std::string& key, double def) const;
  double require_double(const std::string& key) const;
  long get_long(const std::string& key, long def) const;
  bool get_bool(const std::string& key, bool def = false) const;
  std::vector<double> get_array(const std::string& key) const;

  // Rejects keys outside the documented set.
  void validate_keys(const std::vector<std::string>& allowed) const;
  const std::map<std::string, std::string>& entries() const { return kv_; }

 private:
  std::map<std::string, std::string> kv_;
};

// Model construction from the fixed key set
// family, gamma, zs, q, mu, sigma, a_table, b_table.
CoefficientModel model_from_config(const Config& cfg);

// 17-significant-digit formatting so repeated runs are byte-identical.
std::string format_double(double v);

void write_state_csv(const std::string& path, const Vector& c);
Vector read_state_csv(const std::string& path);  // columns i,c

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_cf_trajectory_csv(const std::string& path, const CFTrajectory& traj);
void write_ratio_csv(const std::string& path, const std::vector<RatioRow>& rows);

std::string cercignani_report_json(const CercignaniReport& rep);
std::string logsob_report_json(const LogSobReport& rep);

// Scalar functional evaluation as a JSON record {name, value, tolerance}.
std::string functional_json(const std::string& name, double value, double tolerance);

}  // namespace bdkin

#endif  // BDKIN_IO_HPP_
