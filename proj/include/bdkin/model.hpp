#ifndef BDKIN_MODEL_HPP_
#define BDKIN_MODEL_HPP_

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "bdkin/types.hpp"

namespace bdkin {

enum class Family { PowerLawPT, PowerLawCF, Custom };

// Coagulation/fragmentation rate family with derived detailed-balance
// coefficients Q_i (Q_1 = 1, Q_{i+1} = a_i Q_i / b_{i+1}, accumulated in log
// space) and alpha_i = Q_i z_s^{i-1}.
class CoefficientModel {
 public:
  // a_i = i^gamma, b_i = a_i (z_s + q i^{mu-1}).
  static CoefficientModel power_law_pt(double gamma, double zs, double q, double mu);
  // a_i = i^gamma, b_i = z_s (i-1)^gamma exp(sigma (i^mu - (i-1)^mu)); b_1 is
  // never used by the recursion and is set to z_s e^sigma by convention.
  static CoefficientModel power_law_cf(double gamma, double zs, double sigma, double mu);
  // Finite tables a_1..a_n, b_1..b_n (b_1 unused). Optionally a known z_s.
  static CoefficientModel custom(std::vector<double> a, std::vector<double> b,
                                 std::optional<double> zs = std::nullopt);
  // a_i = i^gamma, Q_i = z_s^{1-i} (alpha == 1). Equals power_law_cf with sigma = 0.
  static CoefficientModel geometric(double gamma, double zs);

  // Same Q_i, coagulation rates replaced by a_i = i.
  CoefficientModel companion_linear() const;
  // Copy carrying the given z_s (for Custom models after estimation).
  CoefficientModel with_zs(double zs) const;

  double a(Index i) const;
  double b(Index i) const;
  double log_q(Index i) const;
  double q_coeff(Index i) const;
  double alpha(Index i) const;            // Q_i z_s^{i-1}; requires known z_s
  double q_ratio(Index i) const;          // Q_i / Q_{i+1}

  Family family() const { return family_; }
  double gamma() const { return gamma_; }
  bool linear_rates() const { return linear_override_; }
  bool zs_known() const { return zs_.has_value(); }
  double zs() const;
  Index max_index() const { return max_index_; }  // table length for Custom, huge otherwise

  // sup_j alpha_j / alpha_{j+1} over j < upto. For the built-in families the
  // ratio is largest at j = 1 and decreases to 1, so the truncated sup is the
  // true sup; *tail_bounded reports whether that argument applies.
  double sup_alpha_ratio(Index upto, bool* tail_bounded = nullptr) const;
  // sup_k |log(alpha_{k+1}^{1/(k+1)})| over k < upto, same tail reasoning.
  double sup_log_alpha_root(Index upto, bool* tail_bounded = nullptr) const;
  // Checks alpha_i non-increasing on [1, upto]; false => outside Hypothesis 1.2.
  bool alpha_non_increasing(Index upto) const;

  // inf/sup of Q_i/Q_{i+1} and a_i/a_{i+1} over the inspected range (analytic
  // limits folded in for the built-in families).
  double inf_q_ratio(Index upto) const;
  double sup_q_ratio(Index upto) const;
  double inf_a_ratio(Index upto) const;
  double sup_a_ratio(Index upto) const;
  double inf_a(Index upto) const;

 private:
  CoefficientModel() = default;
  void ensure_logq(Index i) const;
  double base_a(Index i) const;  // family rates, ignoring the linear override
  double base_b(Index i) const;

  Family family_ = Family::Custom;
  double gamma_ = 0, zs_param_ = 0, q_ = 0, mu_ = 0, sigma_ = 0;
  std::optional<double> zs_;
  std::shared_ptr<const std::vector<double>> a_table_, b_table_;
  bool linear_override_ = false;
  Index max_index_ = 0;

  mutable std::vector<double> logq_;
  mutable std::shared_ptr<std::mutex> cache_mutex_ = std::make_shared<std::mutex>();
};

enum class MassKind { Finite, Infinite, Undetermined };

struct CriticalDensity {
  double zs = 0;
  MassKind kind = MassKind::Undetermined;
  double rho_s = 0;      // value when Finite
  std::vector<std::string> flags;
};

struct EquilibriumInfo {
  double z_bar = 0;
  double rho = 0;
  double zs = 0;
  MassKind rho_s_kind = MassKind::Undetermined;
  double rho_s = 0;
  std::vector<std::string> flags;
};

// z_s (read from the family, estimated for Custom via Richardson on a dyadic
// ladder of (1/Q_i)^{1/i}) and the saturation-mass classification.
CriticalDensity critical_density(const CoefficientModel& model, double tol = 1e-6);

// Unique z_bar in (0, z_s) with sum_i i Q_i z^i = rho, by bisection.
EquilibriumInfo equilibrium_monomer_density(const CoefficientModel& model, double rho,
                                            double tol = 1e-12);

// Q_i z^i for i = 1..n.
Vector equilibrium_profile(const CoefficientModel& model, double z, Index n);

// sum_{i>=1} i^beta Q_i z^i for z < z_s, truncated when the geometric-envelope
// tail bound drops below rel_tol times the partial sum.
double equilibrium_series(const CoefficientModel& model, double beta, double z,
                          double rel_tol = 1e-14);

// Streaming test "sum_i i Q_i z^i > target" with early exit.
bool equilibrium_mass_exceeds(const CoefficientModel& model, double z, double target);

// Tail sum_{i>n} Q_i z^i via the frozen-alpha geometric envelope.
double equilibrium_profile_tail(const CoefficientModel& model, double z, Index n);

}  // namespace bdkin

#endif  // BDKIN_MODEL_HPP_
