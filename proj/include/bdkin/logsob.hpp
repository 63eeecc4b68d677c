#ifndef BDKIN_LOGSOB_HPP_
#define BDKIN_LOGSOB_HPP_

#include <vector>

#include "bdkin/functionals.hpp"
#include "bdkin/model.hpp"
#include "bdkin/types.hpp"

namespace bdkin {

struct LogSobReport {
  Index m = 1;
  double D1 = 0, D2 = 0, B1 = 0, B2 = 0;
  double lambda = 0;        // min(120(D2+4D1), 40(B2+4B1))
  bool d_converged = false; // supremum cutoff accepted
  bool b_converged = false;
  std::vector<std::string> flags;
};

struct HardyConstants {
  double b1m = 0;       // sup_{k>=m} (sum_{i>=k} mu)(sum_{i=m..k} 1/nu)
  double b1sup = 0;     // sup_{k>=m} (sum_{i>k} mu)(sum_{i=m..k} 1/nu)
  double b2m = 0;       // sum_{i<m} mu_i sigma_i
  double b2m_lower = 0; // sup_{k<m} (sum_{i<=k} mu)(sigma_k); any valid head constant exceeds it
  bool converged = false;
};

struct CercignaniReport {
  enum class Regime { Gamma1, GammaLt1, SmallOrLargeC1, ExpMoment } regime = Regime::Gamma1;
  double K = 0;          // operative inequality constant
  double exponent = 1;   // power on H
  double epsilon = 0;    // uniform lower bound outside the monomer window
  double lambda = 0;     // log-Sobolev constant backing K
  Index m = 1;
  double D1 = 0, D2 = 0, B1 = 0, B2 = 0;
  double K_closed = 0;   // closed-form route, only when rho_s finite
  double K1 = 0, K2 = 0; // exp-moment display constants
  double delta = 0, c1 = 0, rho = 0, gamma = 1;
  double beta = 0, M_beta = 0, mu = 0, M_exp = 0;
  std::vector<std::string> flags;

  // Lower bound on the dissipation as a function of H (regime-dependent shape).
  double bound(double H) const;
};

// mu_i ~ Q_i c1^i, nu_i ~ a_i Q_i c1^i, both normalized with analytic tails.
WeightPair measures_from_state(const CoefficientModel& model, double c1, Index n);
// Sizes the truncation so the suprema cutoff policy has room to converge.
WeightPair measures_from_state(const CoefficientModel& model, double c1);

// Smallest m with max(head mass, tail mass) < 2/3.
Index approximate_median(const WeightPair& w);
Index approximate_median(const Vector& mu_normalized);

LogSobReport logsob_constants(const WeightPair& w);
HardyConstants hardy_constants(const WeightPair& w, Index m);

CercignaniReport cercignani_gamma1(const CoefficientModel& model, double rho, double delta,
                                   double c1);
CercignaniReport cercignani_gamma_lt1(const CoefficientModel& model, double rho, double delta,
                                      double beta, double M_beta);
// epsilon_1 of the large-monomer bound.
double uniform_bound_large_c1(const CoefficientModel& model, double rho, double delta);
// (delta_1, epsilon) of the small-monomer bound; beta/M_beta used when gamma < 1.
std::pair<double, double> uniform_bound_small_c1(const CoefficientModel& model, double rho,
                                                 double gamma, double beta = 0, double M_beta = 0);
CercignaniReport exp_regime(const CoefficientModel& model, double rho, double mu, double M_exp,
                            double gamma, double c1_window_delta);

// min over a c1-grid in [delta, z_s - delta] of the per-c1 linear constant;
// certified for every window sample of a trajectory.
double window_linear_constant(const CoefficientModel& model, double rho, double delta,
                              int grid = 256);

// Control constant C with sum_{i>i0} i Q_i x^{i-1} <= C Q_{i0} x^{i0}
// (corrected all-j summation; valid on the small-i0 range the estimate needs).
double control_series_constant(const CoefficientModel& model, double x, double r1);

}  // namespace bdkin

#endif  // BDKIN_LOGSOB_HPP_
