#ifndef BDKIN_DYNAMICS_HPP_
#define BDKIN_DYNAMICS_HPP_

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "bdkin/functionals.hpp"
#include "bdkin/logsob.hpp"
#include "bdkin/model.hpp"
#include "bdkin/types.hpp"

namespace bdkin {

struct TrajectorySample {
  double t = 0;
  double c1 = 0;
  double mass = 0;
  double H_rel = std::numeric_limits<double>::quiet_NaN();
  double D = std::numeric_limits<double>::quiet_NaN();
  double D_lower = std::numeric_limits<double>::quiet_NaN();
  double M_beta = std::numeric_limits<double>::quiet_NaN();   // or M^exp when tracking exp moments
  double envelope = std::numeric_limits<double>::quiet_NaN();
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  Vector final_state;
  double mass0 = 0;
  double mass_drift = 0;      // max relative drift over the run
  long steps = 0;
  long rejected = 0;
  double z_bar = 0, zs = 0, rho = 0;
  double gamma = 1;
  std::vector<std::string> flags;
  bool completed = true;
};

struct IntegrateOptions {
  double t_end = 10.0;
  double cadence = 0.01;
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  double dt_min = 1e-12;
  double positivity_floor = 0.0;  // 0 = off; suggested 1e-30 when used
  double moment_beta = 0.0;       // track M_beta when > 0
  double exp_mu = 0.0;            // track M^exp when > 0 (overrides moment_beta sample slot)
  bool diagnostics = true;
};

// Truncated net-rate right-hand side; W_N := 0 closure conserves mass exactly.
Vector bd_rhs(const Vector& c, const CoefficientModel& model);

Trajectory integrate_bd(const CoefficientModel& model, Vector c0, const IntegrateOptions& opts);

// --- general coagulation-fragmentation system -----------------------------

class CFKernel {
 public:
  // a_{i,j} = i^gamma j^eta + i^eta j^gamma, b from detailed balance with the
  // model's Q sequence.
  static CFKernel power(const CoefficientModel& qmodel, double gamma, double eta);
  // Monomer-only kernel reproducing the truncated net-rate system.
  static CFKernel bd_embedding(const CoefficientModel& model);
  // Explicit rate tables; both must be symmetric.
  static CFKernel custom(Eigen::MatrixXd a, Eigen::MatrixXd b);

  double a(Index i, Index j) const;
  double b(Index i, Index j) const;
  double gamma() const { return gamma_; }
  double eta() const { return eta_; }
  // The a-priori moment bound is proved for the power family only.
  bool certified_moment_bound() const { return kind_ != Kind::Custom; }
  const CoefficientModel& qmodel() const { return *qmodel_; }

 private:
  enum class Kind { Power, BDEmbedding, Custom } kind_ = Kind::Power;
  double gamma_ = 0, eta_ = 0;
  const CoefficientModel* qmodel_ = nullptr;
  Eigen::MatrixXd a_table_, b_table_;
};

Vector cf_rhs(const Vector& c, const CFKernel& kernel);

struct CFOptions {
  double t_end = 5.0;
  double cadence = 0.05;
  double rel_tol = 1e-8;
  double abs_tol = 1e-14;
  double dt_min = 1e-12;
  double moment_k = 2.0;  // integer moment tracked against the a-priori bound
  bool diagnostics = true;
};

struct CFTrajectory {
  std::vector<TrajectorySample> samples;  // M_beta slot holds M_k
  Vector final_state;
  std::vector<double> moment_bound;       // a-priori bound at each sample time
  double mass0 = 0, mass_drift = 0;
  long steps = 0, rejected = 0;
  double lambda = 0;  // gamma + eta
  bool bound_violated = false;
  std::vector<std::string> flags;
  bool completed = true;
};

CFTrajectory integrate_cf(const CFKernel& kernel, Vector c0, const CFOptions& opts);

// Moment growth bound along CF solutions: exponential branch when
// gamma + eta = 1, algebraic otherwise.
double cf_moment_bound(double mk0, double rho, double k, double lambda, double t);

// --- decay envelopes -------------------------------------------------------

struct DecayEnvelope {
  enum class Kind { Exponential, Algebraic, StretchedExp } kind = Kind::Exponential;
  double H0 = 0;
  double K = 0, epsilon = 0;
  double beta = 0, gamma = 0;
  double K1 = 0, K2 = 0;   // stretched regime inputs
  double t0 = 0;           // end of the uniform-dissipation phase
  double threshold = 0;    // H value at t0
  double C = 0;            // single-display constant (case table)

  double operator()(double t) const;
};

DecayEnvelope decay_envelope(DecayEnvelope::Kind kind, double H0, const CercignaniReport& r);

// --- rate fitting -----------------------------------------------------------

struct DecayFit {
  enum class Kind { Exponential, Algebraic, StretchedExp } best = Kind::Exponential;
  double exp_rate = 0, exp_log_c = 0, exp_residual = 0;
  double alg_exponent = 0, alg_log_c = 0, alg_residual = 0;
  double str_rate = 0, str_log_c = 0, str_residual = 0;
};

DecayFit fit_decay(const Trajectory& traj);

// Fill the envelope column of an existing trajectory.
void attach_envelope(Trajectory& traj, const DecayEnvelope& env);

}  // namespace bdkin

#endif  // BDKIN_DYNAMICS_HPP_
