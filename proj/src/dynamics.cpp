#include "bdkin/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace bdkin {

namespace {

struct BDRates {
  Vector a;  // a_1..a_{N-1} (flux index)
  Vector b;  // b_2..b_N aligned with a
  explicit BDRates(const CoefficientModel& m, Index n) : a(n - 1), b(n - 1) {
    for (Index i = 1; i < n; ++i) {
      a[i - 1] = m.a(i);
      b[i - 1] = m.b(i + 1);
    }
  }
};

void bd_rhs_cached(const Vector& c, const BDRates& r, Vector& dc) {
  const Index n = c.size();
  const double c1 = c[0];
  dc.setZero();
  double flux_sum = 0;
  double w_prev = 0;
  for (Index i = 1; i < n; ++i) {
    const double w = r.a[i - 1] * c1 * c[i - 1] - r.b[i - 1] * c[i];
    flux_sum += w;
    dc[i - 1] += (i >= 2 ? w_prev : 0.0);
    dc[i - 1] -= w;
    w_prev = w;
  }
  dc[n - 1] += w_prev;      // dc_N = W_{N-1} (W_N := 0)
  dc[0] += -flux_sum;       // dc_1 = -W_1 - sum_k W_k; the -W_1 entered the loop
}

// Dormand-Prince 5(4) tableau.
struct DP45 {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
};

// One embedded step; k1 must hold rhs(y). On return y_new and err_rms are set
// and k7 holds rhs(y_new) for FSAL reuse.
template <typename Rhs>
void dp45_step(Rhs&& rhs, const Vector& y, const Vector& k1, double dt, Vector& y_new,
               double& err_rms, Vector& k7, std::array<Vector, 6>& work, double rel_tol,
               double abs_tol) {
  Vector& k2 = work[0];
  Vector& k3 = work[1];
  Vector& k4 = work[2];
  Vector& k5 = work[3];
  Vector& k6 = work[4];
  Vector& tmp = work[5];

  tmp = y + dt * (DP45::a21 * k1);
  rhs(tmp, k2);
  tmp = y + dt * (DP45::a31 * k1 + DP45::a32 * k2);
  rhs(tmp, k3);
  tmp = y + dt * (DP45::a41 * k1 + DP45::a42 * k2 + DP45::a43 * k3);
  rhs(tmp, k4);
  tmp = y + dt * (DP45::a51 * k1 + DP45::a52 * k2 + DP45::a53 * k3 + DP45::a54 * k4);
  rhs(tmp, k5);
  tmp = y + dt * (DP45::a61 * k1 + DP45::a62 * k2 + DP45::a63 * k3 + DP45::a64 * k4 +
                  DP45::a65 * k5);
  rhs(tmp, k6);
  y_new = y + dt * (DP45::b1 * k1 + DP45::b3 * k3 + DP45::b4 * k4 + DP45::b5 * k5 + DP45::b6 * k6);
  rhs(y_new, k7);
  tmp = dt * (DP45::e1 * k1 + DP45::e3 * k3 + DP45::e4 * k4 + DP45::e5 * k5 + DP45::e6 * k6 +
              DP45::e7 * k7);
  double acc = 0;
  for (Index i = 0; i < y.size(); ++i) {
    const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
    const double e = tmp[i] / scale;
    acc += e * e;
  }
  err_rms = std::sqrt(acc / static_cast<double>(y.size()));
}

struct StepControl {
  double err_prev = 1e-4;
  bool just_rejected = false;
  double next(double dt, double err) {
    const double fac =
        0.9 * std::pow(std::max(err, 1e-10), -0.14) * std::pow(err_prev, 0.08);
    const double facmax = just_rejected ? 1.0 : 5.0;
    err_prev = std::max(err, 1e-10);
    just_rejected = false;
    return dt * std::clamp(fac, 0.2, facmax);
  }
  double reject(double dt, double err) {
    just_rejected = true;
    return dt * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
  }
};

template <typename Rhs>
double initial_dt(Rhs&& rhs, const Vector& y0, double t_end, double rel_tol, double abs_tol) {
  Vector f0(y0.size());
  rhs(y0, f0);
  double d0 = 0, d1 = 0;
  for (Index i = 0; i < y0.size(); ++i) {
    const double s = abs_tol + rel_tol * std::abs(y0[i]);
    d0 += (y0[i] / s) * (y0[i] / s);
    d1 += (f0[i] / s) * (f0[i] / s);
  }
  d0 = std::sqrt(d0);
  d1 = std::sqrt(d1);
  double dt = (d1 > 1e-12 * d0) ? 0.01 * d0 / d1 : 1e-6 * t_end;
  return std::clamp(dt, 1e-12, 0.1 * t_end);
}

}  // namespace

Vector bd_rhs(const Vector& c, const CoefficientModel& model) {
  if (c.size() < 2) throw ValidationError("bd_rhs: state needs at least two entries");
  BDRates rates(model, c.size());
  Vector dc(c.size());
  bd_rhs_cached(c, rates, dc);
  return dc;
}

Trajectory integrate_bd(const CoefficientModel& model, Vector c0, const IntegrateOptions& opts) {
  if (c0.size() < 2) throw ValidationError("integrate_bd: state needs at least two entries");
  if (opts.positivity_floor > 0) c0 = c0.max(opts.positivity_floor);
  if ((c0 < 0).any()) throw ValidationError("integrate_bd: negative initial concentration");

  Trajectory out;
  out.mass0 = mass(c0);
  out.rho = out.mass0;
  out.gamma = model.gamma();

  bool have_eq = false;
  EquilibriumInfo eq;
  try {
    eq = equilibrium_monomer_density(model, out.mass0);
    out.z_bar = eq.z_bar;
    out.zs = eq.zs;
    have_eq = true;
  } catch (const SupercriticalMassError&) {
    out.flags.push_back("supercritical-mass");
    out.zs = model.zs_known() ? model.zs() : 0;
  }

  const Index n = c0.size();
  BDRates rates(model, n);
  auto rhs = [&](const Vector& y, Vector& dy) { bd_rhs_cached(y, rates, dy); };

  auto diagnose = [&](double t, const Vector& y) {
    TrajectorySample s;
    s.t = t;
    s.c1 = y[0];
    s.mass = mass(y);
    if (opts.diagnostics) {
      if (have_eq) s.H_rel = relative_free_energy(y, model, eq.z_bar);
      s.D_lower = lower_dissipation(y, model);
      if ((y > 0).all()) s.D = dissipation(y, model);
      if (opts.exp_mu > 0) {
        try {
          s.M_beta = exp_moment(y, opts.exp_mu);
        } catch (const NumericError&) {
          s.M_beta = std::numeric_limits<double>::quiet_NaN();
        }
      } else if (opts.moment_beta > 0) {
        s.M_beta = moment(y, opts.moment_beta);
      }
    }
    return s;
  };

  Vector y = c0, y_new(n), k1(n), k7(n);
  std::array<Vector, 6> work;
  for (auto& w : work) w.resize(n);

  double t = 0;
  rhs(y, k1);
  double dt = initial_dt(rhs, y, opts.t_end, opts.rel_tol, opts.abs_tol);
  StepControl ctl;

  out.samples.push_back(diagnose(0.0, y));
  double next_grid = opts.cadence;
  double t_prev = 0;
  Vector y_prev = y;

  while (t < opts.t_end) {
    dt = std::min(dt, opts.t_end - t);
    double err = 0;
    dp45_step(rhs, y, k1, dt, y_new, err, k7, work, opts.rel_tol, opts.abs_tol);
    const bool negative = (y_new < 0).any();
    if (negative) {
      ++out.rejected;
      ctl.just_rejected = true;
      dt *= 0.5;
    } else if (err > 1.0) {
      ++out.rejected;
      dt = ctl.reject(dt, err);
    } else {
      t_prev = t;
      y_prev.swap(y);
      t += dt;
      y.swap(y_new);
      k1.swap(k7);  // FSAL
      ++out.steps;
      const double m = mass(y);
      out.mass_drift = std::max(out.mass_drift, std::abs(m - out.mass0) / out.mass0);
      while (next_grid <= t + 1e-12 * opts.t_end) {
        const bool prev_closer =
            std::abs(t_prev - next_grid) < std::abs(t - next_grid) &&
            t_prev > out.samples.back().t;
        const double ts = prev_closer ? t_prev : t;
        if (ts > out.samples.back().t)
          out.samples.push_back(diagnose(ts, prev_closer ? y_prev : y));
        next_grid += opts.cadence;
      }
      dt = ctl.next(dt, err);
      continue;
    }
    if (dt < opts.dt_min) {
      out.flags.push_back("dt-underflow");
      out.completed = false;
      break;
    }
  }
  if (out.completed && out.samples.back().t < t) out.samples.push_back(diagnose(t, y));
  out.final_state = std::move(y);
  return out;
}

// --- CF kernel and system ----------------------------------------------------

CFKernel CFKernel::power(const CoefficientModel& qmodel, double gamma, double eta) {
  if (!(eta <= gamma)) throw ValidationError("CFKernel: eta must not exceed gamma");
  if (!(gamma + eta >= 0 && gamma + eta <= 1))
    throw ValidationError("CFKernel: gamma + eta must lie in [0,1]");
  CFKernel k;
  k.kind_ = Kind::Power;
  k.gamma_ = gamma;
  k.eta_ = eta;
  k.qmodel_ = &qmodel;
  return k;
}

CFKernel CFKernel::bd_embedding(const CoefficientModel& model) {
  CFKernel k;
  k.kind_ = Kind::BDEmbedding;
  k.gamma_ = model.gamma();
  k.eta_ = 0;
  k.qmodel_ = &model;
  return k;
}

CFKernel CFKernel::custom(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
    throw ValidationError("CFKernel: rate tables must be square and equally sized");
  if (!a.isApprox(a.transpose(), 1e-12) || !b.isApprox(b.transpose(), 1e-12))
    throw ValidationError("CFKernel: rate tables must be symmetric");
  if ((a.array() < 0).any() || (b.array() < 0).any())
    throw ValidationError("CFKernel: rate tables must be nonnegative");
  CFKernel k;
  k.kind_ = Kind::Custom;
  k.a_table_ = std::move(a);
  k.b_table_ = std::move(b);
  return k;
}

double CFKernel::a(Index i, Index j) const {
  if (kind_ == Kind::Power) {
    const double di = static_cast<double>(i), dj = static_cast<double>(j);
    return std::pow(di, gamma_) * std::pow(dj, eta_) + std::pow(di, eta_) * std::pow(dj, gamma_);
  }
  if (kind_ == Kind::Custom) {
    if (i > a_table_.rows() || j > a_table_.cols())
      throw ValidationError("CFKernel: index beyond custom table");
    return a_table_(i - 1, j - 1);
  }
  if (i > j) std::swap(i, j);
  if (i != 1) return 0.0;
  if (j == 1) return 2.0 * qmodel_->a(1);
  return qmodel_->a(j);
}

double CFKernel::b(Index i, Index j) const {
  if (kind_ == Kind::Power)
    return a(i, j) * std::exp(qmodel_->log_q(i) + qmodel_->log_q(j) - qmodel_->log_q(i + j));
  if (kind_ == Kind::Custom) {
    if (i > b_table_.rows() || j > b_table_.cols())
      throw ValidationError("CFKernel: index beyond custom table");
    return b_table_(i - 1, j - 1);
  }
  if (i > j) std::swap(i, j);
  if (i != 1) return 0.0;
  if (j == 1) return 2.0 * qmodel_->b(2);
  return qmodel_->b(j + 1);
}

namespace {

// Flattened upper-triangle cache of a_{ij} and the detailed-balance factor.
struct CFRates {
  Index n;
  std::vector<double> a, db;  // indexed by pair_index(u, v), u <= v, u+v <= n
  static std::size_t pair_count(Index n) {
    std::size_t c = 0;
    for (Index u = 1; 2 * u <= n; ++u) c += static_cast<std::size_t>(n - 2 * u + 1);
    return c;
  }
  explicit CFRates(const CFKernel& k, Index n_) : n(n_) {
    a.reserve(pair_count(n));
    db.reserve(pair_count(n));
    for (Index u = 1; 2 * u <= n; ++u)
      for (Index v = u; u + v <= n; ++v) {
        const double auv = k.a(u, v);
        a.push_back(auv);
        db.push_back(auv > 0 ? k.b(u, v) / auv : 0.0);
      }
  }
};

void cf_rhs_cached(const Vector& c, const CFRates& r, Vector& dc) {
  dc.setZero();
  std::size_t p = 0;
  for (Index u = 1; 2 * u <= r.n; ++u) {
    const double cu = c[u - 1];
    for (Index v = u; u + v <= r.n; ++v, ++p) {
      const double auv = r.a[p];
      if (auv == 0) continue;
      const double w = auv * (cu * c[v - 1] - r.db[p] * c[u + v - 1]);
      if (u == v) {
        dc[2 * u - 1] += 0.5 * w;
        dc[u - 1] -= w;
      } else {
        dc[u + v - 1] += w;
        dc[u - 1] -= w;
        dc[v - 1] -= w;
      }
    }
  }
}

}  // namespace

Vector cf_rhs(const Vector& c, const CFKernel& kernel) {
  if (c.size() < 2) throw ValidationError("cf_rhs: state needs at least two entries");
  CFRates rates(kernel, c.size());
  Vector dc(c.size());
  cf_rhs_cached(c, rates, dc);
  return dc;
}

double cf_moment_bound(double mk0, double rho, double k, double lambda, double t) {
  const double growth = (std::pow(2.0, k) - 2.0);
  if (lambda >= 1.0) return mk0 * std::exp(2.0 * growth * rho * t);
  const double p = (1.0 - lambda) / (k - 1.0);
  const double base = std::pow(mk0, p) + p * growth * std::pow(rho, (k - lambda) / (k - 1.0)) * t;
  return std::pow(base, 1.0 / p);
}

CFTrajectory integrate_cf(const CFKernel& kernel, Vector c0, const CFOptions& opts) {
  if (c0.size() < 2) throw ValidationError("integrate_cf: state needs at least two entries");
  if ((c0 < 0).any()) throw ValidationError("integrate_cf: negative initial concentration");
  const Index n = c0.size();
  CFRates rates(kernel, n);
  auto rhs = [&](const Vector& y, Vector& dy) { cf_rhs_cached(y, rates, dy); };

  CFTrajectory out;
  out.mass0 = mass(c0);
  out.lambda = kernel.gamma() + kernel.eta();
  const double mk0 = moment(c0, opts.moment_k);

  auto diagnose = [&](double t, const Vector& y) {
    TrajectorySample s;
    s.t = t;
    s.c1 = y[0];
    s.mass = mass(y);
    if (opts.diagnostics) s.M_beta = moment(y, opts.moment_k);
    return s;
  };
  const bool certified = kernel.certified_moment_bound();
  if (!certified) out.flags.push_back("no-certified-moment-bound");
  auto push = [&](double t, const Vector& y) {
    out.samples.push_back(diagnose(t, y));
    if (!certified) {
      out.moment_bound.push_back(std::numeric_limits<double>::quiet_NaN());
      return;
    }
    const double bound = cf_moment_bound(mk0, out.mass0, opts.moment_k, out.lambda, t);
    out.moment_bound.push_back(bound);
    if (opts.diagnostics && out.samples.back().M_beta > bound * (1.0 + 1e-6)) {
      out.bound_violated = true;
    }
  };

  Vector y = c0, y_new(n), k1(n), k7(n);
  std::array<Vector, 6> work;
  for (auto& w : work) w.resize(n);
  double t = 0;
  rhs(y, k1);
  double dt = initial_dt(rhs, y, opts.t_end, opts.rel_tol, opts.abs_tol);
  StepControl ctl;
  push(0.0, y);
  double next_grid = opts.cadence;
  double t_prev = 0;
  Vector y_prev = y;

  while (t < opts.t_end) {
    dt = std::min(dt, opts.t_end - t);
    double err = 0;
    dp45_step(rhs, y, k1, dt, y_new, err, k7, work, opts.rel_tol, opts.abs_tol);
    if ((y_new < 0).any()) {
      ++out.rejected;
      ctl.just_rejected = true;
      dt *= 0.5;
    } else if (err > 1.0) {
      ++out.rejected;
      dt = ctl.reject(dt, err);
    } else {
      t_prev = t;
      y_prev.swap(y);
      t += dt;
      y.swap(y_new);
      k1.swap(k7);
      ++out.steps;
      const double m = mass(y);
      out.mass_drift = std::max(out.mass_drift, std::abs(m - out.mass0) / out.mass0);
      while (next_grid <= t + 1e-12 * opts.t_end) {
        const bool prev_closer = std::abs(t_prev - next_grid) < std::abs(t - next_grid) &&
                                 t_prev > out.samples.back().t;
        const double ts = prev_closer ? t_prev : t;
        if (ts > out.samples.back().t) push(ts, prev_closer ? y_prev : y);
        next_grid += opts.cadence;
      }
      dt = ctl.next(dt, err);
      continue;
    }
    if (dt < opts.dt_min) {
      out.flags.push_back("dt-underflow");
      out.completed = false;
      break;
    }
  }
  if (out.completed && out.samples.back().t < t) push(t, y);
  out.final_state = std::move(y);
  if (out.bound_violated) out.flags.push_back("moment-bound-violated");
  return out;
}

// --- decay envelopes --------------------------------------------------------

DecayEnvelope decay_envelope(DecayEnvelope::Kind kind, double H0, const CercignaniReport& r) {
  if (!(r.epsilon > 0)) throw ValidationError("decay_envelope: epsilon must be positive");
  DecayEnvelope env;
  env.kind = kind;
  env.H0 = H0;
  env.epsilon = r.epsilon;
  env.gamma = r.gamma;
  switch (kind) {
    case DecayEnvelope::Kind::Exponential: {
      if (!(r.K > 0)) throw ValidationError("decay_envelope: K must be positive");
      env.K = r.K;
      env.threshold = r.epsilon / r.K;
      env.t0 = std::max(0.0, (H0 - env.threshold) / r.epsilon);
      env.C = env.t0 > 0
                  ? (r.epsilon / r.K) * std::exp(r.K * (H0 - r.epsilon / r.K) / r.epsilon)
                  : H0;
      break;
    }
    case DecayEnvelope::Kind::Algebraic: {
      if (!(r.K > 0)) throw ValidationError("decay_envelope: K must be positive");
      if (!(r.beta > 1)) throw ValidationError("decay_envelope: beta must exceed 1");
      env.K = r.K;
      env.beta = r.beta;
      const double p = (r.beta - 1.0) / (r.beta - r.gamma);
      env.threshold = std::pow(r.epsilon / r.K, p);
      env.t0 = std::max(0.0, (H0 - env.threshold) / r.epsilon);
      const double slope = (1.0 - r.gamma) / (r.beta - 1.0) * r.K;
      const double hstar = std::min(H0, env.threshold);
      env.C = std::pow(hstar, -(1.0 - r.gamma) / (r.beta - 1.0)) - slope * env.t0;
      break;
    }
    case DecayEnvelope::Kind::StretchedExp: {
      if (!(r.K1 > 0 && r.K2 > 0))
        throw ValidationError("decay_envelope: stretched envelope needs K1, K2");
      env.K1 = r.K1;
      env.K2 = r.K2;
      // Threshold where the sublinear branch meets epsilon.
      auto branch = [&](double h) {
        return r.K1 * h / std::pow(-std::log(r.K2 * h), 1.0 - r.gamma);
      };
      double lo = 0, hi = (1.0 - 1e-12) / r.K2;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (branch(mid) < r.epsilon ? lo : hi) = mid;
      }
      env.threshold = lo;
      env.t0 = std::max(0.0, (H0 - env.threshold) / r.epsilon);
      const double hstar = std::min(H0, env.threshold);
      const double u0 = -std::log(r.K2 * hstar);
      const double p = 1.0 / (2.0 - r.gamma);
      env.K = std::pow(2.0, p - 1.0) * std::pow((2.0 - r.gamma) * r.K1, p);
      env.C = (1.0 / r.K2) * std::exp(-std::pow(2.0, p - 1.0) * u0);
      // Inflate C so the single-display form also covers the linear phase.
      for (int g = 0; g <= 64; ++g) {
        const double t = env.t0 * g / 64.0;
        const double lin = H0 - r.epsilon * t;
        env.C = std::max(env.C, lin * std::exp(env.K * std::pow(t, p)));
      }
      break;
    }
  }
  return env;
}

double DecayEnvelope::operator()(double t) const {
  if (H0 <= 0) return 0.0;
  if (t < t0) return H0 - epsilon * t;
  const double hstar = std::min(H0, threshold);
  const double s = t - t0;
  switch (kind) {
    case Kind::Exponential:
      return hstar * std::exp(-K * s);
    case Kind::Algebraic: {
      const double p = (1.0 - gamma) / (beta - 1.0);
      return std::pow(std::pow(hstar, -p) + p * K * s, -1.0 / p);
    }
    case Kind::StretchedExp: {
      const double u0 = -std::log(K2 * hstar);
      const double e = std::pow(std::pow(u0, 2.0 - gamma) + (2.0 - gamma) * K1 * s,
                                1.0 / (2.0 - gamma));
      return (1.0 / K2) * std::exp(-e);
    }
  }
  return 0.0;
}

void attach_envelope(Trajectory& traj, const DecayEnvelope& env) {
  for (auto& s : traj.samples) s.envelope = env(s.t);
}

// --- rate fitting -------------------------------------------------------------

namespace {

// Least squares y = a + b x; returns (a, b, rms residual).
std::array<double, 3> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw NumericError("fit_decay: degenerate abscissa");
  const double b = (n * sxy - sx * sy) / denom;
  const double a = (sy - b * sx) / n;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - a - b * x[i];
    rss += r * r;
  }
  return {a, b, std::sqrt(rss / n)};
}

}  // namespace

DecayFit fit_decay(const Trajectory& traj) {
  std::vector<double> t, logh;
  for (const auto& s : traj.samples)
    if (s.H_rel > 1e-13 && s.t > 0) {
      t.push_back(s.t);
      logh.push_back(std::log(s.H_rel));
    }
  if (t.size() < 10) throw ValidationError("fit_decay: need at least 10 usable samples");
  {
    double lo = *std::min_element(logh.begin(), logh.end());
    double hi = *std::max_element(logh.begin(), logh.end());
    if (hi - lo < 1e-10) throw ValidationError("fit_decay: series is constant");
  }
  DecayFit fit;
  {
    auto r = linear_fit(t, logh);
    fit.exp_log_c = r[0];
    fit.exp_rate = -r[1];
    fit.exp_residual = r[2];
  }
  {
    std::vector<double> lt(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) lt[i] = std::log(t[i]);
    auto r = linear_fit(lt, logh);
    fit.alg_log_c = r[0];
    fit.alg_exponent = -r[1];
    fit.alg_residual = r[2];
  }
  {
    const double p = 1.0 / (2.0 - traj.gamma);
    std::vector<double> tp(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) tp[i] = std::pow(t[i], p);
    auto r = linear_fit(tp, logh);
    fit.str_log_c = r[0];
    fit.str_rate = -r[1];
    fit.str_residual = r[2];
  }
  fit.best = DecayFit::Kind::Exponential;
  double best = fit.exp_residual;
  if (fit.alg_residual < best) {
    best = fit.alg_residual;
    fit.best = DecayFit::Kind::Algebraic;
  }
  if (fit.str_residual < best) fit.best = DecayFit::Kind::StretchedExp;
  return fit;
}

}  // namespace bdkin
