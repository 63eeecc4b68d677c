#include "bdkin/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdkin {

namespace {
constexpr double kTiny = std::numeric_limits<double>::min();

double xlogx(double x) { return x > 0 ? x * std::log(x) : 0.0; }
}  // namespace

ClusterState::ClusterState(Vector concentrations) : c(std::move(concentrations)) {
  if ((c < 0).any()) throw ValidationError("ClusterState: concentrations must be nonnegative");
  mass = bdkin::mass(c);
}

bool ClusterState::mass_cache_consistent(double rel) const {
  const double m = bdkin::mass(c);
  return std::abs(m - mass) <= rel * std::max(1.0, std::abs(m));
}

double WeightPair::mu_tail_after(Index k) const {
  if (k < 0 || k > size()) throw ValidationError("mu_tail_after: k out of range");
  double s = mu_tail;
  for (Index i = size() - 1; i >= k; --i) s += mu[i];
  return s;
}

bool WeightPair::normalized(double tol) const {
  return std::abs(mu.sum() + mu_tail - 1.0) <= tol && (mu > 0).all() && (nu > 0).all();
}

double mass(const Vector& c) {
  double s = 0;
  for (Index i = 0; i < c.size(); ++i) s += static_cast<double>(i + 1) * c[i];
  return s;
}

double moment(const Vector& c, double beta) {
  if (!(beta >= 0)) throw ValidationError("moment: beta must be nonnegative");
  double s = 0;
  for (Index i = 0; i < c.size(); ++i) s += std::pow(static_cast<double>(i + 1), beta) * c[i];
  return s;
}

double exp_moment(const Vector& c, double mu) {
  if (!(mu > 0)) throw ValidationError("exp_moment: mu must be positive");
  const double n = static_cast<double>(c.size());
  if (mu * n > 690.0)
    throw NumericError("exp_moment: e^{mu i} overflows at this truncation; reduce mu or N");
  double s = 0;
  for (Index i = 0; i < c.size(); ++i) s += std::exp(mu * static_cast<double>(i + 1)) * c[i];
  return s;
}

double relative_free_energy(const Vector& c, const CoefficientModel& model, double z_bar) {
  if (!(z_bar > 0) || !(z_bar < model.zs()))
    throw ValidationError("relative_free_energy: z_bar must lie in (0, z_s)");
  if ((c < 0).any()) throw ValidationError("relative_free_energy: negative concentration");
  const double logz = std::log(z_bar);
  double h = 0;
  for (Index i = 1; i <= c.size(); ++i) {
    const double ci = c[i - 1];
    const double log_qb = model.log_q(i) + static_cast<double>(i) * logz;
    const double qb = std::exp(log_qb);
    // Qb * phi(c/Qb) = c (log c - log Qb) - c + Qb, with 0 log 0 = 0.
    h += (ci > 0 ? ci * (std::log(ci) - log_qb) - ci : 0.0) + qb;
  }
  h += equilibrium_profile_tail(model, z_bar, c.size());
  return h;
}

double relative_free_energy(const Vector& c, const CoefficientModel& model,
                            const EquilibriumInfo& eq) {
  return relative_free_energy(c, model, eq.z_bar);
}

double dissipation(const Vector& c, const CoefficientModel& model) {
  if (c.size() < 2) throw ValidationError("dissipation: state needs at least two entries");
  if ((c <= 0).any())
    throw ZeroConcentrationError("dissipation: requires strictly positive concentrations");
  const double c1 = c[0];
  double d = 0;
  for (Index i = 1; i < c.size(); ++i) {
    const double flux = model.a(i) * (c1 * c[i - 1] - model.q_ratio(i) * c[i]);
    const double logdiff =
        std::log(c1 * c[i - 1]) - std::log(c[i]) + (model.log_q(i + 1) - model.log_q(i));
    d += flux * logdiff;
  }
  return d;
}

double lower_dissipation(const Vector& c, const CoefficientModel& model) {
  if (c.size() < 2) throw ValidationError("lower_dissipation: state needs at least two entries");
  if ((c < 0).any()) throw ValidationError("lower_dissipation: negative concentration");
  const double c1 = c[0];
  double d = 0;
  for (Index i = 1; i < c.size(); ++i) {
    const double x = c1 * c[i - 1];
    const double y = model.q_ratio(i) * c[i];
    const double s = std::sqrt(x) - std::sqrt(y);  // squared form keeps terms nonnegative
    d += model.a(i) * s * s;
  }
  return d;
}

double lower_dissipation_at(const Vector& c, const CoefficientModel& model, double z) {
  if (!(z > 0)) throw ValidationError("lower_dissipation_at: z must be positive");
  const double c1 = c[0];
  const double logz = std::log(z);
  double d = 0;
  for (Index i = 1; i < c.size(); ++i) {
    const double log_qi = model.log_q(i) + static_cast<double>(i) * logz;
    const double log_qi1 = model.log_q(i + 1) + static_cast<double>(i + 1) * logz;
    const double qz1 = z;  // (Q_z)_1 = z
    const double x = c1 * c[i - 1] / (std::exp(log_qi) * qz1);
    const double y = c[i] / std::exp(log_qi1);
    const double s = std::sqrt(x) - std::sqrt(y);
    d += model.a(i) * std::exp(log_qi) * qz1 * s * s;
  }
  return d;
}

double lower_dissipation_power(const Vector& c, const CoefficientModel& model, double beta) {
  const double c1 = c[0];
  double d = 0;
  for (Index i = 1; i < c.size(); ++i) {
    const double x = c1 * c[i - 1];
    const double y = model.q_ratio(i) * c[i];
    const double s = std::sqrt(x) - std::sqrt(y);
    d += std::pow(static_cast<double>(i), beta) * s * s;
  }
  return d;
}

double entropy(const Vector& mu, const Vector& g) {
  if (mu.size() != g.size()) throw ValidationError("entropy: size mismatch");
  if (std::abs(mu.sum() - 1.0) > 1e-8) throw ValidationError("entropy: mu is not normalized");
  if ((g < 0).any()) throw ValidationError("entropy: g must be nonnegative");
  const double avg = (mu * g).sum();
  if (!(avg > 0)) return 0.0;
  double e = 0;
  for (Index i = 0; i < g.size(); ++i)
    if (g[i] > 0) e += mu[i] * g[i] * std::log(g[i] / avg);
  return e;
}

double weighted_mean(const WeightPair& w, const Vector& f) {
  double s = 0;
  const Index n = std::min<Index>(w.size(), f.size());
  for (Index i = 0; i < n; ++i) s += w.mu[i] * f[i];
  return s;  // f = 0 on the tail
}

double weighted_l2_sq(const WeightPair& w, const Vector& f) {
  double s = 0;
  const Index n = std::min<Index>(w.size(), f.size());
  for (Index i = 0; i < n; ++i) s += w.mu[i] * f[i] * f[i];
  return s;
}

double entropy_sq_translated(const WeightPair& w, const Vector& f, double alpha) {
  if (f.size() > w.size())
    throw ValidationError("entropy_sq_translated: f support exceeds weight range");
  const double mean = weighted_mean(w, f) + alpha;
  // Centered form: f_i + alpha = mean * (1 + u_i) when |mean| dominates.
  if (std::abs(mean) > 32.0 * (f.abs().maxCoeff() + kTiny)) {
    const double s = mean;
    const double fbar = weighted_mean(w, f);
    double acc = 0;  // sum mu (1+u)^2 * 2 log1p(u)
    double norm = 0;
    for (Index i = 0; i < w.size(); ++i) {
      const double fi = i < f.size() ? f[i] : 0.0;
      const double u = (fi - fbar) / s;
      const double one_u = 1.0 + u;
      norm += w.mu[i] * one_u * one_u;
      acc += w.mu[i] * (one_u * one_u) * 2.0 * std::log1p(u);
    }
    {  // analytic tail: f = 0 there, u = -fbar/s constant
      const double u = -fbar / s;
      const double one_u = 1.0 + u;
      norm += w.mu_tail * one_u * one_u;
      acc += w.mu_tail * one_u * one_u * 2.0 * std::log1p(u);
    }
    return s * s * (acc - norm * std::log(norm));
  }
  // Direct evaluation.
  double avg = 0;
  for (Index i = 0; i < w.size(); ++i) {
    const double v = (i < f.size() ? f[i] : 0.0) + alpha;
    avg += w.mu[i] * v * v;
  }
  avg += w.mu_tail * alpha * alpha;
  double e = 0;
  for (Index i = 0; i < w.size(); ++i) {
    const double v = (i < f.size() ? f[i] : 0.0) + alpha;
    e += w.mu[i] * xlogx(v * v);
  }
  e += w.mu_tail * xlogx(alpha * alpha);
  return e - xlogx(avg);
}

double psi(double x) {
  x = std::abs(x);
  return x * std::log1p(x);
}

double phi_young(double x) { return psi(x * x); }

double psi_inv(double t) {
  if (!(t > 0)) throw ValidationError("psi_inv: argument must be positive");
  double lo = 0.0, hi = 1.0;
  if (t >= 1.5) {
    lo = t / (3.0 * std::log(t));
    hi = 2.0 * t / std::log(t);
  } else {
    while (psi(hi) < t) hi *= 2.0;
  }
  // Safeguarded Newton inside the bracket.
  double y = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double r = psi(y) - t;
    if (std::abs(r) <= 1e-13 * std::max(1.0, t)) break;
    if (r > 0)
      hi = y;
    else
      lo = y;
    const double dpsi = std::log1p(y) + y / (1.0 + y);
    double next = y - r / dpsi;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    y = next;
  }
  if (std::abs(psi(y) - t) > 1e-12 * std::max(1.0, t))
    throw NumericError("psi_inv: residual above tolerance");
  return y;
}

namespace {

double young(double x, YoungFunction y) { return y == YoungFunction::Psi ? psi(x) : phi_young(x); }

double young_inv(double t, YoungFunction y) {
  const double p = psi_inv(t);
  return y == YoungFunction::Psi ? p : std::sqrt(p);
}

}  // namespace

double orlicz_norm(const WeightPair& w, const Vector& f, YoungFunction yf) {
  if (f.size() > w.size()) throw ValidationError("orlicz_norm: f support exceeds weight range");
  const double fmax = f.size() ? f.abs().maxCoeff() : 0.0;
  if (fmax == 0.0) return 0.0;
  auto constraint = [&](double k) {
    double s = 0;
    for (Index i = 0; i < f.size(); ++i) s += w.mu[i] * young(std::abs(f[i]) / k, yf);
    return s;  // tail has f = 0
  };
  const double mu_min = w.mu.minCoeff();
  double hi = fmax / young_inv(1.0 / std::max(mu_min, kTiny), yf);
  hi = std::max(hi, fmax * 1e-6);
  while (constraint(hi) > 1.0) hi *= 2.0;
  double lo = fmax * 1e-6;
  while (lo > 0 && constraint(lo) <= 1.0) lo *= 0.5;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (constraint(mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
    if (hi - lo <= 1e-10 * hi) break;
  }
  return hi;  // smallest k with sum <= 1 up to tolerance
}

double sup_translate_entropy(const WeightPair& w, const Vector& f) {
  const double fmax = f.size() ? f.abs().maxCoeff() : 0.0;
  const double fbar = weighted_mean(w, f);
  double var = weighted_l2_sq(w, f) - fbar * fbar;
  var = std::max(var, 0.0);
  const double asymptote = 2.0 * var;
  if (fmax == 0.0) return 0.0;

  const double a_lim = 10.0 * fmax;
  const int grid_n = 512;
  double best = -std::numeric_limits<double>::infinity();
  double best_alpha = 0;
  for (int k = 0; k <= grid_n; ++k) {
    const double alpha = -a_lim + 2.0 * a_lim * k / grid_n;
    const double v = entropy_sq_translated(w, f, alpha);
    if (v > best) {
      best = v;
      best_alpha = alpha;
    }
  }
  // Golden-section refinement around the best grid point.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = best_alpha - 2.0 * a_lim / grid_n, b = best_alpha + 2.0 * a_lim / grid_n;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = entropy_sq_translated(w, f, x1), f2 = entropy_sq_translated(w, f, x2);
  while (b - a > 1e-10 * std::max(1.0, a_lim)) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = entropy_sq_translated(w, f, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = entropy_sq_translated(w, f, x1);
    }
  }
  best = std::max(best, std::max(f1, f2));
  return std::max(best, asymptote);
}

}  // namespace bdkin
