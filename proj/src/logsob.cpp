#include "bdkin/logsob.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdkin {

namespace {

constexpr double kE = 2.718281828459045235;

double xlogx_neg(double x) { return x > 0 ? -x * std::log(x) : 0.0; }

// sum_i a_i Q_i z^i streamed with a local-ratio tail estimate.
double rate_weighted_series(const CoefficientModel& model, double z, double rel_tol = 1e-14) {
  const double logz = std::log(z);
  double sum = 0, prev = 0;
  const Index cap = std::min<Index>(model.max_index(), 20'000'000);
  for (Index i = 1; i <= cap; ++i) {
    const double term = model.a(i) * std::exp(model.log_q(i) + static_cast<double>(i) * logz);
    sum += term;
    if (i > 8 && prev > 0 && term < prev) {
      const double q = term / prev;
      if (q < 1.0 && term * q / (1.0 - q) <= rel_tol * sum) return sum;
    }
    prev = term;
  }
  if (model.max_index() < cap)
    throw NumericError("rate_weighted_series: custom table exhausted before tail control");
  throw NumericError("rate_weighted_series: no convergence before iteration cap");
}

struct SupScan {
  double value = 0;
  Index argmax = 0;
  bool converged = false;
};

}  // namespace

WeightPair measures_from_state(const CoefficientModel& model, double c1, Index n) {
  if (!(c1 > 0) || !(c1 < model.zs()))
    throw ValidationError("measures_from_state: c1 must lie in (0, z_s)");
  if (n < 2) throw ValidationError("measures_from_state: n must be >= 2");
  n = std::min<Index>(n, model.max_index());

  const double logc = std::log(c1);
  Vector qt(n), aqt(n);
  for (Index i = 1; i <= n; ++i) {
    qt[i - 1] = std::exp(model.log_q(i) + static_cast<double>(i) * logc);
    aqt[i - 1] = model.a(i) * qt[i - 1];
  }
  // Extend the sums past n until the remainder is negligible, then close with
  // a geometric remainder at the local ratio.
  double mu_tail = 0, nu_tail = 0;
  {
    double tq = qt[n - 1], ta = aqt[n - 1];
    const Index cap = std::min<Index>(model.max_index(), n + 4'000'000);
    double sum_q = qt.sum(), sum_a = aqt.sum();
    for (Index i = n + 1; i <= cap; ++i) {
      const double q_i = std::exp(model.log_q(i) + static_cast<double>(i) * logc);
      const double a_i = model.a(i) * q_i;
      if (q_i == 0 && a_i == 0) break;  // underflow: the remaining tail is zero
      mu_tail += q_i;
      nu_tail += a_i;
      const double rq = q_i / tq, ra = a_i / ta;
      tq = q_i;
      ta = a_i;
      if (rq < 1 && ra < 1 && q_i / (1 - rq) <= 1e-18 * (sum_q + mu_tail) &&
          a_i / (1 - ra) <= 1e-18 * (sum_a + nu_tail)) {
        mu_tail += q_i * rq / (1 - rq);
        nu_tail += a_i * ra / (1 - ra);
        break;
      }
    }
  }
  // Trim trailing entries that underflowed to zero; they belong to the tail.
  Index nt = n;
  while (nt > 2 && !(qt[nt - 1] > 1e-290 && aqt[nt - 1] > 1e-290)) --nt;
  if (nt < n) {
    for (Index i = nt; i < n; ++i) {
      mu_tail += qt[i];
      nu_tail += aqt[i];
    }
    qt.conservativeResize(nt);
    aqt.conservativeResize(nt);
  }
  WeightPair w;
  const double zq = qt.sum() + mu_tail;
  const double za = aqt.sum() + nu_tail;
  w.mu = qt / zq;
  w.nu = aqt / za;
  w.mu_tail = mu_tail / zq;
  w.nu_tail = nu_tail / za;
  w.tail_ratio = c1 / model.zs();
  return w;
}

WeightPair measures_from_state(const CoefficientModel& model, double c1) {
  const double r = c1 / model.zs();
  if (!(r > 0 && r < 1)) throw ValidationError("measures_from_state: c1 must lie in (0, z_s)");
  const double L = -std::log(r);
  const Index k_tail = static_cast<Index>(std::ceil(32.3 / L)) + 4;   // mu tail < 1e-14
  const Index m_hat = static_cast<Index>(std::ceil(2.2 / L)) + 4;     // median overestimate
  Index n = 2 * std::max<Index>(10 * m_hat, k_tail) + 300;
  if (n > 5'000'000) throw NumericError("measures_from_state: c1 too close to z_s");
  n = std::min<Index>(n, model.max_index());
  return measures_from_state(model, c1, n);
}

Index approximate_median(const WeightPair& w) {
  double head = 0;
  for (Index m = 1; m <= w.size(); ++m) {
    const double tail = w.mu_tail_after(m);
    if (std::max(head, tail) < 2.0 / 3.0) return m;
    head += w.mu[m - 1];
  }
  throw NumericError("approximate_median: no median within stored range");
}

Index approximate_median(const Vector& mu) {
  WeightPair w;
  w.mu = mu;
  w.nu = Vector::Ones(mu.size());
  return approximate_median(w);
}

namespace {

// Shared sup-with-cutoff scan: terms evaluated exactly for k in [m, k_ext],
// where k_ext extends well past the policy cutoff k_max; the running max must
// be at least 50 indices old at the scan end to count as converged.
template <typename TermFn>
SupScan scan_sup(Index m, Index k_ext, TermFn&& term) {
  SupScan s;
  s.argmax = m;
  Index last_update = m;
  for (Index k = m; k <= k_ext; ++k) {
    const double t = term(k);
    if (t > s.value) {
      s.value = t;
      s.argmax = k;
      last_update = k;
    }
  }
  s.converged = last_update + 50 <= k_ext;
  return s;
}

}  // namespace

LogSobReport logsob_constants(const WeightPair& w) {
  if (!w.normalized(1e-9)) throw ValidationError("logsob_constants: weights not normalized");
  LogSobReport rep;
  rep.m = approximate_median(w);
  const Index n = w.size();

  // Suffix masses S_k = sum_{i>k} mu_i and prefix resistances T_k = sum_{i<=k} 1/nu_i.
  std::vector<double> suffix(static_cast<std::size_t>(n) + 1);
  suffix[static_cast<std::size_t>(n)] = w.mu_tail;
  for (Index k = n - 1; k >= 0; --k)
    suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k) + 1] + w.mu[k];
  std::vector<double> prefix_inv_nu(static_cast<std::size_t>(n) + 1, 0.0);
  for (Index k = 1; k <= n; ++k)
    prefix_inv_nu[static_cast<std::size_t>(k)] =
        prefix_inv_nu[static_cast<std::size_t>(k) - 1] + 1.0 / w.nu[k - 1];

  Index k_tail = n - 1;
  for (Index k = rep.m; k < n; ++k)
    if (suffix[static_cast<std::size_t>(k)] < 1e-14) {
      k_tail = k;
      break;
    }
  const Index k_max = std::min<Index>(std::max(10 * rep.m, k_tail), n - 1);
  // Scan everything stored; the policy cutoff only decides whether the stored
  // range was long enough to judge convergence at all.
  const Index k_ext = n - 1;
  if (k_ext < k_max + 50) rep.flags.push_back("sup-range-truncated");

  auto d_term = [&](Index k) {
    const double s = suffix[static_cast<std::size_t>(k)];
    if (!(s > 1e-300)) return 0.0;
    return xlogx_neg(s) * prefix_inv_nu[static_cast<std::size_t>(k)];
  };
  auto b_term = [&](Index k) {
    const double s = suffix[static_cast<std::size_t>(k)];
    if (!(s > 1e-300)) return 0.0;
    return prefix_inv_nu[static_cast<std::size_t>(k)] / psi_inv(1.0 / s);
  };
  const SupScan d_scan = scan_sup(rep.m, k_ext, d_term);
  const SupScan b_scan = scan_sup(rep.m, k_ext, b_term);
  rep.D1 = d_scan.value;
  rep.B1 = b_scan.value;
  rep.d_converged = d_scan.converged;
  rep.b_converged = b_scan.converged;
  if (!d_scan.converged) rep.flags.push_back("D1-lower-bound-only");
  if (!b_scan.converged) rep.flags.push_back("B1-lower-bound-only");

  if (rep.m > 1) {
    const double head = 1.0 - suffix[static_cast<std::size_t>(rep.m - 1)];
    const double t_head = prefix_inv_nu[static_cast<std::size_t>(rep.m - 1)];
    rep.D2 = xlogx_neg(head) * t_head;
    rep.B2 = head > 0 ? t_head / psi_inv(1.0 / head) : 0.0;
  }
  rep.lambda = std::min(120.0 * (rep.D2 + 4.0 * rep.D1), 40.0 * (rep.B2 + 4.0 * rep.B1));
  return rep;
}

HardyConstants hardy_constants(const WeightPair& w, Index m) {
  if (m < 1 || m > w.size()) throw ValidationError("hardy_constants: m out of range");
  HardyConstants h;
  const Index n = w.size();
  std::vector<double> suffix(static_cast<std::size_t>(n) + 1);
  suffix[static_cast<std::size_t>(n)] = w.mu_tail;
  for (Index k = n - 1; k >= 0; --k)
    suffix[static_cast<std::size_t>(k)] = suffix[static_cast<std::size_t>(k) + 1] + w.mu[k];

  // Tail constants.
  Index k_tail = n - 1;
  for (Index k = m; k < n; ++k)
    if (suffix[static_cast<std::size_t>(k)] < 1e-14) {
      k_tail = k;
      break;
    }
  const Index k_max = std::min<Index>(std::max(10 * m, k_tail), n - 1);
  const Index k_ext = n - 1;
  double resist = 0;  // sum_{i=m}^{k} 1/nu_i
  double b1m = 0, b1sup = 0;
  Index last_update = m;
  for (Index k = m; k <= k_ext; ++k) {
    resist += 1.0 / w.nu[k - 1];
    const double t1 = suffix[static_cast<std::size_t>(k) - 1] * resist;  // sum_{i>=k} mu
    const double t2 = suffix[static_cast<std::size_t>(k)] * resist;      // sum_{i>k} mu
    if (t1 > b1m) b1m = t1;
    if (t2 > b1sup) {
      b1sup = t2;
      last_update = k;
    }
  }
  h.b1m = b1m;
  h.b1sup = b1sup;
  h.converged = (last_update + 50 <= k_ext);
  (void)k_max;

  // Head constants (finite sums).
  if (m > 1) {
    std::vector<double> sigma(static_cast<std::size_t>(m) + 1, 0.0);  // sigma_j = sum_{i=j..m-1} 1/nu_i
    for (Index j = m - 1; j >= 1; --j)
      sigma[static_cast<std::size_t>(j)] = sigma[static_cast<std::size_t>(j) + 1] + 1.0 / w.nu[j - 1];
    double head = 0;
    for (Index i = 1; i <= m - 1; ++i) {
      h.b2m += w.mu[i - 1] * sigma[static_cast<std::size_t>(i)];
      head += w.mu[i - 1];
      h.b2m_lower = std::max(h.b2m_lower, head * sigma[static_cast<std::size_t>(i)]);
    }
  }
  return h;
}

// --- explicit log-Sobolev constant (gamma = 1 route) ----------------------

namespace {

double c_eta(double eta) {
  if (!(eta > 0 && eta < 1)) throw ValidationError("c_eta: eta must lie in (0,1)");
  double sup = 0;
  double runmax_age = 0;
  for (Index k = 3; k < 100000; ++k) {
    const double t = static_cast<double>(k) * (1.0 + std::log(static_cast<double>(k) / 2.0)) *
                     std::pow(eta, static_cast<double>(k) / 2.0);
    if (t > sup) {
      sup = t;
      runmax_age = 0;
    } else if (++runmax_age > 8 && t < 1e-12 * sup) {
      break;
    }
  }
  return 1.0 + sup + 2.0 * eta / (1.0 - eta);
}

double lambda_explicit(const CoefficientModel& model, double z_bar, double delta, double c1,
                       std::vector<std::string>* flags) {
  const double zs = model.zs();
  const double eta1 = std::max(z_bar + delta, c1) / zs;
  if (!(eta1 < 1)) throw ValidationError("lambda_explicit: window reaches z_s");
  bool tail_ok = true;
  const double s_alpha = model.sup_log_alpha_root(std::min<Index>(model.max_index(), 30000), &tail_ok);
  if (!tail_ok && flags) flags->push_back("sup-log-alpha-truncated");
  const double c = c_eta(eta1);
  const double one = 1.0 - eta1;
  return 120.0 * (c / kE) / (one * one * one) *
         (3.0 * eta1 + (1.0 + 2.0 * kE * eta1 * s_alpha + kE * eta1 * std::log(1.0 / one)));
}

// Operative inequality constant at a specific monomer density.
double k_at_c1(const CoefficientModel& model, const EquilibriumInfo& eq, double delta, double c1,
               double* lambda_out, std::vector<std::string>* flags) {
  const double lam = lambda_explicit(model, eq.z_bar, delta, c1, flags);
  const double z = equilibrium_series(model, 0.0, c1);
  const double za = rate_weighted_series(model, c1);
  if (lambda_out) *lambda_out = lam;
  return c1 * c1 * c1 * za / (lam * z * (c1 * c1 + 2.0 * eq.rho * z));
}

}  // namespace

double window_linear_constant(const CoefficientModel& model, double rho, double delta, int grid) {
  const EquilibriumInfo eq = equilibrium_monomer_density(model, rho);
  // Extend the grid below delta to the small-monomer threshold so trajectory
  // envelopes are covered on the whole range not already handled by the
  // uniform bounds.
  double lo = delta;
  try {
    lo = std::min(delta, 0.9 * uniform_bound_small_c1(model, rho, 1.0).first);
  } catch (const NumericError&) {
  }
  const double hi = eq.zs - delta;
  if (!(lo < hi)) throw ValidationError("window_linear_constant: empty window");
  double kmin = std::numeric_limits<double>::infinity();
  for (int g = 0; g <= grid; ++g) {
    const double c1 = lo + (hi - lo) * g / grid;
    kmin = std::min(kmin, k_at_c1(model, eq, delta, std::min(c1, hi * (1 - 1e-12)), nullptr, nullptr));
  }
  return kmin;
}

CercignaniReport cercignani_gamma1(const CoefficientModel& model, double rho, double delta,
                                   double c1) {
  if (!(model.gamma() == 1.0 || model.linear_rates()))
    throw ValidationError("cercignani_gamma1: model must have gamma = 1");
  if (!(delta > 0)) throw ValidationError("cercignani_gamma1: delta must be positive");
  const EquilibriumInfo eq = equilibrium_monomer_density(model, rho);
  if (!(c1 > delta && c1 < eq.zs - delta))
    throw ValidationError("cercignani_gamma1: c1 outside (delta, z_s - delta)");
  if (!(eq.z_bar + delta < eq.zs))
    throw ValidationError("cercignani_gamma1: z_bar + delta must stay below z_s");

  CercignaniReport rep;
  rep.regime = CercignaniReport::Regime::Gamma1;
  rep.rho = rho;
  rep.delta = delta;
  rep.c1 = c1;
  rep.gamma = 1.0;
  rep.exponent = 1.0;
  rep.K = k_at_c1(model, eq, delta, c1, &rep.lambda, &rep.flags);
  if (eq.rho_s_kind == MassKind::Finite) {
    const double zr = eq.zs + eq.rho_s;
    rep.K_closed = model.a(1) * eq.zs * eq.zs * c1 * c1 /
                   (rep.lambda * zr * (eq.zs * eq.zs + 2.0 * rho * zr));
  } else {
    rep.flags.push_back("rho-s-not-finite-closed-form-skipped");
  }

  const LogSobReport ls = logsob_constants(measures_from_state(model, c1));
  rep.m = ls.m;
  rep.D1 = ls.D1;
  rep.D2 = ls.D2;
  rep.B1 = ls.B1;
  rep.B2 = ls.B2;
  for (const auto& f : ls.flags) rep.flags.push_back(f);

  const double eps_small = uniform_bound_small_c1(model, rho, 1.0).second;
  const double eps_large = uniform_bound_large_c1(model, rho, delta);
  rep.epsilon = std::min(eps_small, eps_large);
  if (!model.alpha_non_increasing(std::min<Index>(model.max_index(), 10000)))
    rep.flags.push_back("hypothesis-violated");
  return rep;
}

CercignaniReport cercignani_gamma_lt1(const CoefficientModel& model, double rho, double delta,
                                      double beta, double M_beta) {
  const double gamma = model.gamma();
  if (!(gamma >= 0 && gamma < 1))
    throw ValidationError("cercignani_gamma_lt1: model must have gamma in [0,1)");
  if (!(beta > 1)) throw ValidationError("cercignani_gamma_lt1: beta must exceed 1");
  if (!(M_beta > 0)) throw ValidationError("cercignani_gamma_lt1: M_beta must be positive");

  const CoefficientModel companion = model.companion_linear();
  const double K1 = window_linear_constant(companion, rho, delta);

  CercignaniReport rep;
  rep.regime = CercignaniReport::Regime::GammaLt1;
  rep.rho = rho;
  rep.delta = delta;
  rep.gamma = gamma;
  rep.beta = beta;
  rep.M_beta = M_beta;
  rep.exponent = (beta - gamma) / (beta - 1.0);
  const EquilibriumInfo eq = equilibrium_monomer_density(model, rho);
  rep.c1 = eq.z_bar;

  bool tail_ok = true;
  const double s_ratio = model.sup_alpha_ratio(std::min<Index>(model.max_index(), 30000), &tail_ok);
  if (!tail_ok) rep.flags.push_back("sup-alpha-ratio-truncated");
  const double c_int = 2.0 * (eq.zs + eq.zs * s_ratio) * M_beta;
  rep.K = std::pow(std::pow(K1, (beta - gamma) / (1.0 - gamma)) / c_int,
                   (1.0 - gamma) / (beta - 1.0));
  rep.lambda = 0;  // backing constant lives in K1; report the companion pair constants
  {
    const LogSobReport ls = logsob_constants(measures_from_state(companion, eq.z_bar));
    rep.m = ls.m;
    rep.D1 = ls.D1;
    rep.D2 = ls.D2;
    rep.B1 = ls.B1;
    rep.B2 = ls.B2;
    rep.lambda = ls.lambda;
  }
  const double eps_small = uniform_bound_small_c1(model, rho, gamma, beta, M_beta).second;
  const double eps_large = uniform_bound_large_c1(model, rho, delta);
  rep.epsilon = std::min(eps_small, eps_large);
  if (!model.alpha_non_increasing(std::min<Index>(model.max_index(), 10000)))
    rep.flags.push_back("hypothesis-violated");
  return rep;
}

double uniform_bound_large_c1(const CoefficientModel& model, double rho, double delta) {
  const EquilibriumInfo eq = equilibrium_monomer_density(model, rho);
  if (!(eq.z_bar + delta < eq.zs))
    throw ValidationError("uniform_bound_large_c1: z_bar + delta must stay below z_s");
  const double x = eq.z_bar + 0.5 * delta;
  const double r1 = 0.5 * (x + eq.zs);
  const double c_ctrl = control_series_constant(model, x, r1);
  const double second_moment = equilibrium_series(model, 2.0, eq.z_bar) / eq.z_bar;
  const double c1_const = second_moment * delta / (2.0 * c_ctrl);
  const double inf_a = model.inf_a(std::min<Index>(model.max_index(), 100000));
  const double num = std::sqrt(eq.z_bar + delta) - std::sqrt(eq.z_bar + 0.5 * delta);
  return c1_const * inf_a * num * num / (eq.z_bar + 0.5 * delta);
}

double control_series_constant(const CoefficientModel& model, double x, double r1) {
  const double zs = model.zs();
  if (!(x > 0 && x < r1 && r1 < zs))
    throw ValidationError("control_series_constant: need 0 < x < r1 < z_s");
  // beta_i = Q_{i+1}/Q_i. For the built-in families beta_i <= 1/z_s < 1/r1
  // already, so any split index l works; keep a finite head block (larger C is
  // conservative downstream and widens the i0 range the bound covers).
  Index l = 64;
  double lambda1 = 1.0 / zs;
  double lambda2 = 0.0;
  if (model.family() == Family::Custom) {
    const Index scan = std::min<Index>(model.max_index() - 1, 100000);
    Index settle = 0;
    for (Index i = 1; i <= scan; ++i)
      if (1.0 / model.q_ratio(i) >= 1.0 / r1) settle = i;
    l = std::max<Index>(l, settle);
    double sup_tail = 0;
    for (Index i = l + 1; i <= scan; ++i) sup_tail = std::max(sup_tail, 1.0 / model.q_ratio(i));
    lambda1 = sup_tail > 0 ? sup_tail : 1.0 / zs;
    if (!(lambda1 * r1 < 1))
      throw NumericError("control_series_constant: Q ratios do not settle below 1/r1");
  }
  {
    const Index scan = std::min<Index>(model.max_index() - 1, l);
    for (Index i = 1; i <= scan; ++i) lambda2 = std::max(lambda2, 1.0 / model.q_ratio(i));
  }
  const double q1 = lambda1 * r1;
  double c = lambda1 * q1 / ((1 - q1) * (1 - q1));
  const double q2 = std::min(lambda2 * r1, 1.0 - 1e-9);
  for (Index j = 1; j <= l; ++j)
    c += lambda2 * static_cast<double>(j) * std::pow(q2, static_cast<double>(j));
  return c;
}

std::pair<double, double> uniform_bound_small_c1(const CoefficientModel& model, double rho,
                                                 double gamma, double beta, double M_beta) {
  if (!(rho > 0)) throw ValidationError("uniform_bound_small_c1: rho must be positive");
  const Index scan = std::min<Index>(model.max_index() - 1, 100000);
  const double q_lo = model.inf_q_ratio(scan);
  const double q_hi = model.sup_q_ratio(scan);
  double x = rho;
  if (gamma < 1.0) {
    if (!(beta > 1) || !(M_beta > 0))
      throw ValidationError("uniform_bound_small_c1: beta and M_beta required for gamma < 1");
    x = std::pow(rho, (beta - gamma) / (beta - 1.0)) /
        std::pow(M_beta, (1.0 - gamma) / (beta - 1.0));
  }
  const double target = q_lo * x / 4.0;
  if (!(target > 0)) throw NumericError("uniform_bound_small_c1: infeasible target");
  auto expr = [&](double d) { return 0.5 * q_lo * (x - d) - 2.0 * std::sqrt(d * q_hi) * rho; };
  double lo = 0.0, hi = 1e-6;
  while (expr(hi) >= target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (expr(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  const double delta1 = lo;
  if (!(delta1 > 0)) throw NumericError("uniform_bound_small_c1: no feasible delta_1");
  return {delta1, target};
}

CercignaniReport exp_regime(const CoefficientModel& model, double rho, double mu, double M_exp,
                            double gamma, double c1_window_delta) {
  if (!(mu > 0)) throw ValidationError("exp_regime: mu must be positive");
  if (!(gamma >= 0 && gamma < 1)) throw ValidationError("exp_regime: gamma must lie in [0,1)");
  const double four_log2 = 4.0 * std::log(2.0);
  CercignaniReport rep;
  rep.regime = CercignaniReport::Regime::ExpMoment;
  double mu_eff = mu;
  if (mu_eff >= four_log2) {
    mu_eff = four_log2 * (1.0 - 1e-9);
    rep.flags.push_back("mu-clamped-to-4log2");
  }
  rep.rho = rho;
  rep.gamma = gamma;
  rep.mu = mu_eff;
  rep.M_exp = M_exp;
  rep.delta = c1_window_delta;
  rep.exponent = 1.0;

  const CoefficientModel companion = model.companion_linear();
  const double K = window_linear_constant(companion, rho, c1_window_delta);
  rep.K = K;

  const EquilibriumInfo eq = equilibrium_monomer_density(model, rho);
  bool tail_ok = true;
  const double s_ratio = model.sup_alpha_ratio(std::min<Index>(model.max_index(), 30000), &tail_ok);
  if (!tail_ok) rep.flags.push_back("sup-alpha-ratio-truncated");
  const double flux_exp_bound = 2.0 * (eq.zs + eq.zs * s_ratio) * M_exp;

  rep.K1 = K * std::pow(mu_eff, 1.0 - gamma) / std::pow(2.0, 2.0 - gamma);
  rep.K2 = mu_eff * kE * K / (4.0 * flux_exp_bound);

  // Epsilon: large-c1 bound plus the small-c1 case with M_2 <= (2/(mu e))^2 M_exp.
  const double m2 = std::pow(2.0 / (mu_eff * kE), 2.0) * M_exp;
  const double eps_small = uniform_bound_small_c1(model, rho, gamma, 2.0, m2).second;
  const double eps_large = uniform_bound_large_c1(model, rho, c1_window_delta);
  rep.epsilon = std::min(eps_small, eps_large);
  rep.lambda = 0;
  if (!model.alpha_non_increasing(std::min<Index>(model.max_index(), 10000)))
    rep.flags.push_back("hypothesis-violated");
  return rep;
}

double CercignaniReport::bound(double H) const {
  if (!(H > 0)) return 0.0;
  switch (regime) {
    case Regime::Gamma1:
      return K * H;
    case Regime::GammaLt1:
      return K * std::pow(H, exponent);
    case Regime::SmallOrLargeC1:
      return epsilon;
    case Regime::ExpMoment: {
      if (K2 * H >= 1.0) return epsilon;
      const double core = K1 * H / std::pow(-std::log(K2 * H), 1.0 - gamma);
      return std::min(core, epsilon);
    }
  }
  return 0.0;
}

}  // namespace bdkin
