#include "bdkin/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bdkin {

namespace {
constexpr Index kUnboundedIndex = Index{1} << 46;
}

CoefficientModel CoefficientModel::power_law_pt(double gamma, double zs, double q, double mu) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("power_law_pt: gamma must lie in [0,1]");
  if (!(zs > 0)) throw ValidationError("power_law_pt: z_s must be positive");
  if (!(q > 0)) throw ValidationError("power_law_pt: q must be positive");
  if (!(mu > 0 && mu < 1)) throw ValidationError("power_law_pt: mu must lie in (0,1)");
  CoefficientModel m;
  m.family_ = Family::PowerLawPT;
  m.gamma_ = gamma;
  m.zs_param_ = zs;
  m.zs_ = zs;
  m.q_ = q;
  m.mu_ = mu;
  m.max_index_ = kUnboundedIndex;
  return m;
}

CoefficientModel CoefficientModel::power_law_cf(double gamma, double zs, double sigma, double mu) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("power_law_cf: gamma must lie in [0,1]");
  if (!(zs > 0)) throw ValidationError("power_law_cf: z_s must be positive");
  if (!(sigma >= 0)) throw ValidationError("power_law_cf: sigma must be nonnegative");
  if (!(mu > 0 && mu < 1)) throw ValidationError("power_law_cf: mu must lie in (0,1)");
  CoefficientModel m;
  m.family_ = Family::PowerLawCF;
  m.gamma_ = gamma;
  m.zs_param_ = zs;
  m.zs_ = zs;
  m.sigma_ = sigma;
  m.mu_ = mu;
  m.max_index_ = kUnboundedIndex;
  return m;
}

CoefficientModel CoefficientModel::custom(std::vector<double> a, std::vector<double> b,
                                          std::optional<double> zs) {
  if (a.empty() || b.empty()) throw ValidationError("custom: empty rate table");
  for (double v : a)
    if (!(v > 0)) throw ValidationError("custom: a-table entries must be positive");
  for (std::size_t i = 1; i < b.size(); ++i)  // b_1 is never used by the recursion
    if (!(b[i] > 0)) throw ValidationError("custom: b-table entries must be positive");
  CoefficientModel m;
  m.family_ = Family::Custom;
  m.max_index_ = static_cast<Index>(std::min(a.size(), b.size()));
  m.a_table_ = std::make_shared<const std::vector<double>>(std::move(a));
  m.b_table_ = std::make_shared<const std::vector<double>>(std::move(b));
  m.zs_ = zs;
  return m;
}

CoefficientModel CoefficientModel::geometric(double gamma, double zs) {
  return power_law_cf(gamma, zs, 0.0, 0.5);
}

CoefficientModel CoefficientModel::companion_linear() const {
  CoefficientModel m = *this;  // Q is shared, the computed prefix stays valid
  m.linear_override_ = true;
  m.cache_mutex_ = std::make_shared<std::mutex>();
  return m;
}

CoefficientModel CoefficientModel::with_zs(double zs) const {
  if (!(zs > 0)) throw ValidationError("with_zs: z_s must be positive");
  CoefficientModel m = *this;  // z_s does not enter the Q recursion
  m.zs_ = zs;
  m.cache_mutex_ = std::make_shared<std::mutex>();
  return m;
}

double CoefficientModel::a(Index i) const {
  if (i < 1) throw ValidationError("a(i): index must be >= 1");
  if (linear_override_) return static_cast<double>(i);
  return base_a(i);
}

double CoefficientModel::base_a(Index i) const {
  if (family_ == Family::Custom) {
    if (i > max_index_) throw ValidationError("a(i): index beyond custom table");
    return (*a_table_)[static_cast<std::size_t>(i - 1)];
  }
  return std::pow(static_cast<double>(i), gamma_);
}

double CoefficientModel::b(Index i) const {
  if (i < 1) throw ValidationError("b(i): index must be >= 1");
  if (linear_override_) {
    if (i == 1) return zs();  // unused by the recursion, kept positive
    return static_cast<double>(i - 1) * q_ratio(i - 1);
  }
  return base_b(i);
}

double CoefficientModel::base_b(Index i) const {
  switch (family_) {
    case Family::PowerLawPT:
      return std::pow(static_cast<double>(i), gamma_) *
             (zs_param_ + q_ * std::pow(static_cast<double>(i), mu_ - 1.0));
    case Family::PowerLawCF: {
      if (i == 1) return zs_param_ * std::exp(sigma_);
      const double im1 = static_cast<double>(i - 1);
      return zs_param_ * std::pow(im1, gamma_) *
             std::exp(sigma_ * (std::pow(static_cast<double>(i), mu_) - std::pow(im1, mu_)));
    }
    case Family::Custom:
      if (i > max_index_) throw ValidationError("b(i): index beyond custom table");
      return (*b_table_)[static_cast<std::size_t>(i - 1)];
  }
  return 0;
}

void CoefficientModel::ensure_logq(Index i) const {
  std::lock_guard<std::mutex> lock(*cache_mutex_);
  if (static_cast<Index>(logq_.size()) >= i) return;
  if (logq_.empty()) logq_.push_back(0.0);  // log Q_1
  const Index from = static_cast<Index>(logq_.size());
  if (static_cast<Index>(logq_.capacity()) < i)
    logq_.reserve(static_cast<std::size_t>(
        std::max<Index>(i, 2 * static_cast<Index>(logq_.capacity()))));
  for (Index k = from; k < i; ++k) {
    // log Q_{k+1} = log Q_k + log a_k - log b_{k+1}; closed form for the
    // built-in families keeps the accumulation exact where one exists.
    double step;
    if (family_ == Family::PowerLawCF) {
      // a_k / b_{k+1} = (k^gamma)/(z_s k^gamma e^{sigma dk}) = e^{-sigma dk}/z_s
      const double dk = sigma_ * (std::pow(static_cast<double>(k + 1), mu_) -
                                  std::pow(static_cast<double>(k), mu_));
      step = -std::log(zs_param_) - dk;
    } else {
      step = std::log(base_a(k)) - std::log(base_b(k + 1));
    }
    logq_.push_back(logq_.back() + step);
  }
}

double CoefficientModel::log_q(Index i) const {
  if (i < 1) throw ValidationError("log_q(i): index must be >= 1");
  if (family_ == Family::Custom && i > max_index_)
    throw ValidationError("log_q(i): index beyond custom table");
  ensure_logq(i);
  return logq_[static_cast<std::size_t>(i - 1)];
}

double CoefficientModel::q_coeff(Index i) const { return std::exp(log_q(i)); }

double CoefficientModel::alpha(Index i) const {
  return std::exp(log_q(i) + static_cast<double>(i - 1) * std::log(zs()));
}

double CoefficientModel::q_ratio(Index i) const { return std::exp(log_q(i) - log_q(i + 1)); }

double CoefficientModel::zs() const {
  if (!zs_) throw ValidationError("z_s unknown for this model; run critical_density first");
  return *zs_;
}

double CoefficientModel::sup_alpha_ratio(Index upto, bool* tail_bounded) const {
  upto = std::min(upto, max_index_ - 1);
  double sup = 1.0;
  double prev = alpha(1);
  bool monotone_args = true;
  double last_ratio = std::numeric_limits<double>::infinity();
  for (Index j = 1; j < upto; ++j) {
    const double next = alpha(j + 1);
    const double ratio = prev / next;
    sup = std::max(sup, ratio);
    if (ratio > last_ratio + 1e-12) monotone_args = false;
    last_ratio = ratio;
    prev = next;
  }
  if (tail_bounded) {
    // For PT/CF the ratio alpha_j/alpha_{j+1} decreases to 1, so the finite sup
    // is global; for Custom we can only certify when the scan exhausted the table.
    *tail_bounded = (family_ != Family::Custom) || (upto >= max_index_ - 1) || monotone_args;
  }
  return sup;
}

double CoefficientModel::sup_log_alpha_root(Index upto, bool* tail_bounded) const {
  upto = std::min(upto, max_index_ - 1);
  double sup = 0.0;
  const double logzs = std::log(zs());
  double runmax_age = 0;
  for (Index k = 1; k < upto; ++k) {
    const double v = std::abs((log_q(k + 1) + static_cast<double>(k) * logzs) /
                              static_cast<double>(k + 1));
    if (v > sup) {
      sup = v;
      runmax_age = 0;
    } else {
      ++runmax_age;
    }
  }
  if (tail_bounded) *tail_bounded = (family_ != Family::Custom) || runmax_age > 50;
  return sup;
}

bool CoefficientModel::alpha_non_increasing(Index upto) const {
  upto = std::min(upto, max_index_);
  double prev = alpha(1);
  for (Index i = 2; i <= upto; ++i) {
    const double next = alpha(i);
    if (next > prev * (1.0 + 1e-12)) return false;
    prev = next;
  }
  return true;
}

double CoefficientModel::inf_q_ratio(Index upto) const {
  upto = std::min(upto, max_index_ - 1);
  double inf = std::numeric_limits<double>::infinity();
  for (Index i = 1; i <= upto; ++i) inf = std::min(inf, q_ratio(i));
  if (family_ != Family::Custom) inf = std::min(inf, zs());  // ratio decreases to z_s
  return inf;
}

double CoefficientModel::sup_q_ratio(Index upto) const {
  upto = std::min(upto, max_index_ - 1);
  double sup = 0;
  for (Index i = 1; i <= upto; ++i) sup = std::max(sup, q_ratio(i));
  return sup;
}

double CoefficientModel::inf_a_ratio(Index upto) const {
  upto = std::min(upto, max_index_ - 1);
  double inf = std::numeric_limits<double>::infinity();
  for (Index i = 1; i <= upto; ++i) inf = std::min(inf, a(i) / a(i + 1));
  return inf;
}

double CoefficientModel::sup_a_ratio(Index upto) const {
  upto = std::min(upto, max_index_ - 1);
  double sup = 0;
  for (Index i = 1; i <= upto; ++i) sup = std::max(sup, a(i) / a(i + 1));
  if (family_ != Family::Custom || linear_override_) sup = std::max(sup, 1.0);  // i^g/(i+1)^g -> 1
  return sup;
}

double CoefficientModel::inf_a(Index upto) const {
  upto = std::min(upto, max_index_);
  double inf = std::numeric_limits<double>::infinity();
  for (Index i = 1; i <= upto; ++i) inf = std::min(inf, a(i));
  return inf;  // power rates are non-decreasing, so the truncated inf is global
}

// --- series utilities ---------------------------------------------------

namespace {

// Upper bound for sum_{i>n} i^beta Q_i z^i given the already computed term
// t_n = n^beta Q_n z^n, using the term-ratio envelope
//   t_{i+1}/t_i <= ((n+1)/n)^beta * (alpha_{n+1}/alpha_n <= 1) * z/z_s <= q.
double tail_bound(double term_n, Index n, double beta, double r) {
  const double q = std::pow(static_cast<double>(n + 1) / static_cast<double>(n), beta) * r;
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return term_n * q / (1.0 - q);
}

}  // namespace

double equilibrium_series(const CoefficientModel& model, double beta, double z, double rel_tol) {
  if (!(z > 0)) return 0.0;
  const double zs = model.zs();
  if (!(z < zs)) throw ValidationError("equilibrium_series: z must be below z_s");
  const double r = z / zs;
  const double logz = std::log(z);
  double sum = 0.0;
  double term = 0.0;
  const Index cap = std::min<Index>(model.max_index(), 50'000'000);
  for (Index i = 1; i <= cap; ++i) {
    term = std::exp(model.log_q(i) + static_cast<double>(i) * logz +
                    beta * std::log(static_cast<double>(i)));
    sum += term;
    if (i >= 8) {
      const double tb = tail_bound(term, i, beta, r);
      if (tb <= rel_tol * std::max(sum, std::numeric_limits<double>::min())) return sum;
    }
  }
  if (model.max_index() < kUnboundedIndex)
    throw NumericError("equilibrium_series: custom table exhausted before tail control");
  throw NumericError("equilibrium_series: no convergence before iteration cap");
}

bool equilibrium_mass_exceeds(const CoefficientModel& model, double z, double target) {
  const double zs = model.zs();
  const double r = z / zs;
  const double logz = std::log(z);
  double sum = 0.0;
  const Index cap = std::min<Index>(model.max_index(), 50'000'000);
  for (Index i = 1; i <= cap; ++i) {
    const double term =
        std::exp(model.log_q(i) + static_cast<double>(i) * logz + std::log(static_cast<double>(i)));
    sum += term;
    if (sum > target) return true;
    if (i >= 8 && tail_bound(term, i, 1.0, r) <= 1e-14 * std::max(sum, 1e-300))
      return sum > target;
  }
  return sum > target;
}

double equilibrium_profile_tail(const CoefficientModel& model, double z, Index n) {
  const double zs = model.zs();
  const double r = z / zs;
  if (!(r < 1)) throw ValidationError("equilibrium_profile_tail: z must be below z_s");
  // Q_i z^i = z_s alpha_i r^i <= z_s alpha_{n+1} r^i for i > n (alpha non-increasing).
  const double lead = std::exp(model.log_q(n + 1) + static_cast<double>(n + 1) * std::log(z));
  return lead / (1.0 - r);
}

Vector equilibrium_profile(const CoefficientModel& model, double z, Index n) {
  Vector out(n);
  const double logz = std::log(z);
  for (Index i = 1; i <= n; ++i)
    out[i - 1] = std::exp(model.log_q(i) + static_cast<double>(i) * logz);
  return out;
}

// --- critical density ----------------------------------------------------

namespace {

// Richardson-stabilised limit of (1/Q_i)^{1/i} over a dyadic index ladder.
std::optional<double> estimate_zs(const CoefficientModel& model, double tol,
                                  std::vector<std::string>* flags) {
  std::vector<double> ladder;
  for (Index i = 2; i <= model.max_index(); i *= 2)
    ladder.push_back(std::exp(-model.log_q(i) / static_cast<double>(i)));
  if (ladder.size() < 4) {
    flags->push_back("zs-ladder-too-short");
    return std::nullopt;
  }
  // One extrapolation level: halving h = 1/i maps z_k -> 2 z_{k+1} - z_k for
  // an O(h) error model; a second level absorbs the h log h part.
  std::vector<double> r1(ladder.size() - 1), r2;
  for (std::size_t k = 0; k + 1 < ladder.size(); ++k) r1[k] = 2 * ladder[k + 1] - ladder[k];
  for (std::size_t k = 0; k + 1 < r1.size(); ++k) r2.push_back(2 * r1[k + 1] - r1[k]);
  const double last = r2.back();
  const double prev = r2[r2.size() - 2];
  if (!(last > 0) || std::abs(last - prev) > tol * std::max(1.0, std::abs(last))) {
    flags->push_back("zs-estimate-not-stabilized");
    return std::nullopt;
  }
  return last;
}

}  // namespace

CriticalDensity critical_density(const CoefficientModel& model, double tol) {
  if (!(tol > 0)) throw ValidationError("critical_density: tol must be positive");
  CriticalDensity out;
  if (model.family() != Family::Custom && model.gamma() == 0.0 && !model.linear_rates())
    out.flags.push_back("gamma-zero");
  if (model.zs_known()) {
    out.zs = model.zs();
  } else {
    auto est = estimate_zs(model, tol, &out.flags);
    if (!est) {
      out.kind = MassKind::Undetermined;
      return out;
    }
    out.zs = *est;
  }

  // Classify rho_s = sum i Q_i z_s^i by streaming the summand.
  const double logzs = std::log(out.zs);
  double sum = 0.0;
  Index infinite_run = 0;
  double prev_term = 0.0;
  const Index cap = std::min<Index>(model.max_index(), 4'000'000);
  for (Index i = 1; i <= cap; ++i) {
    const double term = std::exp(model.log_q(i) + static_cast<double>(i) * logzs +
                                 std::log(static_cast<double>(i)));
    sum += term;
    if (i > 1000) {
      infinite_run = (term >= 1e-6) ? infinite_run + 1 : 0;
      if (infinite_run >= 10'000) {
        out.kind = MassKind::Infinite;
        return out;
      }
    }
    if (i > 16 && prev_term > 0 && term < prev_term) {
      const double ratio = term / prev_term;
      const double tail = term * ratio / (1.0 - ratio);
      if (ratio < 1.0 - 1e-6 && tail <= 1e-12 * sum) {
        out.kind = MassKind::Finite;
        out.rho_s = sum + tail;
        return out;
      }
      // Polynomial-decay fallback: local log2 slope of the summand.
      if ((i & (i - 1)) == 0) {  // powers of two
        const double t_half = std::exp(model.log_q(i / 2) + static_cast<double>(i / 2) * logzs +
                                       std::log(static_cast<double>(i / 2)));
        const double p = -std::log2(term / t_half);
        if (p > 1.5 && term * static_cast<double>(i) / (p - 1.0) <= 1e-9 * sum) {
          out.kind = MassKind::Finite;
          out.rho_s = sum + term * static_cast<double>(i) / (p - 1.0);
          out.flags.push_back("rho-s-integral-tail");
          return out;
        }
      }
    }
    prev_term = term;
  }
  out.kind = MassKind::Undetermined;
  out.flags.push_back("rho-s-detection-exhausted");
  out.rho_s = sum;
  return out;
}

EquilibriumInfo equilibrium_monomer_density(const CoefficientModel& model, double rho, double tol) {
  if (!(rho > 0)) throw ValidationError("equilibrium_monomer_density: rho must be positive");
  if (!(tol > 0)) throw ValidationError("equilibrium_monomer_density: tol must be positive");

  CriticalDensity crit = critical_density(model, 1e-6);
  if (crit.kind == MassKind::Undetermined && !(crit.zs > 0))
    throw NumericError("equilibrium_monomer_density: z_s undetermined for custom model");
  if (crit.kind == MassKind::Finite && rho >= crit.rho_s)
    throw SupercriticalMassError("equilibrium_monomer_density: rho >= rho_s (supercritical)");

  EquilibriumInfo out;
  out.rho = rho;
  out.zs = crit.zs;
  out.rho_s_kind = crit.kind;
  out.rho_s = crit.rho_s;
  out.flags = crit.flags;

  // The model may not carry z_s (Custom without hint); bisection needs the
  // bracket, so work on a clone carrying the estimate.
  const CoefficientModel m = model.zs_known() ? model : model.with_zs(crit.zs);

  double lo = 0.0, hi = crit.zs;
  double mid = 0.5 * hi;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    if (equilibrium_mass_exceeds(m, mid, rho))
      hi = mid;
    else
      lo = mid;
    if (hi - lo < 1e-14 * std::max(1.0, hi)) {
      converged = true;
      break;
    }
    // Cheap mass check once the bracket is tight enough to bother.
    if (hi - lo < 1e-9 * std::max(1.0, hi)) {
      const double mass = equilibrium_series(m, 1.0, 0.5 * (lo + hi), 1e-15);
      if (std::abs(mass - rho) <= tol * rho) {
        converged = true;
        mid = 0.5 * (lo + hi);
        break;
      }
    }
  }
  mid = 0.5 * (lo + hi);
  const double mass = equilibrium_series(m, 1.0, mid, 1e-15);
  if (!converged && std::abs(mass - rho) > tol * rho)
    throw NumericError("equilibrium_monomer_density: bisection did not converge");
  out.z_bar = mid;
  return out;
}

}  // namespace bdkin
