#ifndef BDKIN_FUNCTIONALS_HPP_
#define BDKIN_FUNCTIONALS_HPP_

#include "bdkin/model.hpp"
#include "bdkin/types.hpp"

namespace bdkin {

// Truncated concentration sequence c_1..c_N with its cached mass.
struct ClusterState {
  Vector c;
  double mass = 0;

  ClusterState() = default;
  explicit ClusterState(Vector concentrations);
  Index size() const { return c.size(); }
  bool mass_cache_consistent(double rel = 1e-14) const;
};

// Probability weights mu (normalized including the analytic geometric tail)
// and positive weights nu on 1..N, with tail descriptors for index k <= N.
struct WeightPair {
  Vector mu;             // mu_1..mu_N
  Vector nu;             // nu_1..nu_N
  double mu_tail = 0;    // sum_{i>N} mu_i (analytic completion)
  double nu_tail = 0;
  double tail_ratio = 0; // per-index geometric decay ratio of the mu tail

  Index size() const { return mu.size(); }
  double mu_tail_after(Index k) const;   // sum_{i>k} mu_i, k in [0, N]
  bool normalized(double tol = 1e-12) const;
};

double mass(const Vector& c);
double moment(const Vector& c, double beta);
double exp_moment(const Vector& c, double mu);

// H(c|Q_zbar) = sum Qb_i phi(c_i/Qb_i) + analytic tail, phi(r) = r log r - r + 1.
double relative_free_energy(const Vector& c, const CoefficientModel& model, double z_bar);
double relative_free_energy(const Vector& c, const CoefficientModel& model,
                            const EquilibriumInfo& eq);

// Free-energy dissipation; requires strictly positive entries.
double dissipation(const Vector& c, const CoefficientModel& model);
// Square-root lower dissipation; zeros allowed.
double lower_dissipation(const Vector& c, const CoefficientModel& model);
// Same quantity written against the equilibrium profile at z (identity check).
double lower_dissipation_at(const Vector& c, const CoefficientModel& model, double z);
// Lower dissipation with rates i^beta in place of a_i.
double lower_dissipation_power(const Vector& c, const CoefficientModel& model, double beta);

// Ent_mu(g) = sum mu_i g_i log(g_i / <g>), finite weights.
double entropy(const Vector& mu, const Vector& g);
// Ent_mu((f+alpha)^2) for a pair with analytic tail (f = 0 beyond its support),
// evaluated cancellation-free for large |alpha|.
double entropy_sq_translated(const WeightPair& w, const Vector& f, double alpha);

double psi(double x);                    // |x| log(1+|x|)
double phi_young(double x);              // psi(x^2)
double psi_inv(double t);                // inverse on (0, inf)

enum class YoungFunction { Psi, Phi };
double orlicz_norm(const WeightPair& w, const Vector& f, YoungFunction y);

// sup_alpha Ent_mu((f+alpha)^2): grid + golden-section interior search
// compared against the |alpha| -> inf limit 2 * Var_mu(f).
double sup_translate_entropy(const WeightPair& w, const Vector& f);

// <f> and Var_mu(f) with the analytic tail (f = 0 beyond support).
double weighted_mean(const WeightPair& w, const Vector& f);
double weighted_l2_sq(const WeightPair& w, const Vector& f);

}  // namespace bdkin

#endif  // BDKIN_FUNCTIONALS_HPP_
