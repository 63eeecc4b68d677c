#ifndef BDKIN_COUNTEREXAMPLE_HPP_
#define BDKIN_COUNTEREXAMPLE_HPP_

#include <vector>

#include "bdkin/functionals.hpp"
#include "bdkin/model.hpp"
#include "bdkin/types.hpp"

namespace bdkin {

// Two-mode family c_i = e^{lambda} e^{-xi i} + A_eps e^{-eps i} of fixed mass
// rho, over the model a_i = i^gamma, Q_i = e^{-lambda(i-1)}. The slow mode
// carries half the mass to larger and larger sizes as eps -> 0, driving the
// dissipation-to-free-energy ratio to zero.
struct CounterexampleFamily {
  double lambda;
  double rho;
  double gamma;
  double xi;
  CoefficientModel model;
  EquilibriumInfo eq;
};

// xi with sum_i i e^{lambda} e^{-xi i} = rho/2 (positive quadratic root).
double solve_xi(double lambda, double rho);

CounterexampleFamily make_family(double lambda, double rho, double gamma);

double amplitude(const CounterexampleFamily& f, double eps);

// Truncation with both mode tails below 1e-14 relative.
Index default_truncation(const CounterexampleFamily& f, double eps);

// c_i = e^{lambda} e^{-xi i} + A_eps e^{-eps i}; requires 0 < eps < xi.
Vector build_state(const CounterexampleFamily& f, double eps, Index n);

// The proof's sign margin at i = 1 (worst index); nonpositive means the
// epsilon is outside the "small enough" range.
double flux_sign_margin(const CounterexampleFamily& f, double eps);

struct RatioRow {
  double eps = 0;
  double A = 0;
  Index n = 0;
  double D = 0;
  double H = 0;
  double ratio = 0;
  double ratio_s2 = 0;
  double ratio_s5 = 0;
  bool flux_positive = false;
};

// Exact D and H(.|Q) per grid entry; grid must be sorted decreasing.
// Parallel over entries, capped by the BDKIN_THREADS environment variable.
std::vector<RatioRow> ratio_study(const CounterexampleFamily& f, std::vector<double> grid);

// H of the pure slow mode (the eps -> 0 limit state), for the Fatou floor.
double limit_state_free_energy(const CounterexampleFamily& f);

// B_{eps,gamma} = sum_i i^gamma e^{-eps i} with geometric tail control.
double b_eps_gamma(double eps, double gamma);

}  // namespace bdkin

#endif  // BDKIN_COUNTEREXAMPLE_HPP_
