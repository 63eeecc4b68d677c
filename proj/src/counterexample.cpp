#include "bdkin/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>

namespace bdkin {

double solve_xi(double lambda, double rho) {
  if (!(rho > 0)) throw ValidationError("solve_xi: rho must be positive");
  // (rho/2)(1-x)^2 = e^lambda x with x = e^{-xi}; smaller root lies in (0,1).
  const double el = std::exp(lambda);
  const double disc = (rho + el) * (rho + el) - rho * rho;
  const double x = ((rho + el) - std::sqrt(disc)) / rho;
  if (!(x > 0 && x < 1)) throw NumericError("solve_xi: root escaped (0,1)");
  return -std::log(x);
}

CounterexampleFamily make_family(double lambda, double rho, double gamma) {
  if (!(lambda >= 0)) throw ValidationError("make_family: lambda must be nonnegative");
  if (!(gamma >= 0 && gamma < 1)) throw ValidationError("make_family: gamma must lie in [0,1)");
  CoefficientModel model = CoefficientModel::geometric(gamma, std::exp(lambda));
  EquilibriumInfo eq = equilibrium_monomer_density(model, rho);
  return CounterexampleFamily{lambda, rho, gamma, solve_xi(lambda, rho), std::move(model),
                              std::move(eq)};
}

double amplitude(const CounterexampleFamily& f, double eps) {
  const double e = std::expm1(-eps);  // -(1 - e^{-eps})
  return 0.5 * f.rho * std::exp(eps) * e * e;
}

Index default_truncation(const CounterexampleFamily& f, double eps) {
  // Slow-mode tail controls: A e^{-eps n} n < 1e-14 (relative scale rho).
  const double a = amplitude(f, eps);
  double n = 40.0 / eps;
  while (a * std::exp(-eps * n) * n > 1e-14 * f.rho) n *= 1.25;
  return static_cast<Index>(n) + 2;
}

Vector build_state(const CounterexampleFamily& f, double eps, Index n) {
  if (!(eps > 0 && eps < f.xi))
    throw ValidationError("build_state: eps must lie in (0, xi)");
  const double a = amplitude(f, eps);
  Vector c(n);
  for (Index i = 1; i <= n; ++i)
    c[i - 1] = std::exp(f.lambda - f.xi * static_cast<double>(i)) +
               a * std::exp(-eps * static_cast<double>(i));
  return c;
}

double flux_sign_margin(const CounterexampleFamily& f, double eps) {
  const double a = amplitude(f, eps);
  return 1.0 - 2.0 * std::exp(-(f.xi - eps)) - a * std::exp(-f.lambda);
}

double limit_state_free_energy(const CounterexampleFamily& f) {
  const double x = std::exp(-f.xi);
  Index n = 16;
  while (std::pow(x, static_cast<double>(n)) > 1e-18) n += 16;
  Vector c(n);
  for (Index i = 1; i <= n; ++i)
    c[i - 1] = std::exp(f.lambda - f.xi * static_cast<double>(i));
  return relative_free_energy(c, f.model, f.eq.z_bar);
}

namespace {

RatioRow evaluate_row(const CounterexampleFamily& f, double eps) {
  RatioRow row;
  row.eps = eps;
  row.A = amplitude(f, eps);
  row.n = default_truncation(f, eps);
  const Vector c = build_state(f, eps, row.n);
  row.D = dissipation(c, f.model);
  row.H = relative_free_energy(c, f.model, f.eq.z_bar);
  row.ratio = row.D / row.H;
  row.ratio_s2 = row.D / std::pow(row.H, 2.0);
  row.ratio_s5 = row.D / std::pow(row.H, 5.0);
  row.flux_positive = flux_sign_margin(f, eps) > 0;
  return row;
}

int thread_budget() {
  if (const char* env = std::getenv("BDKIN_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

std::vector<RatioRow> ratio_study(const CounterexampleFamily& f, std::vector<double> grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] < grid[i - 1]))
      throw ValidationError("ratio_study: grid must be sorted decreasing");
  std::vector<RatioRow> rows(grid.size());
  const int budget = thread_budget();
  std::size_t next = 0;
  while (next < grid.size()) {
    const std::size_t batch = std::min<std::size_t>(budget, grid.size() - next);
    std::vector<std::future<RatioRow>> fut;
    for (std::size_t k = 0; k < batch; ++k)
      fut.push_back(std::async(std::launch::async,
                               [&f, eps = grid[next + k]] { return evaluate_row(f, eps); }));
    for (std::size_t k = 0; k < batch; ++k) rows[next + k] = fut[k].get();
    next += batch;
  }
  return rows;
}

double b_eps_gamma(double eps, double gamma) {
  if (!(eps > 0)) throw ValidationError("b_eps_gamma: eps must be positive");
  if (!(gamma > 0)) throw ValidationError("b_eps_gamma: gamma must be positive");
  double sum = 0;
  for (Index i = 1;; ++i) {
    const double di = static_cast<double>(i);
    const double term = std::pow(di, gamma) * std::exp(-eps * di);
    sum += term;
    if (di > gamma / eps + 1) {
      const double q = std::pow((di + 1.0) / di, gamma) * std::exp(-eps);
      if (q < 1 && term * q / (1 - q) <= 1e-16 * sum) break;
    }
    if (i > 500'000'000) throw NumericError("b_eps_gamma: iteration cap");
  }
  return sum;
}

}  // namespace bdkin
