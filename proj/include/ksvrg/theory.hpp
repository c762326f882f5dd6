#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ksvrg/objective.hpp"
#include "ksvrg/optim.hpp"
#include "ksvrg/snapshots.hpp"

namespace ksvrg {

// sum_{i=0}^{len-1} r^i by direct summation (matches how the in-run weight
// accumulators are built, so comparisons are exact for r = 1).
inline double geometric_sum(double r, int len) {
  double acc = 0.0;
  double pw = 1.0;
  for (int i = 0; i < len; ++i) {
    acc += pw;
    pw *= r;
  }
  return acc;
}

struct ReferenceSolution {
  Eigen::VectorXd x_star;
  double f_star = 0.0;
  double grad_norm = 0.0;
  std::vector<Eigen::VectorXd> component_grads;  // grad f_i(x_star), all i
};

// High-precision minimizer via Nesterov-accelerated full-batch descent with
// constant momentum (requires mu > 0). Stops at ||grad f|| <= tol. All
// evaluations run against a scratch counter; run ledgers are untouched.
inline ReferenceSolution solve_reference(const FiniteSumObjective& obj, double tol,
                                         std::int64_t max_iters = 1000000) {
  if (!(obj.mu() > 0.0))
    throw std::invalid_argument("solve_reference: objective must be strongly convex (mu > 0)");
  if (!(tol > 0.0) || !std::isfinite(tol))
    throw std::invalid_argument("solve_reference: tol must be finite and positive");
  const double L = obj.smoothness();
  const double mu = obj.mu();
  const double kappa = L / mu;
  const double beta = kappa <= 1.0 ? 0.0 : (std::sqrt(kappa) - 1.0) / (std::sqrt(kappa) + 1.0);
  const double step = 1.0 / L;

  CostCounters scratch;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(obj.dim());
  Eigen::VectorXd y = x;
  double achieved = std::numeric_limits<double>::infinity();
  for (std::int64_t it = 0; it < max_iters; ++it) {
    const Eigen::VectorXd g = obj.full_gradient(y, scratch);
    achieved = g.norm();
    if (achieved <= tol) {
      ReferenceSolution ref;
      ref.x_star = y;
      ref.f_star = obj.value(y);
      ref.grad_norm = achieved;
      ref.component_grads.reserve(static_cast<std::size_t>(obj.n()));
      for (int i = 0; i < obj.n(); ++i)
        ref.component_grads.push_back(obj.component_gradient(i, y, scratch));
      return ref;
    }
    const Eigen::VectorXd xn = y - step * g;
    y = xn + beta * (xn - x);
    x = xn;
  }
  throw std::runtime_error("solve_reference: no convergence in " + std::to_string(max_iters) +
                           " iterations, ||grad|| = " + std::to_string(achieved));
}

// Published stepsize for the two analyzed variants. The reuse variant gets
// eta = 2(1 - (l-1)/(2n)) / (5(mu n + 2L)); the fresh-sample variant gets
// eta = 1/(3(mu n + 2L)) and requires q >= l/3.
inline double theoretical_stepsize(Method method, double mu, double L, int n, int ell, int q) {
  if (!(mu > 0.0)) throw std::invalid_argument("theoretical_stepsize: requires mu > 0");
  if (!(L > 0.0)) throw std::invalid_argument("theoretical_stepsize: requires L > 0");
  if (n < 1 || ell < 1) throw std::invalid_argument("theoretical_stepsize: need n, ell >= 1");
  switch (method) {
    case Method::ksvrg_v2:
      if (3 * q < ell)
        throw std::invalid_argument(
            "theoretical_stepsize: the fresh-sample rate needs q >= ell/3");
      return 1.0 / (3.0 * (mu * n + 2.0 * L));
    case Method::ksvrg_v1:
      return 2.0 * (1.0 - (ell - 1.0) / (2.0 * n)) / (5.0 * (mu * n + 2.0 * L));
    default:
      throw std::invalid_argument("theoretical_stepsize: no covered rate for method " +
                                  method_name(method));
  }
}

// Coupling constant of the Lyapunov function, per variant. Must land in
// (0, 1]; anything else is a parameter error.
inline double sigma_constant(Method method, double mu, double L, int n, int ell, int q) {
  if (!(mu > 0.0) || !(L > 0.0)) throw std::invalid_argument("sigma_constant: need mu, L > 0");
  if (n < 1 || ell < 1) throw std::invalid_argument("sigma_constant: need n, ell >= 1");
  double sigma = 0.0;
  switch (method) {
    case Method::ksvrg_v2: {
      if (q < 1 || q > n) throw std::invalid_argument("sigma_constant: need 1 <= q <= n");
      const double a = 2.0 * L / (2.0 * L + mu * n);
      const double b = (2.0 * n + 2.0 * L / mu) / (2.0 * n - q + 4.0 * L / mu);
      sigma = (static_cast<double>(ell) / (2.0 * q)) / (a + b);
      break;
    }
    case Method::ksvrg_v1: {
      const double w = 1.0 - (ell - 1.0) / (2.0 * n);
      const double a = 2.0 * L * w / (L + mu * n);
      const double b = (n + 2.0 * L / mu) / (2.0 * n - ell * w + 4.0 * L / mu);
      sigma = 1.0 / (a + b);
      break;
    }
    default:
      throw std::invalid_argument("sigma_constant: no constant for method " +
                                  method_name(method));
  }
  if (!(sigma > 0.0) || sigma > 1.0 || !std::isfinite(sigma))
    throw std::invalid_argument("sigma_constant: parameters give sigma outside (0, 1]");
  return sigma;
}

struct LyapunovRecord {
  int outer_loop = 0;
  double value_before = 0.0;
  double value_after = 0.0;
  double ratio = 0.0;
  double bound = 0.0;            // (1 - eta*mu)^ell
  bool domination_ok = true;     // over indices that have been refreshed
  int untouched_violations = 0;  // initial-surrogate mismatches, reported only
};

// Tracks V(x, H) = ||x - x_star||^2 + gamma * sigma * (1/n) sum_i H_i with
// gamma = eta * n / L. H_i starts at ||grad f_i(x_star)||^2 (matching a
// conceptual zero anchor) and becomes 2 L h_i(snapshot) when i is refreshed,
// where h_i(x) = f_i(x) - f_i(x_star) - <x - x_star, grad f_i(x_star)>.
//
// Each boundary also audits H_i >= ||grad f_i(theta_i) - grad f_i(x_star)||^2
// against the live store. Indices still on their warm-start snapshot can fail
// that audit by construction (the warm anchor is not the conceptual zero
// anchor); those are counted separately and never flag the record.
class ConvexLyapunovTracker {
 public:
  ConvexLyapunovTracker(const FiniteSumObjective& obj, const ReferenceSolution& ref,
                        double eta, double sigma, int ell)
      : obj_(&obj), ref_(&ref), eta_(eta), sigma_(sigma), ell_(ell) {
    if (!(eta > 0.0) || !(sigma > 0.0) || sigma > 1.0 || ell < 1)
      throw std::invalid_argument("ConvexLyapunovTracker: bad eta/sigma/ell");
    if (eta * obj.mu() >= 1.0)
      throw std::invalid_argument("ConvexLyapunovTracker: eta * mu must be < 1");
    if (static_cast<int>(ref.component_grads.size()) != obj.n())
      throw std::invalid_argument("ConvexLyapunovTracker: reference lacks component gradients");
    gamma_ = eta * obj.n() / obj.smoothness();
    bound_ = std::pow(1.0 - eta * obj.mu(), ell);
  }

  void initialize(const Eigen::VectorXd& x0) {
    const int n = obj_->n();
    H_.resize(static_cast<std::size_t>(n));
    touched_.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
      H_[static_cast<std::size_t>(i)] = ref_->component_grads[static_cast<std::size_t>(i)].squaredNorm();
    current_ = lyapunov(x0);
    history_.clear();
  }

  double h_i(int i, const Eigen::VectorXd& x) const {
    const Eigen::VectorXd& gstar = ref_->component_grads[static_cast<std::size_t>(i)];
    const double h = obj_->component_value(i, x) - obj_->component_value(i, ref_->x_star) -
                     gstar.dot(x - ref_->x_star);
    return std::max(h, 0.0);  // clamps rounding noise; h_i >= 0 for convex components
  }

  const LyapunovRecord& observe_boundary(const Eigen::VectorXd& x_next,
                                         const Eigen::VectorXd& x_tilde,
                                         const std::vector<int>& phi,
                                         const SnapshotStore& store_after) {
    if (H_.empty()) throw std::logic_error("ConvexLyapunovTracker: initialize first");
    const double L = obj_->smoothness();
    for (int i : phi) {
      H_[static_cast<std::size_t>(i)] = 2.0 * L * h_i(i, x_tilde);
      touched_[static_cast<std::size_t>(i)] = 1;
    }
    LyapunovRecord rec;
    rec.outer_loop = static_cast<int>(history_.size()) + 1;
    rec.value_before = current_;
    rec.value_after = lyapunov(x_next);
    rec.ratio = rec.value_after / rec.value_before;
    rec.bound = bound_;
    audit_domination(store_after, rec);
    current_ = rec.value_after;
    history_.push_back(rec);
    return history_.back();
  }

  double current() const { return current_; }
  double gamma() const { return gamma_; }
  double sigma() const { return sigma_; }
  double factor_bound() const { return bound_; }
  const std::vector<LyapunovRecord>& history() const { return history_; }
  const std::vector<double>& H() const { return H_; }

 private:
  double lyapunov(const Eigen::VectorXd& x) const {
    double mean_H = 0.0;
    for (double h : H_) mean_H += h;
    mean_H /= static_cast<double>(obj_->n());
    return (x - ref_->x_star).squaredNorm() + gamma_ * sigma_ * mean_H;
  }

  void audit_domination(const SnapshotStore& store, LyapunovRecord& rec) const {
    CostCounters scratch;
    for (int i = 0; i < obj_->n(); ++i) {
      const Eigen::VectorXd gi = obj_->component_gradient(i, store.lookup(i), scratch);
      const double lhs = (gi - ref_->component_grads[static_cast<std::size_t>(i)]).squaredNorm();
      const double rhs = H_[static_cast<std::size_t>(i)];
      if (lhs <= rhs * (1.0 + 1e-10) + 1e-14) continue;
      if (touched_[static_cast<std::size_t>(i)])
        rec.domination_ok = false;
      else
        rec.untouched_violations += 1;
    }
  }

  const FiniteSumObjective* obj_;
  const ReferenceSolution* ref_;
  double eta_, sigma_, gamma_ = 0.0, bound_ = 0.0;
  int ell_;
  std::vector<double> H_;
  std::vector<char> touched_;
  double current_ = 0.0;
  std::vector<LyapunovRecord> history_;
};

// Nonconvex analysis schedule. Defaults: eta = 1/(5 L n^{2/3}),
// l = ceil(1.5 n^{1/3}), gamma = L / n^{1/3}. The c sequence runs backward
// from c_M = 0 via
//   c_m = c_{m+1} (1 - l/n + gamma eta l + 4 b1 eta^2 L^2 l^2) + 2 b1 eta^2 L^3 l
// with b1 = 1/(1 - 2 L^2 eta^2 l^2), and
//   Gamma_m = eta - c_{m+1} eta / gamma - b1 eta^2 L - 2 b1 c_{m+1} eta^2 l.
struct NonconvexSchedule {
  double eta = 0.0;
  double gamma = 0.0;
  double b1 = 0.0;
  int ell = 0;
  int outer_loops = 0;
  std::vector<double> c;       // c[0..M], c[M] = 0
  std::vector<double> Gammas;  // Gamma_m for m = 0..M-1
  double Gamma = 0.0;          // min over m (infinity when M = 0)
};

inline NonconvexSchedule nonconvex_schedule(double L, int n, int outer_loops,
                                            std::optional<double> eta_override = std::nullopt,
                                            std::optional<int> ell_override = std::nullopt,
                                            std::optional<double> gamma_override = std::nullopt) {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("nonconvex_schedule: need L > 0");
  if (n < 1) throw std::invalid_argument("nonconvex_schedule: need n >= 1");
  if (outer_loops < 0) throw std::invalid_argument("nonconvex_schedule: need outer_loops >= 0");
  NonconvexSchedule s;
  double n13 = std::cbrt(static_cast<double>(n));
  // snap exact cubes so the derived ell/eta/gamma stay at their round values
  if (std::abs(n13 - std::round(n13)) < 1e-9) n13 = std::round(n13);
  s.eta = eta_override.value_or(1.0 / (5.0 * L * n13 * n13));
  s.ell = ell_override.value_or(static_cast<int>(std::ceil(1.5 * n13)));
  s.gamma = gamma_override.value_or(L / n13);
  s.outer_loops = outer_loops;
  if (!(s.eta > 0.0) || s.ell < 1 || !(s.gamma > 0.0))
    throw std::invalid_argument("nonconvex_schedule: eta, ell, gamma must be positive");

  const double el = s.eta * static_cast<double>(s.ell);
  const double denom = 1.0 - 2.0 * L * L * el * el;
  if (!(denom > 0.0))
    throw std::invalid_argument("nonconvex_schedule: need 2 L^2 eta^2 ell^2 < 1");
  s.b1 = 1.0 / denom;

  const int M = outer_loops;
  s.c.assign(static_cast<std::size_t>(M) + 1, 0.0);
  const double shrink = 1.0 - static_cast<double>(s.ell) / n + s.gamma * el +
                        4.0 * s.b1 * s.eta * el * L * L * static_cast<double>(s.ell);
  const double inject = 2.0 * s.b1 * s.eta * s.eta * L * L * L * static_cast<double>(s.ell);
  for (int m = M - 1; m >= 0; --m)
    s.c[static_cast<std::size_t>(m)] = s.c[static_cast<std::size_t>(m) + 1] * shrink + inject;

  s.Gammas.resize(static_cast<std::size_t>(M));
  double gmin = std::numeric_limits<double>::infinity();
  for (int m = 0; m < M; ++m) {
    const double cn = s.c[static_cast<std::size_t>(m) + 1];
    const double g = s.eta - cn * s.eta / s.gamma - s.b1 * s.eta * s.eta * L -
                     2.0 * s.b1 * cn * s.eta * el;
    if (!(g > 0.0))
      throw std::invalid_argument("nonconvex_schedule: nonpositive Gamma at loop " +
                                  std::to_string(m));
    s.Gammas[static_cast<std::size_t>(m)] = g;
    gmin = std::min(gmin, g);
  }
  s.Gamma = gmin;
  return s;
}

struct CertificateResult {
  double realized_mean = 0.0;  // mean over seeds of sum_m sum_t ||grad f(x_t^m)||^2
  double bound = 0.0;          // (f(x0) - f_lb) / Gamma
  double margin = 0.0;
  bool pass = false;
};

// Checks the aggregate gradient-norm guarantee against instrumented traces:
// one vector per seed holding the per-outer-loop sums of squared full-gradient
// norms over inner iterates.
inline CertificateResult nonconvex_certificate(
    const std::vector<std::vector<double>>& per_seed_frob, const NonconvexSchedule& sched,
    double f0, double f_lb = 0.0) {
  if (per_seed_frob.empty())
    throw std::invalid_argument("nonconvex_certificate: no seed traces");
  for (const auto& v : per_seed_frob)
    if (static_cast<int>(v.size()) != sched.outer_loops)
      throw std::invalid_argument(
          "nonconvex_certificate: trace lacks per-loop gradient norms for the schedule");
  CertificateResult res;
  double total = 0.0;
  for (const auto& v : per_seed_frob) {
    double s = 0.0;
    for (double g : v) s += g;
    total += s;
  }
  res.realized_mean = total / static_cast<double>(per_seed_frob.size());
  res.bound = sched.outer_loops == 0 ? 0.0 : (f0 - f_lb) / sched.Gamma;
  res.margin = res.bound - res.realized_mean;
  res.pass = res.realized_mean <= res.bound;
  return res;
}

}  // namespace ksvrg
