#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "ksvrg/data.hpp"

namespace ksvrg {

// Read ledger conventions (single source of truth):
//   gc counts component gradient evaluations.
//   er counts d-dimensional fetches from memory: one per data row brought in,
//   one per stored gradient vector read from a table. Evaluating a second
//   gradient on an already-fetched row costs gc only. value() is
//   instrumentation and never touches either counter.
struct CostCounters {
  std::uint64_t gc = 0;
  std::uint64_t er = 0;
};

enum class LossKind { logistic_ridge, least_squares_ridge, nonconvex_sigmoid };

inline std::string loss_name(LossKind k) {
  switch (k) {
    case LossKind::logistic_ridge: return "logistic-ridge";
    case LossKind::least_squares_ridge: return "least-squares-ridge";
    case LossKind::nonconvex_sigmoid: return "nonconvex-sigmoid";
  }
  return "?";
}

inline std::optional<LossKind> parse_loss(std::string_view s) {
  if (s == "logistic-ridge" || s == "logistic") return LossKind::logistic_ridge;
  if (s == "least-squares-ridge" || s == "least-squares") return LossKind::least_squares_ridge;
  if (s == "nonconvex-sigmoid" || s == "sigmoid") return LossKind::nonconvex_sigmoid;
  return std::nullopt;
}

namespace detail {

inline double sigmoid(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

inline double softplus(double u) {
  // log(1 + e^u) without overflow for large |u|.
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

}  // namespace detail

// f(x) = (1/n) sum_i f_i(x) with
//   logistic-ridge:      f_i = log(1 + exp(-b_i <a_i, x>)) + (lambda/2)||x||^2
//   least-squares-ridge: f_i = (1/2)(<a_i, x> - b_i)^2 + (lambda/2)||x||^2
//   nonconvex-sigmoid:   f_i = 1/(1 + exp(b_i <a_i, x>)) + (lambda/2)||x||^2
// mu is lambda for the ridge losses and 0 for the sigmoid. smoothness is a
// per-component upper bound: the dataset constant carries the logistic 1/4
// factor, so least-squares needs 4x that, and |sigma''| <= 1/4 keeps the
// sigmoid under the logistic constant.
class FiniteSumObjective {
 public:
  FiniteSumObjective(const Dataset& data, LossKind loss, double lambda)
      : data_(&data), loss_(loss), lambda_(lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
      throw std::invalid_argument("FiniteSumObjective: lambda must be finite and >= 0");
    mu_ = loss == LossKind::nonconvex_sigmoid ? 0.0 : lambda;
    const double base = data.smoothness();
    smoothness_ = (loss == LossKind::least_squares_ridge ? 4.0 * base : base) + lambda;
  }

  int n() const { return data_->n(); }
  int dim() const { return data_->dim(); }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double smoothness() const { return smoothness_; }
  LossKind loss() const { return loss_; }
  const Dataset& data() const { return *data_; }

  // One data-row fetch.
  const DataPoint& fetch(int i, CostCounters& c) const {
    if (i < 0 || i >= n()) throw std::out_of_range("fetch: component index out of range");
    c.er += 1;
    return data_->point(i);
  }

  // One gradient evaluation on an already-fetched row.
  Eigen::VectorXd gradient_at_row(const DataPoint& p, const Eigen::VectorXd& x,
                                  CostCounters& c) const {
    check_point(x);
    c.gc += 1;
    Eigen::VectorXd g = lambda_ * x;
    scatter_data_gradient(p, x, 1.0, g);
    return g;
  }

  Eigen::VectorXd component_gradient(int i, const Eigen::VectorXd& x, CostCounters& c) const {
    const DataPoint& p = fetch(i, c);
    return gradient_at_row(p, x, c);
  }

  Eigen::VectorXd full_gradient(const Eigen::VectorXd& x, CostCounters& c) const {
    check_point(x);
    Eigen::VectorXd g = lambda_ * x;
    const double inv_n = 1.0 / static_cast<double>(n());
    for (int i = 0; i < n(); ++i) {
      const DataPoint& p = fetch(i, c);
      c.gc += 1;
      scatter_data_gradient(p, x, inv_n, g);
    }
    return g;
  }

  // Instrumentation; counter-free by design.
  double value(const Eigen::VectorXd& x) const {
    check_point(x);
    double s = 0.0;
    for (int i = 0; i < n(); ++i) s += data_value(data_->point(i), x);
    return s / static_cast<double>(n()) + 0.5 * lambda_ * x.squaredNorm();
  }

  double component_value(int i, const Eigen::VectorXd& x) const {
    if (i < 0 || i >= n()) throw std::out_of_range("component_value: index out of range");
    check_point(x);
    return data_value(data_->point(i), x) + 0.5 * lambda_ * x.squaredNorm();
  }

 private:
  void check_point(const Eigen::VectorXd& x) const {
    if (x.size() != dim()) throw std::invalid_argument("objective: x has wrong dimension");
    if (!x.allFinite()) throw std::invalid_argument("objective: x has non-finite entries");
  }

  double data_value(const DataPoint& p, const Eigen::VectorXd& x) const {
    const double z = p.dot(x);
    switch (loss_) {
      case LossKind::logistic_ridge: return detail::softplus(-p.label * z);
      case LossKind::least_squares_ridge: {
        const double r = z - p.label;
        return 0.5 * r * r;
      }
      case LossKind::nonconvex_sigmoid: return detail::sigmoid(-p.label * z);
    }
    return 0.0;
  }

  // d f_i / d z, the scalar factor multiplying a_i.
  double data_slope(const DataPoint& p, double z) const {
    switch (loss_) {
      case LossKind::logistic_ridge: return -p.label * detail::sigmoid(-p.label * z);
      case LossKind::least_squares_ridge: return z - p.label;
      case LossKind::nonconvex_sigmoid: {
        const double s = detail::sigmoid(-p.label * z);
        return -p.label * s * (1.0 - s);
      }
    }
    return 0.0;
  }

  void scatter_data_gradient(const DataPoint& p, const Eigen::VectorXd& x, double coeff,
                             Eigen::VectorXd& out) const {
    const double f = coeff * data_slope(p, p.dot(x));
    for (std::size_t j = 0; j < p.idx.size(); ++j) out[p.idx[j]] += f * p.val[j];
  }

  const Dataset* data_;
  LossKind loss_;
  double lambda_;
  double mu_;
  double smoothness_;
};

}  // namespace ksvrg
