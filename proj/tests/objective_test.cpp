#include "ksvrg/objective.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "ksvrg/data.hpp"
#include "ksvrg/rng.hpp"

using namespace ksvrg;

namespace {

Eigen::VectorXd random_vec(int d, SplitMix64& g, double scale = 2.0) {
  Eigen::VectorXd x(d);
  for (int j = 0; j < d; ++j) x[j] = scale * (2.0 * g.next_double() - 1.0);
  return x;
}

// Central differences on component_value; component_value keeps the
// counters untouched so this stays an independent probe.
Eigen::VectorXd numeric_component_gradient(const FiniteSumObjective& obj, int i,
                                           const Eigen::VectorXd& x) {
  const double h = 1e-6;
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd e = x;
  for (int j = 0; j < x.size(); ++j) {
    e[j] = x[j] + h;
    const double fp = obj.component_value(i, e);
    e[j] = x[j] - h;
    const double fm = obj.component_value(i, e);
    e[j] = x[j];
    g[j] = (fp - fm) / (2.0 * h);
  }
  return g;
}

Dataset small_dataset() {
  std::istringstream in("+1 1:1\n-1 1:0.5 2:-1\n+1 2:2\n-1 1:-0.25 2:0.5\n");
  return parse_svmlight(in);
}

}  // namespace

TEST(Gradient, MatchesCentralDifferences) {
  SplitMix64 g(101);
  const std::vector<LossKind> losses = {LossKind::logistic_ridge, LossKind::least_squares_ridge,
                                        LossKind::nonconvex_sigmoid};
  for (int rep = 0; rep < 100; ++rep) {
    const LossKind loss = losses[rep % losses.size()];
    const Dataset ds = synth_logistic(12, 4, 50 + rep, 0.6);
    const double lambda = (loss == LossKind::nonconvex_sigmoid) ? 0.0 : 0.05;
    const FiniteSumObjective obj(ds, loss, lambda);
    const int i = static_cast<int>(g.next_below(12));
    const Eigen::VectorXd x = random_vec(4, g);
    CostCounters c;
    const Eigen::VectorXd ana = obj.component_gradient(i, x, c);
    const Eigen::VectorXd num = numeric_component_gradient(obj, i, x);
    EXPECT_LT((ana - num).lpNorm<Eigen::Infinity>(), 1e-5)
        << "loss " << loss_name(loss) << " rep " << rep;
  }
}

TEST(Gradient, LogisticClosedFormAtOrigin) {
  // single point a=(1,0), b=+1, no ridge: value ln 2, gradient (-1/2, 0)
  std::istringstream in("+1 1:1\n");
  const Dataset ds = parse_svmlight(in, 2);
  const FiniteSumObjective obj(ds, LossKind::logistic_ridge, 0.0);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  CostCounters c;
  const Eigen::VectorXd grad = obj.full_gradient(x, c);
  EXPECT_NEAR(grad[0], -0.5, 1e-15);
  EXPECT_NEAR(grad[1], 0.0, 1e-15);
  EXPECT_NEAR(obj.value(x), std::log(2.0), 1e-15);
}

TEST(Gradient, LeastSquaresZeroResidualLeavesOnlyRidge) {
  // a=(1,0), b=2 at x=(2, 3): data term vanishes, leaving lambda/2 * |x|^2
  std::istringstream in("2 1:1\n");
  const Dataset ds = parse_svmlight(in, 2);
  const double lambda = 0.1;
  const FiniteSumObjective obj(ds, LossKind::least_squares_ridge, lambda);
  Eigen::VectorXd x(2);
  x << 2.0, 3.0;
  EXPECT_NEAR(obj.value(x), 0.5 * lambda * x.squaredNorm(), 1e-14);
  CostCounters c;
  const Eigen::VectorXd grad = obj.full_gradient(x, c);
  EXPECT_NEAR((grad - lambda * x).norm(), 0.0, 1e-14);
}

TEST(Counters, PerCallContract) {
  const Dataset ds = small_dataset();
  const FiniteSumObjective obj(ds, LossKind::logistic_ridge, 0.01);
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(2);
  CostCounters c;

  obj.component_gradient(1, x, c);
  EXPECT_EQ(c.gc, 1);
  EXPECT_EQ(c.er, 1);

  obj.full_gradient(x, c);
  EXPECT_EQ(c.gc, 1 + obj.n());
  EXPECT_EQ(c.er, 1 + obj.n());

  // values never touch the ledger
  obj.value(x);
  obj.component_value(2, x);
  EXPECT_EQ(c.gc, 1 + obj.n());
  EXPECT_EQ(c.er, 1 + obj.n());

  // one fetch feeding two evaluations: the read is paid once
  c = CostCounters{};
  const DataPoint& p = obj.fetch(1, c);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(2);
  obj.gradient_at_row(p, x, c);
  obj.gradient_at_row(p, y, c);
  EXPECT_EQ(c.gc, 2);
  EXPECT_EQ(c.er, 1);
}

TEST(Validation, RejectsBadInput) {
  const Dataset ds = small_dataset();
  const FiniteSumObjective obj(ds, LossKind::logistic_ridge, 0.01);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  CostCounters c;
  EXPECT_THROW(obj.component_gradient(-1, x, c), std::out_of_range);
  EXPECT_THROW(obj.component_gradient(obj.n(), x, c), std::out_of_range);
  EXPECT_THROW(obj.value(Eigen::VectorXd::Zero(3)), std::invalid_argument);
  EXPECT_THROW(obj.full_gradient(Eigen::VectorXd::Zero(3), c), std::invalid_argument);
  Eigen::VectorXd bad = x;
  bad[0] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(obj.value(bad), std::invalid_argument);
  bad[0] = std::numeric_limits<double>::infinity();
  EXPECT_THROW(obj.component_gradient(0, bad, c), std::invalid_argument);
  EXPECT_THROW(FiniteSumObjective(ds, LossKind::logistic_ridge, -1.0), std::invalid_argument);
}

TEST(Curvature, RidgeLossesAreStronglyConvex) {
  // <grad f(x) - grad f(y), x - y> >= mu |x - y|^2 on sampled pairs
  const Dataset ds = synth_logistic(30, 4, 77, 0.5);
  SplitMix64 g(21);
  for (LossKind loss : {LossKind::logistic_ridge, LossKind::least_squares_ridge}) {
    const FiniteSumObjective obj(ds, loss, 0.05);
    ASSERT_DOUBLE_EQ(obj.mu(), 0.05);
    CostCounters c;
    for (int rep = 0; rep < 50; ++rep) {
      const Eigen::VectorXd x = random_vec(4, g);
      const Eigen::VectorXd y = random_vec(4, g);
      const double lhs = (obj.full_gradient(x, c) - obj.full_gradient(y, c)).dot(x - y);
      EXPECT_GE(lhs, obj.mu() * (x - y).squaredNorm() - 1e-12);
    }
  }
}

TEST(Curvature, SigmoidLossIsNotConvex) {
  const Dataset ds = synth_logistic(30, 4, 78, 0.5);
  const FiniteSumObjective obj(ds, LossKind::nonconvex_sigmoid, 0.0);
  EXPECT_DOUBLE_EQ(obj.mu(), 0.0);
  SplitMix64 g(22);
  CostCounters c;
  bool violated = false;
  for (int rep = 0; rep < 500 && !violated; ++rep) {
    const Eigen::VectorXd x = random_vec(4, g, 4.0);
    const Eigen::VectorXd y = random_vec(4, g, 4.0);
    const double lhs = (obj.full_gradient(x, c) - obj.full_gradient(y, c)).dot(x - y);
    if (lhs < -1e-10) violated = true;
  }
  EXPECT_TRUE(violated);
}

TEST(Curvature, SmoothnessConstantBoundsEverySecant) {
  // Also pins the least-squares constant at 4x the quarter-max-norm rule;
  // the slope of z -> (z - b) is 1, four times the logistic slope bound.
  SplitMix64 g(23);
  for (LossKind loss :
       {LossKind::logistic_ridge, LossKind::least_squares_ridge, LossKind::nonconvex_sigmoid}) {
    const Dataset ds = synth_logistic(25, 3, 79, 0.5);
    const double lambda = (loss == LossKind::nonconvex_sigmoid) ? 0.0 : 0.02;
    const FiniteSumObjective obj(ds, loss, lambda);
    const double L = obj.smoothness();
    if (loss == LossKind::least_squares_ridge)
      EXPECT_DOUBLE_EQ(L, 4.0 * ds.smoothness() + lambda);
    else
      EXPECT_DOUBLE_EQ(L, ds.smoothness() + lambda);
    CostCounters c;
    for (int rep = 0; rep < 100; ++rep) {
      const int i = static_cast<int>(g.next_below(25));
      const Eigen::VectorXd x = random_vec(3, g);
      const Eigen::VectorXd y = random_vec(3, g);
      const double lhs =
          (obj.component_gradient(i, x, c) - obj.component_gradient(i, y, c)).norm();
      EXPECT_LE(lhs, L * (x - y).norm() * (1.0 + 1e-12)) << loss_name(loss);
    }
  }
}

TEST(Curvature, LeastSquaresConstantIsTightOnSingleRow) {
  // one row a=(1), any b: hessian of the data term is exactly a a^T, norm 1,
  // and the computed constant must not undershoot it
  std::istringstream in("0 1:1\n");
  const Dataset ds = parse_svmlight(in);
  const FiniteSumObjective obj(ds, LossKind::least_squares_ridge, 0.0);
  Eigen::VectorXd x(1), y(1);
  x << 3.0;
  y << -1.0;
  CostCounters c;
  const double lhs = (obj.component_gradient(0, x, c) - obj.component_gradient(0, y, c)).norm();
  EXPECT_NEAR(lhs, (x - y).norm(), 1e-12);
  EXPECT_GE(obj.smoothness() * (x - y).norm(), lhs - 1e-12);
}

TEST(Names, LossRoundTrip) {
  for (LossKind loss :
       {LossKind::logistic_ridge, LossKind::least_squares_ridge, LossKind::nonconvex_sigmoid}) {
    const auto parsed = parse_loss(loss_name(loss));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, loss);
  }
  EXPECT_FALSE(parse_loss("huber").has_value());
  EXPECT_TRUE(parse_loss("logistic").has_value());  // short alias
}
