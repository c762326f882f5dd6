#include "ksvrg/data.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "ksvrg/objective.hpp"
#include "ksvrg/rng.hpp"

using namespace ksvrg;

namespace {

Dataset parse_str(const std::string& s, int dim_override = 0) {
  std::istringstream in(s);
  return parse_svmlight(in, dim_override);
}

DataPoint make_point(std::vector<double> dense, double label) {
  DataPoint p;
  p.label = label;
  for (std::size_t j = 0; j < dense.size(); ++j) {
    p.idx.push_back(static_cast<int>(j));
    p.val.push_back(dense[j]);
  }
  return p;
}

}  // namespace

TEST(Parse, TwoRowExample) {
  const Dataset ds = parse_str("-1 1:2 2:0\n+1 2:1\n");
  EXPECT_EQ(ds.n(), 2);
  EXPECT_EQ(ds.dim(), 2);
  EXPECT_DOUBLE_EQ(ds.smoothness(), 1.0);  // max row norm^2 is 4, over 4
  EXPECT_DOUBLE_EQ(ds.point(0).label, -1.0);
  EXPECT_DOUBLE_EQ(ds.point(1).label, 1.0);
  // disk indices are 1-based, storage is 0-based
  ASSERT_EQ(ds.point(0).idx.size(), 2u);
  EXPECT_EQ(ds.point(0).idx[0], 0);
  EXPECT_EQ(ds.point(0).idx[1], 1);
  EXPECT_DOUBLE_EQ(ds.point(0).val[0], 2.0);
  EXPECT_DOUBLE_EQ(ds.point(0).val[1], 0.0);  // explicit zero preserved
  ASSERT_EQ(ds.point(1).idx.size(), 1u);
  EXPECT_EQ(ds.point(1).idx[0], 1);
}

TEST(Parse, CommentsBlanksAndCrlf) {
  const Dataset ds = parse_str("# full comment line\n\n+1 1:0.5 # trailing comment\r\n-1 2:1\r\n");
  EXPECT_EQ(ds.n(), 2);
  EXPECT_EQ(ds.dim(), 2);
  EXPECT_DOUBLE_EQ(ds.point(0).val[0], 0.5);
}

TEST(Parse, ErrorsCarryLineNumbers) {
  try {
    parse_str("+1 1:1\n-1 3:1 2:1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  try {
    parse_str("+1 0:1\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(parse_str("+1 2:2 2:1\n"), ParseError);     // repeated index
  EXPECT_THROW(parse_str("abc 1:1\n"), ParseError);        // bad label
  EXPECT_THROW(parse_str("+1 1:x\n"), ParseError);         // bad value
  EXPECT_THROW(parse_str("+1 1\n"), ParseError);           // missing colon
  EXPECT_THROW(parse_str(""), ParseError);                 // empty input
  EXPECT_THROW(parse_str("# only comments\n"), ParseError);
}

TEST(Parse, DimOverride) {
  const Dataset ds = parse_str("+1 1:1\n-1 2:1\n", 5);
  EXPECT_EQ(ds.dim(), 5);
  EXPECT_THROW(parse_str("+1 3:1\n", 2), std::invalid_argument);
}

TEST(Smoothness, FrozenExamples) {
  EXPECT_DOUBLE_EQ(compute_smoothness({make_point({2, 0}, 1)}), 1.0);
  EXPECT_DOUBLE_EQ(compute_smoothness({make_point({0, 0}, 1)}), 0.0);
  EXPECT_DOUBLE_EQ(compute_smoothness({make_point({1, 1}, 1), make_point({3, 0}, -1)}), 2.25);
  EXPECT_THROW(compute_smoothness({}), std::invalid_argument);
}

TEST(Smoothness, MatchesHandEnumerationOnRandomData) {
  SplitMix64 g(7);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 2 + static_cast<int>(g.next_below(40));
    const int d = 1 + static_cast<int>(g.next_below(8));
    std::vector<DataPoint> pts;
    double expected_max = 0.0;
    for (int i = 0; i < n; ++i) {
      std::vector<double> dense(static_cast<std::size_t>(d));
      double sq = 0.0;
      for (double& v : dense) {
        v = 4.0 * g.next_double() - 2.0;
        sq += v * v;
      }
      expected_max = std::max(expected_max, sq);
      pts.push_back(make_point(dense, g.next_double() < 0.5 ? -1.0 : 1.0));
    }
    EXPECT_DOUBLE_EQ(compute_smoothness(pts), expected_max / 4.0);
  }
}

TEST(Smoothness, OrderInvariant) {
  std::vector<DataPoint> pts = {make_point({1, 2}, 1), make_point({3, 0}, -1),
                                make_point({0.5, 0.5}, 1)};
  const double a = compute_smoothness(pts);
  std::swap(pts[0], pts[2]);
  std::swap(pts[1], pts[2]);
  EXPECT_DOUBLE_EQ(compute_smoothness(pts), a);
}

TEST(RoundTrip, SerializeThenParseIsExact) {
  SplitMix64 g(11);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 2 + static_cast<int>(g.next_below(30));
    const int d = 2 + static_cast<int>(g.next_below(10));
    std::vector<DataPoint> pts;
    for (int i = 0; i < n; ++i) {
      DataPoint p;
      p.label = g.next_double() < 0.5 ? -1.0 : 1.0;
      for (int j = 0; j < d; ++j) {
        if (g.next_double() < 0.6) {
          p.idx.push_back(j);
          p.val.push_back(20.0 * g.next_double() - 10.0);
        }
      }
      if (p.idx.empty()) {
        p.idx.push_back(0);
        p.val.push_back(1.0);
      }
      pts.push_back(std::move(p));
    }
    const Dataset ds = Dataset::from_points(std::move(pts), d);
    std::ostringstream out;
    serialize_svmlight(ds, out);
    std::istringstream in(out.str());
    const Dataset back = parse_svmlight(in, d);
    ASSERT_EQ(back.n(), ds.n());
    ASSERT_EQ(back.dim(), ds.dim());
    for (int i = 0; i < ds.n(); ++i) {
      EXPECT_EQ(back.point(i).idx, ds.point(i).idx);
      ASSERT_EQ(back.point(i).val.size(), ds.point(i).val.size());
      for (std::size_t j = 0; j < ds.point(i).val.size(); ++j)
        EXPECT_EQ(back.point(i).val[j], ds.point(i).val[j]);  // bitwise
      EXPECT_EQ(back.point(i).label, ds.point(i).label);
    }
  }
}

TEST(Synth, DeterministicAndWellFormed) {
  const Dataset a = synth_logistic(200, 6, 42, 0.7);
  const Dataset b = synth_logistic(200, 6, 42, 0.7);
  std::ostringstream sa, sb;
  serialize_svmlight(a, sa);
  serialize_svmlight(b, sb);
  EXPECT_EQ(sa.str(), sb.str());

  const Dataset c = synth_logistic(200, 6, 43, 0.7);
  std::ostringstream sc;
  serialize_svmlight(c, sc);
  EXPECT_NE(sa.str(), sc.str());

  int pos = 0, neg = 0;
  for (int i = 0; i < a.n(); ++i) {
    const DataPoint& p = a.point(i);
    EXPECT_TRUE(p.label == 1.0 || p.label == -1.0);
    (p.label > 0 ? pos : neg) += 1;
    ASSERT_EQ(p.idx.size(), 6u);
    for (double v : p.val) {
      EXPECT_GE(v, -1.0);
      EXPECT_LE(v, 1.0);
    }
  }
  EXPECT_GT(pos, 0);
  EXPECT_GT(neg, 0);
}

TEST(Synth, BothClassesEvenWhenFullySeparable) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Dataset ds = synth_logistic(5, 3, seed, 1.0);
    int pos = 0;
    for (int i = 0; i < ds.n(); ++i) pos += ds.point(i).label > 0;
    EXPECT_GT(pos, 0) << "seed " << seed;
    EXPECT_LT(pos, ds.n()) << "seed " << seed;
  }
}

TEST(Synth, RejectsBadArguments) {
  EXPECT_THROW(synth_logistic(1, 3, 1, 0.5), std::invalid_argument);
  EXPECT_THROW(synth_logistic(10, 0, 1, 0.5), std::invalid_argument);
  EXPECT_THROW(synth_logistic(10, 3, 1, 1.5), std::invalid_argument);
}

// Every component of the logistic objective built on the computed constant
// must actually be that smooth; sampled secant check.
TEST(Smoothness, LogisticComponentsAreThatSmooth) {
  const Dataset ds = synth_logistic(60, 5, 9, 0.6);
  const double lambda = 0.01;
  const FiniteSumObjective obj(ds, LossKind::logistic_ridge, lambda);
  const double L = obj.smoothness();
  SplitMix64 g(13);
  CostCounters c;
  for (int rep = 0; rep < 200; ++rep) {
    const int i = static_cast<int>(g.next_below(static_cast<std::uint64_t>(ds.n())));
    Eigen::VectorXd x(5), y(5);
    for (int j = 0; j < 5; ++j) {
      x[j] = 6.0 * g.next_double() - 3.0;
      y[j] = 6.0 * g.next_double() - 3.0;
    }
    const double lhs = (obj.component_gradient(i, x, c) - obj.component_gradient(i, y, c)).norm();
    EXPECT_LE(lhs, L * (x - y).norm() * (1.0 + 1e-12));
  }
}
