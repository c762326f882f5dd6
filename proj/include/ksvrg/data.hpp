#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ksvrg/rng.hpp"
#include "ksvrg/text.hpp"

namespace ksvrg {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// One sparse row: feature indices are 0-based internally and strictly
// increasing. Explicit zero values are kept as stored.
struct DataPoint {
  std::vector<int> idx;
  std::vector<double> val;
  double label = 0.0;

  double dot(const Eigen::VectorXd& x) const {
    double z = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) z += val[j] * x[idx[j]];
    return z;
  }

  double squared_norm() const {
    double s = 0.0;
    for (double v : val) s += v * v;
    return s;
  }
};

// L = max_i ||a_i||^2 / 4, the worst-row smoothness of the logistic data term.
inline double compute_smoothness(const std::vector<DataPoint>& points) {
  if (points.empty()) throw std::invalid_argument("compute_smoothness: empty dataset");
  double max_sq = 0.0;
  for (const DataPoint& p : points) max_sq = std::max(max_sq, p.squared_norm());
  return 0.25 * max_sq;
}

class Dataset {
 public:
  // dim_override = 0 infers d as 1 + max feature index. A positive override
  // must cover every index actually present.
  static Dataset from_points(std::vector<DataPoint> points, int dim_override = 0) {
    if (points.empty()) throw std::invalid_argument("Dataset: no data points");
    int max_dim = 0;
    for (const DataPoint& p : points) {
      if (!p.idx.empty()) max_dim = std::max(max_dim, p.idx.back() + 1);
    }
    int dim = max_dim;
    if (dim_override > 0) {
      if (dim_override < max_dim)
        throw std::invalid_argument("Dataset: dimension override smaller than max feature index");
      dim = dim_override;
    }
    if (dim < 1) throw std::invalid_argument("Dataset: no features in any row");
    Dataset ds;
    ds.points_ = std::move(points);
    ds.dim_ = dim;
    ds.smoothness_ = compute_smoothness(ds.points_);
    return ds;
  }

  int n() const { return static_cast<int>(points_.size()); }
  int dim() const { return dim_; }
  double smoothness() const { return smoothness_; }
  const DataPoint& point(int i) const { return points_[static_cast<std::size_t>(i)]; }
  const std::vector<DataPoint>& points() const { return points_; }

 private:
  Dataset() = default;
  std::vector<DataPoint> points_;
  int dim_ = 0;
  double smoothness_ = 0.0;
};

namespace detail {

inline void split_ws(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
}

}  // namespace detail

// Text rows "<label> <index>:<value> ...", indices 1-based and strictly
// increasing per row. '#' starts a comment, blank lines are skipped, CRLF
// line endings are accepted. Errors carry the 1-based line number.
inline Dataset parse_svmlight(std::istream& in, int dim_override = 0) {
  std::vector<DataPoint> points;
  std::string line;
  std::vector<std::string_view> toks;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    if (!sv.empty() && sv.back() == '\r') sv.remove_suffix(1);
    if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    detail::split_ws(sv, toks);
    if (toks.empty()) continue;

    DataPoint p;
    if (!parse_double(toks[0], p.label))
      throw ParseError(lineno, "bad label '" + std::string(toks[0]) + "'");
    int prev_index = 0;  // 1-based on disk
    for (std::size_t t = 1; t < toks.size(); ++t) {
      const std::string_view tok = toks[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos)
        throw ParseError(lineno, "expected index:value, got '" + std::string(tok) + "'");
      int index = 0;
      double value = 0.0;
      if (!parse_int(tok.substr(0, colon), index))
        throw ParseError(lineno, "bad feature index '" + std::string(tok.substr(0, colon)) + "'");
      if (!parse_double(tok.substr(colon + 1), value))
        throw ParseError(lineno, "bad feature value '" + std::string(tok.substr(colon + 1)) + "'");
      if (index < 1) throw ParseError(lineno, "feature index " + std::to_string(index) + " < 1");
      if (index <= prev_index)
        throw ParseError(lineno, "feature indices not strictly increasing at " + std::to_string(index));
      prev_index = index;
      p.idx.push_back(index - 1);
      p.val.push_back(value);
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw ParseError(lineno, "no data points");
  return Dataset::from_points(std::move(points), dim_override);
}

// Inverse of parse_svmlight: values in shortest round-trip form, so
// serialize -> parse reproduces the dataset exactly.
inline void serialize_svmlight(const Dataset& ds, std::ostream& out) {
  for (const DataPoint& p : ds.points()) {
    out << format_double(p.label);
    for (std::size_t j = 0; j < p.idx.size(); ++j)
      out << ' ' << (p.idx[j] + 1) << ':' << format_double(p.val[j]);
    out << '\n';
  }
}

// Deterministic synthetic binary classification task. Rows are dense with
// features in [-1, 1]; labels follow sign(<w, a_i>) for a hidden unit-scale w
// and flip with probability (1 - separability)/2. Both classes are always
// present: if the draw comes out single-class, the row with the weakest margin
// is flipped.
inline Dataset synth_logistic(int n, int d, std::uint64_t seed, double separability) {
  if (n < 2) throw std::invalid_argument("synth_logistic: need n >= 2");
  if (d < 1) throw std::invalid_argument("synth_logistic: need d >= 1");
  if (separability < 0.0 || separability > 1.0)
    throw std::invalid_argument("synth_logistic: separability must be in [0, 1]");
  SplitMix64 base(seed);
  SplitMix64 wrng = base.split(0);
  SplitMix64 xrng = base.split(1);
  SplitMix64 lrng = base.split(2);

  Eigen::VectorXd w(d);
  for (int j = 0; j < d; ++j) w[j] = 2.0 * wrng.next_double() - 1.0;
  if (w.norm() == 0.0) w[0] = 1.0;
  w /= w.norm();

  const double flip_prob = 0.5 * (1.0 - separability);
  std::vector<DataPoint> points;
  points.reserve(static_cast<std::size_t>(n));
  int positives = 0;
  double weakest_margin = std::numeric_limits<double>::infinity();
  int weakest_row = 0;
  for (int i = 0; i < n; ++i) {
    DataPoint p;
    p.idx.resize(static_cast<std::size_t>(d));
    p.val.resize(static_cast<std::size_t>(d));
    double z = 0.0;
    for (int j = 0; j < d; ++j) {
      p.idx[static_cast<std::size_t>(j)] = j;
      const double v = 2.0 * xrng.next_double() - 1.0;
      p.val[static_cast<std::size_t>(j)] = v;
      z += w[j] * v;
    }
    double label = z >= 0.0 ? 1.0 : -1.0;
    if (lrng.next_double() < flip_prob) label = -label;
    p.label = label;
    if (label > 0.0) ++positives;
    if (std::abs(z) < weakest_margin) {
      weakest_margin = std::abs(z);
      weakest_row = i;
    }
    points.push_back(std::move(p));
  }
  if (positives == 0 || positives == n)
    points[static_cast<std::size_t>(weakest_row)].label *= -1.0;
  return Dataset::from_points(std::move(points), d);
}

}  // namespace ksvrg
