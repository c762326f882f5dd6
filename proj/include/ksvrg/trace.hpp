#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace ksvrg {

// One row per outer-loop boundary. Row 0 is the post-setup state (warm start
// cost only). k is 0 for methods without a loop count, q is 0 except for the
// fresh-sample variant. residual is NaN when no reference value is attached.
struct TraceRow {
  std::string method;
  int k = 0;
  int q = 0;
  std::uint64_t seed = 0;
  double eta = 0.0;
  int outer_loop = 0;
  std::uint64_t gc_total = 0;
  std::uint64_t er_total = 0;
  double wall_ms = 0.0;
  double fval = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  double grad_norm = std::numeric_limits<double>::quiet_NaN();
  int live_snapshots = 0;
};

// A maximal contiguous run of reads during which the iterate cannot move:
// full-gradient passes and snapshot refreshes. Bounds are read-counter values,
// half-open, so the span covers end_er - start_er reads.
enum class StallCause { full_gradient, snapshot_refresh };

struct StallSpan {
  std::uint64_t start_er = 0;
  std::uint64_t end_er = 0;
  StallCause cause = StallCause::full_gradient;

  std::uint64_t length() const { return end_er - start_er; }
};

}  // namespace ksvrg
