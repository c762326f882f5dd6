#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ksvrg/objective.hpp"
#include "ksvrg/rng.hpp"
#include "ksvrg/snapshots.hpp"
#include "ksvrg/trace.hpp"

namespace ksvrg {

enum class Method { sgd, svrg, saga, ksvrg_v1, ksvrg_v2, k2svrg };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::sgd: return "sgd";
    case Method::svrg: return "svrg";
    case Method::saga: return "saga";
    case Method::ksvrg_v1: return "ksvrg-v1";
    case Method::ksvrg_v2: return "ksvrg-v2";
    case Method::k2svrg: return "k2svrg";
  }
  return "?";
}

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "sgd") return Method::sgd;
  if (s == "svrg") return Method::svrg;
  if (s == "saga") return Method::saga;
  if (s == "ksvrg-v1") return Method::ksvrg_v1;
  if (s == "ksvrg-v2") return Method::ksvrg_v2;
  if (s == "k2svrg") return Method::k2svrg;
  return std::nullopt;
}

inline bool is_k_variant(Method m) {
  return m == Method::ksvrg_v1 || m == Method::ksvrg_v2 || m == Method::k2svrg;
}

struct OptimizerConfig {
  Method method = Method::ksvrg_v1;
  double eta = 0.0;
  int k = 1;               // loop count for the k-variants
  int q = 0;               // fresh-sample size (ksvrg-v2); 0 -> inner_len
  int inner_len = 0;       // 0 -> ceil(n/k) for k-variants, n for baselines
  int outer_loops = 0;
  std::uint64_t seed = 0;
  bool record_grad_norms = false;  // accumulate sum_t ||grad f(x_t)||^2 per outer loop
  Eigen::VectorXd x0;              // empty -> origin
};

inline int default_inner_len(Method m, int n, int k) {
  if (!is_k_variant(m)) return n;
  return (n + k - 1) / k;  // ceil(n/k)
}

namespace detail {

inline void validate_config(const FiniteSumObjective& obj, const OptimizerConfig& cfg) {
  if (!(cfg.eta > 0.0) || !std::isfinite(cfg.eta))
    throw std::invalid_argument("config: eta must be finite and positive");
  if (cfg.outer_loops < 0) throw std::invalid_argument("config: outer_loops must be >= 0");
  if (is_k_variant(cfg.method) && cfg.k < 1)
    throw std::invalid_argument("config: k must be >= 1");
  if (cfg.inner_len < 0) throw std::invalid_argument("config: inner_len must be >= 0");
  if (cfg.q < 0) throw std::invalid_argument("config: q must be >= 0");
  if (cfg.x0.size() != 0 && cfg.x0.size() != obj.dim())
    throw std::invalid_argument("config: x0 has wrong dimension");
  if (cfg.method == Method::ksvrg_v2) {
    const int ell =
        cfg.inner_len > 0 ? cfg.inner_len : default_inner_len(cfg.method, obj.n(), cfg.k);
    const int q = cfg.q > 0 ? cfg.q : ell;
    if (q < 1 || q > obj.n())
      throw std::invalid_argument("config: q must satisfy 1 <= q <= n");
  }
  if (cfg.eta * obj.mu() >= 1.0)
    throw std::invalid_argument("config: eta * mu must be < 1");
}

// Stall bookkeeping shared by the runners: brackets a phase during which
// reads happen but the iterate cannot move. Detection keys off the read
// ledger (the bracketed er range), not iterate diffs.
class StallRecorder {
 public:
  void begin(const CostCounters& c, StallCause cause) {
    open_ = true;
    cause_ = cause;
    start_ = c.er;
  }
  void end(const CostCounters& c, std::vector<StallSpan>& out) {
    if (open_ && c.er > start_) out.push_back(StallSpan{start_, c.er, cause_});
    open_ = false;
  }

 private:
  bool open_ = false;
  StallCause cause_ = StallCause::full_gradient;
  std::uint64_t start_ = 0;
};

}  // namespace detail

// Shared-snapshot family. One object runs either the gradient-reuse variant
// (phi = indices sampled in the inner loop, stored anchor gradients reused),
// the fresh-sample variant (phi = q-subset drawn without replacement, both
// gradient endpoints recomputed), or the permuted variant (phi = next block of
// a permutation reshuffled once per sweep; the anchor mean is refreshed at the
// end of every block, and inner indices stay uniformly random).
//
// Inner step (cost gc += 2, er += 1; the row serves both evaluations):
//   x <- x - eta * (grad_i(x) - grad_i(theta_i) + alpha_bar)
// The running average folds x_t before the step, with weights (1 - eta*mu)^j,
// so the written snapshot averages x_0 .. x_{l-1}. The iterate itself carries
// over to the next loop without restart.
class KSvrgRunner {
 public:
  KSvrgRunner(const FiniteSumObjective& obj, const OptimizerConfig& cfg)
      : obj_(&obj), cfg_(cfg) {
    if (!is_k_variant(cfg.method))
      throw std::invalid_argument("KSvrgRunner: method must be a k-variant");
    detail::validate_config(obj, cfg);
    const int n = obj.n();
    ell_ = cfg.inner_len > 0 ? cfg.inner_len : default_inner_len(cfg.method, n, cfg.k);
    q_ = cfg.method == Method::ksvrg_v2 ? (cfg.q > 0 ? cfg.q : ell_) : 0;
    x_ = cfg.x0.size() ? cfg.x0 : Eigen::VectorXd::Zero(obj.dim());
    store_.emplace(n, x_);
    rng_index_ = SplitMix64(cfg.seed).split(0);
    rng_phi_ = SplitMix64(cfg.seed).split(1);
    avg_accum_ = Eigen::VectorXd::Zero(obj.dim());
    phi_seen_.assign(static_cast<std::size_t>(n), 0);
    phi_alpha_sum_ = Eigen::VectorXd::Zero(obj.dim());
    decay_ = 1.0 - cfg.eta * obj.mu();
    if (cfg.method == Method::k2svrg) {
      num_blocks_ = (n + ell_ - 1) / ell_;
      block_cursor_ = num_blocks_;  // forces a shuffle at the first refresh
    }
    last_x_tilde_ = x_;
  }

  // theta_i = x0 for all i, alpha_bar = grad f(x0). Costs gc += n, er += n,
  // booked as setup (one full-gradient stall span).
  void warm_start() {
    if (ready_) throw std::logic_error("warm_start called twice");
    stall_.begin(counters_, StallCause::full_gradient);
    alpha_bar_ = obj_->full_gradient(x_, counters_);
    stall_.end(counters_, stalls_);
    setup_er_ = counters_.er;
    ready_ = true;
  }

  void inner_step() {
    require_ready();
    const int i = rng_index_.next_index(obj_->n());
    const DataPoint& row = obj_->fetch(i, counters_);
    const Eigen::VectorXd gx = obj_->gradient_at_row(row, x_, counters_);
    const Eigen::VectorXd ga = obj_->gradient_at_row(row, store_->lookup(i), counters_);
    if (cfg_.method == Method::ksvrg_v1 && !phi_seen_[static_cast<std::size_t>(i)]) {
      phi_seen_[static_cast<std::size_t>(i)] = 1;
      phi_.push_back(i);
      phi_alpha_sum_ += ga;  // theta_i is fixed within the loop, one term per index
    }
    avg_accum_ = decay_ * avg_accum_ + x_;
    weight_sum_ = decay_ * weight_sum_ + 1.0;
    x_ -= cfg_.eta * (gx - ga + alpha_bar_);
    t_ += 1;
  }

  void finish_outer() {
    require_ready();
    if (t_ == 0) throw std::logic_error("finish_outer before any inner step");
    const Eigen::VectorXd x_tilde = avg_accum_ / weight_sum_;
    switch (cfg_.method) {
      case Method::ksvrg_v1: refresh_v1(x_tilde); break;
      case Method::ksvrg_v2: refresh_v2(x_tilde); break;
      case Method::k2svrg: refresh_k2(x_tilde); break;
      default: break;
    }
    store_->reassign(phi_, x_tilde);
    last_x_tilde_ = x_tilde;
    phi_sizes_.push_back(static_cast<int>(phi_.size()));
    for (int i : phi_) phi_seen_[static_cast<std::size_t>(i)] = 0;
    last_phi_ = std::move(phi_);
    phi_.clear();
    phi_alpha_sum_.setZero();
    avg_accum_.setZero();
    weight_sum_ = 0.0;
    t_ = 0;
    m_ += 1;
  }

  void run_outer_loop() {
    for (int t = 0; t < ell_; ++t) inner_step();
    finish_outer();
  }

  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& alpha_bar() const { return alpha_bar_; }
  const Eigen::VectorXd& last_x_tilde() const { return last_x_tilde_; }
  const SnapshotStore& store() const { return *store_; }
  const std::vector<int>& phi() const { return phi_; }
  const std::vector<int>& last_phi() const { return last_phi_; }
  const Eigen::VectorXd& phi_alpha_sum() const { return phi_alpha_sum_; }
  const std::vector<int>& phi_sizes() const { return phi_sizes_; }
  int t() const { return t_; }
  int m() const { return m_; }
  int inner_len() const { return ell_; }
  int q() const { return q_; }
  double weight_sum() const { return weight_sum_; }
  CostCounters& counters() { return counters_; }
  const CostCounters& counters() const { return counters_; }
  const std::vector<StallSpan>& stalls() const { return stalls_; }
  std::uint64_t setup_er() const { return setup_er_; }
  int live_snapshots() const { return store_->live_count(); }

 private:
  void require_ready() const {
    if (!ready_) throw std::logic_error("runner used before warm_start");
  }

  // Reuse variant: sum of stored anchor gradients over phi was collected in
  // the inner loop, so only |phi| fresh evaluations are needed.
  void refresh_v1(const Eigen::VectorXd& x_tilde) {
    stall_.begin(counters_, StallCause::snapshot_refresh);
    Eigen::VectorXd sum_new = Eigen::VectorXd::Zero(obj_->dim());
    for (int i : phi_) sum_new += obj_->component_gradient(i, x_tilde, counters_);
    stall_.end(counters_, stalls_);
    alpha_bar_ += (sum_new - phi_alpha_sum_) / static_cast<double>(obj_->n());
  }

  void refresh_v2(const Eigen::VectorXd& x_tilde) {
    phi_ = sample_without_replacement(q_, obj_->n(), rng_phi_);
    apply_two_point_refresh(x_tilde);
  }

  void refresh_k2(const Eigen::VectorXd& x_tilde) {
    if (block_cursor_ == num_blocks_) {
      perm_ = random_permutation(obj_->n(), rng_phi_);
      block_cursor_ = 0;
    }
    const int lo = block_cursor_ * ell_;
    const int hi = std::min(lo + ell_, obj_->n());
    phi_.assign(perm_.begin() + lo, perm_.begin() + hi);
    block_cursor_ += 1;
    apply_two_point_refresh(x_tilde);
  }

  // Both gradient endpoints are recomputed for every i in phi: 2|phi|
  // evaluations and 2|phi| reads, one contiguous refresh stall.
  void apply_two_point_refresh(const Eigen::VectorXd& x_tilde) {
    stall_.begin(counters_, StallCause::snapshot_refresh);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(obj_->dim());
    for (int i : phi_) {
      delta -= obj_->component_gradient(i, store_->lookup(i), counters_);
      delta += obj_->component_gradient(i, x_tilde, counters_);
    }
    stall_.end(counters_, stalls_);
    alpha_bar_ += delta / static_cast<double>(obj_->n());
  }

  const FiniteSumObjective* obj_;
  OptimizerConfig cfg_;
  int ell_ = 0;
  int q_ = 0;
  double decay_ = 1.0;

  Eigen::VectorXd x_;
  Eigen::VectorXd alpha_bar_;
  Eigen::VectorXd avg_accum_;
  double weight_sum_ = 0.0;
  Eigen::VectorXd phi_alpha_sum_;
  Eigen::VectorXd last_x_tilde_;
  std::optional<SnapshotStore> store_;
  std::vector<int> phi_;
  std::vector<int> last_phi_;
  std::vector<char> phi_seen_;
  std::vector<int> phi_sizes_;
  int t_ = 0;
  int m_ = 0;
  bool ready_ = false;

  SplitMix64 rng_index_{0};
  SplitMix64 rng_phi_{0};
  std::vector<int> perm_;
  int num_blocks_ = 0;
  int block_cursor_ = 0;

  CostCounters counters_;
  std::vector<StallSpan> stalls_;
  detail::StallRecorder stall_;
  std::uint64_t setup_er_ = 0;
};

// Single-anchor baseline with inner-loop length n. Each epoch steps against a
// fixed anchor and its full gradient (gc += 2, er += 1 per step), then takes
// the last iterate as the new anchor, recomputes the full gradient in one
// n-read stall, and restarts the inner loop from the anchor.
class SvrgRunner {
 public:
  SvrgRunner(const FiniteSumObjective& obj, const OptimizerConfig& cfg) : obj_(&obj), cfg_(cfg) {
    detail::validate_config(obj, cfg);
    x_ = cfg.x0.size() ? cfg.x0 : Eigen::VectorXd::Zero(obj.dim());
    anchor_ = x_;
    rng_index_ = SplitMix64(cfg.seed).split(0);
  }

  void warm_start() {
    if (ready_) throw std::logic_error("warm_start called twice");
    stall_.begin(counters_, StallCause::full_gradient);
    anchor_grad_ = obj_->full_gradient(anchor_, counters_);
    stall_.end(counters_, stalls_);
    setup_er_ = counters_.er;
    ready_ = true;
  }

  void inner_step() {
    if (!ready_) throw std::logic_error("runner used before warm_start");
    const int i = rng_index_.next_index(obj_->n());
    const DataPoint& row = obj_->fetch(i, counters_);
    const Eigen::VectorXd gx = obj_->gradient_at_row(row, x_, counters_);
    const Eigen::VectorXd ga = obj_->gradient_at_row(row, anchor_, counters_);
    x_ -= cfg_.eta * (gx - ga + anchor_grad_);
    t_ += 1;
  }

  void finish_epoch() {
    if (!ready_) throw std::logic_error("runner used before warm_start");
    anchor_ = x_;
    stall_.begin(counters_, StallCause::full_gradient);
    anchor_grad_ = obj_->full_gradient(anchor_, counters_);
    stall_.end(counters_, stalls_);
    x_ = anchor_;
    t_ = 0;
    m_ += 1;
  }

  void run_epoch() {
    for (int t = 0; t < obj_->n(); ++t) inner_step();
    finish_epoch();
  }

  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& anchor() const { return anchor_; }
  const Eigen::VectorXd& anchor_grad() const { return anchor_grad_; }
  int m() const { return m_; }
  CostCounters& counters() { return counters_; }
  const std::vector<StallSpan>& stalls() const { return stalls_; }
  std::uint64_t setup_er() const { return setup_er_; }

 private:
  const FiniteSumObjective* obj_;
  OptimizerConfig cfg_;
  Eigen::VectorXd x_, anchor_, anchor_grad_;
  int t_ = 0, m_ = 0;
  bool ready_ = false;
  SplitMix64 rng_index_{0};
  CostCounters counters_;
  std::vector<StallSpan> stalls_;
  detail::StallRecorder stall_;
  std::uint64_t setup_er_ = 0;
};

// Per-component gradient table. A step fetches the data row and the stored
// gradient vector (er += 2), evaluates once (gc += 1), then overwrites the
// table entry and folds the difference into the running mean.
class SagaRunner {
 public:
  SagaRunner(const FiniteSumObjective& obj, const OptimizerConfig& cfg) : obj_(&obj), cfg_(cfg) {
    detail::validate_config(obj, cfg);
    x_ = cfg.x0.size() ? cfg.x0 : Eigen::VectorXd::Zero(obj.dim());
    rng_index_ = SplitMix64(cfg.seed).split(0);
  }

  void warm_start() {
    if (ready_) throw std::logic_error("warm_start called twice");
    const int n = obj_->n();
    table_.resize(static_cast<std::size_t>(n));
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(obj_->dim());
    stall_.begin(counters_, StallCause::full_gradient);
    for (int i = 0; i < n; ++i) {
      const DataPoint& row = obj_->fetch(i, counters_);
      table_[static_cast<std::size_t>(i)] = obj_->gradient_at_row(row, x_, counters_);
      sum += table_[static_cast<std::size_t>(i)];
    }
    stall_.end(counters_, stalls_);
    alpha_bar_ = sum / static_cast<double>(n);
    setup_er_ = counters_.er;
    ready_ = true;
  }

  void step() {
    if (!ready_) throw std::logic_error("runner used before warm_start");
    const int i = rng_index_.next_index(obj_->n());
    const DataPoint& row = obj_->fetch(i, counters_);
    const Eigen::VectorXd gx = obj_->gradient_at_row(row, x_, counters_);
    counters_.er += 1;  // stored gradient vector fetch
    Eigen::VectorXd& ai = table_[static_cast<std::size_t>(i)];
    x_ -= cfg_.eta * (gx - ai + alpha_bar_);
    alpha_bar_ += (gx - ai) / static_cast<double>(obj_->n());
    ai = gx;
  }

  const Eigen::VectorXd& x() const { return x_; }
  const Eigen::VectorXd& alpha_bar() const { return alpha_bar_; }
  const std::vector<Eigen::VectorXd>& table() const { return table_; }
  CostCounters& counters() { return counters_; }
  const std::vector<StallSpan>& stalls() const { return stalls_; }
  std::uint64_t setup_er() const { return setup_er_; }

 private:
  const FiniteSumObjective* obj_;
  OptimizerConfig cfg_;
  Eigen::VectorXd x_, alpha_bar_;
  std::vector<Eigen::VectorXd> table_;
  bool ready_ = false;
  SplitMix64 rng_index_{0};
  CostCounters counters_;
  std::vector<StallSpan> stalls_;
  detail::StallRecorder stall_;
  std::uint64_t setup_er_ = 0;
};

// Plain stochastic gradient control: no anchors, no warm start, gc += 1 and
// er += 1 per step.
class SgdRunner {
 public:
  SgdRunner(const FiniteSumObjective& obj, const OptimizerConfig& cfg) : obj_(&obj), cfg_(cfg) {
    detail::validate_config(obj, cfg);
    x_ = cfg.x0.size() ? cfg.x0 : Eigen::VectorXd::Zero(obj.dim());
    rng_index_ = SplitMix64(cfg.seed).split(0);
  }

  void step() {
    const int i = rng_index_.next_index(obj_->n());
    x_ -= cfg_.eta * obj_->component_gradient(i, x_, counters_);
  }

  const Eigen::VectorXd& x() const { return x_; }
  CostCounters& counters() { return counters_; }

 private:
  const FiniteSumObjective* obj_;
  OptimizerConfig cfg_;
  Eigen::VectorXd x_;
  SplitMix64 rng_index_{0};
  CostCounters counters_;
};

struct RunResult {
  Eigen::VectorXd x_final;
  std::vector<TraceRow> trace;
  CostCounters counters;
  std::vector<StallSpan> stalls;
  std::uint64_t setup_er = 0;
  std::vector<int> phi_sizes;           // |phi| per outer loop (k-variants)
  std::vector<double> grad_frob_sq;     // per outer loop sum_t ||grad f(x_t)||^2
};

// State handed to the boundary hook after every trace row is recorded.
// store is null for the baselines; phi is empty at the setup boundary.
struct OuterBoundaryEvent {
  int outer_loop = 0;
  const Eigen::VectorXd* x = nullptr;
  const Eigen::VectorXd* x_tilde = nullptr;
  const std::vector<int>* phi = nullptr;
  const SnapshotStore* store = nullptr;
  const Eigen::VectorXd* alpha_bar = nullptr;
  const CostCounters* counters = nullptr;
};

struct RunHooks {
  std::function<void(const OuterBoundaryEvent&)> on_outer_boundary;
};

namespace detail {

class WallClock {
 public:
  WallClock() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

// Full driver: warm start, M outer loops, one trace row per boundary
// (outer_loop 0 is the setup row). Function value and gradient norm on the
// rows are instrumentation and never touch the run counters.
inline RunResult run(const FiniteSumObjective& obj, const OptimizerConfig& cfg,
                     const double* f_star = nullptr, const RunHooks* hooks = nullptr) {
  detail::validate_config(obj, cfg);
  const detail::WallClock clock;
  RunResult result;
  const int M = cfg.outer_loops;

  const auto record = [&](int m, const CostCounters& counters, int live,
                          const Eigen::VectorXd& x) {
    CostCounters scratch;
    TraceRow row;
    row.method = method_name(cfg.method);
    row.k = is_k_variant(cfg.method) ? cfg.k : 0;
    row.q = 0;
    row.seed = cfg.seed;
    row.eta = cfg.eta;
    row.outer_loop = m;
    row.gc_total = counters.gc;
    row.er_total = counters.er;
    row.wall_ms = clock.ms();
    row.fval = obj.value(x);
    row.residual = f_star ? row.fval - *f_star : std::numeric_limits<double>::quiet_NaN();
    row.grad_norm = obj.full_gradient(x, scratch).norm();
    row.live_snapshots = live;
    result.trace.push_back(std::move(row));
  };

  const auto fire_hook = [&](int m, const Eigen::VectorXd& x, const Eigen::VectorXd& x_tilde,
                             const std::vector<int>& phi, const SnapshotStore* store,
                             const Eigen::VectorXd& alpha_bar, const CostCounters& counters) {
    if (!hooks || !hooks->on_outer_boundary) return;
    OuterBoundaryEvent ev;
    ev.outer_loop = m;
    ev.x = &x;
    ev.x_tilde = &x_tilde;
    ev.phi = &phi;
    ev.store = store;
    ev.alpha_bar = &alpha_bar;
    ev.counters = &counters;
    hooks->on_outer_boundary(ev);
  };

  const auto frob_step = [&](const Eigen::VectorXd& x, double& acc) {
    if (!cfg.record_grad_norms) return;
    CostCounters scratch;
    acc += obj.full_gradient(x, scratch).squaredNorm();
  };

  const std::vector<int> no_phi;

  switch (cfg.method) {
    case Method::ksvrg_v1:
    case Method::ksvrg_v2:
    case Method::k2svrg: {
      KSvrgRunner r(obj, cfg);
      r.warm_start();
      record(0, r.counters(), r.live_snapshots(), r.x());
      if (cfg.method == Method::ksvrg_v2) result.trace.back().q = r.q();
      fire_hook(0, r.x(), r.last_x_tilde(), no_phi, &r.store(), r.alpha_bar(), r.counters());
      for (int m = 1; m <= M; ++m) {
        double acc = 0.0;
        for (int t = 0; t < r.inner_len(); ++t) {
          frob_step(r.x(), acc);
          r.inner_step();
        }
        r.finish_outer();
        if (cfg.record_grad_norms) result.grad_frob_sq.push_back(acc);
        record(m, r.counters(), r.live_snapshots(), r.x());
        if (cfg.method == Method::ksvrg_v2) result.trace.back().q = r.q();
        fire_hook(m, r.x(), r.last_x_tilde(), r.last_phi(), &r.store(), r.alpha_bar(),
                  r.counters());
      }
      result.x_final = r.x();
      result.counters = r.counters();
      result.stalls = r.stalls();
      result.setup_er = r.setup_er();
      result.phi_sizes = r.phi_sizes();
      break;
    }
    case Method::svrg: {
      SvrgRunner r(obj, cfg);
      r.warm_start();
      record(0, r.counters(), 1, r.x());
      fire_hook(0, r.x(), r.anchor(), no_phi, nullptr, r.anchor_grad(), r.counters());
      for (int m = 1; m <= M; ++m) {
        double acc = 0.0;
        for (int t = 0; t < obj.n(); ++t) {
          frob_step(r.x(), acc);
          r.inner_step();
        }
        r.finish_epoch();
        if (cfg.record_grad_norms) result.grad_frob_sq.push_back(acc);
        record(m, r.counters(), 1, r.x());
        fire_hook(m, r.x(), r.anchor(), no_phi, nullptr, r.anchor_grad(), r.counters());
      }
      result.x_final = r.x();
      result.counters = r.counters();
      result.stalls = r.stalls();
      result.setup_er = r.setup_er();
      break;
    }
    case Method::saga: {
      SagaRunner r(obj, cfg);
      r.warm_start();
      record(0, r.counters(), obj.n(), r.x());
      fire_hook(0, r.x(), r.x(), no_phi, nullptr, r.alpha_bar(), r.counters());
      for (int m = 1; m <= M; ++m) {
        double acc = 0.0;
        for (int t = 0; t < obj.n(); ++t) {
          frob_step(r.x(), acc);
          r.step();
        }
        if (cfg.record_grad_norms) result.grad_frob_sq.push_back(acc);
        record(m, r.counters(), obj.n(), r.x());
        fire_hook(m, r.x(), r.x(), no_phi, nullptr, r.alpha_bar(), r.counters());
      }
      result.x_final = r.x();
      result.counters = r.counters();
      result.stalls = r.stalls();
      result.setup_er = r.setup_er();
      break;
    }
    case Method::sgd: {
      SgdRunner r(obj, cfg);
      record(0, r.counters(), 0, r.x());
      const Eigen::VectorXd empty_bar = Eigen::VectorXd::Zero(obj.dim());
      fire_hook(0, r.x(), r.x(), no_phi, nullptr, empty_bar, r.counters());
      for (int m = 1; m <= M; ++m) {
        double acc = 0.0;
        for (int t = 0; t < obj.n(); ++t) {
          frob_step(r.x(), acc);
          r.step();
        }
        if (cfg.record_grad_norms) result.grad_frob_sq.push_back(acc);
        record(m, r.counters(), 0, r.x());
        fire_hook(m, r.x(), r.x(), no_phi, nullptr, empty_bar, r.counters());
      }
      result.x_final = r.x();
      result.counters = r.counters();
      break;
    }
  }
  return result;
}

}  // namespace ksvrg
