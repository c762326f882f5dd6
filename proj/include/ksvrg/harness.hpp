#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "ksvrg/objective.hpp"
#include "ksvrg/optim.hpp"
#include "ksvrg/text.hpp"
#include "ksvrg/theory.hpp"
#include "ksvrg/trace.hpp"

namespace ksvrg {

inline constexpr const char* kCsvHeader =
    "method,k,q,seed,eta,outer_loop,gc_total,er_total,wall_ms,fval,residual,grad_norm,"
    "live_snapshots";

struct GridCell {
  Method method = Method::ksvrg_v1;
  int k = 1;
  int q = 0;          // 0 -> method default
  int inner_len = 0;  // 0 -> method default
  double eta = 0.0;
  std::uint64_t seed = 0;
};

struct CellError {
  GridCell cell;
  std::string message;
};

struct ExperimentResult {
  std::vector<TraceRow> rows;
  std::vector<StallSpan> stalls;       // concatenated in cell order
  std::vector<CellError> errors;       // failed cells; the rest still run
};

namespace detail {

inline std::tuple<std::string, int, int, double, std::uint64_t> cell_key(const GridCell& c) {
  return {method_name(c.method), c.k, c.q, c.eta, c.seed};
}

}  // namespace detail

// Runs every cell for `outer_loops` boundaries. Cells are ordered by
// (method, k, q, eta, seed) and results are emitted in that order whatever
// the worker count, so output bytes do not depend on jobs. A throwing cell
// is recorded and skipped; the grid carries on.
inline ExperimentResult run_experiment(const FiniteSumObjective& obj, std::vector<GridCell> cells,
                                       int outer_loops, const ReferenceSolution* ref = nullptr,
                                       int jobs = 1) {
  if (jobs < 1) throw std::invalid_argument("run_experiment: jobs must be >= 1");
  std::sort(cells.begin(), cells.end(), [](const GridCell& a, const GridCell& b) {
    return detail::cell_key(a) < detail::cell_key(b);
  });

  struct Slot {
    bool failed = false;
    std::string message;
    RunResult result;
  };
  std::vector<Slot> slots(cells.size());

  const auto work = [&](std::size_t idx) {
    const GridCell& cell = cells[idx];
    OptimizerConfig cfg;
    cfg.method = cell.method;
    cfg.k = cell.k;
    cfg.q = cell.q;
    cfg.inner_len = cell.inner_len;
    cfg.eta = cell.eta;
    cfg.seed = cell.seed;
    cfg.outer_loops = outer_loops;
    try {
      const double* fs = ref ? &ref->f_star : nullptr;
      slots[idx].result = run(obj, cfg, fs);
    } catch (const std::exception& e) {
      slots[idx].failed = true;
      slots[idx].message = e.what();
    }
  };

  if (jobs == 1 || cells.size() <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), cells.size());
    // static round-robin split keeps the run free of locks
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w]() {
        for (std::size_t i = w; i < cells.size(); i += workers) work(i);
      });
    }
    for (auto& t : pool) t.join();
  }

  ExperimentResult out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (slots[i].failed) {
      out.errors.push_back(CellError{cells[i], slots[i].message});
      continue;
    }
    auto& r = slots[i].result;
    out.rows.insert(out.rows.end(), r.trace.begin(), r.trace.end());
    out.stalls.insert(out.stalls.end(), r.stalls.begin(), r.stalls.end());
  }
  return out;
}

inline void write_csv(std::ostream& out, const std::vector<TraceRow>& rows) {
  out << kCsvHeader << '\n';
  for (const TraceRow& r : rows) {
    out << r.method << ',' << r.k << ',' << r.q << ',' << r.seed << ',' << format_double(r.eta)
        << ',' << r.outer_loop << ',' << r.gc_total << ',' << r.er_total << ','
        << format_double(r.wall_ms) << ',' << format_double(r.fval) << ','
        << format_double(r.residual) << ',' << format_double(r.grad_norm) << ','
        << r.live_snapshots << '\n';
  }
}

inline void write_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  write_csv(f, rows);
  if (!f) throw std::runtime_error("write_csv: write failed for " + path);
}

inline std::vector<TraceRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("read_csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw std::runtime_error("read_csv: unexpected header");
  std::vector<TraceRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view sv(line);
    std::size_t start = 0;
    for (std::size_t i = 0; i <= sv.size(); ++i) {
      if (i == sv.size() || sv[i] == ',') {
        f.push_back(sv.substr(start, i - start));
        start = i + 1;
      }
    }
    if (f.size() != 13)
      throw std::runtime_error("read_csv: line " + std::to_string(lineno) + ": bad field count");
    TraceRow r;
    r.method = std::string(f[0]);
    bool ok = parse_int(f[1], r.k) && parse_int(f[2], r.q) && parse_uint64(f[3], r.seed) &&
              parse_double(f[4], r.eta) && parse_int(f[5], r.outer_loop) &&
              parse_uint64(f[6], r.gc_total) && parse_uint64(f[7], r.er_total) &&
              parse_double(f[8], r.wall_ms) && parse_double(f[9], r.fval) &&
              parse_double(f[10], r.residual) && parse_double(f[11], r.grad_norm) &&
              parse_int(f[12], r.live_snapshots);
    if (!ok)
      throw std::runtime_error("read_csv: line " + std::to_string(lineno) + ": bad field value");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline std::vector<TraceRow> read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_csv: cannot open " + path);
  return read_csv(f);
}

struct ManifestInfo {
  std::string dataset;  // file path or synth(...) descriptor
  int n = 0;
  int d = 0;
  double L = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  std::string loss;
  double condition_number = std::numeric_limits<double>::quiet_NaN();  // (L/mu), metadata only
  std::string methods;
  std::string ks;
  std::string qs;
  std::string etas;
  std::string seeds;
  int outer_loops = 0;
  std::string verification_report;  // path, empty when none
};

inline void write_manifest(std::ostream& out, const ManifestInfo& m) {
  out << "dataset = " << m.dataset << '\n';
  out << "n = " << m.n << '\n';
  out << "d = " << m.d << '\n';
  out << "L = " << format_double(m.L) << '\n';
  out << "lambda = " << format_double(m.lambda) << '\n';
  out << "mu = " << format_double(m.mu) << '\n';
  out << "loss = " << m.loss << '\n';
  out << "condition_number = " << format_double(m.condition_number) << '\n';
  out << "methods = " << m.methods << '\n';
  out << "ks = " << m.ks << '\n';
  out << "qs = " << m.qs << '\n';
  out << "etas = " << m.etas << '\n';
  out << "seeds = " << m.seeds << '\n';
  out << "outer_loops = " << m.outer_loops << '\n';
  if (!m.verification_report.empty())
    out << "verification_report = " << m.verification_report << '\n';
}

inline void write_manifest(const std::string& path, const ManifestInfo& m) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_manifest: cannot open " + path);
  write_manifest(f, m);
}

// Reference-minimizer artifact: key = value lines plus one whitespace
// separated x_star line, every number in round-trip form.
inline void write_reference(std::ostream& out, const ReferenceSolution& ref,
                            const std::string& loss, double lambda) {
  out << "loss = " << loss << '\n';
  out << "lambda = " << format_double(lambda) << '\n';
  out << "d = " << ref.x_star.size() << '\n';
  out << "f_star = " << format_double(ref.f_star) << '\n';
  out << "grad_norm = " << format_double(ref.grad_norm) << '\n';
  out << "x_star =";
  for (Eigen::Index j = 0; j < ref.x_star.size(); ++j)
    out << ' ' << format_double(ref.x_star[j]);
  out << '\n';
}

inline void write_reference(const std::string& path, const ReferenceSolution& ref,
                            const std::string& loss, double lambda) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_reference: cannot open " + path);
  write_reference(f, ref, loss, lambda);
}

// Reads back what write_reference produced. Component gradients are not
// stored; recompute them against the objective when a tracker needs them.
inline ReferenceSolution read_reference(std::istream& in) {
  ReferenceSolution ref;
  bool have_f = false, have_x = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    while (!key.empty() && key.back() == ' ') key.pop_back();
    std::string rest = line.substr(eq + 1);
    std::istringstream vals(rest);
    if (key == "f_star") {
      vals >> ref.f_star;
      have_f = !vals.fail();
    } else if (key == "grad_norm") {
      vals >> ref.grad_norm;
    } else if (key == "x_star") {
      std::vector<double> xs;
      double v;
      while (vals >> v) xs.push_back(v);
      ref.x_star = Eigen::Map<Eigen::VectorXd>(xs.data(), static_cast<Eigen::Index>(xs.size()));
      have_x = ref.x_star.size() > 0;
    }
  }
  if (!have_f || !have_x)
    throw std::runtime_error("read_reference: missing f_star or x_star");
  return ref;
}

inline ReferenceSolution read_reference(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_reference: cannot open " + path);
  return read_reference(f);
}

// Longest stall after the warm-start pass (the setup span always covers
// [0, setup_er) and is bounded by n by construction, not by the inner loop).
inline std::uint64_t max_post_setup_stall(const std::vector<StallSpan>& spans,
                                          std::uint64_t setup_er) {
  std::uint64_t best = 0;
  for (const StallSpan& s : spans)
    if (s.start_er >= setup_er) best = std::max(best, s.length());
  return best;
}

// Closed-form ledgers per method; phi_sizes feeds the data-dependent variants.
struct LedgerPrediction {
  std::uint64_t gc = 0;
  std::uint64_t er = 0;
};

inline LedgerPrediction predict_counters(Method method, int n, int outer_loops, int ell, int q,
                                         const std::vector<int>& phi_sizes = {}) {
  const auto un = static_cast<std::uint64_t>(n);
  const auto uM = static_cast<std::uint64_t>(outer_loops);
  const auto ul = static_cast<std::uint64_t>(ell);
  const auto uq = static_cast<std::uint64_t>(q);
  LedgerPrediction p;
  switch (method) {
    case Method::ksvrg_v1: {
      std::uint64_t phi_total = 0;
      for (int s : phi_sizes) phi_total += static_cast<std::uint64_t>(s);
      p.gc = un + uM * 2 * ul + phi_total;
      p.er = un + uM * ul + phi_total;
      break;
    }
    case Method::ksvrg_v2:
      p.gc = un + uM * (2 * ul + 2 * uq);
      p.er = un + uM * (ul + 2 * uq);
      break;
    case Method::k2svrg: {
      std::uint64_t block_total = 0;
      for (int s : phi_sizes) block_total += static_cast<std::uint64_t>(s);
      p.gc = un + uM * 2 * ul + 2 * block_total;
      p.er = un + uM * ul + 2 * block_total;
      break;
    }
    case Method::svrg:
      p.gc = un + uM * 3 * un;
      p.er = un + uM * 2 * un;
      break;
    case Method::saga:
      p.gc = un + uM * un;
      p.er = un + uM * 2 * un;
      break;
    case Method::sgd:
      p.gc = uM * un;
      p.er = uM * un;
      break;
  }
  return p;
}

}  // namespace ksvrg
