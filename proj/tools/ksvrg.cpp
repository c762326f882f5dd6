// Command-line front end: run (benchmark grids -> CSV + manifest),
// solve-ref (high-precision reference minimizer), verify (rate and
// certificate checks), synth (dataset generator).
//
// Exit codes: 0 success, 1 runtime failure (I/O, non-convergence, every grid
// cell failed, verification violated), 2 flag or precondition errors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ksvrg/ksvrg.hpp"

namespace {

using namespace ksvrg;

struct DatasetFlags {
  std::string dataset;  // "synth" or a file path
  int n = 0;
  int d = 0;
  std::uint64_t seed = 1;  // generator seed for synth
  double sep = 0.5;
  int dim_override = 0;
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags& f, int default_n, int default_d) {
  cmd->add_option("--dataset", f.dataset, "'synth' or path to a sparse text dataset")->required();
  cmd->add_option("--n", f.n, "synth: number of rows (default " + std::to_string(default_n) + ")");
  cmd->add_option("--d", f.d, "synth: feature dimension (default " + std::to_string(default_d) + ")");
  cmd->add_option("--seed", f.seed, "synth: generator seed")->capture_default_str();
  cmd->add_option("--sep", f.sep, "synth: class separability in [0,1]")->capture_default_str();
  cmd->add_option("--dim", f.dim_override, "file: dimension override when the max index is absent");
}

Dataset load_dataset(const DatasetFlags& f, int default_n, int default_d) {
  if (f.dataset == "synth") {
    const int n = f.n > 0 ? f.n : default_n;
    const int d = f.d > 0 ? f.d : default_d;
    return synth_logistic(n, d, f.seed, f.sep);
  }
  std::ifstream in(f.dataset);
  if (!in) throw std::runtime_error("cannot open dataset " + f.dataset);
  return parse_svmlight(in, f.dim_override);
}

std::string dataset_label(const DatasetFlags& f, const Dataset& ds) {
  if (f.dataset != "synth") return f.dataset;
  std::ostringstream os;
  os << "synth(n=" << ds.n() << ",d=" << ds.dim() << ",seed=" << f.seed
     << ",sep=" << format_double(f.sep) << ")";
  return os.str();
}

std::vector<std::uint64_t> parse_seed_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto end = comma == std::string::npos ? s.size() : comma;
    const std::string_view tok(s.data() + start, end - start);
    if (!tok.empty()) {
      std::uint64_t v = 0;
      if (!parse_uint64(tok, v)) throw std::invalid_argument("bad seed list entry '" + std::string(tok) + "'");
      out.push_back(v);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

template <typename T, typename F>
std::string join(const std::vector<T>& v, F fmt) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  return out;
}

double resolve_lambda(double flag_value, int n) {
  return flag_value >= 0.0 ? flag_value : 1.0 / static_cast<double>(n);
}

// ---------------------------------------------------------------- run

struct RunFlags {
  DatasetFlags data;
  std::vector<std::string> methods;
  std::vector<int> ks{1};
  int q = 0;
  int inner_len = 0;
  std::string eta;
  std::string loss = "logistic-ridge";
  double lambda = -1.0;
  int outer_loops = 10;
  std::string seeds = "1";
  std::string out;
  std::string ref_path;
  double ref_tol = 0.0;
  int jobs = 1;
};

int cmd_run(const RunFlags& fl) {
  const Dataset ds = load_dataset(fl.data, 1000, 20);
  const auto loss = parse_loss(fl.loss);
  if (!loss) throw std::invalid_argument("unknown loss '" + fl.loss + "'");
  const double lambda = resolve_lambda(fl.lambda, ds.n());
  const FiniteSumObjective obj(ds, *loss, lambda);

  if (!fl.ref_path.empty() && fl.ref_tol > 0.0)
    throw std::invalid_argument("--ref and --ref-tol are mutually exclusive");

  std::vector<Method> methods;
  for (const auto& name : fl.methods) {
    const auto m = parse_method(name);
    if (!m) throw std::invalid_argument("unknown method '" + name + "'");
    methods.push_back(*m);
  }

  const std::vector<std::uint64_t> seeds = parse_seed_list(fl.seeds);
  const bool theory_eta = fl.eta == "theory";
  double numeric_eta = 0.0;
  if (!theory_eta && !parse_double(fl.eta, numeric_eta))
    throw std::invalid_argument("--eta must be 'theory' or a number");

  std::vector<GridCell> cells;
  std::vector<double> etas_used;
  for (Method m : methods) {
    const std::vector<int> ks = is_k_variant(m) ? fl.ks : std::vector<int>{1};
    for (int k : ks) {
      const int ell = fl.inner_len > 0 ? fl.inner_len : default_inner_len(m, ds.n(), k);
      const int q = m == Method::ksvrg_v2 ? (fl.q > 0 ? fl.q : ell) : 0;
      double eta = numeric_eta;
      if (theory_eta)
        eta = theoretical_stepsize(m, obj.mu(), obj.smoothness(), ds.n(), ell, q);
      etas_used.push_back(eta);
      for (std::uint64_t s : seeds)
        cells.push_back(GridCell{m, k, q, fl.inner_len, eta, s});
    }
  }

  ReferenceSolution ref;
  bool have_ref = false;
  if (!fl.ref_path.empty()) {
    ref = read_reference(fl.ref_path);
    have_ref = true;
  } else if (fl.ref_tol > 0.0) {
    ref = solve_reference(obj, fl.ref_tol);
    have_ref = true;
  }

  const ExperimentResult res =
      run_experiment(obj, cells, fl.outer_loops, have_ref ? &ref : nullptr, fl.jobs);
  for (const CellError& e : res.errors)
    std::cerr << "cell failed: method=" << method_name(e.cell.method) << " k=" << e.cell.k
              << " seed=" << e.cell.seed << ": " << e.message << "\n";

  write_csv(fl.out, res.rows);

  ManifestInfo mi;
  mi.dataset = dataset_label(fl.data, ds);
  mi.n = ds.n();
  mi.d = ds.dim();
  mi.L = obj.smoothness();
  mi.lambda = lambda;
  mi.mu = obj.mu();
  mi.loss = loss_name(*loss);
  mi.condition_number = obj.mu() > 0.0 ? obj.smoothness() / obj.mu()
                                       : std::numeric_limits<double>::quiet_NaN();
  mi.methods = join(methods, [](Method m) { return method_name(m); });
  mi.ks = join(fl.ks, [](int k) { return std::to_string(k); });
  mi.qs = fl.q > 0 ? std::to_string(fl.q) : "auto";
  mi.etas = join(etas_used, [](double e) { return format_double(e); });
  mi.seeds = join(seeds, [](std::uint64_t s) { return std::to_string(s); });
  mi.outer_loops = fl.outer_loops;
  write_manifest(fl.out + ".manifest", mi);

  if (!res.errors.empty() && res.rows.empty()) {
    std::cerr << "all grid cells failed\n";
    return 1;
  }
  std::cout << "wrote " << res.rows.size() << " rows to " << fl.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- solve-ref

struct SolveRefFlags {
  DatasetFlags data;
  std::string loss = "logistic-ridge";
  double lambda = -1.0;
  double tol = 1e-10;
  std::int64_t max_iters = 1000000;
  std::string out;
};

int cmd_solve_ref(const SolveRefFlags& fl) {
  const Dataset ds = load_dataset(fl.data, 1000, 20);
  const auto loss = parse_loss(fl.loss);
  if (!loss) throw std::invalid_argument("unknown loss '" + fl.loss + "'");
  const double lambda = resolve_lambda(fl.lambda, ds.n());
  const FiniteSumObjective obj(ds, *loss, lambda);
  const ReferenceSolution ref = solve_reference(obj, fl.tol, fl.max_iters);
  write_reference(fl.out, ref, loss_name(*loss), lambda);
  std::cout << "f_star = " << format_double(ref.f_star)
            << " grad_norm = " << format_double(ref.grad_norm) << "\n";
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyFlags {
  DatasetFlags data;
  int theorem = 0;
  int k = 10;
  int q = 0;
  int inner_len = 0;
  std::string eta = "theory";
  double lambda = -1.0;
  int outer_loops = 30;
  std::string seeds;
  double tol = 1e-10;
  double f_lb = 0.0;
  std::string out;
};

std::vector<std::uint64_t> default_verify_seeds() {
  std::vector<std::uint64_t> s(20);
  for (int i = 0; i < 20; ++i) s[static_cast<std::size_t>(i)] = static_cast<std::uint64_t>(i + 1);
  return s;
}

int verify_convex(const VerifyFlags& fl) {
  const Method method = fl.theorem == 1 ? Method::ksvrg_v2 : Method::ksvrg_v1;
  const Dataset ds = load_dataset(fl.data, 1000, 20);
  const double lambda = resolve_lambda(fl.lambda, ds.n());
  const FiniteSumObjective obj(ds, LossKind::logistic_ridge, lambda);
  const int n = ds.n();
  const int ell = fl.inner_len > 0 ? fl.inner_len : default_inner_len(method, n, fl.k);
  const int q = method == Method::ksvrg_v2 ? (fl.q > 0 ? fl.q : ell) : 0;

  double eta = 0.0;
  if (fl.eta == "theory")
    eta = theoretical_stepsize(method, obj.mu(), obj.smoothness(), n, ell, q);
  else if (!parse_double(fl.eta, eta))
    throw std::invalid_argument("--eta must be 'theory' or a number");
  const double sigma = sigma_constant(method, obj.mu(), obj.smoothness(), n, ell, q);

  const std::vector<std::uint64_t> seeds =
      fl.seeds.empty() ? default_verify_seeds() : parse_seed_list(fl.seeds);
  const int M = fl.outer_loops;

  const ReferenceSolution ref = solve_reference(obj, fl.tol);

  std::vector<std::vector<double>> ratios(seeds.size());
  std::vector<std::vector<double>> values(seeds.size());
  bool domination_ok = true;
  long untouched = 0;
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    OptimizerConfig cfg;
    cfg.method = method;
    cfg.k = fl.k;
    cfg.q = q;
    cfg.inner_len = fl.inner_len;
    cfg.eta = eta;
    cfg.seed = seeds[si];
    cfg.outer_loops = M;
    ConvexLyapunovTracker tracker(obj, ref, eta, sigma, ell);
    RunHooks hooks;
    hooks.on_outer_boundary = [&](const OuterBoundaryEvent& ev) {
      if (ev.outer_loop == 0)
        tracker.initialize(*ev.x);
      else
        tracker.observe_boundary(*ev.x, *ev.x_tilde, *ev.phi, *ev.store);
    };
    run(obj, cfg, &ref.f_star, &hooks);
    for (const LyapunovRecord& rec : tracker.history()) {
      ratios[si].push_back(rec.ratio);
      values[si].push_back(rec.value_after);
      if (!rec.domination_ok) domination_ok = false;
      untouched += rec.untouched_violations;
    }
  }

  const double bound = std::pow(1.0 - eta * obj.mu(), ell);
  const double slack = 1.05;
  bool pass = domination_ok;
  double max_mean_ratio = 0.0;
  std::ostringstream csv;
  csv << "outer_loop,mean_ratio,max_ratio,bound,mean_value_after\n";
  for (int m = 0; m < M; ++m) {
    double mean = 0.0, worst = 0.0, mean_val = 0.0;
    for (std::size_t si = 0; si < seeds.size(); ++si) {
      mean += ratios[si][static_cast<std::size_t>(m)];
      worst = std::max(worst, ratios[si][static_cast<std::size_t>(m)]);
      mean_val += values[si][static_cast<std::size_t>(m)];
    }
    mean /= static_cast<double>(seeds.size());
    mean_val /= static_cast<double>(seeds.size());
    max_mean_ratio = std::max(max_mean_ratio, mean);
    if (mean > bound * slack) pass = false;
    csv << (m + 1) << ',' << format_double(mean) << ',' << format_double(worst) << ','
        << format_double(bound) << ',' << format_double(mean_val) << '\n';
  }

  {
    std::ofstream rep(fl.out);
    if (!rep) throw std::runtime_error("cannot open " + fl.out);
    rep << "theorem = " << fl.theorem << "\n";
    rep << "method = " << method_name(method) << "\n";
    rep << "dataset = " << dataset_label(fl.data, ds) << "\n";
    rep << "n = " << n << "\nd = " << ds.dim() << "\n";
    rep << "loss = logistic-ridge\n";
    rep << "lambda = " << format_double(lambda) << "\nmu = " << format_double(obj.mu())
        << "\nL = " << format_double(obj.smoothness()) << "\n";
    rep << "k = " << fl.k << "\nell = " << ell << "\nq = " << q << "\n";
    rep << "eta = " << format_double(eta) << "\n";
    rep << "sigma = " << format_double(sigma) << "\n";
    rep << "contraction_bound = " << format_double(bound) << "\n";
    rep << "slack = 1.05\n";
    rep << "seeds = " << join(seeds, [](std::uint64_t s) { return std::to_string(s); }) << "\n";
    rep << "outer_loops = " << M << "\n";
    rep << "max_mean_ratio = " << format_double(max_mean_ratio) << "\n";
    rep << "domination_ok = " << (domination_ok ? "true" : "false") << "\n";
    rep << "initial_surrogate_mismatches = " << untouched << " (reported only)\n";
    rep << "result = " << (pass ? "PASS" : "FAIL") << "\n";
  }
  {
    std::ofstream csvf(fl.out + ".csv");
    if (!csvf) throw std::runtime_error("cannot open " + fl.out + ".csv");
    csvf << csv.str();
  }
  std::cout << (pass ? "PASS" : "FAIL") << ": max mean ratio " << format_double(max_mean_ratio)
            << " vs bound*slack " << format_double(bound * slack) << "\n";
  return pass ? 0 : 1;
}

int verify_nonconvex(const VerifyFlags& fl) {
  DatasetFlags data = fl.data;
  const Dataset ds = load_dataset(data, 64, 10);
  if (ds.n() <= 15) throw std::invalid_argument("--theorem 3 needs n > 15");
  const FiniteSumObjective obj(ds, LossKind::nonconvex_sigmoid, 0.0);
  const int n = ds.n();

  std::optional<double> eta_override;
  if (fl.eta != "theory") {
    double v = 0.0;
    if (!parse_double(fl.eta, v)) throw std::invalid_argument("--eta must be 'theory' or a number");
    eta_override = v;
  }
  std::optional<int> ell_override;
  if (fl.inner_len > 0) ell_override = fl.inner_len;

  const int M = fl.outer_loops;
  const NonconvexSchedule sched =
      nonconvex_schedule(obj.smoothness(), n, M, eta_override, ell_override);
  if (sched.ell > n) throw std::invalid_argument("schedule inner length exceeds n");

  const std::vector<std::uint64_t> seeds =
      fl.seeds.empty() ? std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}
                       : parse_seed_list(fl.seeds);

  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(ds.dim());
  const double f0 = obj.value(x0);

  std::vector<std::vector<double>> frob(seeds.size());
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    OptimizerConfig cfg;
    cfg.method = Method::ksvrg_v2;
    cfg.k = (n + sched.ell - 1) / sched.ell;
    cfg.inner_len = sched.ell;
    cfg.q = sched.ell;
    cfg.eta = sched.eta;
    cfg.seed = seeds[si];
    cfg.outer_loops = M;
    cfg.record_grad_norms = true;
    const RunResult r = run(obj, cfg);
    frob[si] = r.grad_frob_sq;
  }

  const CertificateResult cert = nonconvex_certificate(frob, sched, f0, fl.f_lb);
  const double n23 = std::cbrt(static_cast<double>(n));
  const double gamma_floor = 1.0 / (15.0 * obj.smoothness() * n23 * n23);
  const bool gamma_ok = sched.Gamma >= gamma_floor;

  {
    std::ofstream rep(fl.out);
    if (!rep) throw std::runtime_error("cannot open " + fl.out);
    rep << "theorem = 3\n";
    rep << "method = ksvrg-v2\n";
    rep << "dataset = " << dataset_label(data, ds) << "\n";
    rep << "n = " << n << "\nd = " << ds.dim() << "\n";
    rep << "loss = nonconvex-sigmoid\n";
    rep << "L = " << format_double(obj.smoothness()) << "\n";
    rep << "eta = " << format_double(sched.eta) << "\nell = " << sched.ell
        << "\ngamma = " << format_double(sched.gamma) << "\nb1 = " << format_double(sched.b1)
        << "\n";
    rep << "Gamma = " << format_double(sched.Gamma) << "\n";
    rep << "Gamma_floor = " << format_double(gamma_floor) << "\n";
    rep << "Gamma_ok = " << (gamma_ok ? "true" : "false") << "\n";
    rep << "seeds = " << join(seeds, [](std::uint64_t s) { return std::to_string(s); }) << "\n";
    rep << "outer_loops = " << M << "\n";
    rep << "f0 = " << format_double(f0) << "\nf_lb = " << format_double(fl.f_lb) << "\n";
    rep << "bound = " << format_double(cert.bound) << "\n";
    rep << "realized_mean = " << format_double(cert.realized_mean) << "\n";
    rep << "margin = " << format_double(cert.margin) << "\n";
    rep << "result = " << (cert.pass && gamma_ok ? "PASS" : "FAIL") << "\n";
  }
  {
    std::ofstream csvf(fl.out + ".csv");
    if (!csvf) throw std::runtime_error("cannot open " + fl.out + ".csv");
    csvf << "outer_loop,mean_grad_frob_sq\n";
    for (int m = 0; m < M; ++m) {
      double mean = 0.0;
      for (const auto& v : frob) mean += v[static_cast<std::size_t>(m)];
      mean /= static_cast<double>(frob.size());
      csvf << (m + 1) << ',' << format_double(mean) << '\n';
    }
  }
  const bool pass = cert.pass && gamma_ok;
  std::cout << (pass ? "PASS" : "FAIL") << ": realized " << format_double(cert.realized_mean)
            << " vs bound " << format_double(cert.bound) << ", Gamma "
            << format_double(sched.Gamma) << " vs floor " << format_double(gamma_floor) << "\n";
  return pass ? 0 : 1;
}

int cmd_verify(const VerifyFlags& fl) {
  switch (fl.theorem) {
    case 1:
    case 2:
      return verify_convex(fl);
    case 3:
      return verify_nonconvex(fl);
    default:
      throw std::invalid_argument("--theorem must be 1, 2, or 3");
  }
}

// ---------------------------------------------------------------- synth

struct SynthFlags {
  int n = 1000;
  int d = 20;
  std::uint64_t seed = 1;
  double sep = 0.5;
  std::string out;
};

int cmd_synth(const SynthFlags& fl) {
  const Dataset ds = synth_logistic(fl.n, fl.d, fl.seed, fl.sep);
  std::ofstream f(fl.out);
  if (!f) throw std::runtime_error("cannot open " + fl.out);
  serialize_svmlight(ds, f);
  if (!f) throw std::runtime_error("write failed for " + fl.out);
  std::cout << "wrote n=" << ds.n() << " d=" << ds.dim() << " L=" << format_double(ds.smoothness())
            << " to " << fl.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-sum optimization benchmark driver"};
  app.require_subcommand(1);

  RunFlags run_fl;
  CLI::App* c_run = app.add_subcommand("run", "run a method grid, write a CSV trace + manifest");
  add_dataset_flags(c_run, run_fl.data, 1000, 20);
  c_run->add_option("--method", run_fl.methods,
                    "one of sgd|svrg|saga|ksvrg-v1|ksvrg-v2|k2svrg (repeatable)")
      ->required();
  c_run->add_option("--k", run_fl.ks, "loop counts for the k-variants (repeatable)")->capture_default_str();
  c_run->add_option("--q", run_fl.q, "fresh-sample size for ksvrg-v2 (default: inner length)");
  c_run->add_option("--inner-len", run_fl.inner_len, "inner loop length override");
  c_run->add_option("--eta", run_fl.eta, "'theory' or a numeric stepsize")->required();
  c_run->add_option("--loss", run_fl.loss,
                    "logistic-ridge|least-squares-ridge|nonconvex-sigmoid")
      ->capture_default_str();
  c_run->add_option("--lambda", run_fl.lambda, "ridge weight (default 1/n)");
  c_run->add_option("--outer-loops", run_fl.outer_loops, "boundaries per run")->capture_default_str();
  c_run->add_option("--seeds", run_fl.seeds, "comma list of run seeds")->capture_default_str();
  c_run->add_option("--out", run_fl.out, "output CSV path")->required();
  c_run->add_option("--ref", run_fl.ref_path, "reference file for residuals (from solve-ref)");
  c_run->add_option("--ref-tol", run_fl.ref_tol, "solve a fresh reference to this tolerance");
  c_run->add_option("--jobs", run_fl.jobs, "parallel cells; output order is unaffected")->capture_default_str();

  SolveRefFlags ref_fl;
  CLI::App* c_ref = app.add_subcommand("solve-ref", "solve the reference minimizer to tolerance");
  add_dataset_flags(c_ref, ref_fl.data, 1000, 20);
  c_ref->add_option("--loss", ref_fl.loss, "strongly convex loss")->capture_default_str();
  c_ref->add_option("--lambda", ref_fl.lambda, "ridge weight (default 1/n)");
  c_ref->add_option("--tol", ref_fl.tol, "target full-gradient norm")->capture_default_str();
  c_ref->add_option("--max-iters", ref_fl.max_iters, "iteration cap")->capture_default_str();
  c_ref->add_option("--out", ref_fl.out, "output reference path")->required();

  VerifyFlags ver_fl;
  CLI::App* c_ver = app.add_subcommand("verify", "check a convergence guarantee on synthetic runs");
  add_dataset_flags(c_ver, ver_fl.data, 0, 0);
  c_ver->add_option("--theorem", ver_fl.theorem, "1 (fresh-sample rate), 2 (reuse rate), 3 (nonconvex)")
      ->required();
  c_ver->add_option("--k", ver_fl.k, "loop count (theorems 1-2)")->capture_default_str();
  c_ver->add_option("--q", ver_fl.q, "fresh-sample size (theorem 1; default: inner length)");
  c_ver->add_option("--inner-len", ver_fl.inner_len, "inner loop length override");
  c_ver->add_option("--eta", ver_fl.eta, "'theory' or a numeric stepsize")->capture_default_str();
  c_ver->add_option("--lambda", ver_fl.lambda, "ridge weight (default 1/n; theorems 1-2)");
  c_ver->add_option("--outer-loops", ver_fl.outer_loops, "boundaries per run")->capture_default_str();
  c_ver->add_option("--seeds", ver_fl.seeds, "comma list (default 1..20, theorem 3: 1..10)");
  c_ver->add_option("--tol", ver_fl.tol, "reference solve tolerance (theorems 1-2)")->capture_default_str();
  c_ver->add_option("--f-lb", ver_fl.f_lb, "objective lower bound (theorem 3)")->capture_default_str();
  c_ver->add_option("--out", ver_fl.out, "report path (CSV companion at <out>.csv)")->required();

  SynthFlags syn_fl;
  CLI::App* c_syn = app.add_subcommand("synth", "generate a synthetic dataset file");
  c_syn->add_option("--n", syn_fl.n, "rows")->capture_default_str();
  c_syn->add_option("--d", syn_fl.d, "feature dimension")->capture_default_str();
  c_syn->add_option("--seed", syn_fl.seed, "generator seed")->capture_default_str();
  c_syn->add_option("--sep", syn_fl.sep, "class separability in [0,1]")->capture_default_str();
  c_syn->add_option("--out", syn_fl.out, "output dataset path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (c_run->parsed()) return cmd_run(run_fl);
    if (c_ref->parsed()) return cmd_solve_ref(ref_fl);
    if (c_ver->parsed()) return cmd_verify(ver_fl);
    if (c_syn->parsed()) return cmd_synth(syn_fl);
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
