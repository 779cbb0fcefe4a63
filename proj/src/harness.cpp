#include "ddnn/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ddnn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Decomposition make_decomposition(const ExperimentConfig& cfg, const Mesh& mesh) {
  if (cfg.split == "vertical") return decompose_vertical(mesh, cfg.x_split);
  // One-step staircase producing two L-shaped subdomains.
  return decompose_staircase(mesh, cfg.width / 3.0, cfg.height / 2.0, 2.0 * cfg.width / 3.0);
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
  make_problem(cfg.problem, cfg.gamma, cfg.p);  // throws on a bad name or p < 2
  method_from_string(cfg.method);
  if (!(cfg.width > 0) || !(cfg.height > 0) || !(cfg.h > 0)) {
    throw std::invalid_argument("width, height and h must be positive");
  }
  if (cfg.split != "vertical" && cfg.split != "lshape") {
    throw std::invalid_argument("split must be \"vertical\" or \"lshape\"");
  }
  if (cfg.split == "vertical" && !(cfg.x_split > 0 && cfg.x_split < cfg.width)) {
    throw std::invalid_argument("x_split must lie strictly inside (0, width)");
  }
  if (!(cfg.s1 > 0) || !(cfg.s2 > 0)) throw std::invalid_argument("s1 and s2 must be positive");
  if (cfg.max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
  if (cfg.stop_tol < 0) throw std::invalid_argument("stop_tol must be nonnegative");
  if (!(cfg.newton_tol > 0)) throw std::invalid_argument("newton_tol must be positive");
  if (cfg.newton_max < 1) throw std::invalid_argument("newton_max must be at least 1");
  // Mesh construction validates divisibility of the geometry by h.
  const Mesh mesh = build_rect_mesh(cfg.width, cfg.height, cfg.h);
  make_decomposition(cfg, mesh);
}

double fit_contraction(const std::vector<TraceRow>& rows) {
  int decreasing = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].rel_error < rows[i - 1].rel_error) ++decreasing;
  }
  if (decreasing < 5) return kNaN;

  const size_t start = rows.size() / 2;
  double sn = 0, se = 0, snn = 0, sne = 0;
  int count = 0;
  for (size_t i = start; i < rows.size(); ++i) {
    const double e = rows[i].rel_error;
    if (!(e > 0) || !std::isfinite(e)) continue;
    const double n = static_cast<double>(rows[i].n);
    const double le = std::log(e);
    sn += n;
    se += le;
    snn += n * n;
    sne += n * le;
    ++count;
  }
  if (count < 2) return kNaN;
  const double denom = count * snn - sn * sn;
  if (denom == 0.0) return kNaN;
  const double slope = (count * sne - sn * se) / denom;
  return std::exp(slope);
}

void write_trace_csv(const IterationTrace& trace, std::ostream& out) {
  out << "n,rel_error,cum_linear_solves,newton_iters,update_norm\n";
  for (const auto& row : trace.rows) {
    out << row.n << ',' << format_full(row.rel_error) << ',' << row.cum_linear_solves << ','
        << row.newton_iters << ',' << format_full(row.update_norm) << '\n';
  }
}

RunSummary run_experiment(const ExperimentConfig& cfg, IterationTrace* trace_out) {
  validate_config(cfg);

  const Mesh mesh = build_rect_mesh(cfg.width, cfg.height, cfg.h);
  const Decomposition decomp = make_decomposition(cfg, mesh);
  const ProblemDef problem = make_problem(cfg.problem, cfg.gamma, cfg.p);
  const NewtonConfig ncfg{cfg.newton_tol, cfg.newton_max, cfg.warm_start};

  RunSummary summary;
  IterationTrace trace;

  // The reference solve is not part of any method; keep its solves out of the
  // trace accounting.
  SolveCounter reference_counter;
  MonolithicResult reference;
  bool have_reference = false;
  try {
    reference = monolithic_solve(problem, mesh, decomp, problem.source, ncfg, reference_counter);
    have_reference = true;
  } catch (const SolverError& e) {
    summary.failed = true;
    summary.failure = std::string("reference solve failed: ") + e.what();
    trace.failed = true;
    trace.failure = summary.failure;
  }

  if (have_reference) {
    SteklovOperator op(problem, mesh, decomp, ncfg);
    RunConfig rc;
    rc.method = method_from_string(cfg.method);
    rc.s1 = cfg.s1;
    rc.s2 = cfg.s2;
    rc.max_outer = cfg.max_outer;
    rc.stop_tol = cfg.stop_tol;
    if (cfg.exact_start) rc.eta0 = ddnn::trace(decomp, 1, reference.u1);

    SolveCounter counter;
    trace = run(op, reference, rc, counter);

    if (!trace.rows.empty()) {
      summary.final_error = trace.rows.back().rel_error;
      summary.iterations = trace.rows.back().n;
      summary.linear_solves = trace.rows.back().cum_linear_solves;
    }
    summary.contraction_factor = fit_contraction(trace.rows);
    summary.failed = trace.failed;
    summary.failure = trace.failure;
  }

  if (!cfg.out.empty()) {
    std::ofstream file(cfg.out);
    if (!file) throw std::invalid_argument("cannot open output file \"" + cfg.out + "\"");
    write_trace_csv(trace, file);
  }
  if (trace_out != nullptr) *trace_out = std::move(trace);
  return summary;
}

std::string summary_json(const RunSummary& summary) {
  nlohmann::json j;
  j["final_error"] = summary.final_error;
  j["iterations"] = summary.iterations;
  j["linear_solves"] = summary.linear_solves;
  if (std::isfinite(summary.contraction_factor)) {
    j["contraction_factor"] = summary.contraction_factor;
  } else {
    j["contraction_factor"] = nullptr;
  }
  j["failed"] = summary.failed;
  return j.dump();
}

void run_sweep(const ExperimentConfig& base, const std::string& param,
               const std::vector<double>& values, std::ostream& csv_out) {
  if (param != "s1s2" && param != "h" && param != "gamma" && param != "p") {
    throw std::invalid_argument("sweep parameter must be one of s1s2, h, gamma, p");
  }
  csv_out << "param,value,final_error,iterations,linear_solves,contraction_factor,failed\n";
  for (double value : values) {
    ExperimentConfig cfg = base;
    cfg.out.clear();
    if (param == "s1s2") cfg.s1 = cfg.s2 = value;
    if (param == "h") cfg.h = value;
    if (param == "gamma") cfg.gamma = value;
    if (param == "p") cfg.p = value;

    RunSummary summary;
    try {
      summary = run_experiment(cfg);
    } catch (const std::exception& e) {
      summary.failed = true;
      summary.failure = e.what();
      summary.final_error = kNaN;
      summary.contraction_factor = kNaN;
    }
    csv_out << param << ',' << format_full(value) << ',' << format_full(summary.final_error)
            << ',' << summary.iterations << ',' << summary.linear_solves << ','
            << format_full(summary.contraction_factor) << ',' << (summary.failed ? 1 : 0)
            << '\n';
  }
}

CompareReport compare_solve_counts(const ExperimentConfig& a, const ExperimentConfig& b,
                                   double threshold) {
  if (a.problem != b.problem || a.h != b.h || a.width != b.width || a.height != b.height ||
      a.split != b.split || a.x_split != b.x_split || a.gamma != b.gamma || a.p != b.p) {
    throw std::invalid_argument("compare_solve_counts: runs must target the same problem and mesh");
  }

  CompareReport report;
  report.threshold = threshold;
  report.ratio = kNaN;

  auto measure = [&](const ExperimentConfig& cfg) {
    ExperimentConfig run_cfg = cfg;
    run_cfg.out.clear();
    // Don't stop before the shared threshold is reached.
    run_cfg.stop_tol = std::min(run_cfg.stop_tol, threshold);
    CompareSide side;
    side.method = cfg.method;
    IterationTrace trace;
    run_experiment(run_cfg, &trace);
    for (const auto& row : trace.rows) {
      if (row.rel_error <= threshold) {
        side.reached = true;
        side.iteration = row.n;
        side.linear_solves = row.cum_linear_solves;
        break;
      }
    }
    return side;
  };

  report.a = measure(a);
  report.b = measure(b);
  if (report.a.reached && report.b.reached && report.b.linear_solves > 0) {
    report.ratio =
        static_cast<double>(report.a.linear_solves) / static_cast<double>(report.b.linear_solves);
  }
  return report;
}

std::string compare_json(const CompareReport& report) {
  nlohmann::json j;
  j["threshold"] = report.threshold;
  for (const auto* side : {&report.a, &report.b}) {
    nlohmann::json s;
    s["method"] = side->method;
    s["reached"] = side->reached;
    if (side->reached) {
      s["iteration"] = side->iteration;
      s["linear_solves"] = side->linear_solves;
    } else {
      s["iteration"] = nullptr;
      s["linear_solves"] = nullptr;
    }
    j[side == &report.a ? "a" : "b"] = s;
  }
  if (std::isfinite(report.ratio)) {
    j["ratio"] = report.ratio;
  } else {
    j["ratio"] = nullptr;
  }
  return j.dump();
}

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("DDSOLVE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

}  // namespace ddnn
