#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "ddnn/iteration.hpp"

namespace ddnn {

/// One benchmark run: problem, method, mesh, parameters, output.
struct ExperimentConfig {
  std::string problem = "semilinear";  ///< laplace | semilinear | quasilinear-sin | p-laplace
  std::string method = "mnn1";         ///< nn | mnn1 | mnn2
  double width = 3.0;
  double height = 2.0;
  double h = 1.0 / 32;
  std::string split = "vertical";  ///< vertical | lshape
  double x_split = 1.5;
  double s1 = 0.19;
  double s2 = 0.19;
  int max_outer = 30;
  double stop_tol = 1e-8;
  double newton_tol = 1e-10;
  int newton_max = 50;
  bool warm_start = true;
  bool exact_start = false;  ///< seed eta0 with the monolithic solution's trace
  double gamma = 0.1;        ///< quasilinear-sin coefficient
  double p = 3.0;            ///< p-Laplace exponent
  long seed = 0;             ///< recorded for provenance; runs are deterministic
  std::string out;           ///< CSV path; empty writes no file
};

/// Throws std::invalid_argument with a message on any bad field.
void validate_config(const ExperimentConfig& cfg);

struct RunSummary {
  /// NaN (serialized as null) when the run produced no iterates at all.
  double final_error = std::numeric_limits<double>::quiet_NaN();
  int iterations = 0;
  long linear_solves = 0;
  double contraction_factor =
      std::numeric_limits<double>::quiet_NaN();  ///< NaN unless 5 decreasing steps exist
  bool failed = false;
  std::string failure;
};

/// Least-squares slope of log(e_n) over the last half of the rows, reported
/// as exp(slope). NaN unless at least 5 decreasing steps exist.
double fit_contraction(const std::vector<TraceRow>& rows);

/// Header "n,rel_error,cum_linear_solves,newton_iters,update_norm" plus one
/// row per iterate, full precision.
void write_trace_csv(const IterationTrace& trace, std::ostream& out);

/// Runs one experiment: builds the mesh and reference, drives the iteration,
/// writes the CSV if configured. Solver failures are reported in the summary,
/// not thrown; config errors throw.
RunSummary run_experiment(const ExperimentConfig& cfg, IterationTrace* trace_out = nullptr);

/// Summary as a JSON object with keys final_error, iterations, linear_solves,
/// contraction_factor, failed.
std::string summary_json(const RunSummary& summary);

/// Sweepable parameters: "s1s2" (locked equal), "h", "gamma", "p".
/// Writes one summary row per value; a failing row does not abort the sweep.
void run_sweep(const ExperimentConfig& base, const std::string& param,
               const std::vector<double>& values, std::ostream& csv_out);

struct CompareSide {
  std::string method;
  bool reached = false;
  int iteration = -1;
  long linear_solves = 0;
};

struct CompareReport {
  double threshold = 0.0;
  CompareSide a, b;
  double ratio = 0.0;  ///< a.linear_solves / b.linear_solves; NaN unless both reached
};

/// Cumulative linear solves at the first iterate with rel_error <= threshold,
/// for two runs of the same problem and mesh.
CompareReport compare_solve_counts(const ExperimentConfig& a, const ExperimentConfig& b,
                                   double threshold);

std::string compare_json(const CompareReport& report);

/// Applies the DDSOLVE_THREADS cap to the OpenMP runtime, if the variable is
/// set to a positive integer.
void apply_thread_cap();

}  // namespace ddnn
