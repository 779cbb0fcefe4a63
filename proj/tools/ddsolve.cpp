// ddsolve: benchmark CLI for the two-subdomain interface iterations.
//
//   ddsolve run     one experiment; per-iteration CSV plus a JSON summary
//   ddsolve sweep   repeat an experiment over one parameter; CSV of summaries
//   ddsolve compare cumulative linear solves of two runs at a shared error
//   ddsolve mesh    dump a mesh as plain text
//
// Every option can also come from a key=value config file via --config;
// command-line flags override file values. DDSOLVE_THREADS caps the number of
// OpenMP threads.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ddnn/harness.hpp"

namespace {

void add_common_options(CLI::App& cmd, ddnn::ExperimentConfig& cfg) {
  cmd.set_help_flag("--help", "print help");  // frees -h; --h is the mesh width
  cmd.set_config("--config");
  cmd.add_option("--problem", cfg.problem, "laplace | semilinear | quasilinear-sin | p-laplace");
  cmd.add_option("--method", cfg.method, "nn | mnn1 | mnn2");
  cmd.add_option("--width", cfg.width, "domain width");
  cmd.add_option("--height", cfg.height, "domain height");
  cmd.add_option("--h", cfg.h, "mesh width");
  cmd.add_option("--split", cfg.split, "vertical | lshape");
  cmd.add_option("--x-split", cfg.x_split, "interface position for the vertical split");
  cmd.add_option("--s1", cfg.s1, "method parameter s1");
  cmd.add_option("--s2", cfg.s2, "method parameter s2");
  cmd.add_option("--max-outer", cfg.max_outer, "maximum outer iterations");
  cmd.add_option("--stop-tol", cfg.stop_tol, "stop when rel_error drops below this");
  cmd.add_option("--newton-tol", cfg.newton_tol, "inner Newton residual tolerance");
  cmd.add_option("--newton-max", cfg.newton_max, "inner Newton iteration cap");
  cmd.add_flag("--no-warm-start", [&cfg](size_t) { cfg.warm_start = false; },
               "start every Dirichlet solve from zero");
  cmd.add_flag("--exact-start", cfg.exact_start, "seed eta0 with the reference solution's trace");
  cmd.add_option("--gamma", cfg.gamma, "quasilinear-sin coefficient");
  cmd.add_option("--p", cfg.p, "p-Laplace exponent (>= 2)");
  cmd.add_option("--seed", cfg.seed, "recorded in the config; runs are deterministic");
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> values;
  std::stringstream stream(csv);
  std::string item;
  while (std::getline(stream, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  ddnn::apply_thread_cap();

  CLI::App app{"Neumann-Neumann domain decomposition benchmark"};
  app.require_subcommand(1);

  ddnn::ExperimentConfig run_cfg;
  CLI::App* run_cmd = app.add_subcommand("run", "run one experiment");
  add_common_options(*run_cmd, run_cfg);
  run_cmd->add_option("--out", run_cfg.out, "per-iteration CSV output path");

  ddnn::ExperimentConfig sweep_cfg;
  std::string sweep_param;
  std::string sweep_values;
  std::string sweep_out;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "sweep one parameter");
  add_common_options(*sweep_cmd, sweep_cfg);
  sweep_cmd->add_option("--param", sweep_param, "s1s2 | h | gamma | p")->required();
  sweep_cmd->add_option("--values", sweep_values, "comma-separated values")->required();
  sweep_cmd->add_option("--out", sweep_out, "summary CSV output path (default stdout)");

  ddnn::ExperimentConfig cmp_a;
  std::string cmp_method_b;
  double cmp_s1_b = 0.21, cmp_s2_b = 0.21;
  double cmp_threshold = 1e-6;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "compare solve counts of two methods");
  add_common_options(*cmp_cmd, cmp_a);
  cmp_cmd->add_option("--method-b", cmp_method_b, "second method (nn | mnn1 | mnn2)")->required();
  cmp_cmd->add_option("--s1-b", cmp_s1_b, "s1 for the second method");
  cmp_cmd->add_option("--s2-b", cmp_s2_b, "s2 for the second method");
  cmp_cmd->add_option("--threshold", cmp_threshold, "shared rel_error threshold");

  double mesh_w = 3.0, mesh_h_dim = 2.0, mesh_step = 0.5;
  std::string mesh_out;
  CLI::App* mesh_cmd = app.add_subcommand("mesh", "dump a mesh as plain text");
  mesh_cmd->set_help_flag("--help", "print help");
  mesh_cmd->add_option("--width", mesh_w, "domain width");
  mesh_cmd->add_option("--height", mesh_h_dim, "domain height");
  mesh_cmd->add_option("--h", mesh_step, "mesh width");
  mesh_cmd->add_option("--out", mesh_out, "output path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ddnn::RunSummary summary = ddnn::run_experiment(run_cfg);
      std::cout << ddnn::summary_json(summary) << '\n';
      if (summary.failed) std::cerr << "solver failure: " << summary.failure << '\n';
      return 0;  // a solver failure is data, not a tool error
    }
    if (*sweep_cmd) {
      const std::vector<double> values = parse_values(sweep_values);
      if (sweep_out.empty()) {
        ddnn::run_sweep(sweep_cfg, sweep_param, values, std::cout);
      } else {
        std::ofstream file(sweep_out);
        if (!file) throw std::invalid_argument("cannot open \"" + sweep_out + "\"");
        ddnn::run_sweep(sweep_cfg, sweep_param, values, file);
      }
      return 0;
    }
    if (*cmp_cmd) {
      ddnn::ExperimentConfig cmp_b = cmp_a;
      cmp_b.method = cmp_method_b;
      cmp_b.s1 = cmp_s1_b;
      cmp_b.s2 = cmp_s2_b;
      const ddnn::CompareReport report = ddnn::compare_solve_counts(cmp_a, cmp_b, cmp_threshold);
      std::cout << ddnn::compare_json(report) << '\n';
      return 0;
    }
    if (*mesh_cmd) {
      const ddnn::Mesh mesh = ddnn::build_rect_mesh(mesh_w, mesh_h_dim, mesh_step);
      if (mesh_out.empty()) {
        ddnn::dump_mesh(mesh, std::cout);
      } else {
        std::ofstream file(mesh_out);
        if (!file) throw std::invalid_argument("cannot open \"" + mesh_out + "\"");
        ddnn::dump_mesh(mesh, file);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
