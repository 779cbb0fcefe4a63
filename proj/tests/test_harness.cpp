#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ddnn/harness.hpp"

using namespace ddnn;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.problem = "semilinear";
  cfg.method = "mnn1";
  cfg.h = 1.0 / 8;
  cfg.s1 = cfg.s2 = 0.19;
  cfg.max_outer = 10;
  cfg.stop_tol = 0.0;
  return cfg;
}

}  // namespace

TEST_CASE("config validation catches bad fields") {
  CHECK_NOTHROW(validate_config(small_config()));

  auto bad = small_config();
  bad.problem = "wave";
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = small_config();
  bad.method = "jacobi";
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = small_config();
  bad.h = 0.37;  // does not divide the domain
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = small_config();
  bad.x_split = 3.5;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = small_config();
  bad.s1 = 0.0;
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

  bad = small_config();
  bad.p = 1.0;
  bad.problem = "p-laplace";
  CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
}

TEST_CASE("csv trace has the documented schema and one row per iterate") {
  ExperimentConfig cfg = small_config();
  cfg.max_outer = 6;
  IterationTrace trace;
  const RunSummary summary = run_experiment(cfg, &trace);
  REQUIRE(!summary.failed);
  REQUIRE(trace.rows.size() == 7);  // n = 0..6

  std::ostringstream csv;
  write_trace_csv(trace, csv);
  std::istringstream in(csv.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "n,rel_error,cum_linear_solves,newton_iters,update_norm");
  int rows = 0;
  while (std::getline(in, line)) {
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
    ++rows;
  }
  CHECK(rows == 7);
}

TEST_CASE("identical configs reproduce the csv byte for byte") {
  const ExperimentConfig cfg = small_config();
  IterationTrace t1, t2;
  run_experiment(cfg, &t1);
  run_experiment(cfg, &t2);
  std::ostringstream a, b;
  write_trace_csv(t1, a);
  write_trace_csv(t2, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("summary json carries exactly the documented keys") {
  ExperimentConfig cfg = small_config();
  cfg.max_outer = 12;
  cfg.stop_tol = 1e-8;
  const RunSummary summary = run_experiment(cfg);
  const std::string json = summary_json(summary);
  CHECK(json.find("\"final_error\":") != std::string::npos);
  CHECK(json.find("\"iterations\":") != std::string::npos);
  CHECK(json.find("\"linear_solves\":") != std::string::npos);
  CHECK(json.find("\"contraction_factor\":") != std::string::npos);
  CHECK(json.find("\"failed\":false") != std::string::npos);
}

TEST_CASE("exact start stays at the fixed point") {
  ExperimentConfig cfg = small_config();
  cfg.problem = "laplace";
  cfg.method = "mnn2";
  cfg.exact_start = true;
  cfg.max_outer = 3;
  IterationTrace trace;
  const RunSummary summary = run_experiment(cfg, &trace);
  REQUIRE(!summary.failed);
  CHECK(trace.rows.front().rel_error <= 1e-7);
  CHECK(summary.final_error <= 1e-7);
}

TEST_CASE("contraction fit on a synthetic geometric trace") {
  std::vector<TraceRow> rows;
  for (int n = 0; n <= 20; ++n) {
    TraceRow row;
    row.n = n;
    row.rel_error = std::pow(0.5, n);
    rows.push_back(row);
  }
  CHECK(fit_contraction(rows) == doctest::Approx(0.5).epsilon(1e-9));

  // Too few decreasing steps: not reported.
  std::vector<TraceRow> flat(4);
  for (int n = 0; n < 4; ++n) {
    flat[n].n = n;
    flat[n].rel_error = 1.0;
  }
  CHECK(std::isnan(fit_contraction(flat)));
}

TEST_CASE("sweep: rows in declared order, empty list, failing row does not abort") {
  ExperimentConfig base = small_config();
  base.max_outer = 6;

  SUBCASE("s1s2 sweep emits one row per value") {
    std::ostringstream out;
    run_sweep(base, "s1s2", {0.1, 0.19, 0.25}, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "param,value,final_error,iterations,linear_solves,contraction_factor,failed");
    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 3);
    const double expected[3] = {0.1, 0.19, 0.25};
    for (int i = 0; i < 3; ++i) {
      REQUIRE(rows[i].substr(0, 5) == "s1s2,");
      CHECK(std::stod(rows[i].substr(5)) == expected[i]);
    }
  }

  SUBCASE("empty value list gives a header-only csv") {
    std::ostringstream out;
    run_sweep(base, "h", {}, out);
    CHECK(out.str() == "param,value,final_error,iterations,linear_solves,contraction_factor,failed\n");
  }

  SUBCASE("an invalid value is recorded as failed, the sweep continues") {
    std::ostringstream out;
    run_sweep(base, "h", {0.37, 1.0 / 8}, out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);  // header
    std::getline(in, line);
    CHECK(line.back() == '1');  // failed
    std::getline(in, line);
    CHECK(line.back() == '0');
  }

  SUBCASE("unknown parameter is rejected") {
    std::ostringstream out;
    CHECK_THROWS_AS(run_sweep(base, "tolerance", {1.0}, out), std::invalid_argument);
  }
}

TEST_CASE("mesh-independent contraction factors across h (sweep)") {
  ExperimentConfig base = small_config();
  base.max_outer = 30;
  base.stop_tol = 1e-8;
  double factor[2];
  int i = 0;
  for (double h : {1.0 / 8, 1.0 / 16}) {
    ExperimentConfig cfg = base;
    cfg.h = h;
    const RunSummary summary = run_experiment(cfg);
    REQUIRE(!summary.failed);
    REQUIRE(std::isfinite(summary.contraction_factor));
    factor[i++] = summary.contraction_factor;
  }
  CHECK(std::abs(factor[0] - factor[1]) < 0.1);
}

TEST_CASE("s1s2 sweep finds the best contraction inside the range") {
  ExperimentConfig base = small_config();
  base.max_outer = 30;
  base.stop_tol = 1e-8;
  std::ostringstream out;
  run_sweep(base, "s1s2", {0.1, 0.15, 0.2, 0.25, 0.3, 0.35}, out);

  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> factors;
  while (std::getline(in, line)) {
    size_t pos = 0;
    for (int field = 0; field < 5; ++field) pos = line.find(',', pos) + 1;
    factors.push_back(std::stod(line.substr(pos)));
  }
  REQUIRE(factors.size() == 6);
  size_t best = 0;
  for (size_t i = 1; i < factors.size(); ++i) {
    if (factors[i] < factors[best]) best = i;
  }
  CHECK(best > 0);
  CHECK(best < factors.size() - 1);
}

TEST_CASE("NN needs noticeably more solves than MNN2 at the same error level") {
  ExperimentConfig nn = small_config();
  nn.method = "nn";
  nn.s1 = nn.s2 = 0.2;
  nn.max_outer = 40;
  ExperimentConfig mnn2 = nn;
  mnn2.method = "mnn2";
  mnn2.s1 = mnn2.s2 = 0.21;
  const CompareReport report = compare_solve_counts(nn, mnn2, 1e-6);
  REQUIRE(report.a.reached);
  REQUIRE(report.b.reached);
  CHECK(report.ratio > 1.2);
}

TEST_CASE("warm starting reduces the Dirichlet Newton work") {
  ExperimentConfig cfg = small_config();
  cfg.max_outer = 12;
  cfg.stop_tol = 1e-8;
  const RunSummary warm = run_experiment(cfg);
  cfg.warm_start = false;
  const RunSummary cold = run_experiment(cfg);
  REQUIRE(!warm.failed);
  REQUIRE(!cold.failed);
  CHECK(warm.linear_solves < cold.linear_solves);
}

TEST_CASE("compare_solve_counts: identical configs, unreachable threshold, mismatch") {
  ExperimentConfig cfg = small_config();
  cfg.max_outer = 12;
  cfg.stop_tol = 1e-8;

  SUBCASE("identical configs give ratio 1") {
    const CompareReport report = compare_solve_counts(cfg, cfg, 1e-4);
    REQUIRE(report.a.reached);
    REQUIRE(report.b.reached);
    CHECK(report.ratio == doctest::Approx(1.0));
    CHECK(report.a.iteration == report.b.iteration);
  }

  SUBCASE("threshold zero is unreached for both") {
    const CompareReport report = compare_solve_counts(cfg, cfg, 0.0);
    CHECK(!report.a.reached);
    CHECK(!report.b.reached);
    CHECK(std::isnan(report.ratio));
    CHECK(compare_json(report).find("\"ratio\":null") != std::string::npos);
  }

  SUBCASE("different meshes are rejected") {
    ExperimentConfig other = cfg;
    other.h = 1.0 / 16;
    CHECK_THROWS_AS(compare_solve_counts(cfg, other, 1e-4), std::invalid_argument);
  }
}

TEST_CASE("lshape split runs end to end") {
  ExperimentConfig cfg = small_config();
  cfg.split = "lshape";
  cfg.max_outer = 12;
  cfg.stop_tol = 1e-7;
  const RunSummary summary = run_experiment(cfg);
  REQUIRE(!summary.failed);
  CHECK(summary.final_error <= 1e-6);
}
