#include "adacd/experiment.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "test_support.hpp"

using namespace adacd;

namespace {

std::string temp_path(const std::string& tag) {
  static int counter = 0;
  return (std::filesystem::temp_directory_path() /
          ("adacd_exp_" + std::to_string(::getpid()) + "_" + tag + "_" +
           std::to_string(counter++)))
      .string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentSpec tiny_spec() {
  ExperimentSpec spec;
  SyntheticSpec syn;
  syn.d = 12;
  syn.n = 16;
  syn.support_frac = 0.25;
  syn.noise = 0.05;
  spec.synthetic = syn;
  spec.problem = ProblemKind::lasso;
  spec.lambda = 0.5;
  spec.max_epochs = 8;
  return spec;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ADACD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("trace CSV carries the schema line and the stable header") {
  ExperimentSpec spec = tiny_spec();
  spec.schemes = {SamplingScheme::parse("uniform")};
  spec.seeds = {3};
  const Dataset ds = prepare_dataset(spec);
  const ProblemInstance p = make_problem(spec.problem, ds, spec.lambda);
  SolverConfig cfg;
  cfg.scheme = spec.schemes[0];
  cfg.max_epochs = 3;
  cfg.seed = 3;
  const RunResult r = run(p, ds, cfg);

  std::ostringstream plain, theory;
  write_trace_csv(plain, r, false);
  write_trace_csv(theory, r, true);
  CHECK(plain.str().rfind("# adacd trace schema 1\n", 0) == 0);
  CHECK(plain.str().find("epoch,iterations,vector_ops,dual_obj,primal_obj,gap,"
                         "suboptimality,support_size\n") != std::string::npos);
  CHECK(theory.str().find("support_size,F_t,chi_G,chi_F\n") != std::string::npos);
}

TEST_CASE("epochs_to_gap: conservative vs interpolated") {
  std::vector<TraceRecord> trace(3);
  trace[0].epoch = 0.0;
  trace[0].gap = 1.0;
  trace[1].epoch = 1.0;
  trace[1].gap = 1e-2;
  trace[2].epoch = 2.0;
  trace[2].gap = 1e-4;

  CHECK(epochs_to_gap(trace, 1e-1) == 1.0);  // first checkpoint at or below
  CHECK(epochs_to_gap(trace, 1e-5) != epochs_to_gap(trace, 1e-4));
  CHECK(std::isnan(epochs_to_gap(trace, 1e-9)));

  // halfway in log10 between 1 and 1e-2
  CHECK(epochs_to_gap_interpolated(trace, 1e-1) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(epochs_to_gap_interpolated(trace, 1e-3) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(std::isnan(epochs_to_gap_interpolated(trace, 1e-9)));
}

TEST_CASE("compare produces per-run rows plus median and mean per scheme") {
  ExperimentSpec spec = tiny_spec();
  spec.schemes = {SamplingScheme::parse("uniform"), SamplingScheme::parse("ada-gap")};
  spec.seeds = {1, 2, 3};
  spec.max_epochs = 6;
  std::ostringstream diag;
  const CompareResult result = run_compare(spec, diag);

  CHECK(result.rows.size() == 2 * 3 + 2 * 2);
  std::size_t medians = 0, means = 0;
  for (const SummaryRow& row : result.rows) {
    if (row.seed == "median") ++medians;
    if (row.seed == "mean") ++means;
    CHECK(row.epochs_to_gap.size() == spec.gap_targets.size());
    CHECK_FALSE(row.failed);
    // tighter gap targets can only take longer
    for (std::size_t g = 1; g < row.epochs_to_gap.size(); ++g) {
      if (!std::isnan(row.epochs_to_gap[g - 1]) && !std::isnan(row.epochs_to_gap[g])) {
        CHECK(row.epochs_to_gap[g] >= row.epochs_to_gap[g - 1]);
      }
    }
  }
  CHECK(medians == 2);
  CHECK(means == 2);

  // every run shares one reference certificate
  CHECK(result.reference_gap <= spec.reference_target_gap);
  CHECK(result.reference_reached);
}

TEST_CASE("solve writes a deterministic trace file") {
  ExperimentSpec spec = tiny_spec();
  spec.schemes = {SamplingScheme::parse("gap-per-epoch")};
  spec.seeds = {11};
  spec.out_path = temp_path("trace");
  std::ostringstream diag;
  CHECK(cmd_solve(spec, diag) == 0);
  const std::string first = slurp(spec.out_path);
  CHECK(cmd_solve(spec, diag) == 0);
  CHECK(slurp(spec.out_path) == first);  // byte-identical rerun
  std::remove(spec.out_path.c_str());
  CHECK(first.find("# adacd trace schema 1") == 0);
}

TEST_CASE("cli exit codes") {
  SUBCASE("usage error on a bad flag") {
    CHECK(run_cli("solve --no-such-flag") == 1);
  }
  SUBCASE("usage error on a bad scheme name") {
    CHECK(run_cli("solve --synthetic 6,8,0.3,0.1 --scheme nope --seeds 1") == 1);
  }
  SUBCASE("data error on a missing file") {
    CHECK(run_cli("solve --data /nonexistent/file.libsvm --scheme uniform --seeds 1") == 2);
  }
  SUBCASE("numerical abort on overflowing data") {
    // a 1e308 feature value overflows the primal certificate to infinity
    const std::string path = temp_path("overflow");
    std::ofstream(path) << "1 1:1e308\n";
    CHECK(run_cli("solve --data " + path + " --problem lasso --lambda 0.5 "
                  "--scheme uniform --seeds 1 --epochs 2") == 3);
    std::remove(path.c_str());
  }
  SUBCASE("a good run exits 0") {
    const std::string out = temp_path("cli");
    const int code = run_cli("solve --synthetic 8,10,0.25,0.1 --problem lasso --lambda 0.4 "
                             "--scheme uniform --seeds 5 --epochs 4 --out " + out);
    CHECK(code == 0);
    CHECK(slurp(out).find("epoch,") != std::string::npos);
    std::remove(out.c_str());
  }
  SUBCASE("bench reports the cost classes") {
    const std::string out = temp_path("bench");
    const int code = run_cli("bench --synthetic 8,10,0.25,0.1 --problem lasso --lambda 0.4 "
                             "--scheme uniform,adaptive,gap-per-epoch --seeds 1 --epochs 2 "
                             "--out " + out);
    CHECK(code == 0);
    const std::string text = slurp(out);
    CHECK(text.find("O(nnz)") != std::string::npos);
    CHECK(text.find("O(n nnz)") != std::string::npos);
    std::remove(out.c_str());
  }
}

TEST_CASE("compare writes summary plus per-run traces") {
  ExperimentSpec spec = tiny_spec();
  spec.schemes = {SamplingScheme::parse("uniform")};
  spec.seeds = {1, 2};
  spec.max_epochs = 4;
  const std::string dir = temp_path("cmpdir");
  std::filesystem::create_directories(dir);
  spec.out_path = dir + "/summary.csv";
  std::ostringstream diag;
  CHECK(cmd_compare(spec, diag) == 0);
  CHECK(std::filesystem::exists(dir + "/summary.csv"));
  CHECK(std::filesystem::exists(dir + "/summary_trace_uniform_seed1.csv"));
  CHECK(std::filesystem::exists(dir + "/summary_trace_uniform_seed2.csv"));
  const std::string summary = slurp(dir + "/summary.csv");
  CHECK(summary.find("scheme,seed,epochs_to_gap_0.1") != std::string::npos);
  std::filesystem::remove_all(dir);
}
