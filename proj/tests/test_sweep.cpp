#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "errors.hpp"
#include "stats.hpp"
#include "sweep.hpp"
#include "util.hpp"

using namespace qlc;

namespace {

SweepConfig fast_config() {
  SweepConfig cfg;
  cfg.generator = "long_servedio";
  cfg.gen_n = 80;
  cfg.gen_seed = 3;
  cfg.methods = {"square"};
  cfg.noise_levels = {0.0, 0.3};
  cfg.lambda_grid = {0.01, 0.1};
  cfg.q_grid_count = 3;
  cfg.beta_override = 0.1;
  cfg.folds = 3;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST_CASE("the held-out split never sees injected noise") {
  SweepConfig cfg = fast_config();
  const SweepOutcome o = run_sweep(cfg);
  CHECK_FALSE(o.any_failed);
  CHECK(o.dataset_name == "long_servedio");
  CHECK(o.beta_emp == 0.1);

  REQUIRE(o.train_ids.size() + o.test_ids.size() == 80);
  std::set<long long> train(o.train_ids.begin(), o.train_ids.end());
  std::set<long long> test(o.test_ids.begin(), o.test_ids.end());
  CHECK(train.size() == o.train_ids.size());
  CHECK(test.size() == o.test_ids.size());
  for (long long id : test) CHECK(train.count(id) == 0);
  CHECK(test.size() == doctest::Approx(16).epsilon(0.15));

  REQUIRE(o.injected_per_level.size() == 2);
  CHECK(o.injected_per_level[0].empty());
  CHECK(!o.injected_per_level[1].empty());
  for (long long id : o.injected_per_level[1]) {
    CHECK(train.count(id) == 1);
    CHECK(test.count(id) == 0);
  }
}

TEST_CASE("cell lookup and per-cell fields") {
  SweepConfig cfg = fast_config();
  const SweepOutcome o = run_sweep(cfg);
  REQUIRE(o.cells.size() == 2);
  const SweepCell* clean = o.cell("square", 0.0);
  const SweepCell* noisy = o.cell("square", 0.3);
  REQUIRE(clean != nullptr);
  REQUIRE(noisy != nullptr);
  CHECK(o.cell("square", 0.05) == nullptr);
  CHECK(o.cell("logistic", 0.0) == nullptr);

  CHECK(clean->q_bound == doctest::Approx(q_lower_bound(0.1, 0.0)).epsilon(1e-12));
  CHECK(noisy->q_bound == doctest::Approx(q_lower_bound(0.1, 0.3)).epsilon(1e-12));
  for (const SweepCell* c : {clean, noisy}) {
    CHECK(c->cv.best_q == 0.0);  // square ignores q
    REQUIRE(c->holdout_errors.size() == 3);
    for (double e : c->holdout_errors) {
      CHECK(e >= 0.0);
      CHECK(e <= 1.0);
    }
    CHECK(c->retrain_error >= 0.0);
    CHECK(c->retrain_error <= 1.0);
    CHECK_FALSE(c->has_flips);
  }
}

TEST_CASE("alternating method reports flip overlap against the injected set") {
  SweepConfig cfg = fast_config();
  cfg.methods = {"qloss_bcd"};
  cfg.noise_levels = {0.3};
  const SweepOutcome o = run_sweep(cfg);
  REQUIRE_FALSE(o.any_failed);
  const SweepCell* c = o.cell("qloss_bcd", 0.3);
  REQUIRE(c != nullptr);
  CHECK(c->has_flips);
  CHECK(c->flips.n_injected == static_cast<long long>(o.injected_per_level[0].size()));
  CHECK(c->flips.n_both <= c->flips.n_injected);
  CHECK(c->flips.n_both <= c->flips.n_trained);
  CHECK(c->flips.precision() >= 0.0);
  CHECK(c->flips.precision() <= 1.0);
  CHECK(c->flips.recall() >= 0.0);
  CHECK(c->flips.recall() <= 1.0);
}

TEST_CASE("artifacts are byte-identical across reruns and worker counts") {
  SweepConfig cfg = fast_config();
  cfg.methods = {"square", "qloss_bcd"};
  const SweepOutcome a = run_sweep(cfg);
  const SweepOutcome b = run_sweep(cfg);
  SweepConfig par = cfg;
  par.workers = 3;
  const SweepOutcome c = run_sweep(par);
  for (const SweepOutcome* o : {&b, &c}) {
    CHECK(sweep_results_csv(a) == sweep_results_csv(*o));
    CHECK(sweep_validation_csv(a) == sweep_validation_csv(*o));
    CHECK(sweep_summary_csv(a) == sweep_summary_csv(*o));
    CHECK(sweep_flips_csv(a) == sweep_flips_csv(*o));
    CHECK(sweep_plot_svg(a) == sweep_plot_svg(*o));
    CHECK(sweep_meta_text(a, cfg) == sweep_meta_text(*o, cfg));
  }
}

TEST_CASE("csv schemas and row counts") {
  SweepConfig cfg = fast_config();
  cfg.methods = {"square", "qloss_bcd"};
  const SweepOutcome o = run_sweep(cfg);
  REQUIRE_FALSE(o.any_failed);

  const std::string results = sweep_results_csv(o);
  const std::string validation = sweep_validation_csv(o);
  const std::string summary = sweep_summary_csv(o);
  const std::string flips = sweep_flips_csv(o);
  CHECK(starts_with(results, "method,noise,fold,test_error,q,lambda\n"));
  CHECK(starts_with(validation, "method,noise,fold,validation_error,q,lambda\n"));
  CHECK(starts_with(summary,
                    "method,noise,mean_test_error,std_test_error,retrain_test_error,q,lambda,"
                    "stratified\n"));
  CHECK(starts_with(flips,
                    "method,noise,n_injected,n_trained,n_both,injected_only,trained_only,"
                    "precision,recall\n"));

  auto data_rows = [](const std::string& csv) {
    long long rows = 0;
    for (const std::string& line : split(csv, '\n'))
      if (!trim(line).empty()) ++rows;
    return rows - 1;
  };
  CHECK(data_rows(results) == 2 * 2 * 3);     // methods x levels x folds
  CHECK(data_rows(validation) == 2 * 2 * 3);
  CHECK(data_rows(summary) == 4);
  CHECK(data_rows(flips) == 2);  // only the q-aware method

  const std::string svg = sweep_plot_svg(o);
  CHECK(starts_with(svg, "<svg "));
  CHECK(svg.find(">square</text>") != std::string::npos);
  CHECK(svg.find(">qloss_bcd</text>") != std::string::npos);
  // one connected series and per-point markers for each method
  long long polylines = 0, circles = 0;
  for (std::size_t pos = 0; (pos = svg.find("<polyline", pos)) != std::string::npos; ++pos)
    ++polylines;
  for (std::size_t pos = 0; (pos = svg.find("<circle", pos)) != std::string::npos; ++pos)
    ++circles;
  CHECK(polylines == 2);
  CHECK(circles == 4);

  const std::string meta = sweep_meta_text(o, cfg);
  CHECK(meta.find("dataset: long_servedio\n") != std::string::npos);
  CHECK(meta.find("beta_emp: 0.1\n") != std::string::npos);
  CHECK(meta.find("methods: square qloss_bcd\n") != std::string::npos);
  CHECK(sweep_errors_text(o).empty());
}

TEST_CASE("artifact files land in the output directory") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qlc_sweep_artifacts_test";
  fs::remove_all(dir);
  SweepConfig cfg = fast_config();
  cfg.out_dir = dir.string();
  const SweepOutcome o = run_sweep(cfg);
  for (const char* name :
       {"results.csv", "validation.csv", "summary.csv", "flips.csv", "plot.svg", "errors.txt",
        "meta.txt"}) {
    CHECK(fs::exists(dir / name));
  }
  CHECK(read_text_file((dir / "results.csv").string()) == sweep_results_csv(o));
  fs::remove_all(dir);
}

TEST_CASE("a failing cell is recorded without sinking the sweep") {
  SweepConfig cfg = fast_config();
  // 21 features at 2 bits each blow past the exact solver's 30-variable cap
  cfg.methods = {"qloss", "square"};
  cfg.noise_levels = {0.0};
  cfg.solver.kind = SolverKind::brute;
  const SweepOutcome o = run_sweep(cfg);
  CHECK(o.any_failed);
  const SweepCell* bad = o.cell("qloss", 0.0);
  const SweepCell* good = o.cell("square", 0.0);
  REQUIRE(bad != nullptr);
  REQUIRE(good != nullptr);
  CHECK(bad->failed);
  CHECK(!bad->error.empty());
  CHECK_FALSE(good->failed);
  const std::string errors = sweep_errors_text(o);
  CHECK(starts_with(errors, "qloss,0: "));
  // failed cells are dropped from data artifacts
  CHECK(sweep_results_csv(o).find("qloss,") == std::string::npos);
}

TEST_CASE("sweep config validation") {
  auto expect_throw = [](SweepConfig cfg) { CHECK_THROWS_AS(run_sweep(cfg), Error); };
  {
    SweepConfig cfg = fast_config();
    cfg.methods.clear();
    expect_throw(cfg);
  }
  {
    SweepConfig cfg = fast_config();
    cfg.methods = {"square", "square"};
    expect_throw(cfg);
  }
  {
    SweepConfig cfg = fast_config();
    cfg.noise_levels = {0.3, 0.1};
    expect_throw(cfg);
  }
  {
    SweepConfig cfg = fast_config();
    cfg.noise_levels = {0.5};
    expect_throw(cfg);
  }
  {
    SweepConfig cfg = fast_config();
    cfg.folds = 1;
    expect_throw(cfg);
  }
  {
    SweepConfig cfg = fast_config();
    cfg.lambda_grid.clear();
    expect_throw(cfg);
  }
  {
    SweepConfig cfg = fast_config();
    cfg.q_grid_count = 1;
    expect_throw(cfg);
  }
  {
    SweepConfig cfg = fast_config();
    cfg.generator.clear();
    expect_throw(cfg);  // no generator and no dataset path
  }
  {
    SweepConfig cfg = fast_config();
    cfg.beta_override = 0.6;
    expect_throw(cfg);
  }
  {
    SweepConfig cfg = fast_config();
    cfg.generator = "unknown_gen";
    expect_throw(cfg);
  }
}

TEST_CASE("significance table agrees with a direct paired test") {
  // two methods, two noise levels, four folds each
  const std::vector<double> a0{0.30, 0.28, 0.33, 0.29}, b0{0.27, 0.26, 0.30, 0.28};
  const std::vector<double> a1{0.45, 0.44, 0.47, 0.46}, b1{0.31, 0.30, 0.33, 0.30};
  auto to_csv = [](const std::string& method, const std::vector<double>& lv0,
                   const std::vector<double>& lv1) {
    std::string csv = "method,noise,fold,test_error,q,lambda\n";
    for (std::size_t f = 0; f < lv0.size(); ++f)
      csv += method + ",0," + std::to_string(f) + "," + format_double(lv0[f]) + ",0,0.1\n";
    for (std::size_t f = 0; f < lv1.size(); ++f)
      csv += method + ",0.4," + std::to_string(f) + "," + format_double(lv1[f]) + ",0,0.1\n";
    return csv;
  };
  const std::string csv_a = to_csv("square", a0, a1);
  const std::string csv_b = to_csv("qloss", b0, b1);

  const std::string table = significance_table(csv_a, csv_b, "", "", 0.05);
  const std::vector<std::string> lines = split(table, '\n');
  REQUIRE(lines.size() >= 4);
  CHECK(starts_with(lines[0], "# paired t-test: square vs qloss"));
  CHECK(lines[1] == "noise,n,mean_a,mean_b,mean_diff,t,p,reject");

  auto check_row = [&](const std::string& line, double noise, const std::vector<double>& a,
                       const std::vector<double>& b) {
    const std::vector<std::string> f = split(line, ',');
    REQUIRE(f.size() == 8);
    CHECK(std::stod(f[0]) == noise);
    CHECK(std::stoll(f[1]) == 4);
    const PairedTestResult expect = paired_ttest(a, b, 0.05);
    CHECK(std::stod(f[2]) == doctest::Approx(mean(a)).epsilon(1e-8));
    CHECK(std::stod(f[3]) == doctest::Approx(mean(b)).epsilon(1e-8));
    CHECK(std::stod(f[4]) == doctest::Approx(expect.mean_diff).epsilon(1e-8));
    CHECK(std::stod(f[5]) == doctest::Approx(expect.t_statistic).epsilon(1e-8));
    CHECK(std::stod(f[6]) == doctest::Approx(expect.p_value).epsilon(1e-8));
    CHECK(f[7] == (expect.reject ? "Y" : "N"));
  };
  check_row(lines[2], 0.0, a0, b0);
  check_row(lines[3], 0.4, a1, b1);

  // the strong separation at 0.4 must reject, explicitly
  CHECK(starts_with(lines[3], "0.4,4,"));
  CHECK(lines[3].back() == 'Y');
}

TEST_CASE("significance table input validation") {
  const std::string ok = "method,noise,fold,test_error,q,lambda\nm1,0,0,0.3,0,0.1\nm1,0,1,0.4,0,0.1\n";
  const std::string other = "method,noise,fold,test_error,q,lambda\nm2,0,0,0.2,0,0.1\nm2,0,1,0.1,0,0.1\n";
  CHECK(!significance_table(ok, other, "", "").empty());

  // wrong header
  CHECK_THROWS_AS(significance_table("a,b\n1,2\n", other, "", ""), Error);
  // no data rows
  CHECK_THROWS_AS(significance_table("method,noise,fold,test_error,q,lambda\n", other, "", ""),
                  Error);
  // duplicate (noise, fold)
  CHECK_THROWS_AS(
      significance_table(ok + "m1,0,1,0.5,0,0.1\n", other, "", ""), Error);
  // several methods need an explicit pick
  const std::string multi = ok + "mx,0,0,0.25,0,0.1\nmx,0,1,0.2,0,0.1\n";
  CHECK_THROWS_AS(significance_table(multi, other, "", ""), Error);
  CHECK(!significance_table(multi, other, "m1", "").empty());
  CHECK_THROWS_AS(significance_table(multi, other, "absent", ""), Error);
  // disjoint noise levels
  const std::string far = "method,noise,fold,test_error,q,lambda\nm2,0.2,0,0.2,0,0.1\nm2,0.2,1,0.1,0,0.1\n";
  CHECK_THROWS_AS(significance_table(ok, far, "", ""), Error);
  // fold counts differ at a shared level
  const std::string short_b = "method,noise,fold,test_error,q,lambda\nm2,0,0,0.2,0,0.1\n";
  CHECK_THROWS_AS(significance_table(ok, short_b, "", ""), Error);
}
