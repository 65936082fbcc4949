#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "stats.hpp"
#include "train.hpp"

namespace qlc {

struct SweepConfig {
  // data source: either a generator name or a file path
  std::string generator;  // long_servedio | mease_wyner | empty
  int gen_n = 2000;
  std::uint64_t gen_seed = 7;
  std::string dataset_path;
  std::string dataset_name;  // label in artifacts; defaults from the source

  std::vector<std::string> methods{"qloss", "square"};
  std::vector<double> noise_levels{0.0, 0.1, 0.2, 0.3, 0.4};
  std::vector<double> lambda_grid = default_lambda_grid();
  int q_grid_count = 10;
  double q_floor = -1000.0;
  double beta_override = -1.0;  // < 0: estimate from the clean training split
  int folds = 10;
  double test_fraction = 0.2;
  int noise_target_class = -1;

  EncodingConfig enc;
  SolverConfig solver;
  GdConfig gd;
  int bcd_max_rounds = 100;

  std::uint64_t seed = 1;
  int workers = 1;
  std::string out_dir;  // empty: compute only, write nothing
};

struct SweepCell {
  std::string method;
  double noise = 0.0;
  double q_bound = 0.0;
  CvResult cv;
  std::vector<double> holdout_errors;  // per-fold models scored on the clean test split
  double retrain_error = 0.0;          // full-train model scored on the clean test split
  bool has_flips = false;
  FlipReport flips;
  bool failed = false;
  std::string error;
};

struct SweepOutcome {
  std::string dataset_name;
  double beta_emp = 0.0;
  int folds = 0;
  std::vector<std::string> methods;
  std::vector<double> noise_levels;
  std::vector<long long> train_ids;
  std::vector<long long> test_ids;
  std::vector<std::vector<long long>> injected_per_level;
  std::vector<SweepCell> cells;  // methods outer, noise levels inner
  bool any_failed = false;

  const SweepCell* cell(const std::string& method, double noise) const;
};

// Full protocol: split before noise, estimate the clean error rate, then per
// noise level inject noise into the training split only, cross-validate every
// method on the noisy split (shared folds), score fold models and the full
// retrain on the untouched test split.  Writes CSV and plot artifacts when
// out_dir is set.
SweepOutcome run_sweep(const SweepConfig& cfg);

std::string sweep_results_csv(const SweepOutcome& o);     // holdout per-fold errors
std::string sweep_validation_csv(const SweepOutcome& o);  // CV fold errors
std::string sweep_summary_csv(const SweepOutcome& o);
std::string sweep_flips_csv(const SweepOutcome& o);
std::string sweep_plot_svg(const SweepOutcome& o);
std::string sweep_errors_text(const SweepOutcome& o);
std::string sweep_meta_text(const SweepOutcome& o, const SweepConfig& cfg);
void write_sweep_artifacts(const SweepOutcome& o, const SweepConfig& cfg);

// Paired per-noise significance between two result CSVs (schema
// "method,noise,fold,test_error,q,lambda").  Empty method selectors are
// allowed when the file holds exactly one method.
std::string significance_table(const std::string& csv_a, const std::string& csv_b,
                               std::string method_a, std::string method_b, double alpha = 0.05);

}  // namespace qlc
