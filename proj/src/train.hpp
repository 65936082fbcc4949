#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dataset.hpp"
#include "encoding.hpp"
#include "losses.hpp"
#include "qubo.hpp"
#include "solver.hpp"

namespace qlc {

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::map<std::string, std::string> meta;  // ordered, serialized verbatim
};

double decision_value(const LinearModel& model, const std::vector<std::pair<int, double>>& x);
int predict(const LinearModel& model, const std::vector<std::pair<int, double>>& x);
std::vector<double> margins(const LinearModel& model, const Dataset& ds);
double test_error(const LinearModel& model, const Dataset& ds);

// Noise-adjusted clean-error rate beta - 2*beta*nu + nu.
double effective_beta(double beta, double nu);

// Smallest safe q for one-class noise at rate nu given clean error beta:
// 1 - 1/sqrt(beta_eff).  Returns -infinity when beta_eff is zero.
double q_lower_bound(double beta, double nu);
double q_lower_bound_floored(double beta, double nu, double floor_value = -1000.0);

// count equally spaced values from bound up to 0, both inclusive, ascending;
// exact duplicates collapse (only happens at bound = 0).
std::vector<double> q_grid(double bound, int count = 10);

// Half-width 1/lambda of the weight interval; +infinity at lambda = 0 (the
// encoding cap takes over there).
double weight_halfwidth(double lambda);

std::vector<double> default_lambda_grid();

struct EncodingConfig {
  int d_w = 2;
  int d_b = -1;  // -1: same as d_w
  int d_t = 2;
  double alpha_w = -1.0;  // -1: derived from lambda, capped
  double alpha_b = -1.0;  // -1: same as alpha_w
  double alpha_t = -1.0;  // -1: derived from q
  double alpha_cap = 16.0;
};

// Applies the interval policy: weights and bias symmetric about 0 with width
// min(2/lambda, cap); slack interval centered on 1 and wide enough to reach
// both the q plateau and confident margins.
ProblemEncoding make_encoding(const EncodingConfig& cfg, double q, double lambda, int n_features,
                              int n_examples);

enum class SolverKind { tabu, brute };

struct SolverConfig {
  SolverKind kind = SolverKind::tabu;
  TabuParams tabu;
  int n_runs = 1;
  int n_workers = 1;
};

struct TrainReport {
  LinearModel model;
  double objective = 0.0;
  double train_error = 0.0;
  BitVec flip_flags;  // per training example
  std::optional<SolveResult> solver_result;
  std::vector<double> objective_curve;  // alternating path: value after each half-step
};

std::vector<long long> flagged_ids(const TrainReport& report, const std::vector<long long>& ids);

// Compile to bits, solve, decode.
TrainReport train_qloss(const Dataset& ds, double q, double lambda, const EncodingConfig& enc,
                        const SolverConfig& solver);

// Alternate exact slack updates with closed-form continuous ridge fits.
TrainReport train_bcd(const Dataset& ds, double q, double lambda,
                      const LinearModel* init = nullptr, int max_rounds = 100);

struct GdConfig {
  int max_iters = 500;
  double tol = 1e-10;
};

// Deterministic full-batch gradient descent with backtracking from zero.
TrainReport train_baseline(const Dataset& ds, LossKind kind, double lambda,
                           const GdConfig& cfg = {});

std::string model_to_text(const LinearModel& model);
LinearModel model_from_text(const std::string& text, const std::string& origin);
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);
std::string train_report_to_text(const TrainReport& report, const std::vector<long long>& ids);

struct MethodConfig {
  std::string name;
  LossKind kind = LossKind::qloss;
  bool compiled = false;     // QUBO pipeline
  bool alternating = false;  // slack/ridge alternation
  EncodingConfig enc;
  SolverConfig solver;
  GdConfig gd;
  int bcd_max_rounds = 100;
};

// Recognized names: qloss, qloss_bcd, square, logistic, smoothed_hinge,
// sigmoid, probit.
MethodConfig method_from_name(const std::string& name);
bool method_uses_q(const MethodConfig& m);

TrainReport train_method(const Dataset& ds, const MethodConfig& method, double q, double lambda);

struct HyperGrid {
  std::vector<double> q_values{0.0};  // must contain 0, ascending
  std::vector<double> lambda_values;  // ascending
};

struct CvResult {
  double best_q = 0.0;
  double best_lambda = 0.0;
  double best_mean_error = 0.0;
  std::vector<double> fold_errors;  // validation errors at the winning point
  bool stratified = true;
};

// Seeded fold assignment, stratified by class; falls back to unstratified
// (with stratified=false in the result) when a class has fewer members than
// folds.
std::pair<std::vector<int>, bool> stratified_folds(const Dataset& ds, int k, std::uint64_t seed);

CvResult cross_validate_with_folds(const Dataset& ds, const MethodConfig& method,
                                   const HyperGrid& grid, const std::vector<int>& fold_of, int k);
CvResult cross_validate(const Dataset& ds, const MethodConfig& method, const HyperGrid& grid,
                        int k_folds, std::uint64_t seed);

}  // namespace qlc
