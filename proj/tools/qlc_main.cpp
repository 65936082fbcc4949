#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlc/qlc.h"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

int report(int exit_code) {
  std::cerr << "error: " << qlc_last_error() << "\n";
  return exit_code;
}

// For stages past flag validation: bad values are still config mistakes,
// unreadable or unparseable files are data problems, the rest is the solver.
int classify(qlc_status st) {
  switch (st) {
    case QLC_ERR_INVALID_ARGUMENT:
    case QLC_ERR_DOMAIN:
    case QLC_ERR_ENCODING:
      return kExitConfig;
    case QLC_ERR_IO:
    case QLC_ERR_PARSE:
      return kExitData;
    default:
      return kExitSolver;
  }
}

struct DatasetHandle {
  qlc_dataset* p = nullptr;
  ~DatasetHandle() { qlc_dataset_free(p); }
};

struct EncodingFlags {
  qlc_encoding_params params = qlc_encoding_params_default();

  void attach(CLI::App* cmd) {
    cmd->add_option("--dw", params.d_w, "weight bit depth");
    cmd->add_option("--db", params.d_b, "bias bit depth (default: same as --dw)");
    cmd->add_option("--dt", params.d_t, "slack bit depth");
    cmd->add_option("--alpha-w", params.alpha_w, "weight interval width (default: from lambda)");
    cmd->add_option("--alpha-b", params.alpha_b, "bias interval width (default: same as weights)");
    cmd->add_option("--alpha-t", params.alpha_t, "slack interval width (default: from q)");
    cmd->add_option("--alpha-cap", params.alpha_cap, "cap on derived interval widths");
  }
};

struct SolverFlags {
  qlc_solver_params params = qlc_solver_params_default();
  std::string solver_name = "tabu";

  void attach(CLI::App* cmd, bool with_workers = true) {
    cmd->add_option("--solver", solver_name, "search backend")
        ->check(CLI::IsMember({"tabu", "brute"}));
    cmd->add_option("--max-iters", params.max_iterations, "tabu iteration budget per run");
    cmd->add_option("--tenure", params.tenure, "tabu tenure");
    cmd->add_option("--restarts", params.restarts, "restarts after stalls, per run");
    cmd->add_option("--stall", params.stall_limit, "iterations without improvement before restart");
    cmd->add_option("--runs", params.n_runs, "independent tabu runs");
    if (with_workers) cmd->add_option("--workers", params.n_workers, "worker threads for runs");
  }

  qlc_solver_params resolved(std::uint64_t seed) const {
    qlc_solver_params p = params;
    p.use_brute_force = solver_name == "brute" ? 1 : 0;
    p.seed = seed;
    return p;
  }
};

int load_or_fail(const std::string& path, DatasetHandle& ds) {
  if (qlc_dataset_load(path.c_str(), &ds.p) != QLC_OK) return report(kExitData);
  return 0;
}

bool ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) std::cerr << "error: cannot create " << dir << ": " << ec.message() << "\n";
  return !ec;
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::string join_csv(const std::vector<std::string>& items) {
  std::string out;
  for (const std::string& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-robust linear classification via discretized quadratic binary optimization"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI-style config file");
  app.set_version_flag("--version", []() { return std::string(qlc_version()); });

  // train ------------------------------------------------------------------
  auto* train = app.add_subcommand("train", "fit one model and write model + report files");
  std::string tr_dataset, tr_loss = "qloss", tr_out = ".";
  double tr_q = 0.0, tr_lambda = 0.001, tr_noise = 0.0;
  int tr_noise_target = -1;
  std::uint64_t tr_seed = 1, tr_noise_seed = 1;
  EncodingFlags tr_enc;
  SolverFlags tr_solver;
  train->add_option("--dataset", tr_dataset, "libsvm-format input file")->required();
  train->add_option("--loss", tr_loss, "training method")
      ->check(CLI::IsMember(
          {"qloss", "qloss_bcd", "square", "logistic", "smoothed_hinge", "sigmoid", "probit"}));
  train->add_option("--q", tr_q, "q-loss truncation parameter (<= 0)");
  train->add_option("--lambda", tr_lambda, "ridge penalty");
  train->add_option("--noise", tr_noise, "one-class label noise rate injected before training");
  train->add_option("--noise-target", tr_noise_target, "class whose labels the noise flips");
  train->add_option("--noise-seed", tr_noise_seed, "seed for the noise injection");
  train->add_option("--seed", tr_seed, "solver seed");
  train->add_option("--out", tr_out, "output directory")->envname("QLC_OUT_DIR");
  tr_enc.attach(train);
  tr_solver.attach(train);

  // qubo export / qubo solve ------------------------------------------------
  auto* qubo = app.add_subcommand("qubo", "compile or solve quadratic binary problems");
  qubo->require_subcommand(1);

  auto* qexport = qubo->add_subcommand("export", "compile a dataset into a .qubo text file");
  std::string qe_dataset, qe_out = "problem.qubo";
  double qe_q = 0.0, qe_lambda = 0.001;
  EncodingFlags qe_enc;
  qexport->add_option("--dataset", qe_dataset, "libsvm-format input file")->required();
  qexport->add_option("--q", qe_q, "q-loss truncation parameter (<= 0)");
  qexport->add_option("--lambda", qe_lambda, "ridge penalty");
  qexport->add_option("--out", qe_out, "output .qubo path");
  qe_enc.attach(qexport);

  auto* qsolve = qubo->add_subcommand("solve", "minimize a .qubo file and write the result");
  std::string qs_input, qs_out = "solution.txt", qs_trace;
  std::uint64_t qs_seed = 1;
  SolverFlags qs_solver;
  qsolve->add_option("input", qs_input, ".qubo file to solve")->required();
  qsolve->add_option("--out", qs_out, "result file path");
  qsolve->add_option("--trace", qs_trace, "also write an iteration,energy CSV here");
  qsolve->add_option("--seed", qs_seed, "search seed");
  qs_solver.attach(qsolve);

  // sweep -------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "noise-robustness protocol with CSV + plot artifacts");
  std::string sw_dataset, sw_generator, sw_out;
  std::vector<std::string> sw_methods{"qloss", "square"};
  std::vector<double> sw_noise{0.0, 0.1, 0.2, 0.3, 0.4};
  std::vector<double> sw_lambdas;
  int sw_n = 2000, sw_qcount = 10, sw_folds = 10, sw_workers = 1, sw_noise_target = -1;
  int sw_gd_iters = -1, sw_bcd_rounds = -1;
  double sw_qfloor = -1000.0, sw_beta = -1.0, sw_test_fraction = 0.2, sw_gd_tol = -1.0;
  std::uint64_t sw_seed = 1, sw_gen_seed = 7;
  EncodingFlags sw_enc;
  SolverFlags sw_solver;
  auto* sw_ds_opt = sweep->add_option("--dataset", sw_dataset, "libsvm-format input file");
  sweep->add_option("--generator", sw_generator, "synthetic source instead of a file")
      ->check(CLI::IsMember({"long_servedio", "mease_wyner"}))
      ->excludes(sw_ds_opt);
  sweep->add_option("--n", sw_n, "generated sample count");
  sweep->add_option("--gen-seed", sw_gen_seed, "generator seed");
  sweep->add_option("--methods", sw_methods, "methods to compare")->delimiter(',');
  sweep->add_option("--noise", sw_noise, "noise levels")->delimiter(',');
  sweep->add_option("--lambdas", sw_lambdas, "lambda grid (default: built-in 10-point grid)")
      ->delimiter(',');
  sweep->add_option("--q-count", sw_qcount, "points in the q grid");
  sweep->add_option("--q-floor", sw_qfloor, "floor applied to the q lower bound");
  sweep->add_option("--beta", sw_beta, "plug-in error rate override (default: estimate)");
  sweep->add_option("--folds", sw_folds, "cross-validation folds");
  sweep->add_option("--test-fraction", sw_test_fraction, "held-out fraction of the data");
  sweep->add_option("--noise-target", sw_noise_target, "class whose labels the noise flips");
  sweep->add_option("--gd-iters", sw_gd_iters, "gradient-descent iteration cap for baselines");
  sweep->add_option("--gd-tol", sw_gd_tol, "gradient-descent stopping tolerance");
  sweep->add_option("--bcd-rounds", sw_bcd_rounds, "alternating-descent round cap");
  sweep->add_option("--seed", sw_seed, "master seed for splits, noise, folds, solver");
  sweep->add_option("--workers", sw_workers, "concurrent sweep cells");
  sweep->add_option("--out", sw_out, "artifact directory")->envname("QLC_OUT_DIR")->required();
  sw_enc.attach(sweep);
  sw_solver.attach(sweep, /*with_workers=*/false);

  // significance ------------------------------------------------------------
  auto* sig = app.add_subcommand("significance", "paired t-test between two sweep result files");
  std::string sg_a, sg_b, sg_method_a, sg_method_b;
  double sg_alpha = 0.05;
  sig->add_option("results_a", sg_a, "results.csv with the first method")->required();
  sig->add_option("results_b", sg_b, "results.csv with the second method")->required();
  sig->add_option("--method-a", sg_method_a, "method name in the first file");
  sig->add_option("--method-b", sg_method_b, "method name in the second file");
  sig->add_option("--alpha", sg_alpha, "significance level");

  // gen-data ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen-data", "write a synthetic dataset in libsvm format");
  std::string gd_generator = "long_servedio", gd_out = "data.libsvm", gd_manifest;
  int gd_n = 2000, gd_noise_target = -1;
  double gd_noise = 0.0;
  std::uint64_t gd_seed = 7, gd_noise_seed = 1;
  gen->add_option("--generator", gd_generator, "synthetic source")
      ->check(CLI::IsMember({"long_servedio", "mease_wyner"}));
  gen->add_option("--n", gd_n, "sample count");
  gen->add_option("--seed", gd_seed, "generator seed");
  gen->add_option("--noise", gd_noise, "one-class label noise rate");
  gen->add_option("--noise-target", gd_noise_target, "class whose labels the noise flips");
  gen->add_option("--noise-seed", gd_noise_seed, "seed for the noise injection");
  gen->add_option("--out", gd_out, "output file path");
  gen->add_option("--manifest", gd_manifest, "also write a provenance manifest here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (train->parsed()) {
    DatasetHandle ds;
    if (int rc = load_or_fail(tr_dataset, ds)) return rc;
    if (tr_noise > 0.0) {
      DatasetHandle noisy;
      if (qlc_dataset_inject_noise(ds.p, tr_noise, tr_noise_target, tr_noise_seed, &noisy.p) !=
          QLC_OK)
        return report(kExitData);
      std::swap(ds.p, noisy.p);
    }
    const qlc_solver_params solver = tr_solver.resolved(tr_seed);
    qlc_train_result* res = nullptr;
    if (qlc_status st = qlc_train(ds.p, tr_loss.c_str(), tr_q, tr_lambda, &tr_enc.params, &solver,
                                  &res);
        st != QLC_OK)
      return report(classify(st));
    if (!ensure_dir(tr_out)) {
      qlc_train_result_free(res);
      return kExitData;
    }
    double objective = 0.0, train_error = 0.0;
    std::int64_t flagged = 0;
    qlc_train_result_objective(res, &objective);
    qlc_train_result_train_error(res, &train_error);
    qlc_train_result_n_flagged(res, &flagged);
    qlc_model* model = nullptr;
    qlc_status st = qlc_train_result_model(res, &model);
    if (st == QLC_OK) st = qlc_model_save(model, join_path(tr_out, "model.txt").c_str());
    if (st == QLC_OK)
      st = qlc_train_result_write_report(res, join_path(tr_out, "train_report.txt").c_str());
    qlc_model_free(model);
    qlc_train_result_free(res);
    if (st != QLC_OK) return report(kExitData);
    std::printf("method=%s objective=%.9g train_error=%.9g flagged=%lld\n", tr_loss.c_str(),
                objective, train_error, static_cast<long long>(flagged));
    return 0;
  }

  if (qexport->parsed()) {
    DatasetHandle ds;
    if (int rc = load_or_fail(qe_dataset, ds)) return rc;
    qlc_qubo* problem = nullptr;
    if (qlc_status st = qlc_qubo_compile(ds.p, qe_q, qe_lambda, &qe_enc.params, &problem);
        st != QLC_OK)
      return report(classify(st));
    const qlc_status st = qlc_qubo_save(problem, qe_out.c_str());
    const int n_vars = qlc_qubo_n_vars(problem);
    qlc_qubo_free(problem);
    if (st != QLC_OK) return report(kExitData);
    std::printf("wrote %s (%d variables)\n", qe_out.c_str(), n_vars);
    return 0;
  }

  if (qsolve->parsed()) {
    qlc_qubo* problem = nullptr;
    if (qlc_status st = qlc_qubo_load(qs_input.c_str(), &problem); st != QLC_OK)
      return report(st == QLC_ERR_IO ? kExitData : kExitConfig);
    qlc_solver_params solver = qs_solver.resolved(qs_seed);
    solver.record_trace = qs_trace.empty() ? 0 : 1;
    qlc_solve_result* res = nullptr;
    if (qlc_status st = qlc_qubo_solve(problem, &solver, &res); st != QLC_OK) {
      qlc_qubo_free(problem);
      return report(kExitSolver);
    }
    qlc_qubo_free(problem);
    double energy = 0.0, objective = 0.0;
    qlc_solve_result_energy(res, &energy);
    qlc_solve_result_objective(res, &objective);
    qlc_status st = qlc_solve_result_save(res, qs_out.c_str());
    if (st == QLC_OK && !qs_trace.empty())
      st = qlc_solve_result_save_trace(res, qs_trace.c_str());
    qlc_solve_result_free(res);
    if (st != QLC_OK) return report(kExitData);
    std::printf("energy=%.9g objective=%.9g\n", energy, objective);
    return 0;
  }

  if (sweep->parsed()) {
    qlc_sweep* s = nullptr;
    if (qlc_sweep_create(&s) != QLC_OK) return report(kExitSolver);
    auto run = [&]() -> int {
      qlc_status st;
      if (!sw_generator.empty())
        st = qlc_sweep_set_generator(s, sw_generator.c_str(), sw_n, sw_gen_seed);
      else if (!sw_dataset.empty())
        st = qlc_sweep_set_dataset_path(s, sw_dataset.c_str());
      else {
        std::cerr << "error: sweep needs --dataset or --generator\n";
        return kExitConfig;
      }
      if (st != QLC_OK) return report(kExitConfig);
      if (qlc_sweep_set_methods(s, join_csv(sw_methods).c_str()) != QLC_OK)
        return report(kExitConfig);
      if (qlc_sweep_set_noise_levels(s, sw_noise.data(), static_cast<int>(sw_noise.size())) !=
          QLC_OK)
        return report(kExitConfig);
      if (!sw_lambdas.empty() &&
          qlc_sweep_set_lambda_grid(s, sw_lambdas.data(), static_cast<int>(sw_lambdas.size())) !=
              QLC_OK)
        return report(kExitConfig);
      if (qlc_sweep_set_q_grid(s, sw_qcount, sw_qfloor) != QLC_OK) return report(kExitConfig);
      if (qlc_sweep_set_folds(s, sw_folds) != QLC_OK) return report(kExitConfig);
      if (qlc_sweep_set_test_fraction(s, sw_test_fraction) != QLC_OK) return report(kExitConfig);
      if (sw_beta >= 0.0 && qlc_sweep_set_beta_override(s, sw_beta) != QLC_OK)
        return report(kExitConfig);
      if (qlc_sweep_set_encoding(s, &sw_enc.params) != QLC_OK) return report(kExitConfig);
      const qlc_solver_params solver = sw_solver.resolved(sw_seed);
      if (qlc_sweep_set_solver(s, &solver) != QLC_OK) return report(kExitConfig);
      if ((sw_gd_iters > 0 || sw_gd_tol > 0.0) &&
          qlc_sweep_set_gd(s, sw_gd_iters, sw_gd_tol) != QLC_OK)
        return report(kExitConfig);
      if (sw_bcd_rounds > 0 && qlc_sweep_set_bcd_rounds(s, sw_bcd_rounds) != QLC_OK)
        return report(kExitConfig);
      if (qlc_sweep_set_noise_target(s, sw_noise_target) != QLC_OK) return report(kExitConfig);
      if (qlc_sweep_set_seed(s, sw_seed) != QLC_OK) return report(kExitConfig);
      if (qlc_sweep_set_workers(s, sw_workers) != QLC_OK) return report(kExitConfig);
      if (qlc_sweep_set_out_dir(s, sw_out.c_str()) != QLC_OK) return report(kExitConfig);
      int any_failed = 0;
      if (qlc_status st2 = qlc_sweep_run(s, &any_failed); st2 != QLC_OK)
        return report(classify(st2));
      if (any_failed) {
        std::cerr << "sweep finished with failed cells; see errors.txt in " << sw_out << "\n";
        return 1;
      }
      std::printf("sweep artifacts written to %s\n", sw_out.c_str());
      return 0;
    };
    const int rc = run();
    qlc_sweep_free(s);
    return rc;
  }

  if (sig->parsed()) {
    char* table = nullptr;
    if (qlc_status st = qlc_significance(sg_a.c_str(), sg_b.c_str(), sg_method_a.c_str(),
                                         sg_method_b.c_str(), sg_alpha, &table);
        st != QLC_OK)
      return report(st == QLC_ERR_IO ? kExitData : kExitConfig);
    std::fputs(table, stdout);
    qlc_string_free(table);
    return 0;
  }

  if (gen->parsed()) {
    qlc_dataset* raw = nullptr;
    if (qlc_status st = qlc_dataset_generate(gd_generator.c_str(), gd_n, gd_seed, &raw);
        st != QLC_OK)
      return report(kExitConfig);
    DatasetHandle ds;
    ds.p = raw;
    if (gd_noise > 0.0) {
      DatasetHandle noisy;
      if (qlc_dataset_inject_noise(ds.p, gd_noise, gd_noise_target, gd_noise_seed, &noisy.p) !=
          QLC_OK)
        return report(kExitConfig);
      std::swap(ds.p, noisy.p);
    }
    if (qlc_dataset_save(ds.p, gd_out.c_str()) != QLC_OK) return report(kExitData);
    if (!gd_manifest.empty() &&
        qlc_dataset_write_manifest(ds.p, gd_generator.c_str(), "generated", gd_manifest.c_str()) !=
            QLC_OK)
      return report(kExitData);
    std::printf("wrote %s (%d examples, %d features)\n", gd_out.c_str(), qlc_dataset_size(ds.p),
                qlc_dataset_features(ds.p));
    return 0;
  }

  return kExitConfig;
}
