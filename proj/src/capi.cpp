#include "qlc/qlc.h"

#include <cstring>
#include <new>
#include <string>

#include "dataset.hpp"
#include "errors.hpp"
#include "qubo.hpp"
#include "solver.hpp"
#include "sweep.hpp"
#include "train.hpp"
#include "util.hpp"

using namespace qlc;

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

qlc_status map_code(ErrorCode code) { return static_cast<qlc_status>(static_cast<int>(code)); }

template <typename F>
qlc_status wrap(F&& fn) noexcept {
  try {
    fn();
    return QLC_OK;
  } catch (const Error& e) {
    set_error(e.what());
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return QLC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return QLC_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown failure");
    return QLC_ERR_INTERNAL;
  }
}

void check_ptr(const void* p, const char* what) {
  require(p != nullptr, ErrorCode::invalid_argument, std::string(what) + " is NULL");
}

EncodingConfig to_encoding_config(const qlc_encoding_params* enc) {
  if (!enc) return {};
  EncodingConfig cfg;
  cfg.d_w = enc->d_w;
  cfg.d_b = enc->d_b;
  cfg.d_t = enc->d_t;
  cfg.alpha_w = enc->alpha_w;
  cfg.alpha_b = enc->alpha_b;
  cfg.alpha_t = enc->alpha_t;
  cfg.alpha_cap = enc->alpha_cap;
  return cfg;
}

SolverConfig to_solver_config(const qlc_solver_params* params) {
  SolverConfig cfg;
  if (!params) return cfg;
  cfg.kind = params->use_brute_force ? SolverKind::brute : SolverKind::tabu;
  cfg.tabu.max_iterations = params->max_iterations;
  cfg.tabu.tenure = params->tenure;
  cfg.tabu.restarts = params->restarts;
  cfg.tabu.stall_limit = params->stall_limit;
  cfg.tabu.seed = params->seed;
  cfg.tabu.record_trace = params->record_trace != 0;
  cfg.n_runs = params->n_runs;
  cfg.n_workers = params->n_workers;
  return cfg;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(::operator new(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

struct qlc_dataset {
  Dataset ds;
};

struct qlc_qubo {
  QuadraticBinaryProblem problem;
};

struct qlc_solve_result {
  SolveResult result;
};

struct qlc_model {
  LinearModel model;
};

struct qlc_train_result {
  TrainReport report;
  std::vector<long long> ids;
};

struct qlc_sweep {
  SweepConfig cfg;
};

extern "C" {

const char* qlc_version(void) { return "0.1.0"; }

const char* qlc_last_error(void) { return g_last_error.c_str(); }

void qlc_string_free(char* s) { ::operator delete(s); }

/* ---- losses ------------------------------------------------------------- */

qlc_status qlc_q_loss(double margin, double q, double* out) {
  return wrap([&] {
    check_ptr(out, "out");
    *out = q_loss(margin, q);
  });
}

qlc_status qlc_variational_bound(double margin, double t, double q, double* out) {
  return wrap([&] {
    check_ptr(out, "out");
    *out = variational_bound(margin, t, q);
  });
}

qlc_status qlc_t_star(double margin, double q, double* out) {
  return wrap([&] {
    check_ptr(out, "out");
    *out = t_star(margin, q);
  });
}

qlc_status qlc_baseline_loss(const char* loss, double margin, double* value, double* derivative) {
  return wrap([&] {
    check_ptr(loss, "loss");
    check_ptr(value, "value");
    check_ptr(derivative, "derivative");
    const LossValue lv = baseline_loss(loss_kind_from_name(loss), margin);
    *value = lv.value;
    *derivative = lv.derivative;
  });
}

qlc_status qlc_q_lower_bound(double beta, double nu, double floor_value, double* out) {
  return wrap([&] {
    check_ptr(out, "out");
    *out = q_lower_bound_floored(beta, nu, floor_value);
  });
}

qlc_status qlc_q_grid(double bound, int count, double* out, int* out_count) {
  return wrap([&] {
    check_ptr(out, "out");
    check_ptr(out_count, "out_count");
    const std::vector<double> grid = q_grid(bound, count);
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = grid[i];
    *out_count = static_cast<int>(grid.size());
  });
}

qlc_status qlc_weight_halfwidth(double lambda, double* out) {
  return wrap([&] {
    check_ptr(out, "out");
    *out = weight_halfwidth(lambda);
  });
}

/* ---- datasets ----------------------------------------------------------- */

qlc_status qlc_dataset_load(const char* path, qlc_dataset** out) {
  return wrap([&] {
    check_ptr(path, "path");
    check_ptr(out, "out");
    *out = new qlc_dataset{load_libsvm(path)};
  });
}

qlc_status qlc_dataset_generate(const char* name, int n, uint64_t seed, qlc_dataset** out) {
  return wrap([&] {
    check_ptr(name, "name");
    check_ptr(out, "out");
    *out = new qlc_dataset{generate_dataset(name, n, seed)};
  });
}

qlc_status qlc_dataset_save(const qlc_dataset* ds, const char* path) {
  return wrap([&] {
    check_ptr(ds, "dataset");
    check_ptr(path, "path");
    save_libsvm(ds->ds, path);
  });
}

qlc_status qlc_dataset_write_manifest(const qlc_dataset* ds, const char* name, const char* source,
                                      const char* path) {
  return wrap([&] {
    check_ptr(ds, "dataset");
    check_ptr(name, "name");
    check_ptr(source, "source");
    check_ptr(path, "path");
    write_manifest(ds->ds, name, source, path);
  });
}

qlc_status qlc_dataset_inject_noise(const qlc_dataset* ds, double rate, int target_class,
                                    uint64_t seed, qlc_dataset** out) {
  return wrap([&] {
    check_ptr(ds, "dataset");
    check_ptr(out, "out");
    NoiseSpec spec;
    spec.rate = rate;
    spec.target_class = target_class;
    spec.seed = seed;
    *out = new qlc_dataset{inject_one_class_noise(ds->ds, spec).data};
  });
}

int qlc_dataset_size(const qlc_dataset* ds) {
  return ds ? static_cast<int>(ds->ds.size()) : 0;
}

int qlc_dataset_features(const qlc_dataset* ds) { return ds ? ds->ds.n_features : 0; }

void qlc_dataset_free(qlc_dataset* ds) { delete ds; }

/* ---- parameter blocks --------------------------------------------------- */

qlc_encoding_params qlc_encoding_params_default(void) {
  qlc_encoding_params p;
  p.d_w = 2;
  p.d_b = -1;
  p.d_t = 2;
  p.alpha_w = -1.0;
  p.alpha_b = -1.0;
  p.alpha_t = -1.0;
  p.alpha_cap = 16.0;
  return p;
}

qlc_solver_params qlc_solver_params_default(void) {
  qlc_solver_params p;
  p.use_brute_force = 0;
  p.max_iterations = -1;
  p.tenure = -1;
  p.restarts = -1;
  p.stall_limit = -1;
  p.seed = 1;
  p.n_runs = 1;
  p.n_workers = 1;
  p.record_trace = 0;
  return p;
}

/* ---- quadratic binary problems ------------------------------------------ */

qlc_status qlc_qubo_compile(const qlc_dataset* ds, double q, double lambda,
                            const qlc_encoding_params* enc, qlc_qubo** out) {
  return wrap([&] {
    check_ptr(ds, "dataset");
    check_ptr(out, "out");
    const EncodingConfig cfg = to_encoding_config(enc);
    const ProblemEncoding layout =
        make_encoding(cfg, q, lambda, ds->ds.n_features, static_cast<int>(ds->ds.size()));
    *out = new qlc_qubo{build_problem(compute_groups(ds->ds, q, lambda), layout)};
  });
}

qlc_status qlc_qubo_load(const char* path, qlc_qubo** out) {
  return wrap([&] {
    check_ptr(path, "path");
    check_ptr(out, "out");
    *out = new qlc_qubo{QuadraticBinaryProblem::load(path)};
  });
}

qlc_status qlc_qubo_save(const qlc_qubo* p, const char* path) {
  return wrap([&] {
    check_ptr(p, "problem");
    check_ptr(path, "path");
    p->problem.save(path);
  });
}

int qlc_qubo_n_vars(const qlc_qubo* p) { return p ? p->problem.n_vars() : 0; }

qlc_status qlc_qubo_constant_offset(const qlc_qubo* p, double* out) {
  return wrap([&] {
    check_ptr(p, "problem");
    check_ptr(out, "out");
    *out = p->problem.constant_offset();
  });
}

qlc_status qlc_qubo_energy(const qlc_qubo* p, const uint8_t* bits, int n_bits, double* out) {
  return wrap([&] {
    check_ptr(p, "problem");
    check_ptr(bits, "bits");
    check_ptr(out, "out");
    require(n_bits == p->problem.n_vars(), ErrorCode::invalid_argument,
            "bit count does not match n_vars");
    *out = p->problem.energy(BitVec(bits, bits + n_bits));
  });
}

void qlc_qubo_free(qlc_qubo* p) { delete p; }

qlc_status qlc_qubo_solve(const qlc_qubo* p, const qlc_solver_params* params,
                          qlc_solve_result** out) {
  return wrap([&] {
    check_ptr(p, "problem");
    check_ptr(out, "out");
    const SolverConfig cfg = to_solver_config(params);
    SolveResult res;
    if (cfg.kind == SolverKind::brute)
      res = brute_force(p->problem);
    else
      res = multi_start_tabu(p->problem, cfg.tabu, std::max(1, cfg.n_runs),
                             std::max(1, cfg.n_workers));
    *out = new qlc_solve_result{std::move(res)};
  });
}

qlc_status qlc_solve_result_energy(const qlc_solve_result* r, double* out) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(out, "out");
    *out = r->result.energy;
  });
}

qlc_status qlc_solve_result_objective(const qlc_solve_result* r, double* out) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(out, "out");
    *out = r->result.objective;
  });
}

qlc_status qlc_solve_result_bits(const qlc_solve_result* r, const uint8_t** bits, int* n_bits) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(bits, "bits");
    check_ptr(n_bits, "n_bits");
    *bits = r->result.bits.data();
    *n_bits = static_cast<int>(r->result.bits.size());
  });
}

qlc_status qlc_solve_result_save(const qlc_solve_result* r, const char* path) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(path, "path");
    save_solve_result(r->result, path);
  });
}

qlc_status qlc_solve_result_save_trace(const qlc_solve_result* r, const char* path) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(path, "path");
    write_text_file(path, trace_to_csv(r->result));
  });
}

void qlc_solve_result_free(qlc_solve_result* r) { delete r; }

/* ---- training ----------------------------------------------------------- */

qlc_status qlc_train(const qlc_dataset* ds, const char* method, double q, double lambda,
                     const qlc_encoding_params* enc, const qlc_solver_params* solver,
                     qlc_train_result** out) {
  return wrap([&] {
    check_ptr(ds, "dataset");
    check_ptr(method, "method");
    check_ptr(out, "out");
    MethodConfig m = method_from_name(method);
    m.enc = to_encoding_config(enc);
    m.solver = to_solver_config(solver);
    TrainReport rep = train_method(ds->ds, m, q, lambda);
    *out = new qlc_train_result{std::move(rep), ds->ds.ids};
  });
}

qlc_status qlc_train_result_objective(const qlc_train_result* r, double* out) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(out, "out");
    *out = r->report.objective;
  });
}

qlc_status qlc_train_result_train_error(const qlc_train_result* r, double* out) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(out, "out");
    *out = r->report.train_error;
  });
}

qlc_status qlc_train_result_n_flagged(const qlc_train_result* r, int64_t* out) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(out, "out");
    int64_t n = 0;
    for (uint8_t f : r->report.flip_flags) n += f;
    *out = n;
  });
}

qlc_status qlc_train_result_model(const qlc_train_result* r, qlc_model** out) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(out, "out");
    *out = new qlc_model{r->report.model};
  });
}

qlc_status qlc_train_result_write_report(const qlc_train_result* r, const char* path) {
  return wrap([&] {
    check_ptr(r, "result");
    check_ptr(path, "path");
    write_text_file(path, train_report_to_text(r->report, r->ids));
  });
}

void qlc_train_result_free(qlc_train_result* r) { delete r; }

qlc_status qlc_model_load(const char* path, qlc_model** out) {
  return wrap([&] {
    check_ptr(path, "path");
    check_ptr(out, "out");
    *out = new qlc_model{load_model(path)};
  });
}

qlc_status qlc_model_save(const qlc_model* m, const char* path) {
  return wrap([&] {
    check_ptr(m, "model");
    check_ptr(path, "path");
    save_model(m->model, path);
  });
}

qlc_status qlc_model_predict(const qlc_model* m, const double* x, int n, int* out) {
  return wrap([&] {
    check_ptr(m, "model");
    check_ptr(x, "x");
    check_ptr(out, "out");
    require(n == static_cast<int>(m->model.weights.size()), ErrorCode::invalid_argument,
            "feature vector length does not match model dimension");
    std::vector<std::pair<int, double>> row;
    row.reserve(n);
    for (int i = 0; i < n; ++i)
      if (x[i] != 0.0) row.emplace_back(i, x[i]);
    *out = predict(m->model, row);
  });
}

qlc_status qlc_model_test_error(const qlc_model* m, const qlc_dataset* ds, double* out) {
  return wrap([&] {
    check_ptr(m, "model");
    check_ptr(ds, "dataset");
    check_ptr(out, "out");
    *out = test_error(m->model, ds->ds);
  });
}

void qlc_model_free(qlc_model* m) { delete m; }

/* ---- noise sweep -------------------------------------------------------- */

qlc_status qlc_sweep_create(qlc_sweep** out) {
  return wrap([&] {
    check_ptr(out, "out");
    *out = new qlc_sweep{};
  });
}

qlc_status qlc_sweep_set_generator(qlc_sweep* s, const char* name, int n, uint64_t seed) {
  return wrap([&] {
    check_ptr(s, "sweep");
    check_ptr(name, "name");
    s->cfg.generator = name;
    s->cfg.gen_n = n;
    s->cfg.gen_seed = seed;
    s->cfg.dataset_path.clear();
  });
}

qlc_status qlc_sweep_set_dataset_path(qlc_sweep* s, const char* path) {
  return wrap([&] {
    check_ptr(s, "sweep");
    check_ptr(path, "path");
    s->cfg.dataset_path = path;
    s->cfg.generator.clear();
  });
}

qlc_status qlc_sweep_set_methods(qlc_sweep* s, const char* comma_separated) {
  return wrap([&] {
    check_ptr(s, "sweep");
    check_ptr(comma_separated, "methods");
    std::vector<std::string> methods;
    for (const std::string& tok : split(comma_separated, ',')) {
      const std::string name = trim(tok);
      if (!name.empty()) methods.push_back(name);
    }
    require(!methods.empty(), ErrorCode::invalid_argument, "method list is empty");
    for (const std::string& name : methods) method_from_name(name);  // validate
    s->cfg.methods = methods;
  });
}

qlc_status qlc_sweep_set_noise_levels(qlc_sweep* s, const double* levels, int count) {
  return wrap([&] {
    check_ptr(s, "sweep");
    check_ptr(levels, "levels");
    require(count >= 1, ErrorCode::invalid_argument, "need at least one noise level");
    s->cfg.noise_levels.assign(levels, levels + count);
  });
}

qlc_status qlc_sweep_set_lambda_grid(qlc_sweep* s, const double* values, int count) {
  return wrap([&] {
    check_ptr(s, "sweep");
    check_ptr(values, "values");
    require(count >= 1, ErrorCode::invalid_argument, "need at least one lambda");
    s->cfg.lambda_grid.assign(values, values + count);
  });
}

qlc_status qlc_sweep_set_q_grid(qlc_sweep* s, int count, double floor_value) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.q_grid_count = count;
    s->cfg.q_floor = floor_value;
  });
}

qlc_status qlc_sweep_set_folds(qlc_sweep* s, int folds) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.folds = folds;
  });
}

qlc_status qlc_sweep_set_test_fraction(qlc_sweep* s, double fraction) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.test_fraction = fraction;
  });
}

qlc_status qlc_sweep_set_beta_override(qlc_sweep* s, double beta) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.beta_override = beta;
  });
}

qlc_status qlc_sweep_set_encoding(qlc_sweep* s, const qlc_encoding_params* enc) {
  return wrap([&] {
    check_ptr(s, "sweep");
    check_ptr(enc, "encoding");
    s->cfg.enc = to_encoding_config(enc);
  });
}

qlc_status qlc_sweep_set_solver(qlc_sweep* s, const qlc_solver_params* params) {
  return wrap([&] {
    check_ptr(s, "sweep");
    check_ptr(params, "solver");
    s->cfg.solver = to_solver_config(params);
  });
}

qlc_status qlc_sweep_set_gd(qlc_sweep* s, int max_iters, double tol) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.gd.max_iters = max_iters;
    s->cfg.gd.tol = tol;
  });
}

qlc_status qlc_sweep_set_bcd_rounds(qlc_sweep* s, int max_rounds) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.bcd_max_rounds = max_rounds;
  });
}

qlc_status qlc_sweep_set_noise_target(qlc_sweep* s, int target_class) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.noise_target_class = target_class;
  });
}

qlc_status qlc_sweep_set_seed(qlc_sweep* s, uint64_t seed) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.seed = seed;
  });
}

qlc_status qlc_sweep_set_workers(qlc_sweep* s, int workers) {
  return wrap([&] {
    check_ptr(s, "sweep");
    s->cfg.workers = workers;
  });
}

qlc_status qlc_sweep_set_out_dir(qlc_sweep* s, const char* dir) {
  return wrap([&] {
    check_ptr(s, "sweep");
    check_ptr(dir, "dir");
    s->cfg.out_dir = dir;
  });
}

qlc_status qlc_sweep_run(qlc_sweep* s, int* any_cell_failed) {
  return wrap([&] {
    check_ptr(s, "sweep");
    const SweepOutcome outcome = run_sweep(s->cfg);
    if (any_cell_failed) *any_cell_failed = outcome.any_failed ? 1 : 0;
  });
}

void qlc_sweep_free(qlc_sweep* s) { delete s; }

qlc_status qlc_significance(const char* csv_path_a, const char* csv_path_b, const char* method_a,
                            const char* method_b, double alpha, char** out_table) {
  return wrap([&] {
    check_ptr(csv_path_a, "first input path");
    check_ptr(csv_path_b, "second input path");
    check_ptr(out_table, "out_table");
    const std::string table =
        significance_table(read_text_file(csv_path_a), read_text_file(csv_path_b),
                           method_a ? method_a : "", method_b ? method_b : "", alpha);
    *out_table = dup_string(table);
  });
}

}  // extern "C"
