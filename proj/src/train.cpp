#include "train.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "errors.hpp"
#include "util.hpp"

namespace qlc {

double decision_value(const LinearModel& model, const std::vector<std::pair<int, double>>& x) {
  double acc = model.bias;
  for (const auto& [idx, val] : x) {
    require(idx >= 0 && idx < static_cast<int>(model.weights.size()), ErrorCode::invalid_argument,
            "feature index exceeds model dimension");
    acc += model.weights[idx] * val;
  }
  return acc;
}

int predict(const LinearModel& model, const std::vector<std::pair<int, double>>& x) {
  return decision_value(model, x) >= 0.0 ? 1 : -1;
}

std::vector<double> margins(const LinearModel& model, const Dataset& ds) {
  require(ds.n_features <= static_cast<int>(model.weights.size()), ErrorCode::invalid_argument,
          "dataset dimension exceeds model dimension");
  std::vector<double> out(ds.size());
  for (std::size_t s = 0; s < ds.size(); ++s)
    out[s] = ds.labels[s] * decision_value(model, ds.rows[s]);
  return out;
}

double test_error(const LinearModel& model, const Dataset& ds) {
  require(ds.size() > 0, ErrorCode::invalid_argument, "empty dataset");
  const std::vector<double> m = margins(model, ds);
  long long wrong = 0;
  for (double v : m) wrong += zero_one(v);
  return static_cast<double>(wrong) / static_cast<double>(ds.size());
}

double effective_beta(double beta, double nu) {
  require(std::isfinite(beta) && beta >= 0.0 && beta < 0.5, ErrorCode::domain,
          "clean error rate must lie in [0, 0.5)");
  require(std::isfinite(nu) && nu >= 0.0 && nu < 0.5, ErrorCode::domain,
          "noise rate must lie in [0, 0.5)");
  return beta - 2.0 * beta * nu + nu;
}

double q_lower_bound(double beta, double nu) {
  const double be = effective_beta(beta, nu);
  if (be == 0.0) return -std::numeric_limits<double>::infinity();
  return 1.0 - 1.0 / std::sqrt(be);
}

double q_lower_bound_floored(double beta, double nu, double floor_value) {
  require(std::isfinite(floor_value) && floor_value <= 0.0, ErrorCode::invalid_argument,
          "bound floor must be finite and <= 0");
  const double b = q_lower_bound(beta, nu);
  return b < floor_value ? floor_value : b;
}

std::vector<double> q_grid(double bound, int count) {
  require(count >= 2, ErrorCode::domain, "grid needs at least 2 points");
  require(std::isfinite(bound) && bound <= 0.0, ErrorCode::domain,
          "grid bound must be finite and <= 0 (floor an unbounded value first)");
  std::vector<double> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    double v = bound * static_cast<double>(count - 1 - i) / static_cast<double>(count - 1);
    if (v == 0.0) v = 0.0;  // normalize -0
    if (!out.empty() && out.back() == v) continue;
    out.push_back(v);
  }
  return out;
}

double weight_halfwidth(double lambda) {
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::domain, "lambda must be >= 0");
  if (lambda == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / lambda;
}

std::vector<double> default_lambda_grid() {
  return {0.000001, 0.000005, 0.000025, 0.000126, 0.000632,
          0.003167, 0.015875, 0.079583, 0.398965, 2.000090};
}

ProblemEncoding make_encoding(const EncodingConfig& cfg, double q, double lambda, int n_features,
                              int n_examples) {
  require(std::isfinite(q) && q <= 0.0, ErrorCode::domain, "q must be finite and <= 0");
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::domain, "lambda must be >= 0");
  require(cfg.d_w >= 1 && cfg.d_t >= 1, ErrorCode::invalid_argument, "bit depths must be >= 1");
  require(cfg.alpha_cap > 0.0 && std::isfinite(cfg.alpha_cap), ErrorCode::invalid_argument,
          "interval cap must be positive");

  ProblemEncoding enc;
  enc.n_features = n_features;
  enc.n_examples = n_examples;

  double aw = cfg.alpha_w;
  if (aw <= 0.0) aw = std::min(2.0 * weight_halfwidth(lambda), cfg.alpha_cap);
  enc.weight.depth = cfg.d_w;
  enc.weight.multiplier = aw;
  enc.weight.offset = -aw / 2.0;

  double ab = cfg.alpha_b > 0.0 ? cfg.alpha_b : aw;
  enc.bias.depth = cfg.d_b > 0 ? cfg.d_b : cfg.d_w;
  enc.bias.multiplier = ab;
  enc.bias.offset = -ab / 2.0;

  // wide enough to cover both the plateau boundary at q and margins past 1
  double at = cfg.alpha_t > 0.0 ? cfg.alpha_t : 2.0 * (2.0 + std::fabs(q));
  enc.slack.depth = cfg.d_t;
  enc.slack.multiplier = at;
  enc.slack.offset = 1.0 - at / 2.0;

  enc.validate();
  return enc;
}

std::vector<long long> flagged_ids(const TrainReport& report, const std::vector<long long>& ids) {
  require(report.flip_flags.size() == ids.size(), ErrorCode::invalid_argument,
          "flag vector does not match id list");
  std::vector<long long> out;
  for (std::size_t s = 0; s < ids.size(); ++s)
    if (report.flip_flags[s]) out.push_back(ids[s]);
  return out;
}

namespace {

// Quantized fixed point of the alternating heuristic.  Bit-flip search cannot
// cross between weight-sign basins at sweep scale (every weight move must be
// paid for before the slack bits catch up), so the heuristic runs start from
// this state and explore outward; random restarts are unaffected.
BitVec alternation_start(const Dataset& ds, double q, double lambda, const ProblemEncoding& enc) {
  try {
    const TrainReport bcd = train_bcd(ds, q, lambda);
    std::vector<double> slacks;
    for (double m : margins(bcd.model, ds)) slacks.push_back(t_star(m, q));
    return embed(enc, bcd.model.weights, bcd.model.bias, slacks);
  } catch (const std::exception&) {
    return {};
  }
}

}  // namespace

TrainReport train_qloss(const Dataset& ds, double q, double lambda, const EncodingConfig& enc_cfg,
                        const SolverConfig& solver) {
  ds.validate();
  const ProblemEncoding enc =
      make_encoding(enc_cfg, q, lambda, ds.n_features, static_cast<int>(ds.size()));
  const CoefficientGroups groups = compute_groups(ds, q, lambda);
  const QuadraticBinaryProblem problem = build_problem(groups, enc);

  SolveResult sol;
  if (solver.kind == SolverKind::brute) {
    sol = brute_force(problem);
  } else {
    TabuParams tabu = solver.tabu;
    if (tabu.initial_state.empty()) tabu.initial_state = alternation_start(ds, q, lambda, enc);
    sol = multi_start_tabu(problem, tabu, std::max(1, solver.n_runs),
                           std::max(1, solver.n_workers));
  }

  const DecodedAssignment dec = decode(enc, sol.bits);
  TrainReport report;
  report.model.weights = dec.weights;
  report.model.bias = dec.bias;
  report.flip_flags = dec.flip_flags;
  report.objective = sol.objective;
  report.train_error = test_error(report.model, ds);
  report.model.meta["loss"] = "qloss";
  report.model.meta["q"] = format_double(q);
  report.model.meta["lambda"] = format_double(lambda);
  report.model.meta["solver"] = solver.kind == SolverKind::brute ? "brute" : "tabu";
  report.model.meta["n_vars"] = std::to_string(problem.n_vars());
  report.model.meta["d_w"] = std::to_string(enc.weight.depth);
  report.model.meta["d_b"] = std::to_string(enc.bias.depth);
  report.model.meta["d_t"] = std::to_string(enc.slack.depth);
  report.model.meta["alpha_w"] = format_double(enc.weight.multiplier);
  report.model.meta["alpha_b"] = format_double(enc.bias.multiplier);
  report.model.meta["alpha_t"] = format_double(enc.slack.multiplier);
  report.model.meta["energy"] = format_double(sol.energy);
  report.model.meta["objective"] = format_double(sol.objective);
  report.solver_result = std::move(sol);
  return report;
}

namespace {

double reg_norm(const std::vector<double>& w, double lambda) {
  double acc = 0.0;
  for (double v : w) acc += v * v;
  return lambda * acc;
}

double bcd_objective(const Dataset& ds, const std::vector<double>& m, const std::vector<double>& t,
                     double q, double reg) {
  double acc = 0.0;
  for (std::size_t s = 0; s < ds.size(); ++s) acc += variational_bound(m[s], t[s], q);
  return acc / static_cast<double>(ds.size()) + reg;
}

}  // namespace

TrainReport train_bcd(const Dataset& ds, double q, double lambda, const LinearModel* init,
                      int max_rounds) {
  ds.validate();
  require(std::isfinite(q) && q <= 0.0, ErrorCode::domain, "q must be finite and <= 0");
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::domain, "lambda must be >= 0");
  require(max_rounds >= 1, ErrorCode::invalid_argument, "need at least one round");

  const int n = ds.n_features;
  const std::size_t S = ds.size();
  const double inv_s = 1.0 / static_cast<double>(S);

  std::vector<double> w(n, 0.0);
  double b = 0.0;
  if (init) {
    require(static_cast<int>(init->weights.size()) == n, ErrorCode::invalid_argument,
            "init model dimension mismatch");
    w = init->weights;
    b = init->bias;
  }

  // normal-equation matrix is independent of the slack targets
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n + 1, n + 1);
  for (std::size_t s = 0; s < S; ++s) {
    for (const auto& [i, vi] : ds.rows[s]) {
      for (const auto& [j, vj] : ds.rows[s]) M(i, j) += inv_s * vi * vj;
      M(i, n) += inv_s * vi;
    }
  }
  for (int i = 0; i < n; ++i) {
    M(n, i) = M(i, n);
    M(i, i) += lambda;
  }
  M(n, n) = 1.0;
  Eigen::LDLT<Eigen::MatrixXd> fact(M);
  bool jittered = false;

  auto compute_margins = [&]() {
    std::vector<double> m(S);
    for (std::size_t s = 0; s < S; ++s) m[s] = ds.labels[s] * (ds.dot(w, s) + b);
    return m;
  };

  TrainReport report;
  std::vector<double> m = compute_margins();
  std::vector<double> t(S, 0.0);
  double prev_round = std::numeric_limits<double>::infinity();
  for (int round = 0; round < max_rounds; ++round) {
    for (std::size_t s = 0; s < S; ++s) t[s] = t_star(m[s], q);
    report.objective_curve.push_back(bcd_objective(ds, m, t, q, reg_norm(w, lambda)));

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    for (std::size_t s = 0; s < S; ++s) {
      const double z = ds.labels[s] * t[s];
      for (const auto& [i, vi] : ds.rows[s]) rhs(i) += inv_s * vi * z;
      rhs(n) += inv_s * z;
    }
    Eigen::VectorXd sol = fact.solve(rhs);
    if (!sol.allFinite() && !jittered) {
      // singular normal equations: nudge the diagonal and refactor
      for (int i = 0; i <= n; ++i) M(i, i) += 1e-10;
      fact.compute(M);
      sol = fact.solve(rhs);
      jittered = true;
    }
    require(sol.allFinite(), ErrorCode::optimization, "normal equations unsolvable");
    for (int i = 0; i < n; ++i) w[i] = sol(i);
    b = sol(n);
    m = compute_margins();
    const double after_w = bcd_objective(ds, m, t, q, reg_norm(w, lambda));
    report.objective_curve.push_back(after_w);
    if (prev_round - after_w < 1e-9) {
      prev_round = after_w;
      break;
    }
    prev_round = after_w;
  }

  // closing slack update so objective and flags describe the final model
  for (std::size_t s = 0; s < S; ++s) t[s] = t_star(m[s], q);
  const double final_obj = bcd_objective(ds, m, t, q, reg_norm(w, lambda));
  report.objective_curve.push_back(final_obj);
  report.objective = final_obj;
  report.model.weights = w;
  report.model.bias = b;
  report.model.meta["loss"] = "qloss_bcd";
  report.model.meta["q"] = format_double(q);
  report.model.meta["lambda"] = format_double(lambda);
  report.model.meta["rounds"] = std::to_string(report.objective_curve.size() / 2);
  report.flip_flags.resize(S);
  for (std::size_t s = 0; s < S; ++s)
    report.flip_flags[s] = static_cast<std::uint8_t>(m[s] <= q ? 1 : 0);
  report.train_error = test_error(report.model, ds);
  return report;
}

TrainReport train_baseline(const Dataset& ds, LossKind kind, double lambda, const GdConfig& cfg) {
  ds.validate();
  require(loss_is_differentiable(kind), ErrorCode::invalid_argument,
          std::string("loss '") + loss_kind_name(kind) + "' is not trainable by gradient descent");
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::domain, "lambda must be >= 0");
  require(cfg.max_iters >= 1, ErrorCode::invalid_argument, "need at least one iteration");

  const int n = ds.n_features;
  const std::size_t S = ds.size();
  const double inv_s = 1.0 / static_cast<double>(S);

  std::vector<double> w(n, 0.0);
  double b = 0.0;

  auto objective = [&](const std::vector<double>& wv, double bv) {
    double acc = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      double m = bv;
      for (const auto& [i, v] : ds.rows[s]) m += wv[i] * v;
      m *= ds.labels[s];
      acc += baseline_loss(kind, m).value;
    }
    return acc * inv_s + reg_norm(wv, lambda);
  };

  std::vector<double> gw(n), cand(n);
  double gb = 0.0;
  double obj = objective(w, b);
  int iters = 0;
  for (; iters < cfg.max_iters; ++iters) {
    std::fill(gw.begin(), gw.end(), 0.0);
    gb = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      double m = b;
      for (const auto& [i, v] : ds.rows[s]) m += w[i] * v;
      const double y = ds.labels[s];
      const double d = baseline_loss(kind, y * m).derivative * y * inv_s;
      for (const auto& [i, v] : ds.rows[s]) gw[i] += d * v;
      gb += d;
    }
    for (int i = 0; i < n; ++i) gw[i] += 2.0 * lambda * w[i];

    double gsq = gb * gb;
    for (double v : gw) gsq += v * v;
    if (std::sqrt(gsq) <= 1e-8 * std::max(1.0, std::fabs(obj))) break;

    double step = 1.0;
    bool accepted = false;
    double cand_b = b, cand_obj = obj;
    while (step > 1e-18) {
      for (int i = 0; i < n; ++i) cand[i] = w[i] - step * gw[i];
      cand_b = b - step * gb;
      cand_obj = objective(cand, cand_b);
      if (cand_obj <= obj - 1e-4 * step * gsq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // flat to machine precision along the gradient
    const double gain = obj - cand_obj;
    w.swap(cand);
    b = cand_b;
    obj = cand_obj;
    if (gain < cfg.tol * std::max(1.0, std::fabs(obj))) break;
  }
  require(std::isfinite(obj), ErrorCode::optimization,
          std::string("gradient descent diverged for loss ") + loss_kind_name(kind));

  TrainReport report;
  report.model.weights = std::move(w);
  report.model.bias = b;
  report.objective = obj;
  report.model.meta["loss"] = loss_kind_name(kind);
  report.model.meta["lambda"] = format_double(lambda);
  report.model.meta["iterations"] = std::to_string(iters);
  report.model.meta["objective"] = format_double(obj);
  report.flip_flags.assign(S, 0);
  report.train_error = test_error(report.model, ds);
  return report;
}

std::string model_to_text(const LinearModel& model) {
  std::string out;
  out += "format: qlc-model-1\n";
  out += "n_features: " + std::to_string(model.weights.size()) + "\n";
  out += "bias: " + format_double(model.bias) + "\n";
  out += "weights:";
  for (double v : model.weights) out += " " + format_double(v);
  out += "\n";
  for (const auto& [k, v] : model.meta) out += "meta." + k + ": " + v + "\n";
  return out;
}

LinearModel model_from_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  long long lineno = 0;
  LinearModel model;
  long long n_features = -1;
  bool have_format = false, have_bias = false, have_weights = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) fail(ErrorCode::parse, where + ": expected 'key: value'");
    const std::string key = trim(line.substr(0, colon));
    const std::string value = trim(line.substr(colon + 1));
    if (key == "format") {
      require(value == "qlc-model-1", ErrorCode::parse, where + ": unsupported format");
      have_format = true;
    } else if (key == "n_features") {
      n_features = parse_int_strict(value, where + " n_features");
      require(n_features >= 1, ErrorCode::parse, where + ": n_features must be >= 1");
    } else if (key == "bias") {
      model.bias = parse_double_strict(value, where + " bias");
      have_bias = true;
    } else if (key == "weights") {
      for (const std::string& tok : split(value, ' '))
        if (!tok.empty()) model.weights.push_back(parse_double_strict(tok, where + " weight"));
      have_weights = true;
    } else if (starts_with(key, "meta.")) {
      model.meta[key.substr(5)] = value;
    } else {
      fail(ErrorCode::parse, where + ": unknown key '" + key + "'");
    }
  }
  require(have_format, ErrorCode::parse, origin + ": missing format line");
  require(n_features >= 1, ErrorCode::parse, origin + ": missing n_features");
  require(have_bias && have_weights, ErrorCode::parse, origin + ": missing bias or weights");
  require(static_cast<long long>(model.weights.size()) == n_features, ErrorCode::parse,
          origin + ": weight count does not match n_features");
  return model;
}

void save_model(const LinearModel& model, const std::string& path) {
  write_text_file(path, model_to_text(model));
}

LinearModel load_model(const std::string& path) {
  return model_from_text(read_text_file(path), path);
}

std::string train_report_to_text(const TrainReport& report, const std::vector<long long>& ids) {
  require(report.flip_flags.size() == ids.size(), ErrorCode::invalid_argument,
          "flag vector does not match id list");
  std::string out;
  out += "format: qlc-report-1\n";
  out += "objective: " + format_double(report.objective) + "\n";
  out += "train_error: " + format_double(report.train_error) + "\n";
  long long flagged = 0;
  for (std::uint8_t f : report.flip_flags) flagged += f;
  out += "n_flagged: " + std::to_string(flagged) + "\n";
  out += "flagged_ids:";
  for (std::size_t s = 0; s < report.flip_flags.size(); ++s)
    if (report.flip_flags[s]) out += " " + std::to_string(ids[s]);
  out += "\n";
  if (report.solver_result) {
    out += "solver_energy: " + format_double(report.solver_result->energy) + "\n";
    out += "solver_iterations: " + std::to_string(report.solver_result->iterations) + "\n";
  }
  if (!report.objective_curve.empty()) {
    out += "objective_curve:";
    for (double v : report.objective_curve) out += " " + format_double(v);
    out += "\n";
  }
  return out;
}

MethodConfig method_from_name(const std::string& name) {
  MethodConfig m;
  m.name = name;
  if (name == "qloss") {
    m.kind = LossKind::qloss;
    m.compiled = true;
  } else if (name == "qloss_bcd") {
    m.kind = LossKind::qloss;
    m.alternating = true;
  } else {
    m.kind = loss_kind_from_name(name);
    require(loss_is_differentiable(m.kind), ErrorCode::invalid_argument,
            "method '" + name + "' is not trainable");
  }
  return m;
}

bool method_uses_q(const MethodConfig& m) { return m.compiled || m.alternating; }

TrainReport train_method(const Dataset& ds, const MethodConfig& method, double q, double lambda) {
  if (method.compiled) return train_qloss(ds, q, lambda, method.enc, method.solver);
  if (method.alternating) return train_bcd(ds, q, lambda, nullptr, method.bcd_max_rounds);
  return train_baseline(ds, method.kind, lambda, method.gd);
}

std::pair<std::vector<int>, bool> stratified_folds(const Dataset& ds, int k, std::uint64_t seed) {
  require(k >= 2, ErrorCode::domain, "need at least 2 folds");
  require(static_cast<int>(ds.size()) >= k, ErrorCode::domain,
          "fewer examples than folds");
  Rng rng(seed);
  std::vector<int> fold_of(ds.size(), 0);
  bool stratified = true;
  for (int cls : {1, -1}) {
    std::size_t count = ds.count_label(cls);
    if (count > 0 && count < static_cast<std::size_t>(k)) stratified = false;
  }
  if (stratified) {
    for (int cls : {1, -1}) {
      std::vector<int> members;
      for (std::size_t s = 0; s < ds.size(); ++s)
        if (ds.labels[s] == cls) members.push_back(static_cast<int>(s));
      shuffle(members, rng);
      for (std::size_t j = 0; j < members.size(); ++j)
        fold_of[members[j]] = static_cast<int>(j % k);
    }
  } else {
    std::vector<int> all(ds.size());
    for (std::size_t s = 0; s < ds.size(); ++s) all[s] = static_cast<int>(s);
    shuffle(all, rng);
    for (std::size_t j = 0; j < all.size(); ++j) fold_of[all[j]] = static_cast<int>(j % k);
  }
  return {fold_of, stratified};
}

CvResult cross_validate_with_folds(const Dataset& ds, const MethodConfig& method,
                                   const HyperGrid& grid, const std::vector<int>& fold_of, int k) {
  require(k >= 2, ErrorCode::domain, "need at least 2 folds");
  require(fold_of.size() == ds.size(), ErrorCode::invalid_argument,
          "fold assignment does not match dataset");
  require(!grid.lambda_values.empty(), ErrorCode::invalid_argument, "empty lambda grid");
  for (double l : grid.lambda_values)
    require(std::isfinite(l) && l >= 0.0, ErrorCode::invalid_argument, "lambda must be >= 0");
  bool has_zero = false;
  for (double qv : grid.q_values) {
    require(std::isfinite(qv) && qv <= 0.0, ErrorCode::invalid_argument, "q values must be <= 0");
    if (qv == 0.0) has_zero = true;
  }
  require(has_zero, ErrorCode::invalid_argument, "q grid must contain 0");

  std::vector<std::vector<int>> train_idx(k), val_idx(k);
  for (std::size_t s = 0; s < ds.size(); ++s) {
    const int f = fold_of[s];
    require(f >= 0 && f < k, ErrorCode::invalid_argument, "fold index out of range");
    for (int g = 0; g < k; ++g)
      (g == f ? val_idx : train_idx)[g].push_back(static_cast<int>(s));
  }
  for (int f = 0; f < k; ++f)
    require(!val_idx[f].empty() && !train_idx[f].empty(), ErrorCode::domain,
            "fold " + std::to_string(f) + " is empty or covers everything");

  std::vector<Dataset> train_ds(k), val_ds(k);
  for (int f = 0; f < k; ++f) {
    train_ds[f] = ds.subset(train_idx[f]);
    val_ds[f] = ds.subset(val_idx[f]);
  }

  const std::vector<double> qs = method_uses_q(method) ? grid.q_values : std::vector<double>{0.0};
  CvResult best;
  bool first = true;
  std::vector<double> errs(k);
  for (double qv : qs) {
    for (double lv : grid.lambda_values) {
      double mean = 0.0;
      for (int f = 0; f < k; ++f) {
        const TrainReport rep = train_method(train_ds[f], method, qv, lv);
        errs[f] = test_error(rep.model, val_ds[f]);
        mean += errs[f];
      }
      mean /= k;
      const bool better =
          first || mean < best.best_mean_error ||
          (mean == best.best_mean_error &&
           (lv < best.best_lambda || (lv == best.best_lambda && qv > best.best_q)));
      if (better) {
        best.best_q = qv;
        best.best_lambda = lv;
        best.best_mean_error = mean;
        best.fold_errors = errs;
        first = false;
      }
    }
  }
  return best;
}

CvResult cross_validate(const Dataset& ds, const MethodConfig& method, const HyperGrid& grid,
                        int k_folds, std::uint64_t seed) {
  auto [fold_of, stratified] = stratified_folds(ds, k_folds, seed);
  CvResult r = cross_validate_with_folds(ds, method, grid, fold_of, k_folds);
  r.stratified = stratified;
  return r;
}

}  // namespace qlc
