#include "sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <map>
#include <set>
#include <thread>

#include "errors.hpp"
#include "util.hpp"

namespace qlc {

namespace {

struct LevelData {
  double nu = 0.0;
  Dataset noisy;
  std::vector<long long> injected;
  std::vector<int> fold_of;
  bool stratified = true;
  double q_bound = 0.0;
  std::vector<double> q_values;
};

MethodConfig make_method(const SweepConfig& cfg, const std::string& name) {
  MethodConfig m = method_from_name(name);
  m.enc = cfg.enc;
  m.solver = cfg.solver;
  m.gd = cfg.gd;
  m.bcd_max_rounds = cfg.bcd_max_rounds;
  return m;
}

void validate_config(const SweepConfig& cfg) {
  require(!cfg.methods.empty(), ErrorCode::invalid_argument, "method list is empty");
  require(!cfg.noise_levels.empty(), ErrorCode::invalid_argument, "noise level list is empty");
  for (double nu : cfg.noise_levels)
    require(std::isfinite(nu) && nu >= 0.0 && nu < 0.5, ErrorCode::invalid_argument,
            "noise levels must lie in [0, 0.5)");
  require(std::is_sorted(cfg.noise_levels.begin(), cfg.noise_levels.end()),
          ErrorCode::invalid_argument, "noise levels must be ascending");
  require(cfg.folds >= 2, ErrorCode::invalid_argument, "need at least 2 folds");
  require(!cfg.lambda_grid.empty(), ErrorCode::invalid_argument, "lambda grid is empty");
  require(cfg.q_grid_count >= 2, ErrorCode::invalid_argument, "q grid needs at least 2 points");
  std::set<std::string> seen;
  for (const std::string& m : cfg.methods)
    require(seen.insert(m).second, ErrorCode::invalid_argument, "duplicate method '" + m + "'");
}

Dataset obtain_dataset(const SweepConfig& cfg, std::string& name_out) {
  if (!cfg.generator.empty()) {
    name_out = cfg.dataset_name.empty() ? cfg.generator : cfg.dataset_name;
    return generate_dataset(cfg.generator, cfg.gen_n, cfg.gen_seed);
  }
  require(!cfg.dataset_path.empty(), ErrorCode::invalid_argument,
          "sweep needs a generator or a dataset path");
  name_out = cfg.dataset_name.empty()
                 ? std::filesystem::path(cfg.dataset_path).filename().string()
                 : cfg.dataset_name;
  return load_libsvm(cfg.dataset_path);
}

void compute_cell(SweepCell& cell, const MethodConfig& method, const LevelData& level,
                  const Dataset& test_ds, const SweepConfig& cfg) {
  HyperGrid grid;
  grid.q_values = level.q_values;
  grid.lambda_values = cfg.lambda_grid;
  cell.cv = cross_validate_with_folds(level.noisy, method, grid, level.fold_of, cfg.folds);
  cell.cv.stratified = level.stratified;

  // score the k fold models on the clean held-out split
  cell.holdout_errors.resize(cfg.folds);
  for (int f = 0; f < cfg.folds; ++f) {
    std::vector<int> keep;
    for (std::size_t s = 0; s < level.noisy.size(); ++s)
      if (level.fold_of[s] != f) keep.push_back(static_cast<int>(s));
    const Dataset fold_train = level.noisy.subset(keep);
    const TrainReport rep = train_method(fold_train, method, cell.cv.best_q, cell.cv.best_lambda);
    cell.holdout_errors[f] = test_error(rep.model, test_ds);
  }

  const TrainReport full = train_method(level.noisy, method, cell.cv.best_q, cell.cv.best_lambda);
  cell.retrain_error = test_error(full.model, test_ds);
  if (method_uses_q(method)) {
    cell.has_flips = true;
    cell.flips = flip_overlap(level.injected, flagged_ids(full, level.noisy.ids));
  }
}

}  // namespace

const SweepCell* SweepOutcome::cell(const std::string& method, double noise) const {
  for (const SweepCell& c : cells)
    if (c.method == method && c.noise == noise) return &c;
  return nullptr;
}

SweepOutcome run_sweep(const SweepConfig& cfg) {
  validate_config(cfg);
  SweepOutcome out;
  out.methods = cfg.methods;
  out.noise_levels = cfg.noise_levels;
  out.folds = cfg.folds;

  const Dataset full = obtain_dataset(cfg, out.dataset_name);
  const auto [train_idx, test_idx] =
      stratified_split(full, cfg.test_fraction, derive_seed(cfg.seed, 0));
  const Dataset train_clean = full.subset(train_idx);
  const Dataset test_ds = full.subset(test_idx);
  out.train_ids = train_clean.ids;
  out.test_ids = test_ds.ids;

  if (cfg.beta_override >= 0.0) {
    require(cfg.beta_override < 0.5, ErrorCode::invalid_argument,
            "clean error override must be below 0.5");
    out.beta_emp = cfg.beta_override;
  } else {
    HyperGrid grid;
    grid.q_values = {0.0};
    grid.lambda_values = cfg.lambda_grid;
    const CvResult base = cross_validate(train_clean, make_method(cfg, "square"), grid, cfg.folds,
                                         derive_seed(cfg.seed, 1));
    out.beta_emp = std::min(base.best_mean_error, 0.4999999);
  }

  std::vector<LevelData> levels(cfg.noise_levels.size());
  for (std::size_t l = 0; l < cfg.noise_levels.size(); ++l) {
    LevelData& ld = levels[l];
    ld.nu = cfg.noise_levels[l];
    NoiseSpec ns;
    ns.rate = ld.nu;
    ns.target_class = cfg.noise_target_class;
    ns.seed = derive_seed(cfg.seed, 16 + l);
    NoiseResult nr = inject_one_class_noise(train_clean, ns);
    ld.noisy = std::move(nr.data);
    ld.injected = std::move(nr.flipped_ids);
    auto [fold_of, stratified] = stratified_folds(ld.noisy, cfg.folds, derive_seed(cfg.seed, 64 + l));
    ld.fold_of = std::move(fold_of);
    ld.stratified = stratified;
    ld.q_bound = q_lower_bound_floored(out.beta_emp, ld.nu, cfg.q_floor);
    ld.q_values = q_grid(ld.q_bound, cfg.q_grid_count);
    out.injected_per_level.push_back(ld.injected);
  }

  std::vector<MethodConfig> methods;
  for (const std::string& name : cfg.methods) methods.push_back(make_method(cfg, name));

  out.cells.resize(methods.size() * levels.size());
  for (std::size_t mi = 0; mi < methods.size(); ++mi)
    for (std::size_t l = 0; l < levels.size(); ++l) {
      SweepCell& c = out.cells[mi * levels.size() + l];
      c.method = cfg.methods[mi];
      c.noise = levels[l].nu;
      c.q_bound = levels[l].q_bound;
    }

  auto work = [&](std::size_t idx) {
    SweepCell& c = out.cells[idx];
    const MethodConfig& method = methods[idx / levels.size()];
    const LevelData& level = levels[idx % levels.size()];
    try {
      compute_cell(c, method, level, test_ds, cfg);
    } catch (const std::exception& e) {
      c.failed = true;
      c.error = e.what();
    }
  };

  const int workers = std::max(1, std::min(cfg.workers, static_cast<int>(out.cells.size())));
  if (workers <= 1) {
    for (std::size_t i = 0; i < out.cells.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int wk = 0; wk < workers; ++wk)
      pool.emplace_back([&]() {
        while (true) {
          const std::size_t i = next.fetch_add(1);
          if (i >= out.cells.size()) return;
          work(i);
        }
      });
    for (auto& t : pool) t.join();
  }

  for (const SweepCell& c : out.cells)
    if (c.failed) out.any_failed = true;

  if (!cfg.out_dir.empty()) write_sweep_artifacts(out, cfg);
  return out;
}

std::string sweep_results_csv(const SweepOutcome& o) {
  std::string csv = "method,noise,fold,test_error,q,lambda\n";
  for (const SweepCell& c : o.cells) {
    if (c.failed) continue;
    for (std::size_t f = 0; f < c.holdout_errors.size(); ++f)
      csv += c.method + "," + format_double(c.noise) + "," + std::to_string(f) + "," +
             format_double(c.holdout_errors[f]) + "," + format_double(c.cv.best_q) + "," +
             format_double(c.cv.best_lambda) + "\n";
  }
  return csv;
}

std::string sweep_validation_csv(const SweepOutcome& o) {
  std::string csv = "method,noise,fold,validation_error,q,lambda\n";
  for (const SweepCell& c : o.cells) {
    if (c.failed) continue;
    for (std::size_t f = 0; f < c.cv.fold_errors.size(); ++f)
      csv += c.method + "," + format_double(c.noise) + "," + std::to_string(f) + "," +
             format_double(c.cv.fold_errors[f]) + "," + format_double(c.cv.best_q) + "," +
             format_double(c.cv.best_lambda) + "\n";
  }
  return csv;
}

std::string sweep_summary_csv(const SweepOutcome& o) {
  std::string csv =
      "method,noise,mean_test_error,std_test_error,retrain_test_error,q,lambda,stratified\n";
  for (const SweepCell& c : o.cells) {
    if (c.failed) continue;
    csv += c.method + "," + format_double(c.noise) + "," +
           format_double(mean(c.holdout_errors)) + "," +
           format_double(sample_std(c.holdout_errors)) + "," + format_double(c.retrain_error) +
           "," + format_double(c.cv.best_q) + "," + format_double(c.cv.best_lambda) + "," +
           (c.cv.stratified ? "1" : "0") + "\n";
  }
  return csv;
}

std::string sweep_flips_csv(const SweepOutcome& o) {
  std::string csv =
      "method,noise,n_injected,n_trained,n_both,injected_only,trained_only,precision,recall\n";
  for (const SweepCell& c : o.cells) {
    if (c.failed || !c.has_flips) continue;
    const FlipReport& fr = c.flips;
    csv += c.method + "," + format_double(c.noise) + "," + std::to_string(fr.n_injected) + "," +
           std::to_string(fr.n_trained) + "," + std::to_string(fr.n_both) + "," +
           std::to_string(fr.n_injected - fr.n_both) + "," +
           std::to_string(fr.n_trained - fr.n_both) + "," + format_double(fr.precision()) + "," +
           format_double(fr.recall()) + "\n";
  }
  return csv;
}

std::string sweep_errors_text(const SweepOutcome& o) {
  std::string out;
  for (const SweepCell& c : o.cells)
    if (c.failed) out += c.method + "," + format_double(c.noise) + ": " + c.error + "\n";
  return out;
}

std::string sweep_meta_text(const SweepOutcome& o, const SweepConfig& cfg) {
  std::string out;
  out += "dataset: " + o.dataset_name + "\n";
  out += "beta_emp: " + format_double(o.beta_emp) + "\n";
  out += "folds: " + std::to_string(o.folds) + "\n";
  out += "seed: " + std::to_string(cfg.seed) + "\n";
  out += "test_fraction: " + format_double(cfg.test_fraction) + "\n";
  out += "methods:";
  for (const std::string& m : o.methods) out += " " + m;
  out += "\n";
  out += "lambda_grid:";
  for (double l : cfg.lambda_grid) out += " " + format_double(l);
  out += "\n";
  std::set<double> seen;
  for (const SweepCell& c : o.cells) {
    if (!seen.insert(c.noise).second) continue;
    out += "q_bound[" + format_double(c.noise) + "]: " + format_double(c.q_bound) + "\n";
  }
  return out;
}

std::string sweep_plot_svg(const SweepOutcome& o) {
  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};
  const double width = 640, height = 420;
  const double left = 62, right = 18, top = 20, bottom = 48;
  const double plot_w = width - left - right, plot_h = height - top - bottom;

  double x_max = 0.0, y_max = 0.05;
  for (const SweepCell& c : o.cells) {
    x_max = std::max(x_max, c.noise);
    if (!c.failed && !c.holdout_errors.empty())
      y_max = std::max(y_max, mean(c.holdout_errors) + sample_std(c.holdout_errors));
  }
  if (x_max <= 0.0) x_max = 0.1;
  y_max *= 1.15;

  auto px = [&](double nu) { return left + plot_w * (nu / x_max); };
  auto py = [&](double e) { return top + plot_h * (1.0 - e / y_max); };
  auto fmt = [](double v) { return format_double_sig(v, 4); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt(width) + " " +
         fmt(height) + "\">\n";
  svg += "<rect width=\"" + fmt(width) + "\" height=\"" + fmt(height) + "\" fill=\"white\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double e = y_max * tick / 4.0;
    const double y = py(e);
    svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(width - right) +
           "\" y2=\"" + fmt(y) + "\" stroke=\"#dddddd\"/>\n";
    svg += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) +
           "\" text-anchor=\"end\" font-size=\"12\" fill=\"#333333\">" + fmt(e) + "</text>\n";
  }
  std::set<double> xticks;
  for (const SweepCell& c : o.cells) xticks.insert(c.noise);
  for (double nu : xticks) {
    const double x = px(nu);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(height - bottom) + "\" x2=\"" + fmt(x) +
           "\" y2=\"" + fmt(height - bottom + 5) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(height - bottom + 20) +
           "\" text-anchor=\"middle\" font-size=\"12\" fill=\"#333333\">" + fmt(nu) + "</text>\n";
  }
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(left) + "\" y2=\"" +
         fmt(height - bottom) + "\" stroke=\"#333333\"/>\n";
  svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(height - bottom) + "\" x2=\"" +
         fmt(width - right) + "\" y2=\"" + fmt(height - bottom) + "\" stroke=\"#333333\"/>\n";
  svg += "<text x=\"" + fmt(left + plot_w / 2) + "\" y=\"" + fmt(height - 10) +
         "\" text-anchor=\"middle\" font-size=\"13\" fill=\"#333333\">label noise</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt(top + plot_h / 2) +
         "\" text-anchor=\"middle\" font-size=\"13\" fill=\"#333333\" transform=\"rotate(-90 16 " +
         fmt(top + plot_h / 2) + ")\">test error</text>\n";

  for (std::size_t mi = 0; mi < o.methods.size(); ++mi) {
    const char* color = palette[mi % 8];
    std::string points;
    for (double nu : o.noise_levels) {
      const SweepCell* c = o.cell(o.methods[mi], nu);
      if (!c || c->failed || c->holdout_errors.empty()) continue;
      const double m = mean(c->holdout_errors);
      const double sd = sample_std(c->holdout_errors);
      const double x = px(nu), y = py(m);
      if (!points.empty()) points += " ";
      points += fmt(x) + "," + fmt(y);
      svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(py(std::max(0.0, m - sd))) + "\" x2=\"" +
             fmt(x) + "\" y2=\"" + fmt(py(m + sd)) + "\" stroke=\"" + color + "\"/>\n";
      svg += "<circle cx=\"" + fmt(x) + "\" cy=\"" + fmt(y) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    }
    if (!points.empty())
      svg += "<polyline points=\"" + points + "\" fill=\"none\" stroke=\"" + color +
             "\" stroke-width=\"1.7\"/>\n";
    const double ly = top + 16 + 16.0 * mi;
    svg += "<line x1=\"" + fmt(left + 10) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
           fmt(left + 34) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
           "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + fmt(left + 40) + "\" y=\"" + fmt(ly) +
           "\" font-size=\"12\" fill=\"#333333\">" + o.methods[mi] + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_sweep_artifacts(const SweepOutcome& o, const SweepConfig& cfg) {
  std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::io, "cannot create output directory " + cfg.out_dir);
  write_text_file((dir / "results.csv").string(), sweep_results_csv(o));
  write_text_file((dir / "validation.csv").string(), sweep_validation_csv(o));
  write_text_file((dir / "summary.csv").string(), sweep_summary_csv(o));
  write_text_file((dir / "flips.csv").string(), sweep_flips_csv(o));
  write_text_file((dir / "plot.svg").string(), sweep_plot_svg(o));
  write_text_file((dir / "errors.txt").string(), sweep_errors_text(o));
  write_text_file((dir / "meta.txt").string(), sweep_meta_text(o, cfg));
}

namespace {

struct ResultRows {
  // noise -> fold -> error
  std::map<double, std::map<long long, double>> by_noise;
};

ResultRows parse_results_csv(const std::string& text, std::string& method_filter,
                             const std::string& origin) {
  std::vector<std::string> lines = split(text, '\n');
  require(!lines.empty() && trim(lines[0]) == "method,noise,fold,test_error,q,lambda",
          ErrorCode::parse, origin + ": unexpected results header");
  std::set<std::string> methods_seen;
  std::vector<std::tuple<std::string, double, long long, double>> rows;
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    const std::string line = trim(lines[ln]);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(ln + 1);
    const std::vector<std::string> f = split(line, ',');
    require(f.size() == 6, ErrorCode::parse, where + ": expected 6 columns");
    const double noise = parse_double_strict(f[1], where + " noise");
    const long long fold = parse_int_strict(f[2], where + " fold");
    const double err = parse_double_strict(f[3], where + " test_error");
    methods_seen.insert(f[0]);
    rows.emplace_back(f[0], noise, fold, err);
  }
  require(!rows.empty(), ErrorCode::parse, origin + ": no data rows");
  if (method_filter.empty()) {
    require(methods_seen.size() == 1, ErrorCode::invalid_argument,
            origin + ": holds several methods, pick one explicitly");
    method_filter = *methods_seen.begin();
  } else {
    require(methods_seen.count(method_filter) > 0, ErrorCode::invalid_argument,
            origin + ": method '" + method_filter + "' not present");
  }
  ResultRows out;
  for (const auto& [m, noise, fold, err] : rows) {
    if (m != method_filter) continue;
    require(out.by_noise[noise].emplace(fold, err).second, ErrorCode::parse,
            origin + ": duplicate (noise, fold) row");
  }
  return out;
}

}  // namespace

std::string significance_table(const std::string& csv_a, const std::string& csv_b,
                               std::string method_a, std::string method_b, double alpha) {
  const ResultRows ra = parse_results_csv(csv_a, method_a, "first input");
  const ResultRows rb = parse_results_csv(csv_b, method_b, "second input");

  std::string out = "# paired t-test: " + method_a + " vs " + method_b +
                    ", alpha=" + format_double(alpha) + "\n";
  out += "noise,n,mean_a,mean_b,mean_diff,t,p,reject\n";
  bool any = false;
  for (const auto& [noise, folds_a] : ra.by_noise) {
    const auto it = rb.by_noise.find(noise);
    if (it == rb.by_noise.end()) continue;
    const auto& folds_b = it->second;
    require(folds_a.size() == folds_b.size(), ErrorCode::invalid_argument,
            "fold counts differ at noise " + format_double(noise));
    std::vector<double> a, b;
    for (const auto& [fold, err] : folds_a) {
      const auto fb = folds_b.find(fold);
      require(fb != folds_b.end(), ErrorCode::invalid_argument,
              "fold ids differ at noise " + format_double(noise));
      a.push_back(err);
      b.push_back(fb->second);
    }
    const PairedTestResult t = paired_ttest(a, b, alpha);
    out += format_double(noise) + "," + std::to_string(a.size()) + "," +
           format_double_sig(mean(a), 9) + "," + format_double_sig(mean(b), 9) + "," +
           format_double_sig(t.mean_diff, 9) + "," + format_double_sig(t.t_statistic, 9) + "," +
           format_double_sig(t.p_value, 9) + "," + (t.reject ? "Y" : "N") + "\n";
    any = true;
  }
  require(any, ErrorCode::invalid_argument, "the two inputs share no noise levels");
  return out;
}

}  // namespace qlc
