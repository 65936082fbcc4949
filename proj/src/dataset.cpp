#include "dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "util.hpp"

namespace qlc {

void Dataset::validate() const {
  require(n_features >= 1, ErrorCode::invalid_argument, "dataset needs at least one feature");
  require(!rows.empty(), ErrorCode::domain, "dataset has no examples");
  require(rows.size() == labels.size() && rows.size() == ids.size(), ErrorCode::internal,
          "dataset arrays out of sync");
  for (std::size_t s = 0; s < rows.size(); ++s) {
    require(labels[s] == 1 || labels[s] == -1, ErrorCode::invalid_argument,
            "labels must be +1 or -1");
    int prev = -1;
    for (const auto& [idx, val] : rows[s]) {
      require(idx > prev, ErrorCode::invalid_argument, "feature indices must be strictly increasing");
      require(idx >= 0 && idx < n_features, ErrorCode::invalid_argument,
              "feature index out of range");
      require(std::isfinite(val), ErrorCode::invalid_argument, "feature values must be finite");
      prev = idx;
    }
  }
}

double Dataset::dot(const std::vector<double>& w, std::size_t s) const {
  double acc = 0.0;
  for (const auto& [idx, val] : rows[s]) acc += w[idx] * val;
  return acc;
}

double Dataset::margin(const std::vector<double>& w, double b, std::size_t s) const {
  return labels[s] * (dot(w, s) + b);
}

Dataset Dataset::subset(const std::vector<int>& indices) const {
  Dataset out;
  out.n_features = n_features;
  out.rows.reserve(indices.size());
  out.labels.reserve(indices.size());
  out.ids.reserve(indices.size());
  for (int i : indices) {
    require(i >= 0 && i < static_cast<int>(size()), ErrorCode::invalid_argument,
            "subset index out of range");
    out.rows.push_back(rows[i]);
    out.labels.push_back(labels[i]);
    out.ids.push_back(ids[i]);
  }
  return out;
}

std::size_t Dataset::count_label(int label) const {
  std::size_t n = 0;
  for (int y : labels)
    if (y == label) ++n;
  return n;
}

Dataset parse_libsvm(const std::string& text, const std::string& origin) {
  Dataset ds;
  std::istringstream in(text);
  std::string line;
  int max_index = 0;
  long long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    ls >> tok;
    const std::string where = origin + ":" + std::to_string(lineno);
    const double raw = parse_double_strict(tok, where + " label");
    int label;
    if (raw == 1.0) label = 1;
    else if (raw == -1.0 || raw == 0.0) label = -1;
    else fail(ErrorCode::parse, where + ": label must be one of -1, 0, +1");
    std::vector<std::pair<int, double>> row;
    while (ls >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos)
        fail(ErrorCode::parse, where + ": expected index:value, got '" + tok + "'");
      const long long idx = parse_int_strict(tok.substr(0, colon), where + " feature index");
      if (idx < 1) fail(ErrorCode::parse, where + ": feature indices are 1-based");
      const double val = parse_double_strict(tok.substr(colon + 1), where + " feature value");
      row.emplace_back(static_cast<int>(idx - 1), val);
    }
    std::sort(row.begin(), row.end());
    for (std::size_t k = 1; k < row.size(); ++k)
      if (row[k].first == row[k - 1].first)
        fail(ErrorCode::parse, where + ": duplicate feature index " +
                                   std::to_string(row[k].first + 1));
    if (!row.empty()) max_index = std::max(max_index, row.back().first + 1);
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(label);
    ds.ids.push_back(static_cast<long long>(ds.rows.size()) - 1);
  }
  if (ds.rows.empty()) fail(ErrorCode::domain, origin + ": no examples");
  ds.n_features = std::max(max_index, 1);
  ds.validate();
  return ds;
}

Dataset load_libsvm(const std::string& path) {
  return parse_libsvm(read_text_file(path), path);
}

std::string to_libsvm(const Dataset& ds) {
  std::string out;
  for (std::size_t s = 0; s < ds.size(); ++s) {
    out += ds.labels[s] > 0 ? "+1" : "-1";
    for (const auto& [idx, val] : ds.rows[s]) {
      out += ' ';
      out += std::to_string(idx + 1);
      out += ':';
      out += format_double(val);
    }
    out += '\n';
  }
  return out;
}

void save_libsvm(const Dataset& ds, const std::string& path) {
  write_text_file(path, to_libsvm(ds));
}

Dataset gen_long_servedio(int n, std::uint64_t seed) {
  require(n >= 1, ErrorCode::invalid_argument, "need n >= 1");
  const int dim = 21;
  Rng rng(seed);
  Dataset ds;
  ds.n_features = dim;
  for (int s = 0; s < n; ++s) {
    const int y = uniform_below(rng, 2) == 0 ? 1 : -1;
    const double u = uniform01(rng);
    std::vector<double> x(dim, 0.0);
    if (u < 0.25) {
      for (int i = 0; i < dim; ++i) x[i] = y;
    } else if (u < 0.5) {
      for (int i = 0; i < 11; ++i) x[i] = y;
      for (int i = 11; i < dim; ++i) x[i] = -y;
    } else {
      for (int i = 0; i < dim; ++i) x[i] = -y;
      for (int i : sample_without_replacement(rng, 11, 5)) x[i] = y;
      for (int i : sample_without_replacement(rng, 10, 6)) x[11 + i] = y;
    }
    std::vector<std::pair<int, double>> row(dim);
    for (int i = 0; i < dim; ++i) row[i] = {i, x[i]};
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(y);
    ds.ids.push_back(s);
  }
  ds.validate();
  return ds;
}

Dataset gen_mease_wyner(int n, std::uint64_t seed) {
  require(n >= 1, ErrorCode::invalid_argument, "need n >= 1");
  const int dim = 20;
  Rng rng(seed);
  Dataset ds;
  ds.n_features = dim;
  for (int s = 0; s < n; ++s) {
    std::vector<std::pair<int, double>> row(dim);
    double head = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double v = uniform01(rng);
      row[i] = {i, v};
      if (i < 5) head += v;
    }
    ds.rows.push_back(std::move(row));
    ds.labels.push_back(head > 2.5 ? 1 : -1);
    ds.ids.push_back(s);
  }
  ds.validate();
  return ds;
}

Dataset generate_dataset(const std::string& name, int n, std::uint64_t seed) {
  if (name == "long_servedio") return gen_long_servedio(n, seed);
  if (name == "mease_wyner") return gen_mease_wyner(n, seed);
  fail(ErrorCode::invalid_argument, "unknown generator '" + name + "'");
}

NoiseResult inject_one_class_noise(const Dataset& ds, const NoiseSpec& spec) {
  require(spec.rate >= 0.0 && spec.rate < 0.5, ErrorCode::invalid_argument,
          "noise rate must be in [0, 0.5)");
  require(spec.target_class == 1 || spec.target_class == -1, ErrorCode::invalid_argument,
          "noise target class must be +1 or -1");
  Rng rng(spec.seed);
  NoiseResult out;
  out.data = ds;
  for (std::size_t s = 0; s < ds.size(); ++s) {
    if (ds.labels[s] != spec.target_class) continue;
    if (uniform01(rng) < spec.rate) {
      out.data.labels[s] = -spec.target_class;
      out.flipped_ids.push_back(ds.ids[s]);
    }
  }
  return out;
}

double FlipReport::precision() const {
  if (n_trained == 0) return 1.0;
  return static_cast<double>(n_both) / static_cast<double>(n_trained);
}

double FlipReport::recall() const {
  if (n_injected == 0) return 1.0;
  return static_cast<double>(n_both) / static_cast<double>(n_injected);
}

FlipReport flip_overlap(std::vector<long long> injected, std::vector<long long> trained) {
  std::sort(injected.begin(), injected.end());
  std::sort(trained.begin(), trained.end());
  FlipReport r;
  r.n_injected = static_cast<long long>(injected.size());
  r.n_trained = static_cast<long long>(trained.size());
  std::vector<long long> both;
  std::set_intersection(injected.begin(), injected.end(), trained.begin(), trained.end(),
                        std::back_inserter(both));
  r.n_both = static_cast<long long>(both.size());
  return r;
}

std::pair<std::vector<int>, std::vector<int>> stratified_split(const Dataset& ds,
                                                               double test_fraction,
                                                               std::uint64_t seed) {
  require(test_fraction > 0.0 && test_fraction < 1.0, ErrorCode::invalid_argument,
          "test fraction must be in (0, 1)");
  Rng rng(seed);
  std::vector<int> test, train;
  for (int cls : {1, -1}) {
    std::vector<int> members;
    for (std::size_t s = 0; s < ds.size(); ++s)
      if (ds.labels[s] == cls) members.push_back(static_cast<int>(s));
    if (members.empty()) continue;
    shuffle(members, rng);
    const std::size_t n_test =
        static_cast<std::size_t>(std::floor(test_fraction * members.size() + 0.5));
    for (std::size_t k = 0; k < members.size(); ++k)
      (k < n_test ? test : train).push_back(members[k]);
  }
  require(!train.empty() && !test.empty(), ErrorCode::invalid_argument,
          "split leaves an empty train or test side");
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

std::string dataset_manifest(const Dataset& ds, const std::string& name,
                             const std::string& source) {
  const std::string body = to_libsvm(ds);
  char checksum[32];
  std::snprintf(checksum, sizeof(checksum), "%016llx",
                static_cast<unsigned long long>(fnv1a64(body.data(), body.size())));
  std::string out;
  out += "name: " + name + "\n";
  out += "source: " + source + "\n";
  out += "n_examples: " + std::to_string(ds.size()) + "\n";
  out += "n_features: " + std::to_string(ds.n_features) + "\n";
  out += "n_positive: " + std::to_string(ds.count_label(1)) + "\n";
  out += "n_negative: " + std::to_string(ds.count_label(-1)) + "\n";
  out += "checksum_fnv1a64: " + std::string(checksum) + "\n";
  return out;
}

void write_manifest(const Dataset& ds, const std::string& name, const std::string& source,
                    const std::string& path) {
  write_text_file(path, dataset_manifest(ds, name, source));
}

}  // namespace qlc
