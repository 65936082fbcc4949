#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace qlc {

// Sparse binary-labeled dataset.  Feature indices are 0-based in memory and
// 1-based in files.  Ids track the original row positions through subsetting
// and noise injection so flipped examples can be matched up later.
struct Dataset {
  int n_features = 0;
  std::vector<std::vector<std::pair<int, double>>> rows;  // sorted by index
  std::vector<int> labels;                                // +1 / -1
  std::vector<long long> ids;

  std::size_t size() const { return rows.size(); }
  void validate() const;

  double dot(const std::vector<double>& w, std::size_t s) const;
  double margin(const std::vector<double>& w, double b, std::size_t s) const;

  Dataset subset(const std::vector<int>& indices) const;
  std::size_t count_label(int label) const;
};

Dataset load_libsvm(const std::string& path);
Dataset parse_libsvm(const std::string& text, const std::string& origin);
std::string to_libsvm(const Dataset& ds);
void save_libsvm(const Dataset& ds, const std::string& path);

// Synthetic pattern with 21 binary features where a small set of frequent
// weak examples punishes losses that overreact to outliers once labels get
// flipped.  Separable by the all-ones direction.
Dataset gen_long_servedio(int n, std::uint64_t seed);

// 20 uniform features, label decided by whether the first five sum past 2.5.
Dataset gen_mease_wyner(int n, std::uint64_t seed);

Dataset generate_dataset(const std::string& name, int n, std::uint64_t seed);

struct NoiseSpec {
  double rate = 0.0;
  int target_class = -1;  // only examples with this label can flip
  std::uint64_t seed = 0;
};

struct NoiseResult {
  Dataset data;
  std::vector<long long> flipped_ids;  // ids of examples whose label changed
};

// Flips each target-class label to the opposite class independently with
// probability rate.
NoiseResult inject_one_class_noise(const Dataset& ds, const NoiseSpec& spec);

struct FlipReport {
  long long n_injected = 0;
  long long n_trained = 0;
  long long n_both = 0;
  double precision() const;
  double recall() const;
};

FlipReport flip_overlap(std::vector<long long> injected, std::vector<long long> trained);

// Stratified train/test index split; both lists come back in ascending
// order.  Falls back to a plain split when a class is empty.
std::pair<std::vector<int>, std::vector<int>> stratified_split(const Dataset& ds,
                                                               double test_fraction,
                                                               std::uint64_t seed);

std::string dataset_manifest(const Dataset& ds, const std::string& name,
                             const std::string& source);
void write_manifest(const Dataset& ds, const std::string& name, const std::string& source,
                    const std::string& path);

}  // namespace qlc
