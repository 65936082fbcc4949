#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qlc {

using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of the generator
// output.  Unlike std::uniform_real_distribution this is identical across
// library implementations, which keeps seeded results portable.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) via rejection sampling.
std::uint64_t uniform_below(Rng& rng, std::uint64_t n);

// Fisher-Yates shuffle using uniform_below, again for cross-platform
// reproducibility of seeded runs.
template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i));
    std::swap(v[i - 1], v[j]);
  }
}

// k distinct values from {0, ..., n-1}, order randomized.
std::vector<int> sample_without_replacement(Rng& rng, int n, int k);

// Derives an independent stream seed from a base seed (splitmix64 mix).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Round-trip-exact decimal formatting (%.17g) used by every file writer so
// that emitted artifacts are byte-stable.
std::string format_double(double v);
std::string format_double_sig(double v, int significant);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// FNV-1a over raw bytes; used for dataset manifests.
std::uint64_t fnv1a64(const void* data, std::size_t n);

bool starts_with(const std::string& s, const std::string& prefix);
std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

double parse_double_strict(const std::string& token, const std::string& what);
long long parse_int_strict(const std::string& token, const std::string& what);

}  // namespace qlc
