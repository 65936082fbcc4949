#pragma once

#include <cstdint>
#include <vector>

namespace qlc {

// Bit values are 0/1 stored one per byte.  Index k holds the bit of weight
// 2^k, so index 0 is the least significant position.
using BitVec = std::vector<std::uint8_t>;

std::uint64_t bits_to_uint(const BitVec& bits);           // requires size <= 64
bool bits_less_unsigned(const BitVec& a, const BitVec& b);  // compare as integers

// Fixed-point code over `depth` bits mapping level L in [0, 2^depth - 1] to
//   offset + multiplier * L / (2^depth - 1).
// Bit k (1-based) contributes multiplier * 2^(k-1) / (2^depth - 1), so the
// top bit alone reaches past the midpoint of the range.
struct BitEncoding {
  int depth = 1;
  double multiplier = 1.0;
  double offset = 0.0;

  void validate() const;

  double delta(int k) const;  // 2^(k-1) / (2^depth - 1), k in 1..depth
  double step() const;        // resolution: multiplier / (2^depth - 1)
  double low() const { return offset; }
  double high() const { return offset + multiplier; }

  double value_at_level(std::uint64_t level) const;
  double value(const std::uint8_t* bits) const;
  double value(const BitVec& bits) const;  // size must equal depth

  std::uint64_t nearest_level(double v) const;  // clamped; half rounds down
  BitVec nearest_code(double v) const;
};

// Variable layout of a compiled training problem: first the weight bits
// grouped by feature, then the bias bits, then one slack block per example.
// The slack encoding is anchored so its top bit decides which side of 1 the
// decoded value lands on; offset must equal 1 - multiplier/2.
struct ProblemEncoding {
  BitEncoding weight;
  BitEncoding bias;
  BitEncoding slack;
  int n_features = 0;
  int n_examples = 0;

  void validate() const;

  int n_weight_bits() const { return n_features * weight.depth; }
  int total_bits() const { return n_weight_bits() + bias.depth + n_examples * slack.depth; }

  // k is 1-based within each block
  int weight_bit(int i, int k) const { return i * weight.depth + (k - 1); }
  int bias_bit(int k) const { return n_weight_bits() + (k - 1); }
  int slack_bit(int s, int k) const {
    return n_weight_bits() + bias.depth + s * slack.depth + (k - 1);
  }
  int slack_top_bit(int s) const { return slack_bit(s, slack.depth); }
};

struct DecodedAssignment {
  std::vector<double> weights;
  double bias = 0.0;
  std::vector<double> slacks;
  BitVec flip_flags;  // 1 where the slack landed below 1
};

DecodedAssignment decode(const ProblemEncoding& enc, const BitVec& bits);

// Inverse of decode up to quantization: each value snapped to its nearest
// representable code.
BitVec embed(const ProblemEncoding& enc, const std::vector<double>& weights, double bias,
             const std::vector<double>& slacks);

}  // namespace qlc
