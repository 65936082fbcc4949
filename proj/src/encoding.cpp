#include "encoding.hpp"

#include <cmath>

#include "errors.hpp"

namespace qlc {

std::uint64_t bits_to_uint(const BitVec& bits) {
  require(bits.size() <= 64, ErrorCode::capacity, "bits_to_uint: more than 64 bits");
  std::uint64_t v = 0;
  for (std::size_t k = 0; k < bits.size(); ++k)
    if (bits[k]) v |= std::uint64_t{1} << k;
  return v;
}

bool bits_less_unsigned(const BitVec& a, const BitVec& b) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "bit vector size mismatch");
  for (std::size_t k = a.size(); k-- > 0;) {
    if (a[k] != b[k]) return a[k] < b[k];
  }
  return false;
}

void BitEncoding::validate() const {
  require(depth >= 1, ErrorCode::encoding, "encoding depth must be >= 1");
  require(depth <= 30, ErrorCode::capacity, "encoding depth above 30 is not supported");
  require(std::isfinite(multiplier) && multiplier > 0.0, ErrorCode::encoding,
          "encoding multiplier must be positive and finite");
  require(std::isfinite(offset), ErrorCode::encoding, "encoding offset must be finite");
}

double BitEncoding::delta(int k) const {
  require(k >= 1 && k <= depth, ErrorCode::invalid_argument, "bit index out of range");
  const double denom = static_cast<double>((std::uint64_t{1} << depth) - 1);
  return std::ldexp(1.0, k - 1) / denom;
}

double BitEncoding::step() const {
  const double denom = static_cast<double>((std::uint64_t{1} << depth) - 1);
  return multiplier / denom;
}

double BitEncoding::value_at_level(std::uint64_t level) const {
  const std::uint64_t max_level = (std::uint64_t{1} << depth) - 1;
  require(level <= max_level, ErrorCode::invalid_argument, "level out of range");
  const double denom = static_cast<double>(max_level);
  return offset + multiplier * (static_cast<double>(level) / denom);
}

double BitEncoding::value(const std::uint8_t* bits) const {
  std::uint64_t level = 0;
  for (int k = 0; k < depth; ++k)
    if (bits[k]) level |= std::uint64_t{1} << k;
  return value_at_level(level);
}

double BitEncoding::value(const BitVec& bits) const {
  require(static_cast<int>(bits.size()) == depth, ErrorCode::invalid_argument,
          "bit count does not match encoding depth");
  return value(bits.data());
}

std::uint64_t BitEncoding::nearest_level(double v) const {
  require(std::isfinite(v), ErrorCode::domain, "nearest_level: value must be finite");
  const std::uint64_t max_level = (std::uint64_t{1} << depth) - 1;
  if (v <= low()) return 0;
  if (v >= high()) return max_level;
  // round to nearest level, exact half toward the smaller one
  const double x = (v - offset) / step();
  double lv = std::ceil(x - 0.5);
  if (lv < 0.0) lv = 0.0;
  std::uint64_t level = static_cast<std::uint64_t>(lv);
  if (level > max_level) level = max_level;
  return level;
}

BitVec BitEncoding::nearest_code(double v) const {
  const std::uint64_t level = nearest_level(v);
  BitVec bits(static_cast<std::size_t>(depth), 0);
  for (int k = 0; k < depth; ++k)
    bits[k] = static_cast<std::uint8_t>((level >> k) & 1);
  return bits;
}

void ProblemEncoding::validate() const {
  weight.validate();
  bias.validate();
  slack.validate();
  require(n_features >= 1, ErrorCode::invalid_argument, "need at least one feature");
  require(n_examples >= 1, ErrorCode::invalid_argument, "need at least one example");
  // The slack block must straddle 1 exactly halfway so that its top bit
  // separates values below 1 from values above 1.
  const double want = 1.0 - slack.multiplier / 2.0;
  const double tol = 1e-12 * std::max(1.0, std::fabs(slack.multiplier));
  require(std::fabs(slack.offset - want) <= tol, ErrorCode::encoding,
          "slack offset must equal 1 - multiplier/2");
}

DecodedAssignment decode(const ProblemEncoding& enc, const BitVec& bits) {
  enc.validate();
  require(static_cast<int>(bits.size()) == enc.total_bits(), ErrorCode::invalid_argument,
          "bit vector length does not match encoding layout");
  DecodedAssignment out;
  out.weights.resize(enc.n_features);
  for (int i = 0; i < enc.n_features; ++i)
    out.weights[i] = enc.weight.value(bits.data() + enc.weight_bit(i, 1));
  out.bias = enc.bias.value(bits.data() + enc.bias_bit(1));
  out.slacks.resize(enc.n_examples);
  out.flip_flags.resize(enc.n_examples);
  for (int s = 0; s < enc.n_examples; ++s) {
    out.slacks[s] = enc.slack.value(bits.data() + enc.slack_bit(s, 1));
    out.flip_flags[s] = bits[enc.slack_top_bit(s)] ? 0 : 1;
  }
  return out;
}

BitVec embed(const ProblemEncoding& enc, const std::vector<double>& weights, double bias,
             const std::vector<double>& slacks) {
  enc.validate();
  require(static_cast<int>(weights.size()) == enc.n_features, ErrorCode::invalid_argument,
          "weight count does not match encoding");
  require(static_cast<int>(slacks.size()) == enc.n_examples, ErrorCode::invalid_argument,
          "slack count does not match encoding");
  BitVec bits(static_cast<std::size_t>(enc.total_bits()), 0);
  auto put = [&bits](const BitEncoding& e, int base, double v) {
    const BitVec code = e.nearest_code(v);
    for (int k = 0; k < e.depth; ++k) bits[base + k] = code[k];
  };
  for (int i = 0; i < enc.n_features; ++i) put(enc.weight, enc.weight_bit(i, 1), weights[i]);
  put(enc.bias, enc.bias_bit(1), bias);
  for (int s = 0; s < enc.n_examples; ++s) put(enc.slack, enc.slack_bit(s, 1), slacks[s]);
  return bits;
}

}  // namespace qlc
