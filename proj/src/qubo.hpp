#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "encoding.hpp"

namespace qlc {

struct Dataset;

// Aggregated data-dependent coefficients of the penalized square-fit
// objective
//   (1/S) sum_s [ (w.x_s + b)^2 - 2 y_s (w.x_s + b) t_s + t_s^2
//                 + penalty_s(t_s) ] + lambda |w|^2
// grouped by which products of variables they multiply:
//   a:  w_i w_j      b: b^2        c: b w_i
//   d:  w_i t_s      e: b t_s      f: t_s^2
//   g:  per-example penalty scale  h: w_i^2
struct CoefficientGroups {
  int n_features = 0;
  int n_examples = 0;
  std::vector<double> a;                                    // n_features^2, symmetric
  double b = 1.0;
  std::vector<double> c;                                    // n_features
  std::vector<std::vector<std::pair<int, double>>> d_cols;  // per example, sparse over i
  std::vector<double> e;
  std::vector<double> f;
  std::vector<double> g;
  std::vector<double> h;

  double a_at(int i, int j) const { return a[static_cast<std::size_t>(i) * n_features + j]; }
};

CoefficientGroups compute_groups(const Dataset& ds, double q, double lambda);

struct QuboEntry {
  int i = 0;
  int j = 0;  // i < j
  double value = 0.0;
};

// Upper-triangular quadratic pseudo-boolean objective
//   energy(b) = sum_i linear[i] b_i + sum_{i<j} value_{ij} b_i b_j
// The constant offset is carried alongside but never included in energy().
class QuadraticBinaryProblem {
 public:
  QuadraticBinaryProblem(int n_vars, std::vector<double> linear, std::vector<QuboEntry> quadratic,
                         double constant_offset, std::vector<std::string> comments = {});

  int n_vars() const { return n_vars_; }
  double constant_offset() const { return constant_offset_; }
  const std::vector<double>& linear() const { return linear_; }
  const std::vector<QuboEntry>& quadratic() const { return quadratic_; }
  const std::vector<std::string>& comments() const { return comments_; }

  double energy(const BitVec& bits) const;
  // Energy change from flipping variable i in the given state.
  double flip_delta(const BitVec& bits, int i) const;

  struct Neighbor {
    int var;
    double value;
  };
  std::span<const Neighbor> neighbors(int i) const;

  std::string to_text() const;
  static QuadraticBinaryProblem from_text(const std::string& text, const std::string& origin);
  void save(const std::string& path) const;
  static QuadraticBinaryProblem load(const std::string& path);

 private:
  int n_vars_;
  std::vector<double> linear_;
  std::vector<QuboEntry> quadratic_;
  double constant_offset_;
  std::vector<std::string> comments_;
  std::vector<int> adj_start_;
  std::vector<Neighbor> adj_;
};

// Accumulates terms of a pseudo-boolean polynomial of degree <= 2,
// normalizing x_i^2 = x_i and unordered pairs as they arrive.
class QuboBuilder {
 public:
  explicit QuboBuilder(int n_vars);

  void add_constant(double v) { constant_ += v; }
  void add_linear(int i, double v);
  void add_quadratic(int i, int j, double v);  // i != j, any order

  // scale * (sum_u xc[u] b_{xv[u]} + x0) * (sum_v yc[v] b_{yv[v]} + y0)
  void add_product(std::span<const int> xv, std::span<const double> xc, double x0,
                   std::span<const int> yv, std::span<const double> yc, double y0, double scale);

  QuadraticBinaryProblem build(std::vector<std::string> comments = {});

 private:
  int n_vars_;
  double constant_ = 0.0;
  std::vector<double> linear_;
  std::unordered_map<std::uint64_t, double> quad_;  // key packs the (i, j) pair
};

// Compiles the grouped coefficients onto the bit layout.  The slack top bit
// carries the per-example penalty: its linear term is g[s] and the matching
// constants accumulate into the offset.
QuadraticBinaryProblem build_problem(const CoefficientGroups& groups, const ProblemEncoding& enc);

}  // namespace qlc
