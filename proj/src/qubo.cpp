#include "qubo.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dataset.hpp"
#include "errors.hpp"
#include "util.hpp"

namespace qlc {

CoefficientGroups compute_groups(const Dataset& ds, double q, double lambda) {
  ds.validate();
  require(std::isfinite(q) && q <= 0.0, ErrorCode::domain, "q must be finite and <= 0");
  require(std::isfinite(lambda) && lambda >= 0.0, ErrorCode::domain,
          "lambda must be finite and >= 0");
  const int n = ds.n_features;
  const std::size_t m = ds.size();
  const double inv_s = 1.0 / static_cast<double>(m);
  const double penalty = (1.0 - q) * (1.0 - q);

  CoefficientGroups g;
  g.n_features = n;
  g.n_examples = static_cast<int>(m);
  g.a.assign(static_cast<std::size_t>(n) * n, 0.0);
  g.b = 1.0;
  g.c.assign(n, 0.0);
  g.d_cols.resize(m);
  g.e.resize(m);
  g.f.resize(m);
  g.g.resize(m);
  g.h.assign(n, lambda);

  for (std::size_t s = 0; s < m; ++s) {
    const auto& row = ds.rows[s];
    const double y = ds.labels[s];
    for (const auto& [i, vi] : row) {
      for (const auto& [j, vj] : row) g.a[static_cast<std::size_t>(i) * n + j] += inv_s * vi * vj;
      g.c[i] += 2.0 * inv_s * vi;
      g.d_cols[s].emplace_back(i, -2.0 * y * vi * inv_s);
    }
    g.e[s] = -2.0 * y * inv_s;
    g.f[s] = inv_s;
    g.g[s] = -penalty * inv_s;
  }
  return g;
}

namespace {

std::uint64_t pack_pair(int i, int j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(i)) << 32) |
         static_cast<std::uint32_t>(j);
}

}  // namespace

QuboBuilder::QuboBuilder(int n_vars) : n_vars_(n_vars) {
  require(n_vars >= 1, ErrorCode::invalid_argument, "need at least one variable");
  linear_.assign(static_cast<std::size_t>(n_vars), 0.0);
}

void QuboBuilder::add_linear(int i, double v) {
  require(i >= 0 && i < n_vars_, ErrorCode::invalid_argument, "variable index out of range");
  linear_[i] += v;
}

void QuboBuilder::add_quadratic(int i, int j, double v) {
  require(i >= 0 && i < n_vars_ && j >= 0 && j < n_vars_, ErrorCode::invalid_argument,
          "variable index out of range");
  require(i != j, ErrorCode::invalid_argument, "use add_linear for squared bits");
  quad_[pack_pair(i, j)] += v;
}

void QuboBuilder::add_product(std::span<const int> xv, std::span<const double> xc, double x0,
                              std::span<const int> yv, std::span<const double> yc, double y0,
                              double scale) {
  if (scale == 0.0) return;
  require(xv.size() == xc.size() && yv.size() == yc.size(), ErrorCode::invalid_argument,
          "add_product: variable/coefficient length mismatch");
  for (std::size_t u = 0; u < xv.size(); ++u) {
    const double cu = scale * xc[u];
    if (cu == 0.0) continue;
    for (std::size_t v = 0; v < yv.size(); ++v) {
      const double cuv = cu * yc[v];
      if (cuv == 0.0) continue;
      if (xv[u] == yv[v])
        linear_[xv[u]] += cuv;  // b^2 = b
      else
        quad_[pack_pair(xv[u], yv[v])] += cuv;
    }
  }
  if (y0 != 0.0)
    for (std::size_t u = 0; u < xv.size(); ++u) linear_[xv[u]] += scale * xc[u] * y0;
  if (x0 != 0.0)
    for (std::size_t v = 0; v < yv.size(); ++v) linear_[yv[v]] += scale * yc[v] * x0;
  constant_ += scale * x0 * y0;
}

QuadraticBinaryProblem QuboBuilder::build(std::vector<std::string> comments) {
  std::vector<QuboEntry> entries;
  entries.reserve(quad_.size());
  for (const auto& [key, value] : quad_) {
    if (value == 0.0) continue;
    entries.push_back({static_cast<int>(key >> 32), static_cast<int>(key & 0xffffffffu), value});
  }
  std::sort(entries.begin(), entries.end(), [](const QuboEntry& a, const QuboEntry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  return QuadraticBinaryProblem(n_vars_, linear_, std::move(entries), constant_,
                                std::move(comments));
}

QuadraticBinaryProblem::QuadraticBinaryProblem(int n_vars, std::vector<double> linear,
                                               std::vector<QuboEntry> quadratic,
                                               double constant_offset,
                                               std::vector<std::string> comments)
    : n_vars_(n_vars),
      linear_(std::move(linear)),
      quadratic_(std::move(quadratic)),
      constant_offset_(constant_offset),
      comments_(std::move(comments)) {
  require(n_vars_ >= 1, ErrorCode::invalid_argument, "need at least one variable");
  require(static_cast<int>(linear_.size()) == n_vars_, ErrorCode::invalid_argument,
          "linear coefficient count must equal n_vars");
  require(std::isfinite(constant_offset_), ErrorCode::invalid_argument,
          "constant offset must be finite");
  for (double v : linear_)
    require(std::isfinite(v), ErrorCode::invalid_argument, "linear coefficients must be finite");
  for (std::size_t k = 0; k < quadratic_.size(); ++k) {
    const QuboEntry& e = quadratic_[k];
    require(e.i >= 0 && e.j < n_vars_ && e.i < e.j, ErrorCode::invalid_argument,
            "quadratic entries must satisfy 0 <= i < j < n_vars");
    require(std::isfinite(e.value), ErrorCode::invalid_argument,
            "quadratic coefficients must be finite");
    if (k > 0) {
      const QuboEntry& p = quadratic_[k - 1];
      require(p.i < e.i || (p.i == e.i && p.j < e.j), ErrorCode::invalid_argument,
              "quadratic entries must be sorted and unique");
    }
  }
  // adjacency in CSR form for the solvers
  std::vector<int> degree(n_vars_, 0);
  for (const QuboEntry& e : quadratic_) {
    ++degree[e.i];
    ++degree[e.j];
  }
  adj_start_.assign(n_vars_ + 1, 0);
  for (int i = 0; i < n_vars_; ++i) adj_start_[i + 1] = adj_start_[i] + degree[i];
  adj_.resize(adj_start_.back());
  std::vector<int> cursor(adj_start_.begin(), adj_start_.end() - 1);
  for (const QuboEntry& e : quadratic_) {
    adj_[cursor[e.i]++] = {e.j, e.value};
    adj_[cursor[e.j]++] = {e.i, e.value};
  }
}

std::span<const QuadraticBinaryProblem::Neighbor> QuadraticBinaryProblem::neighbors(int i) const {
  return {adj_.data() + adj_start_[i], adj_.data() + adj_start_[i + 1]};
}

double QuadraticBinaryProblem::energy(const BitVec& bits) const {
  require(static_cast<int>(bits.size()) == n_vars_, ErrorCode::invalid_argument,
          "state length does not match n_vars");
  double acc = 0.0;
  for (int i = 0; i < n_vars_; ++i)
    if (bits[i]) acc += linear_[i];
  for (const QuboEntry& e : quadratic_)
    if (bits[e.i] && bits[e.j]) acc += e.value;
  return acc;
}

double QuadraticBinaryProblem::flip_delta(const BitVec& bits, int i) const {
  require(i >= 0 && i < n_vars_, ErrorCode::invalid_argument, "variable index out of range");
  double s = linear_[i];
  for (const Neighbor& nb : neighbors(i))
    if (bits[nb.var]) s += nb.value;
  return bits[i] ? -s : s;
}

std::string QuadraticBinaryProblem::to_text() const {
  std::string out;
  for (const std::string& c : comments_) out += "c " + c + "\n";
  std::size_t n_entries = quadratic_.size();
  for (double v : linear_)
    if (v != 0.0) ++n_entries;
  out += "p " + std::to_string(n_vars_) + " " + std::to_string(n_entries) + " " +
         format_double(constant_offset_) + "\n";
  for (int i = 0; i < n_vars_; ++i)
    if (linear_[i] != 0.0)
      out += std::to_string(i) + " " + std::to_string(i) + " " + format_double(linear_[i]) + "\n";
  for (const QuboEntry& e : quadratic_)
    out += std::to_string(e.i) + " " + std::to_string(e.j) + " " + format_double(e.value) + "\n";
  return out;
}

QuadraticBinaryProblem QuadraticBinaryProblem::from_text(const std::string& text,
                                                         const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  long long lineno = 0;
  std::vector<std::string> comments;
  bool have_header = false;
  long long n_vars = 0, n_entries = 0;
  double offset = 0.0;
  std::vector<double> linear;
  std::vector<QuboEntry> entries;
  long long seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == 'c') {
      require(!have_header || seen == 0, ErrorCode::parse,
              where + ": comments must precede entries");
      std::string c = line.size() > 1 ? line.substr(2) : "";
      if (line.size() > 1 && line[1] != ' ')
        fail(ErrorCode::parse, where + ": comment lines start with 'c '");
      comments.push_back(c);
      continue;
    }
    std::istringstream ls(line);
    std::string t0, t1, t2, t3, extra;
    if (!have_header) {
      ls >> t0 >> t1 >> t2 >> t3;
      if (t0 != "p" || t3.empty() || (ls >> extra))
        fail(ErrorCode::parse, where + ": expected header 'p <n_vars> <n_entries> <offset>'");
      n_vars = parse_int_strict(t1, where + " n_vars");
      n_entries = parse_int_strict(t2, where + " n_entries");
      offset = parse_double_strict(t3, where + " offset");
      require(n_vars >= 1 && n_vars <= (1 << 26), ErrorCode::parse,
              where + ": n_vars out of range");
      require(n_entries >= 0, ErrorCode::parse, where + ": negative entry count");
      linear.assign(static_cast<std::size_t>(n_vars), 0.0);
      have_header = true;
      continue;
    }
    ls >> t0 >> t1 >> t2;
    if (t2.empty() || (ls >> extra))
      fail(ErrorCode::parse, where + ": expected 'i j value'");
    const long long i = parse_int_strict(t0, where + " i");
    const long long j = parse_int_strict(t1, where + " j");
    const double v = parse_double_strict(t2, where + " value");
    require(i >= 0 && j >= 0 && i < n_vars && j < n_vars, ErrorCode::parse,
            where + ": variable index out of range");
    require(i <= j, ErrorCode::parse, where + ": entries must have i <= j");
    require(v != 0.0, ErrorCode::parse, where + ": explicit zero entry");
    if (i == j) {
      require(linear[i] == 0.0, ErrorCode::parse, where + ": duplicate linear entry");
      linear[i] = v;
    } else {
      entries.push_back({static_cast<int>(i), static_cast<int>(j), v});
    }
    ++seen;
  }
  require(have_header, ErrorCode::parse, origin + ": missing 'p' header line");
  require(seen == n_entries, ErrorCode::parse,
          origin + ": header promises " + std::to_string(n_entries) + " entries, found " +
              std::to_string(seen));
  std::sort(entries.begin(), entries.end(), [](const QuboEntry& a, const QuboEntry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  for (std::size_t k = 1; k < entries.size(); ++k)
    require(entries[k - 1].i != entries[k].i || entries[k - 1].j != entries[k].j, ErrorCode::parse,
            origin + ": duplicate quadratic entry");
  return QuadraticBinaryProblem(static_cast<int>(n_vars), std::move(linear), std::move(entries),
                                offset, std::move(comments));
}

void QuadraticBinaryProblem::save(const std::string& path) const {
  write_text_file(path, to_text());
}

QuadraticBinaryProblem QuadraticBinaryProblem::load(const std::string& path) {
  return from_text(read_text_file(path), path);
}

QuadraticBinaryProblem build_problem(const CoefficientGroups& groups, const ProblemEncoding& enc) {
  enc.validate();
  require(groups.n_features == enc.n_features && groups.n_examples == enc.n_examples,
          ErrorCode::invalid_argument, "coefficient groups do not match the encoding layout");
  const int n = groups.n_features;
  const int m = groups.n_examples;
  QuboBuilder qb(enc.total_bits());

  // per-bit value coefficients of each block
  std::vector<double> wc(enc.weight.depth), bc(enc.bias.depth), tc(enc.slack.depth);
  for (int k = 1; k <= enc.weight.depth; ++k)
    wc[k - 1] = enc.weight.multiplier * enc.weight.delta(k);
  for (int k = 1; k <= enc.bias.depth; ++k) bc[k - 1] = enc.bias.multiplier * enc.bias.delta(k);
  for (int k = 1; k <= enc.slack.depth; ++k)
    tc[k - 1] = enc.slack.multiplier * enc.slack.delta(k);

  std::vector<int> bvars(enc.bias.depth);
  for (int k = 1; k <= enc.bias.depth; ++k) bvars[k - 1] = enc.bias_bit(k);
  std::vector<std::vector<int>> wvars(n);
  for (int i = 0; i < n; ++i) {
    wvars[i].resize(enc.weight.depth);
    for (int k = 1; k <= enc.weight.depth; ++k) wvars[i][k - 1] = enc.weight_bit(i, k);
  }
  std::vector<int> tvars(enc.slack.depth);

  const double w0 = enc.weight.offset;
  const double b0 = enc.bias.offset;
  const double t0 = enc.slack.offset;

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double aij = groups.a_at(i, j);
      if (aij != 0.0) qb.add_product(wvars[i], wc, w0, wvars[j], wc, w0, aij);
    }
  qb.add_product(bvars, bc, b0, bvars, bc, b0, groups.b);
  for (int i = 0; i < n; ++i)
    if (groups.c[i] != 0.0) qb.add_product(bvars, bc, b0, wvars[i], wc, w0, groups.c[i]);
  for (int s = 0; s < m; ++s) {
    for (int k = 1; k <= enc.slack.depth; ++k) tvars[k - 1] = enc.slack_bit(s, k);
    for (const auto& [i, dv] : groups.d_cols[s])
      qb.add_product(wvars[i], wc, w0, tvars, tc, t0, dv);
    qb.add_product(bvars, bc, b0, tvars, tc, t0, groups.e[s]);
    qb.add_product(tvars, tc, t0, tvars, tc, t0, groups.f[s]);
    // penalty (1-q)^2/S * (1 - top bit): linear part g[s], constant part -g[s]
    qb.add_linear(enc.slack_top_bit(s), groups.g[s]);
    qb.add_constant(-groups.g[s]);
  }
  for (int i = 0; i < n; ++i)
    if (groups.h[i] != 0.0) qb.add_product(wvars[i], wc, w0, wvars[i], wc, w0, groups.h[i]);

  return qb.build();
}

}  // namespace qlc
