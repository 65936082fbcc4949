#include "solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

#include "errors.hpp"
#include "util.hpp"

namespace qlc {

SolveResult brute_force(const QuadraticBinaryProblem& p) {
  const int n = p.n_vars();
  require(n <= 30, ErrorCode::capacity,
          "brute force supports at most 30 variables, got " + std::to_string(n));
  BitVec bits(static_cast<std::size_t>(n), 0);
  double cur = 0.0;  // energy of the all-zero state
  double best = 0.0;
  std::uint64_t cur_id = 0, best_id = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t t = 1; t < total; ++t) {
    const int i = std::countr_zero(t);  // reflected Gray code flip position
    cur += p.flip_delta(bits, i);
    bits[i] ^= 1;
    cur_id ^= std::uint64_t{1} << i;
    if (cur < best || (cur == best && cur_id < best_id)) {
      best = cur;
      best_id = cur_id;
    }
  }
  SolveResult r;
  r.bits.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) r.bits[i] = static_cast<std::uint8_t>((best_id >> i) & 1);
  r.energy = p.energy(r.bits);  // exact, not the accumulated value
  r.objective = r.energy + p.constant_offset();
  r.iterations = static_cast<long long>(total - 1);
  return r;
}

namespace {

struct ResolvedTabu {
  long long max_iterations;
  int tenure;
  int restarts;
  long long stall_limit;
};

ResolvedTabu resolve(const QuadraticBinaryProblem& p, const TabuParams& params) {
  const int n = p.n_vars();
  ResolvedTabu r;
  r.max_iterations = params.max_iterations < 0 ? 2000LL * n : params.max_iterations;
  if (params.tenure < 0) {
    r.tenure = std::max(7, n / 10);
    if (n > 1) r.tenure = std::min(r.tenure, n - 1);
    r.tenure = std::max(r.tenure, 1);
  } else {
    require(params.tenure >= 1, ErrorCode::invalid_argument, "tenure must be positive");
    require(n == 1 || params.tenure < n, ErrorCode::invalid_argument,
            "tenure must be smaller than the variable count");
    r.tenure = params.tenure;
  }
  r.stall_limit = params.stall_limit < 0 ? 100LL * n : params.stall_limit;
  require(r.stall_limit >= 1, ErrorCode::invalid_argument, "stall limit must be positive");
  if (params.restarts < 0) {
    const long long by_budget = r.max_iterations / r.stall_limit - 1;
    r.restarts = static_cast<int>(std::clamp(by_budget, 0LL, 1000000LL));
  } else {
    r.restarts = params.restarts;
  }
  return r;
}

}  // namespace

SolveResult tabu_search(const QuadraticBinaryProblem& p, const TabuParams& params) {
  const int n = p.n_vars();
  const ResolvedTabu cfg = resolve(p, params);
  Rng rng(params.seed);

  BitVec bits;
  if (params.initial_state.empty()) {
    bits.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>(rng() & 1);
  } else {
    require(static_cast<int>(params.initial_state.size()) == n, ErrorCode::invalid_argument,
            "initial state length does not match n_vars");
    bits = params.initial_state;
  }

  std::vector<double> delta(static_cast<std::size_t>(n));
  auto rebuild_deltas = [&]() {
    for (int i = 0; i < n; ++i) delta[i] = p.flip_delta(bits, i);
  };
  rebuild_deltas();
  double cur = p.energy(bits);

  BitVec best_bits = bits;
  double best = cur;
  SolveResult r;
  if (cfg.max_iterations > 0 && best > 0.0) {
    // the empty state is always worth considering as an incumbent
    best_bits.assign(static_cast<std::size_t>(n), 0);
    best = 0.0;
  }
  if (params.record_trace) r.trace.emplace_back(0, best);

  std::vector<long long> tabu_until(static_cast<std::size_t>(n), 0);
  long long stall = 0;
  long long iter = 0;
  int restarts_used = 0;

  while (iter < cfg.max_iterations) {
    ++iter;
    int pick = -1;
    double pick_delta = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = delta[i];
      if (tabu_until[i] >= iter && !(cur + d < best)) continue;  // tabu, no aspiration
      if (pick < 0 || d < pick_delta) {
        pick = i;
        pick_delta = d;
      }
    }
    if (pick < 0) {
      // every move tabu and none aspirates: fall back to the overall best
      for (int i = 0; i < n; ++i)
        if (pick < 0 || delta[i] < pick_delta) {
          pick = i;
          pick_delta = delta[i];
        }
    }

    const std::uint8_t old = bits[pick];
    const double sign_i = old ? -1.0 : 1.0;
    for (const auto& nb : p.neighbors(pick)) {
      const double sign_j = bits[nb.var] ? -1.0 : 1.0;
      delta[nb.var] += sign_j * sign_i * nb.value;
    }
    bits[pick] ^= 1;
    cur += pick_delta;
    delta[pick] = -delta[pick];
    tabu_until[pick] = iter + cfg.tenure;
    if (params.move_listener) params.move_listener(iter, pick, pick_delta);

    bool improved = false;
    if (cur < best) {
      // the incremental bookkeeping drifts; a record must survive an exact reading
      cur = p.energy(bits);
      improved = cur < best;
    }
    if (improved) {
      best = cur;
      best_bits = bits;
      stall = 0;
      if (params.record_trace) r.trace.emplace_back(iter, best);
    } else if (++stall >= cfg.stall_limit) {
      if (restarts_used >= cfg.restarts) break;
      ++restarts_used;
      for (int i = 0; i < n; ++i) bits[i] = static_cast<std::uint8_t>(rng() & 1);
      rebuild_deltas();
      cur = p.energy(bits);
      std::fill(tabu_until.begin(), tabu_until.end(), 0);
      stall = 0;
    }
  }

  r.bits = std::move(best_bits);
  r.energy = p.energy(r.bits);
  r.objective = r.energy + p.constant_offset();
  r.iterations = iter;
  r.restarts_used = restarts_used;
  return r;
}

SolveResult multi_start_tabu(const QuadraticBinaryProblem& p, const TabuParams& params, int n_runs,
                             int n_workers) {
  require(n_runs >= 1, ErrorCode::invalid_argument, "need at least one run");
  if (n_workers < 1) n_workers = 1;
  std::vector<SolveResult> results(static_cast<std::size_t>(n_runs));
  auto run_range = [&](int lo, int hi) {
    for (int r = lo; r < hi; ++r) {
      TabuParams local = params;
      local.seed = params.seed + static_cast<std::uint64_t>(r);
      results[r] = tabu_search(p, local);
    }
  };
  const int workers = std::min(n_workers, n_runs);
  if (workers <= 1) {
    run_range(0, n_runs);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (n_runs + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int lo = w * chunk;
      const int hi = std::min(n_runs, lo + chunk);
      if (lo < hi) pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  // sequential reduction keeps the winner independent of scheduling
  int win = 0;
  for (int r = 1; r < n_runs; ++r) {
    if (results[r].energy < results[win].energy ||
        (results[r].energy == results[win].energy &&
         bits_less_unsigned(results[r].bits, results[win].bits)))
      win = r;
  }
  return results[win];
}

std::string solve_result_to_text(const SolveResult& r) {
  std::string out;
  out += "format: qlc-solve-1\n";
  out += "n_vars: " + std::to_string(r.bits.size()) + "\n";
  out += "energy: " + format_double(r.energy) + "\n";
  out += "objective: " + format_double(r.objective) + "\n";
  out += "iterations: " + std::to_string(r.iterations) + "\n";
  out += "restarts_used: " + std::to_string(r.restarts_used) + "\n";
  out += "bits: ";
  for (std::uint8_t b : r.bits) out += b ? '1' : '0';
  out += '\n';
  return out;
}

std::string trace_to_csv(const SolveResult& r) {
  std::string out = "iteration,energy\n";
  for (const auto& [it, e] : r.trace) out += std::to_string(it) + "," + format_double(e) + "\n";
  return out;
}

void save_solve_result(const SolveResult& r, const std::string& path) {
  write_text_file(path, solve_result_to_text(r));
}

}  // namespace qlc
