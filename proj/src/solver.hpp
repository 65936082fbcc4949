#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qubo.hpp"

namespace qlc {

struct TabuParams {
  long long max_iterations = -1;  // -1: 2000 * n_vars
  int tenure = -1;                // -1: max(7, n_vars/10), kept below n_vars
  int restarts = -1;              // -1: spend the iteration budget, max_iterations/stall_limit - 1
  long long stall_limit = -1;     // -1: 100 * n_vars
  std::uint64_t seed = 1;
  bool record_trace = false;
  BitVec initial_state;           // empty: uniform random from seed
  // Called after each accepted move with (iteration, variable, delta).
  std::function<void(long long, int, double)> move_listener;
};

struct SolveResult {
  BitVec bits;
  double energy = 0.0;
  double objective = 0.0;  // energy + constant offset
  long long iterations = 0;
  int restarts_used = 0;
  std::vector<std::pair<long long, double>> trace;  // (iteration, incumbent energy)
};

// Exhaustive minimization over all 2^n states, n <= 30.  Ties resolve to the
// state with the smallest unsigned integer reading of the bit vector.
SolveResult brute_force(const QuadraticBinaryProblem& p);

// Steepest admissible single-flip search with a recency tabu list,
// aspiration on new incumbents, and random restarts after stalls.
// Deterministic given (problem, params).
SolveResult tabu_search(const QuadraticBinaryProblem& p, const TabuParams& params);

// Independent tabu runs from seeds seed..seed+n_runs-1, best result wins;
// energy ties resolve to the smaller bit pattern.  Worker count only affects
// scheduling, never the result.
SolveResult multi_start_tabu(const QuadraticBinaryProblem& p, const TabuParams& params, int n_runs,
                             int n_workers);

std::string solve_result_to_text(const SolveResult& r);
std::string trace_to_csv(const SolveResult& r);
void save_solve_result(const SolveResult& r, const std::string& path);

}  // namespace qlc
