#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "dataset.hpp"
#include "errors.hpp"
#include "solver.hpp"
#include "train.hpp"
#include "util.hpp"

using namespace qlc;

namespace {

QuadraticBinaryProblem random_problem(int n, std::uint64_t seed, double density = 0.5) {
  Rng rng(seed);
  std::vector<double> linear(n);
  for (double& v : linear) v = uniform01(rng) * 4.0 - 2.0;
  std::vector<QuboEntry> quad;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (uniform01(rng) < density) quad.push_back({i, j, uniform01(rng) * 4.0 - 2.0});
  return QuadraticBinaryProblem(n, std::move(linear), std::move(quad), 0.0);
}

// Small compiled training problems stress realistic coupling structure.
QuadraticBinaryProblem compiled_problem(std::uint64_t seed) {
  Rng rng(seed);
  Dataset ds;
  ds.n_features = 1 + static_cast<int>(uniform_below(rng, 2));
  const int S = 2 + static_cast<int>(uniform_below(rng, 3));
  for (int s = 0; s < S; ++s) {
    std::vector<std::pair<int, double>> row;
    for (int i = 0; i < ds.n_features; ++i) row.emplace_back(i, uniform01(rng) * 2.0 - 1.0);
    ds.rows.push_back(row);
    ds.labels.push_back(uniform01(rng) < 0.5 ? -1 : 1);
    ds.ids.push_back(s);
  }
  const double q = -2.0 * uniform01(rng);
  const double lambda = 0.5 * uniform01(rng);
  ProblemEncoding enc;
  const int d_w = 1 + static_cast<int>(uniform_below(rng, 2));
  const int d_t = 1 + static_cast<int>(uniform_below(rng, 2));
  enc.weight = {d_w, 4.0, -2.0};
  enc.bias = {1, 4.0, -2.0};
  const double a_t = 2.0 * (2.0 + std::abs(q));
  enc.slack = {d_t, a_t, 1.0 - a_t / 2.0};
  enc.n_features = ds.n_features;
  enc.n_examples = S;
  enc.validate();
  return build_problem(compute_groups(ds, q, lambda), enc);
}

}  // namespace

TEST_CASE("brute force basics") {
  QuadraticBinaryProblem single(1, {1.0}, {}, 0.0);
  SolveResult r = brute_force(single);
  CHECK(r.bits == BitVec{0});
  CHECK(r.energy == 0.0);

  QuadraticBinaryProblem pair(2, {-1.0, -1.0}, {{0, 1, 3.0}}, 0.25);
  r = brute_force(pair);
  CHECK(r.energy == -1.0);
  CHECK(r.bits == BitVec{1, 0});  // tie resolves to the smaller pattern
  CHECK(r.objective == doctest::Approx(-0.75));
}

TEST_CASE("brute force never loses to sampling") {
  Rng rng(77);
  const QuadraticBinaryProblem p = random_problem(12, 1234);
  const SolveResult best = brute_force(p);
  for (int i = 0; i < 1000; ++i) {
    BitVec b(12);
    for (auto& bit : b) bit = uniform01(rng) < 0.5;
    CHECK(p.energy(b) >= best.energy - 1e-12);
  }
}

TEST_CASE("brute force capacity limit") {
  try {
    brute_force(QuadraticBinaryProblem(31, std::vector<double>(31, 0.5), {}, 0.0));
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::capacity);
  }
}

TEST_CASE("brute force is index-permutation invariant") {
  const int n = 10;
  const QuadraticBinaryProblem p = random_problem(n, 555);
  // reverse the variable order
  std::vector<double> linear(n);
  std::vector<QuboEntry> quad;
  for (int i = 0; i < n; ++i) linear[n - 1 - i] = p.linear()[i];
  for (const QuboEntry& e : p.quadratic()) {
    int i = n - 1 - e.i, j = n - 1 - e.j;
    if (i > j) std::swap(i, j);
    quad.push_back({i, j, e.value});
  }
  std::sort(quad.begin(), quad.end(), [](const QuboEntry& a, const QuboEntry& b) {
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  const QuadraticBinaryProblem rev(n, std::move(linear), std::move(quad), 0.0);
  const SolveResult a = brute_force(p);
  const SolveResult b = brute_force(rev);
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-12));
}

TEST_CASE("zero iteration budget returns the start state") {
  const QuadraticBinaryProblem p = random_problem(8, 42);
  TabuParams params;
  params.max_iterations = 0;
  params.seed = 9;
  const SolveResult r = tabu_search(p, params);
  CHECK(r.iterations == 0);
  CHECK(r.energy == doctest::Approx(p.energy(r.bits)).epsilon(1e-12));
  // explicit start state is honored
  TabuParams fixed;
  fixed.max_iterations = 0;
  fixed.initial_state = BitVec{1, 0, 1, 0, 1, 0, 1, 0};
  const SolveResult f = tabu_search(p, fixed);
  CHECK(f.bits == fixed.initial_state);
}

TEST_CASE("tabu is deterministic") {
  const QuadraticBinaryProblem p = random_problem(16, 4242);
  TabuParams params;
  params.seed = 3;
  const SolveResult a = tabu_search(p, params);
  const SolveResult b = tabu_search(p, params);
  CHECK(a.bits == b.bits);
  CHECK(a.energy == b.energy);
  CHECK(a.iterations == b.iterations);
  CHECK(a.restarts_used == b.restarts_used);
}

TEST_CASE("tabu matches the exact optimum on most small problems") {
  int matches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const QuadraticBinaryProblem p = random_problem(12, 9000 + seed);
    TabuParams params;
    params.seed = seed + 1;
    if (std::abs(tabu_search(p, params).energy - brute_force(p).energy) < 1e-9) ++matches;
  }
  CHECK(matches >= 95);
}

TEST_CASE("accepted moves report exact deltas and the incumbent never worsens") {
  const QuadraticBinaryProblem p = random_problem(14, 31337, 0.7);
  TabuParams params;
  params.seed = 11;
  params.max_iterations = 3000;
  params.restarts = 0;  // keep one uninterrupted trajectory for the replay
  params.record_trace = true;

  // learn the seeded start state, then replay the walk on a shadow copy
  TabuParams probe = params;
  probe.max_iterations = 0;
  BitVec shadow = tabu_search(p, probe).bits;
  int audited = 0;
  params.move_listener = [&](long long, int var, double delta) {
    CHECK(delta == doctest::Approx(p.flip_delta(shadow, var)).epsilon(1e-9));
    shadow[var] ^= 1;
    ++audited;
  };
  const SolveResult r = tabu_search(p, params);
  CHECK(audited > 0);
  // trace energies are strictly improving incumbents
  REQUIRE(!r.trace.empty());
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    CHECK(r.trace[i].second < r.trace[i - 1].second);
  }
  CHECK(r.trace.back().second == doctest::Approx(r.energy));
}

TEST_CASE("a stalled walk burns its restart budget and stops early") {
  // 64 states: once the global minimum is found no further record can reset
  // the stall counter, so every remaining stretch stalls
  const QuadraticBinaryProblem p = random_problem(6, 606);
  TabuParams params;
  params.seed = 5;
  params.max_iterations = 2000;
  params.stall_limit = 20;
  params.restarts = 3;
  const SolveResult r = tabu_search(p, params);
  CHECK(r.restarts_used == 3);
  CHECK(r.iterations < 2000);
  CHECK(r.energy == doctest::Approx(brute_force(p).energy).epsilon(1e-12));
  CHECK(r.energy == doctest::Approx(p.energy(r.bits)).epsilon(1e-12));
}

TEST_CASE("tenure validation") {
  const QuadraticBinaryProblem p = random_problem(6, 8);
  TabuParams params;
  params.tenure = 6;
  CHECK_THROWS_AS(tabu_search(p, params), Error);
  params.tenure = 0;
  CHECK_THROWS_AS(tabu_search(p, params), Error);
  params.tenure = 5;
  CHECK_NOTHROW(tabu_search(p, params));
}

TEST_CASE("multi start reduces deterministically across worker counts") {
  const QuadraticBinaryProblem p = compiled_problem(2024);
  TabuParams params;
  params.seed = 17;
  params.max_iterations = 500;
  const SolveResult one = multi_start_tabu(p, params, 5, 1);
  const SolveResult two = multi_start_tabu(p, params, 5, 2);
  const SolveResult four = multi_start_tabu(p, params, 5, 4);
  CHECK(one.bits == two.bits);
  CHECK(one.bits == four.bits);
  CHECK(one.energy == two.energy);
  CHECK(one.energy == four.energy);
  // single run equals plain search
  const SolveResult direct = tabu_search(p, params);
  const SolveResult single = multi_start_tabu(p, params, 1, 1);
  CHECK(single.bits == direct.bits);
  // more seeds never hurt
  const SolveResult ten = multi_start_tabu(p, params, 10, 1);
  CHECK(ten.energy <= one.energy + 1e-12);
}

TEST_CASE("compiled problems are solved to optimality") {
  int matches = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const QuadraticBinaryProblem p = compiled_problem(100 + seed);
    REQUIRE(p.n_vars() <= 20);
    TabuParams params;
    params.seed = seed + 1;
    if (std::abs(tabu_search(p, params).energy - brute_force(p).energy) < 1e-9) ++matches;
  }
  CHECK(matches >= 38);
}

TEST_CASE("result text output") {
  QuadraticBinaryProblem p(2, {-1.0, 2.0}, {}, 0.5);
  const SolveResult r = brute_force(p);
  const std::string text = solve_result_to_text(r);
  CHECK(text.find("format: qlc-solve-1\n") == 0);
  CHECK(text.find("n_vars: 2\n") != std::string::npos);
  CHECK(text.find("energy: -1\n") != std::string::npos);
  CHECK(text.find("bits: 10\n") != std::string::npos);
  TabuParams params;
  params.record_trace = true;
  params.max_iterations = 200;
  const std::string csv = trace_to_csv(tabu_search(p, params));
  CHECK(csv.find("iteration,energy\n") == 0);
}
