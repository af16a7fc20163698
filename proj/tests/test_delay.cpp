#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <map>

#include "fsa/delay.hpp"
#include "fsa/errors.hpp"

using namespace fsa;

namespace {

Automaton random_automaton(SplitMix64& rng, int nq, int na, int nb) {
  Automaton m;
  for (int q = 0; q < nq; ++q) m.states.push_back("q" + std::to_string(q));
  for (int a = 0; a < na; ++a) m.input_alphabet.push_back(std::string(1, 'a' + a));
  for (int b = 0; b < nb; ++b) m.output_alphabet.push_back(std::to_string(b));
  m.initial = 0;
  m.delta.assign(nq, std::vector<int>(na));
  m.omega.assign(nq, 0);
  for (int q = 0; q < nq; ++q) {
    m.omega[q] = (int)rng.below(nb);
    for (int a = 0; a < na; ++a) m.delta[q][a] = (int)rng.below(nq);
  }
  return m;
}

}  // namespace

TEST_CASE("settle on last-letter is constant, on parity linear") {
  Automaton l1 = builtin("LAST1");
  Circuit c = synth_standard(l1, 100);
  Word x(100, 1);
  SettleProfile p = settle(c, x);
  double d = settle_delay(c, p, output_trace(l1, x));
  CHECK(d < 10);  // bounded regardless of n

  Automaton par = builtin("PARITY");
  Circuit cp = synth_standard(par, 100);
  Word y(100, 1);
  SettleProfile pp = settle(cp, y);
  CHECK(settle_delay(cp, pp, output_trace(par, y)) >= 99);
}

TEST_CASE("not gates are rejected by monotone settling") {
  Circuit c = synth_standard(builtin("PARITY"), 3);
  c.gates[c.gates.size() - 1].kind = GateKind::Not;
  Word x{0, 1, 0};
  CHECK_THROWS_AS(settle(c, x), ContractError);
}

TEST_CASE("suffix determination on the serial adder is the carry chain") {
  Automaton m = builtin("SERIAL_ADD");
  // letters named "ab"; after a "00" the carry is dead and outputs are local
  Word x = parse_word(m.input_alphabet, {"00", "11", "01", "10", "00", "01"});
  // position 1: output s of first letter depends only on the letter (carry 0
  // initially) but suffix determination cannot see the initial state
  for (int pos = 1; pos <= 6; ++pos) {
    int k = suffix_determination(m, x, pos);
    // brute-force: shortest suffix length whose observation pins the output
    int expect = -1;
    for (int len = 1; len <= pos && expect == -1; ++len) {
      int out = -1;
      bool same = true;
      for (int q = 0; q < m.nq() && same; ++q) {
        Word suf(x.begin() + pos - len, x.begin() + pos);
        int o = m.omega[run(m, q, suf)];
        if (out == -1) out = o;
        same = out == o;
      }
      if (same) expect = len;
    }
    if (expect == -1) expect = pos;
    CHECK(k == expect);
  }
}

TEST_CASE("exact dependence sets match brute force on random machines") {
  SplitMix64 rng(41);
  for (int rep = 0; rep < 60; ++rep) {
    Automaton m = random_automaton(rng, 2 + (int)rng.below(2), 2, 2);
    int n = 2 + (int)rng.below(6);
    int pos = 1 + (int)rng.below((uint64_t)n);
    CHECK(dependence_set_exact(m, n, pos) == dependence_set_bruteforce(m, n, pos));
  }
}

TEST_CASE("dependence sets of the builtins") {
  // parity: every position up to m matters
  std::set<int> all;
  for (int i = 1; i <= 6; ++i) all.insert(i);
  CHECK(dependence_set_exact(builtin("PARITY"), 6, 6) == all);
  // first/last: only the first and current letters matter
  CHECK(dependence_set_exact(builtin("FIRSTLAST"), 5, 5) == std::set<int>{1, 5});
  CHECK(dependence_set_exact(builtin("LAST1"), 8, 5) == std::set<int>{5});
}

TEST_CASE("bruteforce guardrail") {
  CHECK_THROWS_AS(dependence_set_bruteforce(builtin("SERIAL_ADD"), 30, 30), GuardrailError);
}

TEST_CASE("csv schema and formatting") {
  SimResult r;
  r.automaton = "X";
  r.n = 4;
  r.trials = 4;
  r.seed = 9;
  r.model = "uniform";
  r.delays = {1.0, 2.0, 3.0, 10.0};
  r.finalize();
  CHECK(SimResult::csv_header() ==
        "automaton,n,trials,seed,model,mean,p50,p90,p99,max,tail_d2,tail_d4,tail_d8");
  CHECK(r.csv_row() == "X,4,4,9,uniform,4.000000,2.000000,10.000000,10.000000,10.000000,"
                       "0.250000,0.250000,0.000000");
}

TEST_CASE("simulation is deterministic and respects the thread cap") {
  Automaton m = builtin("SERIAL_ADD");
  SimResult a = simulate_average(m, 32, 64, InputModel::Uniform, 1234);
  SimResult b = simulate_average(m, 32, 64, InputModel::Uniform, 1234);
  CHECK(a.delays == b.delays);
  CHECK(a.csv_row() == b.csv_row());
  setenv("FSA_LAB_THREADS", "1", 1);
  SimResult c = simulate_average(m, 32, 64, InputModel::Uniform, 1234);
  unsetenv("FSA_LAB_THREADS");
  CHECK(c.delays == a.delays);
  SimResult d = simulate_average(m, 32, 64, InputModel::Uniform, 1235);
  CHECK(d.delays != a.delays);
}

TEST_CASE("growth fitting recovers synthetic shapes") {
  std::vector<std::pair<double, double>> log_pts, lin_pts, const_pts;
  for (double n : {8.0, 16.0, 32.0, 64.0, 128.0, 256.0}) {
    log_pts.push_back({n, 2.5 * std::log2(n)});
    lin_pts.push_back({n, 0.75 * n});
    const_pts.push_back({n, 7.0});
  }
  CHECK(fit_growth(log_pts).model == GrowthModel::Log);
  CHECK(fit_growth(log_pts).coefficient == doctest::Approx(2.5));
  CHECK(fit_growth(lin_pts).model == GrowthModel::Linear);
  CHECK(fit_growth(const_pts).model == GrowthModel::Constant);
  CHECK_THROWS_AS(fit_growth({{1, 1}, {2, 2}}), ContractError);
}

TEST_CASE("closure and full encodings settle identically on tiny machines") {
  SplitMix64 rng(20);
  for (int rep = 0; rep < 20; ++rep) {
    Automaton m = random_automaton(rng, 2 + (int)rng.below(2), 2, 2 + (int)rng.below(2));
    for (int n = 1; n <= 4; ++n) {
      Circuit cc = synth_standard(m, n, Encoding::Closure);
      Circuit cf = synth_standard(m, n, Encoding::Full);
      Word x(n, 0);
      do {
        Word expect = output_trace(m, x);
        SettleProfile pc = settle(cc, x), pf = settle(cf, x);
        CHECK(settle_delay(cc, pc, expect) == settle_delay(cf, pf, expect));
        // gate-level agreement: every output rises at the same time in both
        for (int step = 1; step <= n; ++step)
          for (int b = 0; b < m.nb(); ++b)
            CHECK(output_rise(cc, pc, step, b) == output_rise(cf, pf, step, b));
        int i = n - 1;
        while (i >= 0 && x[i] == 1) x[i--] = 0;
        if (i < 0) break;
        ++x[i];
      } while (true);
    }
  }
}
