#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "fsa/circuit.hpp"
#include "fsa/delay.hpp"
#include "fsa/errors.hpp"
#include "fsa/rng.hpp"

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

// under monotone settling, the correct output letter must rise at every step
// and no wrong letter may ever rise
void check_functional(const Automaton& m, const Circuit& c, const Word& x) {
  SettleProfile p = settle(c, x);
  Word expect = output_trace(m, x);
  for (int step = 1; step <= c.n; ++step) {
    double good = output_rise(c, p, step, expect[step - 1]);
    CHECK(good < kNever);
    for (int b = 0; b < c.nb; ++b)
      if (b != expect[step - 1]) CHECK(output_rise(c, p, step, b) == kNever);
  }
}

}  // namespace

TEST_CASE("knowledge families") {
  std::vector<uint64_t> parity = knowledge_closure(builtin("PARITY"));
  // singletons only: every letter preserves full uncertainty
  CHECK(parity == std::vector<uint64_t>{1, 2});
  std::vector<uint64_t> last1 = knowledge_closure(builtin("LAST1"));
  CHECK(last1 == std::vector<uint64_t>{1, 2});
  std::vector<uint64_t> full = full_family(builtin("PARITY"));
  CHECK(full.size() == 2);  // proper non-empty subsets of a 2-state set

  Automaton big;
  for (int q = 0; q < 63; ++q) big.states.push_back("q" + std::to_string(q));
  big.input_alphabet = {"0"};
  big.output_alphabet = {"0"};
  big.initial = 0;
  big.delta.assign(63, {0});
  big.omega.assign(63, 0);
  CHECK_THROWS_AS(knowledge_closure(big), GuardrailError);
}

TEST_CASE("standard circuits compute the builtins") {
  SplitMix64 rng(31);
  for (const char* name : {"PARITY", "SERIAL_ADD", "LAST1", "FIRSTLAST"}) {
    Automaton m = builtin(name);
    for (Encoding enc : {Encoding::Closure, Encoding::Full}) {
      Circuit c = synth_standard(m, 9, enc);
      c.validate();
      for (int rep = 0; rep < 25; ++rep) {
        Word x;
        for (int i = 0; i < 9; ++i) x.push_back((int)rng.below(m.na()));
        check_functional(m, c, x);
      }
    }
  }
}

TEST_CASE("standard circuits compute random machines") {
  SplitMix64 rng(77);
  for (int rep = 0; rep < 40; ++rep) {
    Automaton m = random_automaton(rng, 2 + (int)rng.below(3), 2, 2);
    Circuit c = synth_standard(m, 6, Encoding::Full);
    Word x(6, 0);
    do {
      check_functional(m, c, x);
      int i = 5;
      while (i >= 0 && x[i] == 1) x[i--] = 0;
      if (i < 0) break;
      ++x[i];
    } while (true);
  }
}

TEST_CASE("transducer circuits settle to the mealy outputs") {
  SplitMix64 rng(13);
  Transducer t = to_transducer(builtin("SERIAL_ADD"));
  Circuit c = synth_standard_transducer(t, 8);
  c.validate();
  for (int rep = 0; rep < 40; ++rep) {
    Word x;
    for (int i = 0; i < 8; ++i) x.push_back((int)rng.below(t.na()));
    Word expect = run_transducer(t, x);
    SettleProfile p = settle(c, x);
    for (int step = 1; step <= 8; ++step) {
      CHECK(output_rise(c, p, step, expect[step - 1]) < kNever);
      for (int b = 0; b < c.nb; ++b)
        if (b != expect[step - 1]) CHECK(output_rise(c, p, step, b) == kNever);
    }
  }
}

TEST_CASE("prefix circuits match the standard semantics exhaustively") {
  for (const char* name : {"PARITY", "LAST1", "FIRSTLAST"}) {
    Automaton m = builtin(name);
    Circuit c = synth_prefix(m, 5);
    c.validate();
    Word x(5, 0);
    do {
      check_functional(m, c, x);
      int i = 4;
      while (i >= 0 && x[i] == 1) x[i--] = 0;
      if (i < 0) break;
      ++x[i];
    } while (true);
  }
}

TEST_CASE("prefix depth grows logarithmically") {
  Automaton m = builtin("SERIAL_ADD");
  int d64 = logical_depth(synth_prefix(m, 64));
  int d128 = logical_depth(synth_prefix(m, 128));
  int d256 = logical_depth(synth_prefix(m, 256));
  CHECK(d128 - d64 <= 8);  // one doubling adds one combine layer
  CHECK(d256 - d128 <= 8);
  CHECK(d256 < 120);
}

TEST_CASE("physical depth separates parity from last-letter") {
  CHECK(physical_depth(synth_standard(builtin("PARITY"), 64)) >= 63);
  double l16 = physical_depth(synth_standard(builtin("LAST1"), 16));
  double l64 = physical_depth(synth_standard(builtin("LAST1"), 64));
  double l256 = physical_depth(synth_standard(builtin("LAST1"), 256));
  CHECK(l16 == l64);
  CHECK(l64 == l256);
}

TEST_CASE("dependence cone of the standard circuit") {
  Circuit c = synth_standard(builtin("PARITY"), 8);
  std::set<int> cone = dependence_cone_steps(c, 8);
  CHECK(cone == std::set<int>{1, 2, 3, 4, 5, 6, 7, 8});
  Circuit l = synth_standard(builtin("LAST1"), 8);
  std::set<int> lcone = dependence_cone_steps(l, 8);
  CHECK(lcone.count(8) == 1);
  CHECK(lcone.size() <= 2);
}

TEST_CASE("serialization is byte-stable and round-trips") {
  Circuit c = synth_standard(builtin("SERIAL_ADD"), 7);
  std::string s1 = circuit_to_json(c).dump();
  std::string s2 = circuit_to_json(synth_standard(builtin("SERIAL_ADD"), 7)).dump();
  CHECK(s1 == s2);
  Circuit back = circuit_from_json(circuit_to_json(c));
  back.validate();
  CHECK(circuit_to_json(back).dump() == s1);
  CHECK(back.gates.size() == c.gates.size());
  CHECK(logical_depth(back) == logical_depth(c));
  CHECK(physical_depth(back) == physical_depth(c));
}

TEST_CASE("validate rejects malformed gate graphs") {
  Circuit c = synth_standard(builtin("PARITY"), 4);
  Circuit bad = c;
  // forward edge breaks construction-order topology
  for (Gate& g : bad.gates)
    if (g.kind == GateKind::And || g.kind == GateKind::Or) {
      g.fan_in[0] = (int)bad.gates.size() - 1;
      break;
    }
  CHECK_THROWS_AS(bad.validate(), ContractError);
}

TEST_CASE("custom step positions shift the layout") {
  StepPos rev = [](int m) { return 10 - m; };
  Circuit c = synth_standard(builtin("PARITY"), 6, Encoding::Closure, 1.0, rev);
  c.validate();
  CHECK(c.gates[c.in_id(1, 0)].position == 9);
  CHECK(c.gates[c.in_id(6, 0)].position == 4);
  SplitMix64 rng(5);
  Word x;
  for (int i = 0; i < 6; ++i) x.push_back((int)rng.below(2));
  check_functional(builtin("PARITY"), c, x);
}
