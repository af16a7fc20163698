#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "fsa/classify.hpp"
#include "fsa/rng.hpp"
#include "oracles.hpp"

using namespace fsa;

using oracles::random_automaton;

TEST_CASE("builtin ground truth") {
  ClassificationReport parity = classify(builtin("PARITY"));
  CHECK(parity.ergodic);
  CHECK(parity.period == 1);
  CHECK_FALSE(parity.synchronizable);
  CHECK_FALSE(parity.definite.finite);
  CHECK_FALSE(parity.generalized_definite.finite);
  CHECK(parity.is_reduced);

  ClassificationReport add = classify(builtin("SERIAL_ADD"));
  CHECK(add.ergodic);
  CHECK(add.synchronizable);
  REQUIRE(add.reset_word.has_value());
  CHECK(add.reset_word->size() == 2);
  CHECK_FALSE(add.definite.finite);

  ClassificationReport last1 = classify(builtin("LAST1"));
  CHECK(last1.definite.finite);
  CHECK(last1.definite.k == 1);
  CHECK(last1.synchronizable);

  ClassificationReport fl = classify(builtin("FIRSTLAST"));
  CHECK_FALSE(fl.definite.finite);
  CHECK(fl.generalized_definite.finite);
  CHECK_FALSE(fl.ergodic);
}

TEST_CASE("reset words actually reset") {
  for (const char* name : {"SERIAL_ADD", "LAST1"}) {
    Automaton m = report_machine(builtin(name));
    auto w = is_synchronizable(m);
    REQUIRE(w.has_value());
    int target = run(m, m.initial, *w);
    CHECK(target == m.initial);
    for (int q = 0; q < m.nq(); ++q) CHECK(run(m, q, *w) == m.initial);
  }
  CHECK_FALSE(is_synchronizable(builtin("PARITY")).has_value());
}

TEST_CASE("mergeable and distinguishing words replay") {
  SplitMix64 rng(21);
  for (int rep = 0; rep < 200; ++rep) {
    Automaton m = random_automaton(rng, 2 + (int)rng.below(4), 2, 2);
    for (int p = 0; p < m.nq(); ++p)
      for (int q = p + 1; q < m.nq(); ++q) {
        auto mw = mergeable(m, p, q);
        if (mw) CHECK(run(m, p, *mw) == run(m, q, *mw));
        auto dw = distinguishing_word(m, p, q);
        if (dw) CHECK(m.omega[run(m, p, *dw)] != m.omega[run(m, q, *dw)]);
        // a state pair is either mergeable or forever distinct, possibly both
        // indistinguishable and unmergeable; but never "neither" when nq==2
      }
  }
}

TEST_CASE("reduce is idempotent and preserves behavior") {
  SplitMix64 rng(5);
  for (int rep = 0; rep < 200; ++rep) {
    Automaton m = random_automaton(rng, 1 + (int)rng.below(5), 2, 2);
    Automaton r = reduce(m);
    r.validate();
    Automaton rr = reduce(r);
    CHECK(rr.nq() == r.nq());
    // no remaining indistinguishable pair
    for (int p = 0; p < r.nq(); ++p)
      for (int q = p + 1; q < r.nq(); ++q) CHECK(distinguishing_word(r, p, q).has_value());
    // identical output traces
    for (int t = 0; t < 20; ++t) {
      Word x;
      for (int i = 0; i < 9; ++i) x.push_back((int)rng.below(2));
      CHECK(output_trace(m, x) == output_trace(r, x));
    }
  }
}

TEST_CASE("definiteness agrees with the word-level oracle") {
  SplitMix64 rng(99);
  int finite_seen = 0, infinite_seen = 0;
  for (int rep = 0; rep < 150; ++rep) {
    Automaton m = random_automaton(rng, 2 + (int)rng.below(3), 2, 2);
    DefinitenessVerdict v = definiteness_order(m);
    auto [finite, k] = oracles::definiteness_oracle(m);
    CHECK(v.finite == finite);
    if (finite) {
      ++finite_seen;
      CHECK(v.k == k);
      // no counterexample within the enumeration horizon either
      CHECK_FALSE(oracles::word_violation(m, k, std::min(10, k + 4)));
      if (k > 0) CHECK(oracles::word_violation(m, k - 1, 10));
    } else {
      ++infinite_seen;
    }
  }
  CHECK(finite_seen > 0);
  CHECK(infinite_seen > 0);
}

TEST_CASE("generalized definiteness bounds and consistency") {
  // definite implies generalized definite with the same or smaller order
  SplitMix64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    Automaton m = random_automaton(rng, 2 + (int)rng.below(3), 2, 2);
    DefinitenessVerdict d = definiteness_order(m);
    DefinitenessVerdict g = gen_definiteness_order(m);
    if (d.finite) {
      CHECK(g.finite);
      CHECK(g.k <= d.k);
    }
    if (!g.finite) CHECK_FALSE(d.finite);
  }
  DefinitenessVerdict fl = gen_definiteness_order(report_machine(builtin("FIRSTLAST")));
  CHECK(fl.finite);
}

TEST_CASE("non-definiteness witness replays") {
  for (const char* name : {"PARITY", "SERIAL_ADD", "FIRSTLAST"}) {
    Automaton m = report_machine(builtin(name));
    PumpWitness w = witness_non_definite(m);
    // h {a,b} s t^j u splits outputs for every pump count j: the words share
    // arbitrarily long suffixes yet differ, so no finite order suffices
    for (int j = 0; j < 3; ++j) {
      Word xa = w.h, xb = w.h;
      xa.push_back(w.a);
      xb.push_back(w.b);
      for (Word* x : {&xa, &xb}) {
        x->insert(x->end(), w.s.begin(), w.s.end());
        for (int r = 0; r < j; ++r) x->insert(x->end(), w.t.begin(), w.t.end());
        x->insert(x->end(), w.u.begin(), w.u.end());
      }
      CHECK(m.omega[run(m, m.initial, xa)] != m.omega[run(m, m.initial, xb)]);
    }
  }
}

TEST_CASE("non-generalized-definiteness witness replays") {
  for (const char* name : {"PARITY", "SERIAL_ADD"}) {
    Automaton m = report_machine(builtin(name));
    PumpWitness w = witness_non_gen_definite(m);
    // cycle identity: pumping g after f never changes the state
    CHECK(run(m, m.initial, w.f) == run(m, run(m, m.initial, w.f), w.g));
    // equal-length word families f g v^l h {a,b} s t w^(m-l) u must fall into
    // two fixed output classes split by the a/b letter, for every balance l
    auto rep_word = [](const Word& x, int times) {
      Word out;
      for (int r = 0; r < times; ++r) out.insert(out.end(), x.begin(), x.end());
      return out;
    };
    Word v = rep_word(w.g, (int)w.t.size());
    Word ww = rep_word(w.t, (int)w.g.size());
    int out_a = -1, out_b = -1;
    for (int mm = 0; mm <= 2; ++mm)
      for (int l = 0; l <= mm; ++l) {
        auto build = [&](int letter) {
          Word x = w.f;
          x.insert(x.end(), w.g.begin(), w.g.end());
          Word vl = rep_word(v, l);
          x.insert(x.end(), vl.begin(), vl.end());
          x.insert(x.end(), w.h.begin(), w.h.end());
          x.push_back(letter);
          x.insert(x.end(), w.s.begin(), w.s.end());
          x.insert(x.end(), w.t.begin(), w.t.end());
          Word wr = rep_word(ww, mm - l);
          x.insert(x.end(), wr.begin(), wr.end());
          x.insert(x.end(), w.u.begin(), w.u.end());
          return x;
        };
        Word ca = build(w.a), cb = build(w.b);
        REQUIRE(ca.size() == cb.size());
        int oa = m.omega[run(m, m.initial, ca)], ob = m.omega[run(m, m.initial, cb)];
        if (out_a == -1) {
          out_a = oa;
          out_b = ob;
        }
        CHECK(oa == out_a);
        CHECK(ob == out_b);
        CHECK(oa != ob);
      }
  }
}

TEST_CASE("report json carries the verdicts") {
  Automaton m = builtin("SERIAL_ADD");
  nlohmann::json j = report_to_json(classify(m), report_machine(m));
  CHECK(j.at("synchronizable").get<bool>());
  CHECK(j.at("ergodic").get<bool>());
  CHECK(j.at("definite").at("order").get<std::string>() == "infinite");
  CHECK(j.contains("reset_word"));
}
