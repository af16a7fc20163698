#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "fsa/errors.hpp"
#include "fsa/zeckendorf.hpp"

using namespace fsa;

namespace {

std::vector<ZeckWord> all_words(int n) {
  std::vector<ZeckWord> out;
  ZeckWord w(n - 1, 0);
  while (true) {
    if (zeck_valid(w)) out.push_back(w);
    int i = (int)w.size() - 1;
    while (i >= 0 && w[i] == 1) w[i--] = 0;
    if (i < 0) break;
    ++w[i];
  }
  return out;
}

}  // namespace

TEST_CASE("encode/decode bijection over each width") {
  for (int n = 2; n <= 12; ++n) {
    auto words = all_words(n);
    CHECK((uint64_t)words.size() == fib(n + 1));  // F_{n+1} values fit in width n
    std::map<uint64_t, int> seen;
    for (const ZeckWord& w : words) {
      uint64_t v = zeck_decode(w);
      CHECK(seen.insert({v, 1}).second);
      CHECK(zeck_encode(v, n) == w);
    }
    CHECK(seen.rbegin()->first == fib(n + 1) - 1);
  }
  CHECK_THROWS_AS(zeck_encode(100, 4), ContractError);
}

TEST_CASE("pipeline transducers have the contracted shape") {
  const Pipeline& pl = zeck_pipeline();
  CHECK(pl.p1.direction == Direction::LeftToRight);
  CHECK(pl.p2.direction == Direction::RightToLeft);
  CHECK(pl.p3.direction == Direction::LeftToRight);
  // alphabets chain
  CHECK(pl.p1.output_alphabet == pl.p2.input_alphabet);
  CHECK(pl.p2.output_alphabet == pl.p3.input_alphabet);
  // final outputs are plain digits
  for (const std::string& l : pl.p3.output_alphabet) CHECK((l == "0" || l == "1"));
  CHECK(pl.p1.input_alphabet == std::vector<std::string>{"0", "1", "2"});
}

TEST_CASE("pipeline addition matches the oracle exhaustively") {
  for (int n = 2; n <= 10; ++n) {
    auto words = all_words(n);
    for (const ZeckWord& a : words)
      for (const ZeckWord& b : words) {
        ZeckWord got = pipeline_add(a, b);
        CHECK(got == zeck_add_oracle(a, b));
      }
  }
}

TEST_CASE("pipeline addition on sampled pairs at moderate width") {
  SplitMix64 rng(606);
  for (int t = 0; t < 300; ++t) {
    ZeckWord a = markov_sample(40, rng), b = markov_sample(40, rng);
    ZeckWord got = pipeline_add(a, b);
    CHECK(zeck_valid(got));
    CHECK(zeck_decode(got) == zeck_decode(a) + zeck_decode(b));
  }
}

TEST_CASE("pipeline addition on sampled pairs past the 64-bit value range") {
  SplitMix64 rng(607);
  for (int t = 0; t < 40; ++t) {
    ZeckWord a = markov_sample(256, rng), b = markov_sample(256, rng);
    ZeckWord got = pipeline_add(a, b);
    CHECK(zeck_valid(got));
    CHECK(got == zeck_add_oracle(a, b));
  }
}

TEST_CASE("reset report is internally consistent and honest") {
  ResetReport rep = check_reset_properties(zeck_pipeline());
  // pass 1 meets its budget: three zeros reset, and z zeros shrink to z-2
  CHECK(rep.pass[0].reset_ok);
  CHECK(rep.pass[0].shrink_ok);
  CHECK(rep.pass[0].measured_sync_len <= 3);
  // each pass's verdict is explained: ok passes collapse within budget onto
  // the start state, failing ones carry a concrete counterexample
  for (const PassCheck& pc : rep.pass) {
    if (pc.reset_ok) {
      CHECK(pc.measured_sync_len <= pc.required_reset_len);
      CHECK(pc.reset_counterexample.empty());
    } else {
      CHECK_FALSE(pc.reset_counterexample.empty());
    }
  }
  CHECK(rep.composite_ok == (rep.pass[0].reset_ok && rep.pass[0].shrink_ok && rep.pass[1].reset_ok &&
                             rep.pass[1].shrink_ok && rep.pass[2].reset_ok && rep.pass[2].shrink_ok));
  CHECK_FALSE(rep.text().empty());
}

TEST_CASE("sampler is exactly uniform at small widths") {
  // every valid word's chain probability is 1/F_{n+1}, as a rational identity
  for (int n = 2; n <= 12; ++n) {
    for (const ZeckWord& w : all_words(n)) {
      auto [num, den] = markov_word_prob(w);
      CHECK(num == 1);
      CHECK(den == fib(n + 1));
    }
  }
}

TEST_CASE("sampler is reproducible and in-range at large widths") {
  ZeckWord a = markov_sample(256, (uint64_t)42);
  ZeckWord b = markov_sample(256, (uint64_t)42);
  CHECK(a == b);
  CHECK(zeck_valid(a));
  CHECK(zeck_width(a) == 256);
  CHECK(markov_sample(256, (uint64_t)43) != a);
}

TEST_CASE("sampled marginals track the closed form") {
  const int n = 64, trials = 20000;
  SplitMix64 rng(9001);
  std::vector<int> ones(n + 1, 0);
  for (int t = 0; t < trials; ++t) {
    ZeckWord w = markov_sample(n, rng);
    for (int k = 2; k <= n; ++k) ones[k] += w[n - k];
  }
  for (int k : {2, 3, 16, 32, 63, 64}) {
    double p = markov_marginal_one(n, k);
    double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs((double)ones[k] / trials - p) < 4 * sigma + 1e-9);
  }
}

TEST_CASE("zero-run probabilities beat the binary rate") {
  // a run of k zeros is more likely than 2^-k: valid words avoid adjacent
  // ones, so zeros are the majority symbol
  for (int n = 6; n <= 16; ++n)
    for (int j = 2; j <= n; ++j)
      for (int k = 1; j + k - 1 <= n; ++k) {
        auto [num, den] = zero_run_prob(n, j, k);
        // exact count check against enumeration
        uint64_t count = 0;
        for (const ZeckWord& w : all_words(n)) {
          bool allz = true;
          for (int i = j; i <= j + k - 1; ++i) allz = allz && w[n - i] == 0;
          if (allz) ++count;
        }
        bool exact = (unsigned __int128)num * fib(n + 1) == (unsigned __int128)den * count;
        CHECK(exact);
        // comparison with the uniform-bits rate
        bool beats = ((unsigned __int128)num << k) >= (unsigned __int128)den;
        CHECK(beats);
      }
}

TEST_CASE("chained delay simulation runs and is deterministic") {
  SimResult a = pipeline_delay_sim(24, 16, 7);
  SimResult b = pipeline_delay_sim(24, 16, 7);
  CHECK(a.delays == b.delays);
  CHECK(a.model == "zeckendorf");
  CHECK(a.n == 24);
  for (double d : a.delays) {
    CHECK(d < kNever);
    CHECK(d > 0);
  }
}
