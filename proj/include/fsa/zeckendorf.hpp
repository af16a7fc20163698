#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "fsa/automaton.hpp"
#include "fsa/delay.hpp"
#include "fsa/rng.hpp"

namespace fsa {

// Digit words are most-significant-first; a width-n word holds digits
// a_n..a_2 (n-1 of them), digit a_i weighing fib(i). Values cover
// [0, fib(n+1)-1].
using ZeckWord = std::vector<int>;

uint64_t fib(int i);  // F_0 = 0, F_1 = 1; i <= 93

ZeckWord zeck_encode(uint64_t value, int n);
uint64_t zeck_decode(const ZeckWord& w);
bool zeck_valid(const ZeckWord& w);
int zeck_width(const ZeckWord& w);  // n for a stored word
std::string zeck_to_string(const ZeckWord& w);

// reference adder: decode, add, encode at width n+2
ZeckWord zeck_add_oracle(const ZeckWord& a, const ZeckWord& b);

// Three alternating-direction passes; output alphabet of pass k = input
// alphabet of pass k+1. Directions are recorded in each transducer.
struct Pipeline {
  Transducer p1, p2, p3;
};

const Pipeline& zeck_pipeline();
ZeckWord pipeline_add(const ZeckWord& a, const ZeckWord& b);

struct PassCheck {
  std::string name;
  int required_reset_len = 0;
  bool reset_ok = false;
  int measured_sync_len = -1;  // -1: not synchronized within the probe horizon
  std::string reset_counterexample;
  bool shrink_ok = false;
  std::string shrink_counterexample;
};

struct ResetReport {
  PassCheck pass[3];
  bool composite_ok = false;
  bool all_ok = false;
  std::string text() const;
};

ResetReport check_reset_properties(const Pipeline& pl);

ZeckWord markov_sample(int n, SplitMix64& rng);
ZeckWord markov_sample(int n, uint64_t seed);

// exact chain probability of a full word, as a reduced fraction
std::pair<uint64_t, uint64_t> markov_word_prob(const ZeckWord& w);
// Pr[a_k = 1] = F_{k-1} F_{n-k+1} / F_{n+1}
double markov_marginal_one(int n, int k);
// exact probability that digits a_j..a_{j+k-1} are all zero, as a fraction
std::pair<uint64_t, uint64_t> zero_run_prob(int n, int j, int k);

SimResult pipeline_delay_sim(int n, int trials, uint64_t seed);

}  // namespace fsa
