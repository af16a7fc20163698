#pragma once
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "fsa/circuit.hpp"
#include "fsa/rng.hpp"

namespace fsa {

inline constexpr double kNever = std::numeric_limits<double>::infinity();

struct SettleProfile {
  std::vector<double> rise;  // per gate id; kNever = the signal never rises
};

// Monotone completion semantics: AND rises one unit after its last input
// (plus wire delay), OR after its first. x must have length c.n. init, when
// given, overrides the rise times of all n*na input-gate slots (chained
// pipelines feed a pass's outputs in here).
SettleProfile settle(const Circuit& c, const Word& x, const std::vector<double>* init = nullptr);

// max over steps of the rise time of the expected output letter's gate
double settle_delay(const Circuit& c, const SettleProfile& p, const Word& expected);
// rise time of one output gate (kNever when the letter has no gate)
double output_rise(const Circuit& c, const SettleProfile& p, int m, int b);

int suffix_determination(const Automaton& m, const Word& x, int pos);

enum class InputModel { Uniform };

struct SimResult {
  std::string automaton;
  int n = 0;
  int trials = 0;
  uint64_t seed = 0;
  std::string model;
  std::vector<double> delays;  // per trial, ordered by trial index
  double mean = 0, p50 = 0, p90 = 0, p99 = 0, max = 0;
  double tail_d2 = 0, tail_d4 = 0, tail_d8 = 0;

  void finalize();  // summary from per-trial data
  std::string csv_row() const;
  static std::string csv_header();
};

SimResult simulate_average(const Automaton& m, int n, int trials, InputModel model, uint64_t seed,
                           Encoding enc = Encoding::Closure, double wire_coeff = 1.0);

std::set<int> dependence_set_exact(const Automaton& m, int n, int pos);
std::set<int> dependence_set_bruteforce(const Automaton& m, int n, int pos);

enum class GrowthModel { Constant, Log, Linear };

struct GrowthFit {
  GrowthModel model = GrowthModel::Constant;
  double coefficient = 0;
  double residual[3] = {0, 0, 0};  // Constant, Log, Linear scores
};

GrowthFit fit_growth(const std::vector<std::pair<double, double>>& points);
std::string growth_model_name(GrowthModel m);

int thread_cap();  // FSA_LAB_THREADS, else hardware concurrency

}  // namespace fsa
