#pragma once
#include <optional>
#include <utility>
#include <vector>

#include "fsa/automaton.hpp"

namespace fsa {

struct DefinitenessVerdict {
  bool finite = false;
  int k = -1;  // minimal order when finite (upper bound for the generalized variant)
};

// Pumping certificate. x = f.g.h; for the plain-definiteness witness f and g
// are empty and x lives entirely in h.
struct PumpWitness {
  Word f, g, h;
  int a = -1, b = -1;
  Word s, t, u;
};

struct ClassificationReport {
  int reachable_count = 0;
  bool is_reduced = false;
  bool reduction_changed = false;
  bool ergodic = false;
  int period = 1;
  DefinitenessVerdict definite;
  DefinitenessVerdict generalized_definite;
  bool synchronizable = false;
  std::optional<Word> reset_word;
  std::optional<PumpWitness> non_definite_witness;
  std::optional<PumpWitness> non_gen_definite_witness;
};

// Each reachable state paired with a shortest witness word (|w| <= |Q|).
std::vector<std::pair<int, Word>> reachable_states(const Automaton& m);
std::optional<Word> distinguishing_word(const Automaton& m, int q1, int q2);
Automaton reduce(const Automaton& m);
std::pair<bool, int> is_ergodic(const Automaton& m);
std::optional<Word> mergeable(const Automaton& m, int q1, int q2);
std::optional<Word> is_synchronizable(const Automaton& m);
DefinitenessVerdict definiteness_order(const Automaton& m);
DefinitenessVerdict gen_definiteness_order(const Automaton& m);
PumpWitness witness_non_definite(const Automaton& m);
PumpWitness witness_non_gen_definite(const Automaton& m);

ClassificationReport classify(const Automaton& m);
nlohmann::json report_to_json(const ClassificationReport& r, const Automaton& reduced);

// The reduced machine a report's verdicts refer to.
Automaton report_machine(const Automaton& m);

}  // namespace fsa
