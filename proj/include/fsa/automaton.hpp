#pragma once
#include <string>
#include <vector>

#include "fsa/errors.hpp"
#include "json.hpp"

namespace fsa {

// Letters and states are dense integer indices internally; the original names
// are kept for I/O and reports. A Word is a sequence of letter indices over
// whichever alphabet the context declares.
using Word = std::vector<int>;

struct Automaton {
  std::vector<std::string> input_alphabet;
  std::vector<std::string> output_alphabet;
  std::vector<std::string> states;
  int initial = 0;
  std::vector<std::vector<int>> delta;  // [state][letter] -> state
  std::vector<int> omega;               // [state] -> output letter

  int nq() const { return (int)states.size(); }
  int na() const { return (int)input_alphabet.size(); }
  int nb() const { return (int)output_alphabet.size(); }

  int letter_index(const std::string& l) const;
  int state_index(const std::string& s) const;
  void validate() const;
};

enum class Direction { LeftToRight, RightToLeft };

struct Transducer {
  std::vector<std::string> input_alphabet;
  std::vector<std::string> output_alphabet;
  std::vector<std::string> states;
  int initial = 0;
  std::vector<std::vector<int>> delta;   // [state][letter] -> state
  std::vector<std::vector<int>> lambda;  // [state][letter] -> output letter
  Direction direction = Direction::LeftToRight;

  int nq() const { return (int)states.size(); }
  int na() const { return (int)input_alphabet.size(); }
  int nb() const { return (int)output_alphabet.size(); }

  int letter_index(const std::string& l) const;
  void validate() const;
};

int run(const Automaton& m, int q, const Word& x);
Word output_trace(const Automaton& m, const Word& x);
Word run_transducer(const Transducer& t, const Word& x);

/// Moore machine viewed as a (left-to-right) transducer: lambda(q,a) = omega(delta(q,a)).
Transducer to_transducer(const Automaton& m);

// Catalog: PARITY, SERIAL_ADD, LAST1, FIRSTLAST.
Automaton builtin(const std::string& name);
bool is_builtin(const std::string& name);

Word parse_word(const std::vector<std::string>& alphabet, const std::vector<std::string>& letters);
std::vector<std::string> word_names(const std::vector<std::string>& alphabet, const Word& w);

nlohmann::json automaton_to_json(const Automaton& m);
Automaton automaton_from_json(const nlohmann::json& j);
nlohmann::json transducer_to_json(const Transducer& t);
Transducer transducer_from_json(const nlohmann::json& j);

// Dispatch on the file's "type" field ("moore" -> automaton, "mealy" -> transducer).
struct Machine {
  bool is_moore = true;
  Automaton moore;
  Transducer mealy;
};
Machine machine_from_json(const nlohmann::json& j);
Machine load_machine(const std::string& path);

}  // namespace fsa
