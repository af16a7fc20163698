#include "fsa/automaton.hpp"

#include <algorithm>
#include <fstream>

namespace fsa {

using nlohmann::json;

namespace {

int index_of(const std::vector<std::string>& v, const std::string& x, const char* what) {
  auto it = std::find(v.begin(), v.end(), x);
  if (it == v.end()) throw ParseError(std::string(what) + " not declared: " + x);
  return (int)(it - v.begin());
}

void check_unique_nonempty(const std::vector<std::string>& v, const char* what) {
  if (v.empty()) throw ContractError(std::string(what) + " must be non-empty");
  auto s = v;
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end())
    throw ContractError(std::string(what) + " has duplicate entries");
}

}  // namespace

int Automaton::letter_index(const std::string& l) const { return index_of(input_alphabet, l, "input letter"); }
int Automaton::state_index(const std::string& s) const { return index_of(states, s, "state"); }
int Transducer::letter_index(const std::string& l) const { return index_of(input_alphabet, l, "input letter"); }

void Automaton::validate() const {
  check_unique_nonempty(input_alphabet, "input alphabet");
  check_unique_nonempty(output_alphabet, "output alphabet");
  check_unique_nonempty(states, "state set");
  if (initial < 0 || initial >= nq()) throw ContractError("initial state out of range");
  if ((int)delta.size() != nq() || (int)omega.size() != nq())
    throw ContractError("delta/omega must be total over the state set");
  for (int q = 0; q < nq(); ++q) {
    if ((int)delta[q].size() != na()) throw ContractError("delta must be total over the alphabet");
    for (int a = 0; a < na(); ++a)
      if (delta[q][a] < 0 || delta[q][a] >= nq()) throw ContractError("delta target out of range");
    if (omega[q] < 0 || omega[q] >= nb()) throw ContractError("omega value out of range");
  }
}

void Transducer::validate() const {
  check_unique_nonempty(input_alphabet, "input alphabet");
  check_unique_nonempty(output_alphabet, "output alphabet");
  check_unique_nonempty(states, "state set");
  if (initial < 0 || initial >= nq()) throw ContractError("initial state out of range");
  if ((int)delta.size() != nq() || (int)lambda.size() != nq())
    throw ContractError("delta/lambda must be total over the state set");
  for (int q = 0; q < nq(); ++q) {
    if ((int)delta[q].size() != na() || (int)lambda[q].size() != na())
      throw ContractError("delta/lambda must be total over the alphabet");
    for (int a = 0; a < na(); ++a) {
      if (delta[q][a] < 0 || delta[q][a] >= nq()) throw ContractError("delta target out of range");
      if (lambda[q][a] < 0 || lambda[q][a] >= nb()) throw ContractError("lambda value out of range");
    }
  }
}

int run(const Automaton& m, int q, const Word& x) {
  for (int a : x) {
    if (a < 0 || a >= m.na()) throw ParseError("letter index out of alphabet range");
    q = m.delta[q][a];
  }
  return q;
}

Word output_trace(const Automaton& m, const Word& x) {
  Word out;
  out.reserve(x.size());
  int q = m.initial;
  for (int a : x) {
    if (a < 0 || a >= m.na()) throw ParseError("letter index out of alphabet range");
    q = m.delta[q][a];
    out.push_back(m.omega[q]);
  }
  return out;
}

Word run_transducer(const Transducer& t, const Word& x) {
  Word in = x;
  if (t.direction == Direction::RightToLeft) std::reverse(in.begin(), in.end());
  Word out;
  out.reserve(in.size());
  int q = t.initial;
  for (int a : in) {
    if (a < 0 || a >= t.na()) throw ParseError("letter index out of alphabet range");
    out.push_back(t.lambda[q][a]);
    q = t.delta[q][a];
  }
  if (t.direction == Direction::RightToLeft) std::reverse(out.begin(), out.end());
  return out;
}

Transducer to_transducer(const Automaton& m) {
  Transducer t;
  t.input_alphabet = m.input_alphabet;
  t.output_alphabet = m.output_alphabet;
  t.states = m.states;
  t.initial = m.initial;
  t.delta = m.delta;
  t.lambda.assign(m.nq(), std::vector<int>(m.na(), 0));
  for (int q = 0; q < m.nq(); ++q)
    for (int a = 0; a < m.na(); ++a) t.lambda[q][a] = m.omega[m.delta[q][a]];
  t.direction = Direction::LeftToRight;
  return t;
}

bool is_builtin(const std::string& name) {
  return name == "PARITY" || name == "SERIAL_ADD" || name == "LAST1" || name == "FIRSTLAST";
}

Automaton builtin(const std::string& name) {
  Automaton m;
  if (name == "PARITY") {
    m.input_alphabet = {"0", "1"};
    m.output_alphabet = {"0", "1"};
    m.states = {"E", "O"};
    m.initial = 0;
    m.delta = {{0, 1}, {1, 0}};
    m.omega = {0, 1};
  } else if (name == "SERIAL_ADD") {
    // letters are addend-bit pairs "ab", LSB first; states (carry, sum)
    m.input_alphabet = {"00", "01", "10", "11"};
    m.output_alphabet = {"0", "1"};
    m.states = {"c0s0", "c0s1", "c1s0", "c1s1"};
    m.initial = 0;
    m.delta.assign(4, std::vector<int>(4, 0));
    m.omega = {0, 1, 0, 1};
    for (int q = 0; q < 4; ++q) {
      int c = q / 2;
      for (int a = 0; a < 4; ++a) {
        int t = (a / 2) + (a % 2) + c;
        m.delta[q][a] = (t / 2) * 2 + (t % 2);
      }
    }
  } else if (name == "LAST1") {
    m.input_alphabet = {"0", "1"};
    m.output_alphabet = {"0", "1"};
    m.states = {"z", "o"};
    m.initial = 0;
    m.delta = {{0, 1}, {0, 1}};
    m.omega = {0, 1};
  } else if (name == "FIRSTLAST") {
    m.input_alphabet = {"0", "1"};
    m.output_alphabet = {"0", "1"};
    m.states = {"I", "F0", "Fz", "Fo"};
    m.initial = 0;
    m.delta = {{1, 3}, {1, 1}, {2, 3}, {2, 3}};
    m.omega = {0, 0, 0, 1};
  } else {
    throw ParseError("unknown builtin automaton: " + name);
  }
  m.validate();
  return m;
}

Word parse_word(const std::vector<std::string>& alphabet, const std::vector<std::string>& letters) {
  Word w;
  w.reserve(letters.size());
  for (const auto& l : letters) w.push_back(index_of(alphabet, l, "letter"));
  return w;
}

std::vector<std::string> word_names(const std::vector<std::string>& alphabet, const Word& w) {
  std::vector<std::string> out;
  out.reserve(w.size());
  for (int a : w) out.push_back(alphabet.at(a));
  return out;
}

nlohmann::json automaton_to_json(const Automaton& m) {
  json d = json::object(), o = json::object();
  for (int q = 0; q < m.nq(); ++q) {
    json row = json::object();
    for (int a = 0; a < m.na(); ++a) row[m.input_alphabet[a]] = m.states[m.delta[q][a]];
    d[m.states[q]] = row;
    o[m.states[q]] = m.output_alphabet[m.omega[q]];
  }
  return json{{"type", "moore"},
              {"input_alphabet", m.input_alphabet},
              {"output_alphabet", m.output_alphabet},
              {"states", m.states},
              {"initial", m.states[m.initial]},
              {"delta", d},
              {"omega", o}};
}

Automaton automaton_from_json(const json& j) {
  Automaton m;
  try {
    m.input_alphabet = j.at("input_alphabet").get<std::vector<std::string>>();
    m.output_alphabet = j.at("output_alphabet").get<std::vector<std::string>>();
    m.states = j.at("states").get<std::vector<std::string>>();
    m.initial = index_of(m.states, j.at("initial").get<std::string>(), "initial state");
    m.delta.assign(m.states.size(), {});
    m.omega.assign(m.states.size(), 0);
    for (size_t q = 0; q < m.states.size(); ++q) {
      const json& row = j.at("delta").at(m.states[q]);
      for (const auto& a : m.input_alphabet)
        m.delta[q].push_back(index_of(m.states, row.at(a).get<std::string>(), "delta target"));
      m.omega[q] = index_of(m.output_alphabet, j.at("omega").at(m.states[q]).get<std::string>(), "omega value");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed automaton file: ") + e.what());
  }
  m.validate();
  return m;
}

nlohmann::json transducer_to_json(const Transducer& t) {
  json d = json::object(), l = json::object();
  for (int q = 0; q < t.nq(); ++q) {
    json drow = json::object(), lrow = json::object();
    for (int a = 0; a < t.na(); ++a) {
      drow[t.input_alphabet[a]] = t.states[t.delta[q][a]];
      lrow[t.input_alphabet[a]] = t.output_alphabet[t.lambda[q][a]];
    }
    d[t.states[q]] = drow;
    l[t.states[q]] = lrow;
  }
  return json{{"type", "mealy"},
              {"direction", t.direction == Direction::RightToLeft ? "rtl" : "ltr"},
              {"input_alphabet", t.input_alphabet},
              {"output_alphabet", t.output_alphabet},
              {"states", t.states},
              {"initial", t.states[t.initial]},
              {"delta", d},
              {"lambda", l}};
}

Transducer transducer_from_json(const json& j) {
  Transducer t;
  try {
    t.input_alphabet = j.at("input_alphabet").get<std::vector<std::string>>();
    t.output_alphabet = j.at("output_alphabet").get<std::vector<std::string>>();
    t.states = j.at("states").get<std::vector<std::string>>();
    t.initial = index_of(t.states, j.at("initial").get<std::string>(), "initial state");
    std::string dir = j.at("direction").get<std::string>();
    if (dir == "ltr")
      t.direction = Direction::LeftToRight;
    else if (dir == "rtl")
      t.direction = Direction::RightToLeft;
    else
      throw ParseError("direction must be ltr or rtl");
    t.delta.assign(t.states.size(), {});
    t.lambda.assign(t.states.size(), {});
    for (size_t q = 0; q < t.states.size(); ++q) {
      const json& drow = j.at("delta").at(t.states[q]);
      const json& lrow = j.at("lambda").at(t.states[q]);
      for (const auto& a : t.input_alphabet) {
        t.delta[q].push_back(index_of(t.states, drow.at(a).get<std::string>(), "delta target"));
        t.lambda[q].push_back(index_of(t.output_alphabet, lrow.at(a).get<std::string>(), "lambda value"));
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed transducer file: ") + e.what());
  }
  t.validate();
  return t;
}

Machine machine_from_json(const json& j) {
  Machine m;
  std::string type;
  try {
    type = j.at("type").get<std::string>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("missing machine type: ") + e.what());
  }
  if (type == "moore") {
    m.is_moore = true;
    m.moore = automaton_from_json(j);
  } else if (type == "mealy") {
    m.is_moore = false;
    m.mealy = transducer_from_json(j);
  } else {
    throw ParseError("machine type must be moore or mealy, got: " + type);
  }
  return m;
}

Machine load_machine(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open file: " + path);
  json j;
  try {
    f >> j;
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON in ") + path + ": " + e.what());
  }
  return machine_from_json(j);
}

}  // namespace fsa
