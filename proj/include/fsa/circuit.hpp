#pragma once
#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "fsa/automaton.hpp"

namespace fsa {

enum class GateKind { Input, Const1, And, Or, Not, Output };

struct Gate {
  int id = -1;
  GateKind kind = GateKind::Input;
  int fan_in[2] = {-1, -1};
  int nin = 0;
  int position = 0;
  std::string tag;
};

// Positioned fan-in-2 DAG. Gate ids are assigned in construction order, which
// is topological, so serialization is byte-stable.
struct Circuit {
  std::vector<Gate> gates;
  int n = 0;   // steps simulated
  int na = 0;  // input letters per step
  int nb = 0;  // output letters per step
  double wire_coeff = 1.0;
  std::vector<int> input_gate;   // (m-1)*na + a -> gate id
  std::vector<int> output_gate;  // (m-1)*nb + b -> gate id (-1: letter never produced)

  int in_id(int m, int a) const { return input_gate[(m - 1) * na + a]; }
  int out_id(int m, int b) const { return output_gate[(m - 1) * nb + b]; }
  void validate() const;
};

enum class Encoding { Closure, Full };

inline constexpr int kFamilyCap = 4096;

// Knowledge subsets as bitmasks over the state indices (|Q| <= 62).
std::vector<uint64_t> knowledge_closure(const Automaton& m);
std::vector<uint64_t> full_family(const Automaton& m);

using StepPos = std::function<int(int)>;  // step (1..n) -> line position

Circuit synth_standard(const Automaton& m, int n, Encoding enc = Encoding::Closure,
                       double wire_coeff = 1.0, const StepPos& pos = {});
// Mealy variant: the output letter at step m settles once the incoming
// knowledge set and the step's input letter force lambda.
Circuit synth_standard_transducer(const Transducer& t, int n, Encoding enc = Encoding::Closure,
                                  double wire_coeff = 1.0, const StepPos& pos = {});
Circuit synth_prefix(const Automaton& m, int n, double wire_coeff = 1.0);

int logical_depth(const Circuit& c);
double physical_depth(const Circuit& c);
std::pair<long long, double> cost(const Circuit& c);  // (gate count, wire length)
int max_gates_per_position(const Circuit& c);

// input steps in the combined fan-in cone of step m's output gates
std::set<int> dependence_cone_steps(const Circuit& c, int m);

nlohmann::json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const nlohmann::json& j);

}  // namespace fsa
