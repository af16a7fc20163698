#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fsa/classify.hpp"
#include "fsa/delay.hpp"
#include "fsa/errors.hpp"
#include "fsa/zeckendorf.hpp"
#include "json.hpp"

using namespace fsa;

namespace {

Automaton resolve_automaton(const std::string& source) {
  if (is_builtin(source)) return builtin(source);
  Machine m = load_machine(source);
  if (!m.is_moore) throw ContractError("command requires a state-output automaton, got a transducer");
  return m.moore;
}

void write_out(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ContractError("cannot open output file: " + path);
  f << body;
}

Encoding parse_encoding(const std::string& s) {
  if (s == "closure") return Encoding::Closure;
  if (s == "full") return Encoding::Full;
  throw ContractError("unknown encoding: " + s);
}

ZeckWord parse_zeck_arg(const std::string& s, int width, bool digits) {
  // a decimal value by default; a 0/1 digit word with --digits
  if (digits) {
    ZeckWord w;
    for (char c : s) {
      if (c != '0' && c != '1') throw ParseError("digit word may only contain 0 and 1: " + s);
      w.push_back(c - '0');
    }
    if (!zeck_valid(w)) throw ParseError("digit string has adjacent ones: " + s);
    return w;
  }
  uint64_t v;
  try {
    v = std::stoull(s);
  } catch (const std::exception&) {
    throw ParseError("cannot parse operand: " + s);
  }
  int n = width;
  if (n == 0) {
    n = 2;
    while (fib(n + 1) - 1 < v) ++n;
  }
  return zeck_encode(v, n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite automata, simulating circuits, and delay experiments"};
  app.require_subcommand(1);

  std::string source, out_path, model = "uniform", encoding = "closure", style = "standard";
  std::string witness_property = "definite", delay_mode = "logical";
  std::vector<int> n_list;
  int n = 0, pos = 0, trials = 1000;
  uint64_t seed = 1;
  double wire_coeff = 1.0;

  auto* classify_cmd = app.add_subcommand("classify", "full classification report");
  classify_cmd->add_option("source", source, "builtin name or machine file")->required();
  classify_cmd->add_option("--out", out_path);

  auto* sweep_cmd = app.add_subcommand("sweep", "average-delay sweep over n with growth fit");
  sweep_cmd->add_option("source", source)->required();
  sweep_cmd->add_option("--n-list", n_list, "strictly increasing step counts")->required();
  sweep_cmd->add_option("--trials", trials);
  sweep_cmd->add_option("--seed", seed);
  sweep_cmd->add_option("--model", model, "uniform|zeckendorf");
  sweep_cmd->add_option("--wire-coeff", wire_coeff);
  sweep_cmd->add_option("--encoding", encoding, "closure|full");
  sweep_cmd->add_option("--out", out_path);

  auto* depend_cmd = app.add_subcommand("depend", "exact dependence set of one output position");
  depend_cmd->add_option("source", source)->required();
  depend_cmd->add_option("n", n)->required();
  depend_cmd->add_option("m", pos)->required();

  auto* witness_cmd = app.add_subcommand("witness", "pumping witness for a failed property");
  witness_cmd->add_option("source", source)->required();
  witness_cmd->add_option("property", witness_property, "definite|generalized-definite");

  auto* synth_cmd = app.add_subcommand("synth", "emit a simulating circuit as JSON");
  synth_cmd->add_option("source", source)->required();
  synth_cmd->add_option("n", n)->required();
  synth_cmd->add_option("--style", style, "standard|prefix");
  synth_cmd->add_option("--encoding", encoding, "closure|full");
  synth_cmd->add_option("--wire-coeff", wire_coeff);
  synth_cmd->add_option("--out", out_path);

  auto* delay_cmd = app.add_subcommand("delay", "depth of a circuit file");
  delay_cmd->add_option("source", source, "circuit JSON file")->required();
  delay_cmd->add_option("--mode", delay_mode, "logical|physical");

  auto* zeck_cmd = app.add_subcommand("zeck", "Zeckendorf pipeline experiments");
  zeck_cmd->require_subcommand(1);
  std::string op_a, op_b;
  int zwidth = 0, count = 1;
  auto* zadd = zeck_cmd->add_subcommand("add", "add two values through the three-pass pipeline");
  zadd->add_option("a", op_a)->required();
  zadd->add_option("b", op_b)->required();
  zadd->add_option("--width", zwidth, "operand width (digits + 1); inferred when omitted");
  bool zdigits = false;
  zadd->add_flag("--digits", zdigits, "operands are 0/1 digit words, most significant first");
  auto* zsample = zeck_cmd->add_subcommand("sample", "draw uniform digit words");
  zsample->add_option("--n", n)->required();
  zsample->add_option("--count", count);
  zsample->add_option("--seed", seed);
  auto* zsim = zeck_cmd->add_subcommand("pipeline-sim", "settle-delay sweep of the chained passes");
  zsim->add_option("--n-list", n_list)->required();
  zsim->add_option("--trials", trials);
  zsim->add_option("--seed", seed);
  zsim->add_option("--out", out_path);
  auto* zcheck = zeck_cmd->add_subcommand("check-pipeline", "reset/shrink property report");

  try {
    app.parse(argc, argv);

    if (*classify_cmd) {
      Automaton m = resolve_automaton(source);
      ClassificationReport r = classify(m);
      nlohmann::json j = report_to_json(r, report_machine(m));
      write_out(out_path, j.dump(2) + "\n");
    } else if (*sweep_cmd) {
      if (trials < 1) throw ContractError("trials must be >= 1");
      for (size_t i = 1; i < n_list.size(); ++i)
        if (n_list[i] <= n_list[i - 1]) throw ContractError("--n-list must be strictly increasing");
      Automaton m = resolve_automaton(source);
      if (model != "uniform") throw ContractError("sweep supports --model uniform; use zeck pipeline-sim");
      std::ostringstream os;
      os << SimResult::csv_header() << "\n";
      std::vector<std::pair<double, double>> pts;
      for (int ni : n_list) {
        SimResult r = simulate_average(m, ni, trials, InputModel::Uniform, seed,
                                       parse_encoding(encoding), wire_coeff);
        r.automaton = source;
        os << r.csv_row() << "\n";
        pts.push_back({(double)ni, r.mean});
      }
      GrowthFit fit = fit_growth(pts);
      os << "# fit," << growth_model_name(fit.model) << "," << fit.coefficient << "\n";
      write_out(out_path, os.str());
    } else if (*depend_cmd) {
      Automaton m = resolve_automaton(source);
      std::set<int> dep = dependence_set_exact(m, n, pos);
      std::string s = "{";
      for (int i : dep) s += (s.size() > 1 ? "," : "") + std::to_string(i);
      std::cout << s << "}\n";
    } else if (*witness_cmd) {
      Automaton m = report_machine(resolve_automaton(source));
      PumpWitness w;
      if (witness_property == "definite")
        w = witness_non_definite(m);
      else if (witness_property == "generalized-definite")
        w = witness_non_gen_definite(m);
      else
        throw ContractError("unknown property: " + witness_property);
      nlohmann::json j{{"f", word_names(m.input_alphabet, w.f)},
                       {"g", word_names(m.input_alphabet, w.g)},
                       {"h", word_names(m.input_alphabet, w.h)},
                       {"a", m.input_alphabet[w.a]},
                       {"b", m.input_alphabet[w.b]},
                       {"s", word_names(m.input_alphabet, w.s)},
                       {"t", word_names(m.input_alphabet, w.t)},
                       {"u", word_names(m.input_alphabet, w.u)}};
      std::cout << j.dump(2) << "\n";
    } else if (*synth_cmd) {
      Circuit c;
      if (style == "prefix") {
        c = synth_prefix(resolve_automaton(source), n, wire_coeff);
      } else if (style == "standard") {
        if (is_builtin(source)) {
          c = synth_standard(builtin(source), n, parse_encoding(encoding), wire_coeff);
        } else {
          Machine m = load_machine(source);
          c = m.is_moore
                  ? synth_standard(m.moore, n, parse_encoding(encoding), wire_coeff)
                  : synth_standard_transducer(m.mealy, n, parse_encoding(encoding), wire_coeff);
        }
      } else {
        throw ContractError("unknown style: " + style);
      }
      write_out(out_path, circuit_to_json(c).dump(2) + "\n");
    } else if (*delay_cmd) {
      std::ifstream f(source);
      if (!f) throw ParseError("cannot open circuit file: " + source);
      nlohmann::json j;
      try {
        f >> j;
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad circuit JSON: ") + e.what());
      }
      Circuit c = circuit_from_json(j);
      if (delay_mode == "logical")
        std::cout << logical_depth(c) << "\n";
      else if (delay_mode == "physical")
        std::cout << physical_depth(c) << "\n";
      else
        throw ContractError("unknown mode: " + delay_mode);
    } else if (*zadd) {
      ZeckWord a = parse_zeck_arg(op_a, zwidth, zdigits), b = parse_zeck_arg(op_b, zwidth, zdigits);
      int w = std::max(zeck_width(a), zeck_width(b));
      // pad to a common width
      auto pad = [&](ZeckWord& x) {
        ZeckWord p(w - zeck_width(x), 0);
        p.insert(p.end(), x.begin(), x.end());
        x = p;
      };
      pad(a);
      pad(b);
      ZeckWord sum = pipeline_add(a, b);
      std::cout << zeck_to_string(sum) << " (=" << zeck_decode(sum) << ")\n";
    } else if (*zsample) {
      SplitMix64 rng(seed);
      for (int i = 0; i < count; ++i) {
        ZeckWord w = markov_sample(n, rng);
        std::cout << zeck_to_string(w) << " (=" << zeck_decode(w) << ")\n";
      }
    } else if (*zsim) {
      if (trials < 1) throw ContractError("trials must be >= 1");
      std::ostringstream os;
      os << SimResult::csv_header() << "\n";
      std::vector<std::pair<double, double>> pts;
      for (int ni : n_list) {
        SimResult r = pipeline_delay_sim(ni, trials, seed);
        os << r.csv_row() << "\n";
        pts.push_back({(double)ni, r.mean});
      }
      GrowthFit fit = fit_growth(pts);
      os << "# fit," << growth_model_name(fit.model) << "," << fit.coefficient << "\n";
      write_out(out_path, os.str());
    } else if (*zcheck) {
      ResetReport rep = check_reset_properties(zeck_pipeline());
      std::cout << rep.text();
      return rep.all_ok ? 0 : 1;
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const GuardrailError& e) {
    std::cerr << "guardrail: " << e.what() << "\n";
    return 4;
  } catch (const ContractError& e) {
    std::cerr << "contract violation: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
