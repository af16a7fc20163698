#include "fsa/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <map>

namespace fsa {

using nlohmann::json;

void Circuit::validate() const {
  for (const Gate& g : gates) {
    int want = g.kind == GateKind::And || g.kind == GateKind::Or ? 2
               : g.kind == GateKind::Not || g.kind == GateKind::Output ? 1
                                                                       : 0;
    if (g.nin != want) throw ContractError("gate fan-in arity violated: " + g.tag);
    for (int i = 0; i < g.nin; ++i)
      if (g.fan_in[i] < 0 || g.fan_in[i] >= g.id) throw ContractError("gate graph not topological");
  }
}

namespace {

struct Builder {
  Circuit c;

  int add(GateKind k, int pos, std::string tag, int in0 = -1, int in1 = -1) {
    Gate g;
    g.id = (int)c.gates.size();
    g.kind = k;
    g.position = pos;
    g.tag = std::move(tag);
    if (in0 >= 0) g.fan_in[g.nin++] = in0;
    if (in1 >= 0) g.fan_in[g.nin++] = in1;
    c.gates.push_back(std::move(g));
    return (int)c.gates.size() - 1;
  }

  // balanced binary tree; returns -1 for an empty term list and the sole
  // term itself for a singleton
  int tree(GateKind k, std::vector<int> xs, int pos, const std::string& tag) {
    if (xs.empty()) return -1;
    while (xs.size() > 1) {
      std::vector<int> next;
      for (size_t i = 0; i + 1 < xs.size(); i += 2) next.push_back(add(k, pos, tag, xs[i], xs[i + 1]));
      if (xs.size() % 2) next.push_back(xs.back());
      xs = std::move(next);
    }
    return xs[0];
  }

  // a gate that can never rise: AND of two one-hot input gates of one step
  int never(int m, const std::string& tag) {
    if (c.na < 2) throw ContractError("cannot synthesize an inert output with a unary alphabet");
    return add(GateKind::And, c.gates[c.in_id(m, 0)].position, tag, c.in_id(m, 0), c.in_id(m, 1));
  }
};

uint64_t image(const Automaton& m, uint64_t s, int a) {
  uint64_t out = 0;
  for (int q = 0; q < m.nq(); ++q)
    if (s >> q & 1) out |= 1ULL << m.delta[q][a];
  return out;
}

void check_family_size(size_t sz) {
  if (sz > (size_t)kFamilyCap)
    throw GuardrailError("knowledge family exceeds the cap of " + std::to_string(kFamilyCap) +
                         " subsets (got " + std::to_string(sz) + ")");
}

std::vector<uint64_t> closure_core(const Automaton& m) {
  if (m.nq() > 62) throw GuardrailError("knowledge encoding supports at most 62 states");
  uint64_t full = (m.nq() == 62 ? ~0ULL >> 2 : (1ULL << m.nq()) - 1);
  std::set<uint64_t> fam;
  std::deque<uint64_t> queue;
  auto push = [&](uint64_t s) {
    if (s == 0 || s == full) return;
    if (fam.insert(s).second) {
      check_family_size(fam.size());
      queue.push_back(s);
    }
  };
  push(1ULL << m.initial);
  for (int a = 0; a < m.na(); ++a) push(image(m, full, a));
  while (!queue.empty()) {
    uint64_t s = queue.front();
    queue.pop_front();
    for (int a = 0; a < m.na(); ++a) push(image(m, s, a));
  }
  return {fam.begin(), fam.end()};
}

std::string mask_tag(const Automaton& m, uint64_t s) {
  std::string out = "{";
  for (int q = 0; q < m.nq(); ++q)
    if (s >> q & 1) {
      if (out.size() > 1) out += ",";
      out += m.states[q];
    }
  return out + "}";
}

// Shared standard-synthesis core; `moore` picks the output rule (post-step
// knowledge through omega vs. pre-step knowledge plus letter through lambda).
//
// Knowledge tests are tracked per antichain of family sets rather than per
// single set: "knowledge inside T" for an arbitrary target T is decided by
// the maximal family sets inside T, and folding that disjunction into the
// per-letter recursion (instead of OR-ing separate per-set signals) keeps
// the gate structure -- and hence every rise time -- identical across the
// closure and full encodings.  Letter groups are padded with inert gates so
// every signal is a tree over exactly |A| branches regardless of which
// letters can actually contribute.
Circuit synth_core(const Automaton& m, const std::vector<std::vector<int>>* lam, int n, Encoding enc,
                   double wire_coeff, const StepPos& pos_fn) {
  if (n < 1) throw ContractError("synthesis requires n >= 1");
  bool moore = lam == nullptr;
  auto family = enc == Encoding::Closure ? knowledge_closure(m) : full_family(m);
  int nf = (int)family.size();
  int na = m.na();
  uint64_t full = (m.nq() == 62 ? ~0ULL >> 2 : (1ULL << m.nq()) - 1);
  StepPos pos = pos_fn ? pos_fn : StepPos([](int s) { return s; });

  std::vector<std::vector<uint64_t>> img(nf, std::vector<uint64_t>(na));
  std::vector<uint64_t> imgq(na);
  for (int a = 0; a < na; ++a) imgq[a] = image(m, full, a);
  for (int i = 0; i < nf; ++i)
    for (int a = 0; a < na; ++a) img[i][a] = image(m, family[i], a);

  // antichain registry; node = sorted list of mutually incomparable family
  // indices, standing for "knowledge inside one of these sets"
  std::map<std::vector<int>, int> node_id;
  std::vector<std::vector<int>> nodes;
  auto antichain = [&](std::vector<int> cand) {
    std::vector<int> out;
    for (int s : cand) {
      bool maximal = true;
      for (int s2 : cand)
        if (s2 != s && (family[s] & ~family[s2]) == 0 && family[s] != family[s2]) maximal = false;
      if (maximal) out.push_back(s);
    }
    return out;
  };
  auto intern = [&](const std::vector<int>& ac) {
    auto it = node_id.find(ac);
    if (it != node_id.end()) return it->second;
    int id = (int)nodes.size();
    check_family_size(nodes.size() + 1);
    node_id.emplace(ac, id);
    nodes.push_back(ac);
    return id;
  };
  // maximal family sets whose members all lie inside `target`
  auto node_below = [&](uint64_t target) {
    std::vector<int> cand;
    for (int s = 0; s < nf; ++s)
      if ((family[s] & ~target) == 0) cand.push_back(s);
    std::vector<int> ac = antichain(cand);
    return ac.empty() ? -1 : intern(ac);
  };

  // output rule sources
  // moore: subsets inside omega^{-1}(b); mealy: (a, S) with lambda forced to b
  std::vector<uint64_t> winv(m.nb(), 0);
  if (moore)
    for (int q = 0; q < m.nq(); ++q) winv[m.omega[q]] |= 1ULL << q;
  auto lambda_forced = [&](uint64_t s, int a) {
    int b = -1;
    for (int q = 0; q < m.nq(); ++q)
      if (s >> q & 1) {
        int l = (*lam)[q][a];
        if (b == -1)
          b = l;
        else if (b != l)
          return -1;
      }
    return b;
  };

  // roots: every family set keeps its own signal; outputs add their targets
  for (int i = 0; i < nf; ++i) intern({i});
  std::vector<int> out_node(m.nb(), -1);
  std::vector<std::vector<int>> lam_node;
  if (moore) {
    for (int b = 0; b < m.nb(); ++b)
      if (winv[b] != full) out_node[b] = node_below(winv[b]);
  } else {
    lam_node.assign(m.nb(), std::vector<int>(na, -1));
    for (int b = 0; b < m.nb(); ++b)
      for (int a = 0; a < na; ++a) {
        uint64_t forced = 0;
        for (int q = 0; q < m.nq(); ++q)
          if ((*lam)[q][a] == b) forced |= 1ULL << q;
        if (forced != 0) lam_node[b][a] = node_below(forced);
      }
  }

  // per-node, per-letter step plan; discovered breadth-first since interned
  // targets spawn predecessor antichains of their own
  struct Group {
    enum Kind { Uncond, Cond, Absent } kind;
    int next;  // node id when conditional
  };
  std::vector<std::vector<Group>> plan;
  for (size_t t = 0; t < nodes.size(); ++t) {
    plan.emplace_back(na);
    for (int a = 0; a < na; ++a) {
      Group& g = plan[t][a];
      bool uncond = false;
      for (int s : nodes[t]) uncond = uncond || (imgq[a] & ~family[s]) == 0;
      if (uncond) {
        g.kind = Group::Uncond;
        continue;
      }
      std::vector<int> cand;
      for (int i = 0; i < nf; ++i) {
        bool inside = false;
        for (int s : nodes[t]) inside = inside || (img[i][a] & ~family[s]) == 0;
        if (inside) cand.push_back(i);
      }
      std::vector<int> ac = antichain(cand);
      if (ac.empty()) {
        g.kind = Group::Absent;
      } else {
        g.kind = Group::Cond;
        g.next = intern(ac);
      }
    }
  }

  std::vector<std::string> node_tag(nodes.size());
  for (size_t t = 0; t < nodes.size(); ++t) {
    std::string s;
    for (int i : nodes[t]) {
      if (!s.empty()) s += "+";
      s += mask_tag(m, family[i]);
    }
    node_tag[t] = s;
  }

  Builder bld;
  bld.c.n = n;
  bld.c.na = na;
  bld.c.nb = m.nb();
  bld.c.wire_coeff = wire_coeff;
  bld.c.input_gate.assign((size_t)n * na, -1);
  bld.c.output_gate.assign((size_t)n * m.nb(), -1);
  int const1 = bld.add(GateKind::Const1, pos(1), "const1");

  // step 0 knowledge: the state is q0
  std::vector<int> prev(nodes.size(), -1);
  for (size_t t = 0; t < nodes.size(); ++t)
    for (int i : nodes[t])
      if (family[i] >> m.initial & 1) prev[t] = const1;

  for (int step = 1; step <= n; ++step) {
    int p = pos(step);
    std::vector<int> in(na);
    for (int a = 0; a < na; ++a) {
      in[a] = bld.add(GateKind::Input, p, "in:" + std::to_string(step) + ":" + m.input_alphabet[a]);
      bld.c.input_gate[(size_t)(step - 1) * na + a] = in[a];
    }
    std::vector<int> sig(nodes.size(), -1);
    for (size_t t = 0; t < nodes.size(); ++t) {
      std::string tag = "sig:" + std::to_string(step) + ":" + node_tag[t];
      std::vector<int> groups(na);
      for (int a = 0; a < na; ++a) {
        const Group& g = plan[t][a];
        if (g.kind == Group::Uncond)
          groups[a] = in[a];
        else if (g.kind == Group::Cond && prev[g.next] != -1)
          groups[a] = bld.add(GateKind::And, p, tag, in[a], prev[g.next]);
        else
          groups[a] = bld.never(step, tag);
      }
      sig[t] = bld.tree(GateKind::Or, groups, p, tag);
    }
    for (int b = 0; b < m.nb(); ++b) {
      std::string tag = "out:" + std::to_string(step) + ":" + m.output_alphabet[b];
      int body;
      if (moore) {
        if (winv[b] == full)
          body = const1;  // letter forced for every state
        else if (out_node[b] != -1)
          body = sig[out_node[b]];
        else
          body = bld.never(step, tag);
      } else {
        std::vector<int> groups(na);
        for (int a = 0; a < na; ++a) {
          if (lambda_forced(full, a) == b)
            groups[a] = in[a];
          else if (lam_node[b][a] != -1 && prev[lam_node[b][a]] != -1)
            groups[a] = bld.add(GateKind::And, p, tag, in[a], prev[lam_node[b][a]]);
          else
            groups[a] = bld.never(step, tag);
        }
        body = bld.tree(GateKind::Or, groups, p, tag);
      }
      bld.c.output_gate[(size_t)(step - 1) * m.nb() + b] = bld.add(GateKind::Output, p, tag, body);
    }
    prev = sig;
  }
  bld.c.validate();
  return bld.c;
}

}  // namespace

std::vector<uint64_t> knowledge_closure(const Automaton& m) { return closure_core(m); }

std::vector<uint64_t> full_family(const Automaton& m) {
  if (m.nq() > 62) throw GuardrailError("knowledge encoding supports at most 62 states");
  uint64_t full = (m.nq() == 62 ? ~0ULL >> 2 : (1ULL << m.nq()) - 1);
  check_family_size(full - 1);
  std::vector<uint64_t> fam;
  for (uint64_t s = 1; s < full; ++s) fam.push_back(s);
  return fam;
}

Circuit synth_standard(const Automaton& m, int n, Encoding enc, double wire_coeff, const StepPos& pos) {
  return synth_core(m, nullptr, n, enc, wire_coeff, pos);
}

Circuit synth_standard_transducer(const Transducer& t, int n, Encoding enc, double wire_coeff,
                                  const StepPos& pos) {
  // reuse the core through a Moore shell carrying delta; lambda drives outputs
  Automaton shell;
  shell.input_alphabet = t.input_alphabet;
  shell.output_alphabet = t.output_alphabet;
  shell.states = t.states;
  shell.initial = t.initial;
  shell.delta = t.delta;
  shell.omega.assign(t.nq(), 0);
  return synth_core(shell, &t.lambda, n, enc, wire_coeff, pos);
}

Circuit synth_prefix(const Automaton& m, int n, double wire_coeff) {
  if (n < 1) throw ContractError("synthesis requires n >= 1");
  int nq = m.nq();
  Builder bld;
  bld.c.n = n;
  bld.c.na = m.na();
  bld.c.nb = m.nb();
  bld.c.wire_coeff = wire_coeff;
  bld.c.input_gate.assign((size_t)n * m.na(), -1);
  bld.c.output_gate.assign((size_t)n * m.nb(), -1);

  // one-hot encoded step functions Q -> Q
  struct Mat {
    std::vector<int> w;  // nq*nq gate ids, -1 = structurally zero
    int left;            // leftmost step in the span (gate position)
  };
  std::vector<Mat> fs(n);
  for (int step = 1; step <= n; ++step) {
    std::vector<int> in(m.na());
    for (int a = 0; a < m.na(); ++a) {
      in[a] = bld.add(GateKind::Input, step, "in:" + std::to_string(step) + ":" + m.input_alphabet[a]);
      bld.c.input_gate[(size_t)(step - 1) * m.na() + a] = in[a];
    }
    Mat f;
    f.left = step;
    f.w.assign((size_t)nq * nq, -1);
    for (int q = 0; q < nq; ++q)
      for (int r = 0; r < nq; ++r) {
        std::vector<int> terms;
        for (int a = 0; a < m.na(); ++a)
          if (m.delta[q][a] == r) terms.push_back(in[a]);
        f.w[(size_t)q * nq + r] =
            bld.tree(GateKind::Or, terms, step,
                     "f:" + std::to_string(step) + ":" + m.states[q] + ">" + m.states[r]);
      }
    fs[step - 1] = std::move(f);
  }

  auto combine = [&](const Mat& early, const Mat& late) {
    Mat out;
    out.left = early.left;
    out.w.assign((size_t)nq * nq, -1);
    for (int q = 0; q < nq; ++q)
      for (int r = 0; r < nq; ++r) {
        std::vector<int> terms;
        std::string tag = "p:" + std::to_string(out.left) + ":" + m.states[q] + ">" + m.states[r];
        for (int mid = 0; mid < nq; ++mid) {
          int x = early.w[(size_t)q * nq + mid], y = late.w[(size_t)mid * nq + r];
          if (x != -1 && y != -1) terms.push_back(bld.add(GateKind::And, out.left, tag, x, y));
        }
        out.w[(size_t)q * nq + r] = bld.tree(GateKind::Or, terms, out.left, tag);
      }
    return out;
  };

  // balanced parallel-prefix network, O(n) combines, O(log n) levels
  std::function<std::vector<Mat>(const std::vector<Mat>&)> prefix =
      [&](const std::vector<Mat>& xs) -> std::vector<Mat> {
    if (xs.size() == 1) return xs;
    std::vector<Mat> pairs;
    for (size_t i = 0; i + 1 < xs.size(); i += 2) pairs.push_back(combine(xs[i], xs[i + 1]));
    std::vector<Mat> ys = prefix(pairs);
    std::vector<Mat> out(xs.size());
    out[0] = xs[0];
    for (size_t i = 0; 2 * i + 1 < xs.size(); ++i) out[2 * i + 1] = ys[i];
    for (size_t i = 1; 2 * i < xs.size(); ++i) out[2 * i] = combine(ys[i - 1], xs[2 * i]);
    return out;
  };
  std::vector<Mat> ps = prefix(fs);

  for (int step = 1; step <= n; ++step) {
    const Mat& p = ps[step - 1];
    for (int b = 0; b < m.nb(); ++b) {
      std::string tag = "out:" + std::to_string(step) + ":" + m.output_alphabet[b];
      std::vector<int> terms;
      for (int r = 0; r < nq; ++r)
        if (m.omega[r] == b && p.w[(size_t)m.initial * nq + r] != -1)
          terms.push_back(p.w[(size_t)m.initial * nq + r]);
      int body = bld.tree(GateKind::Or, terms, step, tag);
      if (body == -1) body = bld.never(step, tag);
      bld.c.output_gate[(size_t)(step - 1) * m.nb() + b] = bld.add(GateKind::Output, step, tag, body);
    }
  }
  bld.c.validate();
  return bld.c;
}

int logical_depth(const Circuit& c) {
  std::vector<int> depth(c.gates.size(), 1);
  int best = 0;
  for (const Gate& g : c.gates) {
    for (int i = 0; i < g.nin; ++i) depth[g.id] = std::max(depth[g.id], depth[g.fan_in[i]] + 1);
    if (g.kind == GateKind::Output) best = std::max(best, depth[g.id]);
  }
  return best;
}

double physical_depth(const Circuit& c) {
  std::vector<double> d(c.gates.size(), 1.0);
  double best = 0;
  for (const Gate& g : c.gates) {
    for (int i = 0; i < g.nin; ++i) {
      const Gate& f = c.gates[g.fan_in[i]];
      d[g.id] = std::max(d[g.id], d[f.id] + 1.0 + c.wire_coeff * std::abs(g.position - f.position));
    }
    if (g.kind == GateKind::Output) best = std::max(best, d[g.id]);
  }
  return best;
}

std::pair<long long, double> cost(const Circuit& c) {
  double wire = 0;
  for (const Gate& g : c.gates)
    for (int i = 0; i < g.nin; ++i) wire += std::abs(g.position - c.gates[g.fan_in[i]].position);
  return {(long long)c.gates.size(), wire};
}

int max_gates_per_position(const Circuit& c) {
  std::map<int, int> count;
  int best = 0;
  for (const Gate& g : c.gates) best = std::max(best, ++count[g.position]);
  return best;
}

std::set<int> dependence_cone_steps(const Circuit& c, int m) {
  std::vector<char> mark(c.gates.size(), 0);
  std::deque<int> queue;
  for (int b = 0; b < c.nb; ++b) {
    int g = c.out_id(m, b);
    if (g != -1 && !mark[g]) {
      mark[g] = 1;
      queue.push_back(g);
    }
  }
  while (!queue.empty()) {
    int g = queue.front();
    queue.pop_front();
    for (int i = 0; i < c.gates[g].nin; ++i) {
      int f = c.gates[g].fan_in[i];
      if (!mark[f]) {
        mark[f] = 1;
        queue.push_back(f);
      }
    }
  }
  std::set<int> steps;
  for (int step = 1; step <= c.n; ++step)
    for (int a = 0; a < c.na; ++a)
      if (mark[c.in_id(step, a)]) steps.insert(step);
  return steps;
}

nlohmann::json circuit_to_json(const Circuit& c) {
  static const char* names[] = {"INPUT", "CONST1", "AND", "OR", "NOT", "OUTPUT"};
  json gates = json::array();
  for (const Gate& g : c.gates) {
    json fi = json::array();
    for (int i = 0; i < g.nin; ++i) fi.push_back(g.fan_in[i]);
    gates.push_back(
        {{"id", g.id}, {"kind", names[(int)g.kind]}, {"fan_in", fi}, {"position", g.position}, {"tag", g.tag}});
  }
  return json{{"n", c.n},           {"na", c.na},
              {"nb", c.nb},         {"wire_coeff", c.wire_coeff},
              {"gates", gates},     {"input_map", c.input_gate},
              {"output_map", c.output_gate}};
}

Circuit circuit_from_json(const json& j) {
  Circuit c;
  try {
    c.n = j.at("n").get<int>();
    c.na = j.at("na").get<int>();
    c.nb = j.at("nb").get<int>();
    c.wire_coeff = j.at("wire_coeff").get<double>();
    c.input_gate = j.at("input_map").get<std::vector<int>>();
    c.output_gate = j.at("output_map").get<std::vector<int>>();
    for (const json& gj : j.at("gates")) {
      Gate g;
      g.id = gj.at("id").get<int>();
      std::string k = gj.at("kind").get<std::string>();
      if (k == "INPUT") g.kind = GateKind::Input;
      else if (k == "CONST1") g.kind = GateKind::Const1;
      else if (k == "AND") g.kind = GateKind::And;
      else if (k == "OR") g.kind = GateKind::Or;
      else if (k == "NOT") g.kind = GateKind::Not;
      else if (k == "OUTPUT") g.kind = GateKind::Output;
      else throw ParseError("unknown gate kind: " + k);
      for (const json& f : gj.at("fan_in")) g.fan_in[g.nin++] = f.get<int>();
      g.position = gj.at("position").get<int>();
      g.tag = gj.at("tag").get<std::string>();
      if (g.id != (int)c.gates.size()) throw ParseError("gate ids must be dense and ordered");
      c.gates.push_back(std::move(g));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed circuit file: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace fsa
