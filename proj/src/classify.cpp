#include "fsa/classify.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <numeric>

namespace fsa {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- pair machinery
// Unordered distinct state pairs, flattened as p*nq+q with p < q.
struct PairGraph {
  int nq, na;
  const Automaton* m;

  explicit PairGraph(const Automaton& a) : nq(a.nq()), na(a.na()), m(&a) {}

  int id(int p, int q) const { return p < q ? p * nq + q : q * nq + p; }
  bool distinct(int p, int q) const { return p != q; }
  std::pair<int, int> step(int p, int q, int a) const { return {m->delta[p][a], m->delta[q][a]}; }
};

// pairs from which an omega-differing pair is reachable (including trivially)
std::vector<char> can_distinguish(const PairGraph& g) {
  const Automaton& m = *g.m;
  std::vector<char> res(g.nq * g.nq, 0);
  std::deque<int> queue;
  for (int p = 0; p < g.nq; ++p)
    for (int q = p + 1; q < g.nq; ++q)
      if (m.omega[p] != m.omega[q]) {
        res[g.id(p, q)] = 1;
        queue.push_back(g.id(p, q));
      }
  // backward closure: predecessors under any letter
  std::vector<std::vector<int>> preds(g.nq * g.nq);
  for (int p = 0; p < g.nq; ++p)
    for (int q = p + 1; q < g.nq; ++q)
      for (int a = 0; a < g.na; ++a) {
        auto [r, s] = g.step(p, q, a);
        if (r != s) preds[g.id(r, s)].push_back(g.id(p, q));
      }
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int y : preds[x])
      if (!res[y]) {
        res[y] = 1;
        queue.push_back(y);
      }
  }
  return res;
}

// pairs lying on a cycle of the pair graph (Tarjan-free: Kosaraju on pair ids)
std::vector<char> on_cycle(const PairGraph& g) {
  int n = g.nq * g.nq;
  std::vector<std::vector<int>> fwd(n), bwd(n);
  std::vector<char> exists(n, 0), self(n, 0);
  for (int p = 0; p < g.nq; ++p)
    for (int q = p + 1; q < g.nq; ++q) {
      int x = g.id(p, q);
      exists[x] = 1;
      for (int a = 0; a < g.na; ++a) {
        auto [r, s] = g.step(p, q, a);
        if (r == s) continue;
        int y = g.id(r, s);
        fwd[x].push_back(y);
        bwd[y].push_back(x);
        if (y == x) self[x] = 1;
      }
    }
  // iterative Kosaraju
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  for (int s0 = 0; s0 < n; ++s0) {
    if (!exists[s0] || seen[s0]) continue;
    std::vector<std::pair<int, size_t>> stack{{s0, 0}};
    seen[s0] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < fwd[v].size()) {
        int w = fwd[v][i++];
        if (!seen[w]) {
          seen[w] = 1;
          stack.push_back({w, 0});
        }
      } else {
        order.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::vector<int> comp(n, -1);
  std::vector<int> comp_size;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (comp[*it] != -1) continue;
    int c = (int)comp_size.size();
    comp_size.push_back(0);
    std::deque<int> queue{*it};
    comp[*it] = c;
    while (!queue.empty()) {
      int v = queue.front();
      queue.pop_front();
      ++comp_size[c];
      for (int w : bwd[v])
        if (comp[w] == -1) {
          comp[w] = c;
          queue.push_back(w);
        }
    }
  }
  std::vector<char> res(n, 0);
  for (int x = 0; x < n; ++x)
    if (exists[x] && (self[x] || comp_size[comp[x]] > 1)) res[x] = 1;
  return res;
}

// pairs that can reach a pair that is both on a cycle and distinguishing-capable
std::vector<char> reaches_pump(const PairGraph& g) {
  auto dist = can_distinguish(g);
  auto cyc = on_cycle(g);
  int n = g.nq * g.nq;
  std::vector<char> res(n, 0);
  std::deque<int> queue;
  std::vector<std::vector<int>> preds(n);
  for (int p = 0; p < g.nq; ++p)
    for (int q = p + 1; q < g.nq; ++q) {
      int x = g.id(p, q);
      if (cyc[x] && dist[x]) {
        res[x] = 1;
        queue.push_back(x);
      }
      for (int a = 0; a < g.na; ++a) {
        auto [r, s] = g.step(p, q, a);
        if (r != s) preds[g.id(r, s)].push_back(x);
      }
    }
  while (!queue.empty()) {
    int x = queue.front();
    queue.pop_front();
    for (int y : preds[x])
      if (!res[y]) {
        res[y] = 1;
        queue.push_back(y);
      }
  }
  return res;
}

// shortest word moving pair `from` into a pair satisfying `goal`; letters in
// declared order, so deterministic. Nodes keep the orientation they were
// stepped into; only the visited set is order-normalized.
std::optional<Word> pair_bfs(const PairGraph& g, std::pair<int, int> from,
                             const std::function<bool(int, int)>& goal) {
  struct Node {
    int p, q, parent, letter;
  };
  std::vector<Node> nodes{{from.first, from.second, -1, -1}};
  std::vector<char> seen(g.nq * g.nq, 0);
  seen[g.id(from.first, from.second)] = 1;
  auto emit = [&](int idx) {
    Word w;
    for (int i = idx; nodes[i].parent != -1; i = nodes[i].parent) w.push_back(nodes[i].letter);
    std::reverse(w.begin(), w.end());
    return w;
  };
  if (goal(from.first, from.second)) return emit(0);
  for (size_t head = 0; head < nodes.size(); ++head) {
    Node cur = nodes[head];
    for (int a = 0; a < g.na; ++a) {
      auto [r, s] = g.step(cur.p, cur.q, a);
      int x = g.id(r, s);
      if (seen[x]) continue;
      seen[x] = 1;
      nodes.push_back({r, s, (int)head, a});
      if (goal(r, s)) return emit((int)nodes.size() - 1);
    }
  }
  return std::nullopt;
}

// shortest word q -> target in the plain transition graph
std::optional<Word> state_bfs(const Automaton& m, int from, int target) {
  struct Node {
    int q, parent, letter;
  };
  std::vector<Node> nodes{{from, -1, -1}};
  std::vector<char> seen(m.nq(), 0);
  seen[from] = 1;
  if (from == target) return Word{};
  for (size_t head = 0; head < nodes.size(); ++head) {
    for (int a = 0; a < m.na(); ++a) {
      int r = m.delta[nodes[head].q][a];
      if (seen[r]) continue;
      seen[r] = 1;
      nodes.push_back({r, (int)head, a});
      if (r == target) {
        Word w;
        for (int i = (int)nodes.size() - 1; nodes[i].parent != -1; i = nodes[i].parent)
          w.push_back(nodes[i].letter);
        std::reverse(w.begin(), w.end());
        return w;
      }
    }
  }
  return std::nullopt;
}

// same-length-prefix pairs: every (q0 x, q0 y) with |x| = |y|
std::vector<char> prefix_pairs(const Automaton& m) {
  int nq = m.nq();
  std::vector<char> seen(nq * nq, 0);
  std::deque<std::pair<int, int>> queue;
  auto push = [&](int p, int q) {
    if (p > q) std::swap(p, q);
    if (!seen[p * nq + q]) {
      seen[p * nq + q] = 1;
      queue.push_back({p, q});
    }
  };
  push(m.initial, m.initial);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    for (int a = 0; a < m.na(); ++a)
      for (int b = 0; b < m.na(); ++b) push(m.delta[p][a], m.delta[q][b]);
  }
  return seen;
}

// exact-length-k distinguishability sets: B[pair] after `steps` applications
std::vector<char> step_back(const Automaton& m, const std::vector<char>& b) {
  int nq = m.nq();
  std::vector<char> res(nq * nq, 0);
  for (int p = 0; p < nq; ++p)
    for (int q = p + 1; q < nq; ++q)
      for (int a = 0; a < m.na(); ++a) {
        int r = m.delta[p][a], s = m.delta[q][a];
        if (r == s) continue;
        if (r > s) std::swap(r, s);
        if (b[r * nq + s]) {
          res[p * nq + q] = 1;
          break;
        }
      }
  return res;
}

std::vector<char> reachable_mask(const Automaton& m) {
  std::vector<char> seen(m.nq(), 0);
  std::deque<int> queue{m.initial};
  seen[m.initial] = 1;
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (int a = 0; a < m.na(); ++a)
      if (!seen[m.delta[q][a]]) {
        seen[m.delta[q][a]] = 1;
        queue.push_back(m.delta[q][a]);
      }
  }
  return seen;
}

int final_output(const Automaton& m, const Word& x) { return m.omega[run(m, m.initial, x)]; }

Word cat(std::initializer_list<const Word*> parts) {
  Word out;
  for (const Word* p : parts) out.insert(out.end(), p->begin(), p->end());
  return out;
}

Word repeat(const Word& w, int times) {
  Word out;
  for (int i = 0; i < times; ++i) out.insert(out.end(), w.begin(), w.end());
  return out;
}

}  // namespace

// ---------------------------------------------------------------- operations

std::vector<std::pair<int, Word>> reachable_states(const Automaton& m) {
  struct Node {
    int q, parent, letter;
  };
  std::vector<Node> nodes{{m.initial, -1, -1}};
  std::vector<char> seen(m.nq(), 0);
  seen[m.initial] = 1;
  std::vector<std::pair<int, Word>> out;
  auto emit = [&](int idx) {
    Word w;
    for (int i = idx; nodes[i].parent != -1; i = nodes[i].parent) w.push_back(nodes[i].letter);
    std::reverse(w.begin(), w.end());
    out.push_back({nodes[idx].q, w});
  };
  emit(0);
  for (size_t head = 0; head < nodes.size(); ++head) {
    for (int a = 0; a < m.na(); ++a) {
      int r = m.delta[nodes[head].q][a];
      if (seen[r]) continue;
      seen[r] = 1;
      nodes.push_back({r, (int)head, a});
      emit((int)nodes.size() - 1);
    }
  }
  return out;
}

std::optional<Word> distinguishing_word(const Automaton& m, int q1, int q2) {
  if (q1 == q2) return std::nullopt;
  PairGraph g(m);
  return pair_bfs(g, {q1, q2}, [&](int p, int q) { return p != q && m.omega[p] != m.omega[q]; });
}

Automaton reduce(const Automaton& m) {
  // restrict to reachable states
  auto reach = reachable_states(m);
  std::vector<int> keep;
  for (auto& [q, w] : reach) keep.push_back(q);
  std::sort(keep.begin(), keep.end());
  std::vector<int> remap(m.nq(), -1);
  for (size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = (int)i;

  Automaton r;
  r.input_alphabet = m.input_alphabet;
  r.output_alphabet = m.output_alphabet;
  for (int q : keep) r.states.push_back(m.states[q]);
  r.initial = remap[m.initial];
  r.delta.assign(keep.size(), std::vector<int>(m.na(), 0));
  r.omega.assign(keep.size(), 0);
  for (size_t i = 0; i < keep.size(); ++i) {
    for (int a = 0; a < m.na(); ++a) r.delta[i][a] = remap[m.delta[keep[i]][a]];
    r.omega[i] = m.omega[keep[i]];
  }

  // partition refinement on outputs
  int nq = r.nq();
  std::vector<int> cls(nq);
  for (int q = 0; q < nq; ++q) cls[q] = r.omega[q];
  for (;;) {
    std::map<std::vector<int>, int> sig_to_cls;
    std::vector<int> next(nq);
    for (int q = 0; q < nq; ++q) {
      std::vector<int> sig{cls[q]};
      for (int a = 0; a < r.na(); ++a) sig.push_back(cls[r.delta[q][a]]);
      auto [it, fresh] = sig_to_cls.insert({sig, (int)sig_to_cls.size()});
      next[q] = it->second;
    }
    if (next == cls) break;
    cls = next;
  }
  // quotient; class representative = least member, classes ordered by representative
  int ncls = *std::max_element(cls.begin(), cls.end()) + 1;
  std::vector<int> rep(ncls, -1);
  for (int q = nq - 1; q >= 0; --q) rep[cls[q]] = q;
  std::vector<int> reps = rep;
  std::sort(reps.begin(), reps.end());
  std::vector<int> cls_order(ncls);
  for (int c = 0; c < ncls; ++c)
    cls_order[c] = (int)(std::find(reps.begin(), reps.end(), rep[c]) - reps.begin());

  Automaton out;
  out.input_alphabet = m.input_alphabet;
  out.output_alphabet = m.output_alphabet;
  out.states.resize(ncls);
  out.delta.assign(ncls, std::vector<int>(m.na(), 0));
  out.omega.assign(ncls, 0);
  for (int c = 0; c < ncls; ++c) {
    int q = rep[c];
    out.states[cls_order[c]] = r.states[q];
    out.omega[cls_order[c]] = r.omega[q];
    for (int a = 0; a < r.na(); ++a) out.delta[cls_order[c]][a] = cls_order[cls[r.delta[q][a]]];
  }
  out.initial = cls_order[cls[r.initial]];
  out.validate();
  return out;
}

std::pair<bool, int> is_ergodic(const Automaton& m) {
  int nq = m.nq();
  // strong connectivity: forward and backward reach from state 0
  auto sweep = [&](bool fwd) {
    std::vector<std::vector<int>> adj(nq);
    for (int q = 0; q < nq; ++q)
      for (int a = 0; a < m.na(); ++a) {
        int r = m.delta[q][a];
        if (fwd)
          adj[q].push_back(r);
        else
          adj[r].push_back(q);
      }
    std::vector<char> seen(nq, 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
      int q = queue.front();
      queue.pop_front();
      for (int r : adj[q])
        if (!seen[r]) {
          seen[r] = 1;
          queue.push_back(r);
        }
    }
    return seen;
  };
  auto f = sweep(true), b = sweep(false);
  bool strongly = true;
  for (int q = 0; q < nq; ++q) strongly = strongly && f[q] && b[q];

  // period of the initial state's strongly connected component:
  // gcd of (level[u]+1-level[v]) over intra-component edges
  auto fwd0 = [&] {
    std::vector<char> seen(nq, 0);
    std::deque<int> queue{m.initial};
    seen[m.initial] = 1;
    while (!queue.empty()) {
      int q = queue.front();
      queue.pop_front();
      for (int a = 0; a < m.na(); ++a)
        if (!seen[m.delta[q][a]]) {
          seen[m.delta[q][a]] = 1;
          queue.push_back(m.delta[q][a]);
        }
    }
    return seen;
  }();
  std::vector<char> bwd0(nq, 0);
  {
    std::vector<std::vector<int>> radj(nq);
    for (int q = 0; q < nq; ++q)
      for (int a = 0; a < m.na(); ++a) radj[m.delta[q][a]].push_back(q);
    std::deque<int> queue{m.initial};
    bwd0[m.initial] = 1;
    while (!queue.empty()) {
      int q = queue.front();
      queue.pop_front();
      for (int r : radj[q])
        if (!bwd0[r]) {
          bwd0[r] = 1;
          queue.push_back(r);
        }
    }
  }
  std::vector<char> scc(nq, 0);
  for (int q = 0; q < nq; ++q) scc[q] = fwd0[q] && bwd0[q];

  std::vector<int> level(nq, -1);
  level[m.initial] = 0;
  std::deque<int> queue{m.initial};
  while (!queue.empty()) {
    int q = queue.front();
    queue.pop_front();
    for (int a = 0; a < m.na(); ++a) {
      int r = m.delta[q][a];
      if (scc[r] && level[r] == -1) {
        level[r] = level[q] + 1;
        queue.push_back(r);
      }
    }
  }
  long long g = 0;
  for (int q = 0; q < nq; ++q) {
    if (!scc[q]) continue;
    for (int a = 0; a < m.na(); ++a) {
      int r = m.delta[q][a];
      if (scc[r]) g = std::gcd(g, (long long)std::abs(level[q] + 1 - level[r]));
    }
  }
  int period = g == 0 ? 1 : (int)g;
  return {strongly && period == 1, period};
}

std::optional<Word> mergeable(const Automaton& m, int q1, int q2) {
  if (q1 == q2) return Word{};
  PairGraph g(m);
  return pair_bfs(g, {q1, q2}, [](int p, int q) { return p == q; });
}

std::optional<Word> is_synchronizable(const Automaton& m) {
  std::vector<char> in_set(m.nq(), 1);
  int count = m.nq();
  Word w;
  while (count > 1) {
    int p = -1, q = -1;
    for (int i = 0; i < m.nq() && q == -1; ++i)
      if (in_set[i]) {
        if (p == -1)
          p = i;
        else
          q = i;
      }
    auto mw = mergeable(m, p, q);
    if (!mw) return std::nullopt;
    std::vector<char> next(m.nq(), 0);
    int ncount = 0;
    for (int i = 0; i < m.nq(); ++i)
      if (in_set[i]) {
        int r = run(m, i, *mw);
        if (!next[r]) {
          next[r] = 1;
          ++ncount;
        }
      }
    in_set = next;
    count = ncount;
    w.insert(w.end(), mw->begin(), mw->end());
  }
  int sink = (int)(std::find(in_set.begin(), in_set.end(), 1) - in_set.begin());
  // extend to a resetting word when the initial state is reachable again
  if (auto back = state_bfs(m, sink, m.initial)) w.insert(w.end(), back->begin(), back->end());
  return w;
}

DefinitenessVerdict definiteness_order(const Automaton& m) {
  PairGraph g(m);
  auto pump = reaches_pump(g);
  auto reach = reachable_mask(m);
  for (int q = 0; q < m.nq(); ++q) {
    if (!reach[q]) continue;
    for (int a = 0; a < m.na(); ++a)
      for (int b = a + 1; b < m.na(); ++b) {
        int r = m.delta[q][a], s = m.delta[q][b];
        if (r != s && pump[g.id(r, s)]) return {false, -1};
      }
  }
  // finite: minimal k with no exact-length-k distinguishing suffix for any
  // same-length-prefix pair
  auto pset = prefix_pairs(m);
  int nq = m.nq();
  std::vector<char> b(nq * nq, 0);
  for (int p = 0; p < nq; ++p)
    for (int q = p + 1; q < nq; ++q)
      if (m.omega[p] != m.omega[q]) b[p * nq + q] = 1;
  int bound = nq * (nq - 1) / 2 + 1;
  for (int k = 0; k <= bound; ++k) {
    bool clash = false;
    for (int x = 0; x < nq * nq && !clash; ++x) clash = pset[x] && b[x];
    if (!clash) return {true, k};
    b = step_back(m, b);
  }
  throw ContractError("definiteness: finite verdict exceeded its order bound");
}

DefinitenessVerdict gen_definiteness_order(const Automaton& m) {
  PairGraph g(m);
  auto pump = reaches_pump(g);
  auto reach = reachable_mask(m);
  int nq = m.nq();

  // states on a reachable cycle, then their forward closure: "reachable by
  // arbitrarily long words"
  std::vector<char> on_state_cycle(nq, 0);
  {
    // long-path trick: q is on a cycle iff q reaches itself in >= 1 step
    for (int q = 0; q < nq; ++q) {
      if (!reach[q]) continue;
      std::vector<char> seen(nq, 0);
      std::deque<int> queue;
      for (int a = 0; a < m.na(); ++a)
        if (!seen[m.delta[q][a]]) {
          seen[m.delta[q][a]] = 1;
          queue.push_back(m.delta[q][a]);
        }
      while (!queue.empty()) {
        int r = queue.front();
        queue.pop_front();
        for (int a = 0; a < m.na(); ++a)
          if (!seen[m.delta[r][a]]) {
            seen[m.delta[r][a]] = 1;
            queue.push_back(m.delta[r][a]);
          }
      }
      on_state_cycle[q] = seen[q];
    }
  }
  std::vector<char> deep(nq, 0);
  {
    std::deque<int> queue;
    for (int q = 0; q < nq; ++q)
      if (on_state_cycle[q]) {
        deep[q] = 1;
        queue.push_back(q);
      }
    while (!queue.empty()) {
      int q = queue.front();
      queue.pop_front();
      for (int a = 0; a < m.na(); ++a)
        if (!deep[m.delta[q][a]]) {
          deep[m.delta[q][a]] = 1;
          queue.push_back(m.delta[q][a]);
        }
    }
  }
  for (int p = 0; p < nq; ++p) {
    if (!deep[p]) continue;
    for (int a = 0; a < m.na(); ++a)
      for (int b = a + 1; b < m.na(); ++b) {
        int r = m.delta[p][a], s = m.delta[p][b];
        if (r != s && pump[g.id(r, s)]) return {false, -1};
      }
  }
  auto def = definiteness_order(m);
  if (def.finite) return def;
  return {true, nq * nq + nq + 1};  // certified upper bound, not the minimum
}

namespace {

// shared search for the pumping tuple (a, b, s, t, u) rooted at state p
struct PumpCore {
  int a, b;
  Word s, t, u;
};

std::optional<PumpCore> find_pump_core(const Automaton& m, int p) {
  PairGraph g(m);
  auto dist = can_distinguish(g);
  auto cyc = on_cycle(g);
  auto good = [&](int r, int s) { return r != s && cyc[g.id(r, s)] && dist[g.id(r, s)]; };
  for (int a = 0; a < m.na(); ++a)
    for (int b = a + 1; b < m.na(); ++b) {
      int r = m.delta[p][a], s = m.delta[p][b];
      if (r == s) continue;
      auto sw = pair_bfs(g, {r, s}, good);
      if (!sw) continue;
      int p1 = run(m, r, *sw), p2 = run(m, s, *sw);
      // cycle word: shortest non-empty return of the pair to itself
      std::optional<Word> tw;
      for (int a0 = 0; a0 < m.na() && !tw; ++a0) {
        int r1 = m.delta[p1][a0], s1 = m.delta[p2][a0];
        if (r1 == s1) continue;
        auto back = pair_bfs(g, {r1, s1}, [&](int x, int y) {
          return (x == p1 && y == p2) || (x == p2 && y == p1);
        });
        if (back) {
          tw = Word{a0};
          tw->insert(tw->end(), back->begin(), back->end());
        }
      }
      if (!tw) continue;
      // check the cycle word moves the ordered pair back exactly
      if (run(m, p1, *tw) != p1 || run(m, p2, *tw) != p2) {
        // the unordered pair swapped; going around twice restores order
        Word twice = repeat(*tw, 2);
        if (run(m, p1, twice) != p1 || run(m, p2, twice) != p2) continue;
        tw = twice;
      }
      auto uw = pair_bfs(g, {p1, p2}, [&](int x, int y) { return x != y && m.omega[x] != m.omega[y]; });
      if (!uw) continue;
      // re-anchor u on the ordered pair
      if (m.omega[run(m, p1, *uw)] == m.omega[run(m, p2, *uw)]) continue;
      return PumpCore{a, b, *sw, *tw, *uw};
    }
  return std::nullopt;
}

}  // namespace

PumpWitness witness_non_definite(const Automaton& m) {
  auto verdict = definiteness_order(m);
  if (verdict.finite) throw ContractError("witness_non_definite called on a definite automaton");
  for (auto& [q, x] : reachable_states(m)) {
    auto core = find_pump_core(m, q);
    if (!core) continue;
    PumpWitness w;
    w.h = x;
    w.a = core->a;
    w.b = core->b;
    w.s = core->s;
    w.t = core->t;
    w.u = core->u;
    Word wa{w.a}, wb{w.b};
    for (int j = 0; j <= 2; ++j) {
      Word tj = repeat(w.t, j);
      Word xa = cat({&w.h, &wa, &w.s, &tj, &w.u});
      Word xb = cat({&w.h, &wb, &w.s, &tj, &w.u});
      if (final_output(m, xa) == final_output(m, xb))
        throw ContractError("pump witness failed execution check");
    }
    return w;
  }
  throw ContractError("non-definite verdict without extractable witness");
}

PumpWitness witness_non_gen_definite(const Automaton& m) {
  auto verdict = gen_definiteness_order(m);
  if (verdict.finite) throw ContractError("witness_non_gen_definite called on a generalized definite automaton");
  auto reach = reachable_states(m);
  std::vector<char> reach_mask(m.nq(), 0);
  for (auto& [q, w] : reach) reach_mask[q] = 1;

  for (auto& [c, f] : reach) {
    // g: shortest non-empty cycle at c
    std::optional<Word> gw;
    for (int a0 = 0; a0 < m.na() && !gw; ++a0) {
      auto back = state_bfs(m, m.delta[c][a0], c);
      if (back) {
        gw = Word{a0};
        gw->insert(gw->end(), back->begin(), back->end());
      }
    }
    if (!gw) continue;
    // p: anything reachable from c admitting the pump core
    struct Node {
      int q, parent, letter;
    };
    std::vector<Node> nodes{{c, -1, -1}};
    std::vector<char> seen(m.nq(), 0);
    seen[c] = 1;
    for (size_t head = 0; head < nodes.size(); ++head) {
      int p = nodes[head].q;
      auto core = find_pump_core(m, p);
      if (core) {
        Word h;
        for (int i = (int)head; nodes[i].parent != -1; i = nodes[i].parent) h.push_back(nodes[i].letter);
        std::reverse(h.begin(), h.end());
        PumpWitness w;
        w.f = f;
        w.g = *gw;
        w.h = h;
        w.a = core->a;
        w.b = core->b;
        w.s = core->s;
        w.t = core->t;
        w.u = core->u;
        // execution checks: cycle identity plus the two pumped families
        if (run(m, m.initial, w.f) != run(m, m.initial, cat({&w.f, &w.g})))
          throw ContractError("pump witness cycle identity failed");
        Word v = repeat(w.g, (int)w.t.size());
        Word ww = repeat(w.t, (int)w.g.size());
        Word wa{w.a}, wb{w.b};
        int out_a = -1, out_b = -1;
        for (int mm = 0; mm <= 2; ++mm)
          for (int l = 0; l <= mm; ++l) {
            Word vl = repeat(v, l), wrest = repeat(ww, mm - l);
            Word cl = cat({&w.f, &w.g, &vl, &w.h, &wa, &w.s, &w.t, &wrest, &w.u});
            Word dl = cat({&w.f, &w.g, &vl, &w.h, &wb, &w.s, &w.t, &wrest, &w.u});
            if (cl.size() != dl.size()) throw ContractError("pump families length mismatch");
            int oc = final_output(m, cl), od = final_output(m, dl);
            if (out_a == -1) {
              out_a = oc;
              out_b = od;
            }
            if (oc != out_a || od != out_b || oc == od)
              throw ContractError("pump families did not split into two output classes");
          }
        return w;
      }
      for (int a = 0; a < m.na(); ++a) {
        int r = m.delta[p][a];
        if (!seen[r]) {
          seen[r] = 1;
          nodes.push_back({r, (int)head, a});
        }
      }
    }
  }
  throw ContractError("non-generalized-definite verdict without extractable witness");
}

Automaton report_machine(const Automaton& m) { return reduce(m); }

ClassificationReport classify(const Automaton& m) {
  ClassificationReport rep;
  auto reach = reachable_states(m);
  rep.reachable_count = (int)reach.size();
  Automaton r = reduce(m);
  rep.reduction_changed = (r.nq() != m.nq());
  rep.is_reduced = !rep.reduction_changed;
  auto [erg, period] = is_ergodic(r);
  rep.ergodic = erg;
  rep.period = period;
  rep.definite = definiteness_order(r);
  rep.generalized_definite = gen_definiteness_order(r);
  auto sync = is_synchronizable(r);
  rep.synchronizable = sync.has_value();
  rep.reset_word = sync;
  if (!rep.definite.finite) rep.non_definite_witness = witness_non_definite(r);
  if (!rep.generalized_definite.finite) rep.non_gen_definite_witness = witness_non_gen_definite(r);
  return rep;
}

nlohmann::json report_to_json(const ClassificationReport& r, const Automaton& m) {
  auto verdict = [](const DefinitenessVerdict& v) {
    if (!v.finite) return json{{"order", "infinite"}};
    return json{{"order", "finite"}, {"k", v.k}};
  };
  auto words = [&](const Word& w) { return json(word_names(m.input_alphabet, w)); };
  auto witness = [&](const PumpWitness& w) {
    return json{{"f", words(w.f)},        {"g", words(w.g)},
                {"h", words(w.h)},        {"a", m.input_alphabet[w.a]},
                {"b", m.input_alphabet[w.b]}, {"s", words(w.s)},
                {"t", words(w.t)},        {"u", words(w.u)}};
  };
  json j{{"reachable_count", r.reachable_count},
         {"is_reduced", r.is_reduced},
         {"reduction_changed", r.reduction_changed},
         {"ergodic", r.ergodic},
         {"period", r.period},
         {"definite", verdict(r.definite)},
         {"generalized_definite", verdict(r.generalized_definite)},
         {"synchronizable", r.synchronizable}};
  if (r.reset_word) j["reset_word"] = words(*r.reset_word);
  if (r.non_definite_witness) j["non_definite_witness"] = witness(*r.non_definite_witness);
  if (r.non_gen_definite_witness) j["non_gen_definite_witness"] = witness(*r.non_gen_definite_witness);
  return j;
}

}  // namespace fsa
