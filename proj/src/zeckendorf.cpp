#include "fsa/zeckendorf.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "fsa/circuit.hpp"

namespace fsa {

uint64_t fib(int i) {
  if (i < 0 || i > 93) throw GuardrailError("fib supports indices 0..93 (64-bit range)");
  uint64_t a = 0, b = 1;
  for (int k = 0; k < i; ++k) {
    uint64_t c = a + b;
    a = b;
    b = c;
  }
  return a;
}

int zeck_width(const ZeckWord& w) { return (int)w.size() + 1; }

ZeckWord zeck_encode(uint64_t value, int n) {
  if (n < 1) throw ContractError("width must be at least 1");
  if (value > fib(n + 1) - 1) throw ContractError("value out of range for width " + std::to_string(n));
  ZeckWord out;
  for (int i = n; i >= 2; --i) {
    uint64_t f = fib(i);
    if (value >= f) {
      out.push_back(1);
      value -= f;
    } else {
      out.push_back(0);
    }
  }
  if (value != 0) throw ContractError("greedy encoding failed");  // unreachable after range check
  return out;
}

uint64_t zeck_decode(const ZeckWord& w) {
  uint64_t v = 0;
  int n = zeck_width(w);
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i]) v += fib(n - (int)i);
  return v;
}

bool zeck_valid(const ZeckWord& w) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i] != 0 && w[i] != 1) return false;
    if (i + 1 < w.size() && w[i] == 1 && w[i + 1] == 1) return false;
  }
  return true;
}

std::string zeck_to_string(const ZeckWord& w) {
  std::string s;
  for (int d : w) s += (char)('0' + d);
  return s;
}

namespace {

// 256-bit unsigned value, little-endian limbs; enough for Fibonacci numbers
// up to index ~368, i.e. operand widths past 300 digits
struct U256 {
  uint64_t l[4] = {0, 0, 0, 0};

  void add(const U256& o) {
    unsigned __int128 carry = 0;
    for (int i = 0; i < 4; ++i) {
      carry += (unsigned __int128)l[i] + o.l[i];
      l[i] = (uint64_t)carry;
      carry >>= 64;
    }
    if (carry) throw GuardrailError("digit-level oracle overflow (width too large)");
  }
  void sub(const U256& o) {
    unsigned __int128 borrow = 0;
    for (int i = 0; i < 4; ++i) {
      unsigned __int128 d = (unsigned __int128)l[i] - o.l[i] - borrow;
      l[i] = (uint64_t)d;
      borrow = (d >> 64) ? 1 : 0;
    }
  }
  bool operator>=(const U256& o) const {
    for (int i = 3; i >= 0; --i)
      if (l[i] != o.l[i]) return l[i] > o.l[i];
    return true;
  }
};

std::vector<U256> big_fib_table(int top) {
  std::vector<U256> f(top + 1);
  if (top >= 1) f[1].l[0] = 1;
  for (int i = 2; i <= top; ++i) {
    f[i] = f[i - 1];
    f[i].add(f[i - 2]);
  }
  return f;
}

}  // namespace

ZeckWord zeck_add_oracle(const ZeckWord& a, const ZeckWord& b) {
  if (!zeck_valid(a) || !zeck_valid(b)) throw ContractError("operands must be valid digit words");
  if (a.size() != b.size()) throw ContractError("operands must share a width");
  int n = zeck_width(a), wide = n + 2;
  if (wide + 1 > 360) throw GuardrailError("digit-level oracle supports widths up to 357");
  std::vector<U256> f = big_fib_table(wide + 1);
  U256 v;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i]) v.add(f[n - (int)i]);
    if (b[i]) v.add(f[n - (int)i]);
  }
  ZeckWord out;
  for (int i = wide; i >= 2; --i) {
    if (v >= f[i]) {
      out.push_back(1);
      v.sub(f[i]);
    } else {
      out.push_back(0);
    }
  }
  return out;
}

// ------------------------------------------------------------------ passes
//
// The three tables are generated from small step functions (carry
// elimination; buffered re-normalization with start phases; relative landing
// registers) by reachability closure. Transitions never exercised by valid
// digit-sum inputs are totalized by saturating the register fields.

namespace {

struct P1State {
  int c1 = 0, c2 = 0;
  auto operator<=>(const P1State&) const = default;
};
struct P1Out {
  int t, m;
};

std::pair<P1State, P1Out> p1_step(P1State st, int s) {
  int t = s + st.c1;
  P1State nx{st.c2, 0};
  int m = 0;
  if (t >= 2) {
    t -= 2;
    m = 1;
    nx.c2 = 1;
  }
  return {nx, {t, m}};
}

struct P2State {
  int phase = 1, vbuf = 0, vbuf2 = 0, debtbuf = 0, mprev = 0, cin = 0;
  auto operator<=>(const P2State&) const = default;
};
struct P2Out {
  int v, d, v2, tag;
};

std::pair<P2State, P2Out> p2_step(P2State st, int b, int m) {
  int eff = b + st.mprev + st.cin;
  int vbuf = st.vbuf;
  if (st.phase == 2 && m == 1) {
    // the cell-2 elimination's down part (weight F_1 = F_2) lands here
    ++vbuf;
    if (vbuf == 2) {
      vbuf = 0;
      ++eff;
    }
  }
  eff = std::min(eff, 3);
  int carry = 0, newdebt = 0, v = 0;
  if (eff >= 2) {
    v = eff - 2;
    carry = 1;
    if (vbuf == 1) {
      v = std::min(v + 1, 1);
      vbuf = 0;
    } else if (st.phase >= 3) {
      newdebt = 1;
    } else if (st.phase == 2) {
      vbuf = 1;
    }
    // phase 1: the down part has weight F_0 = 0 and is dropped
  } else if (eff == 1) {
    if (vbuf == 1) {
      vbuf = 0;
      v = 0;
      carry = 1;
    } else {
      v = 1;
    }
  }
  int debtbuf = st.debtbuf;
  if (newdebt && debtbuf) {
    // debts at adjacent cells merge: F_{j-1} + F_{j-2} = F_j
    newdebt = 0;
    debtbuf = 0;
    vbuf = std::min(vbuf + 1, 1);
  }
  int tag = st.phase <= 3 ? st.phase : 0;
  P2Out out{vbuf, debtbuf, st.vbuf2, tag};
  P2State nx{std::min(st.phase + 1, 4), v, vbuf, newdebt, m, carry};
  return {nx, out};
}

struct P3State {
  int vreg = 0, l1 = 0, l2 = 0, l3 = 0, k1 = 0, k2 = 0;
  auto operator<=>(const P3State&) const = default;
};

std::pair<P3State, int> p3_step(P3State st, P2Out in) {
  int l0 = st.l1, l1 = st.l2, l2 = st.l3, l3 = 0;
  int k0 = st.k1, k1 = st.k2, k2 = 0;
  int vreg = st.vreg;
  if (k0) vreg = 0;
  int vm = k1 ? 0 : in.v;
  int vp2 = k2 ? 0 : in.v2;
  if (in.d) ++l3;
  int fv = std::min(vreg + l0, 1);
  if (l1) {
    if (vm == 1) {
      // collision one cell below: 2 F_c = F_{c+1} + F_{c-2}
      fv = 1;
      l1 = 0;
      k1 = 1;
      if (in.tag == 3)
        ++l2;  // the cell-0 landing carries weight F_1 = F_2: redirect up
      else if (in.tag == 2)
        ;  // cell -1 has weight F_0 = 0: dropped
      else
        ++l3;
    } else if (vp2 == 1) {
      // landing meets the value one further down: F_c + F_{c-1} = F_{c+1}
      fv = 1;
      l1 = 0;
      k2 = 1;
    } else if (l2) {
      // adjacent landings likewise merge upward
      fv = 1;
      l1 = 0;
      l2 = 0;
    }
  }
  P3State nx{vm, std::min(l1, 1), std::min(l2, 1), std::min(l3, 1), k1, k2};
  return {nx, fv};
}

template <class State, class Letter, class Step>
Transducer build_pass(const std::vector<std::string>& in_names, const std::vector<Letter>& in_letters,
                      State init, Step step, std::string (*state_name)(const State&),
                      std::string (*out_name)(const decltype(step(init, in_letters[0]).second)&)) {
  std::map<State, int> ids;
  std::vector<State> order{init};
  ids[init] = 0;
  struct Edge {
    int next, out;
  };
  std::vector<std::vector<Edge>> table;
  std::vector<std::string> out_names;
  std::map<std::string, int> out_ids;
  for (size_t head = 0; head < order.size(); ++head) {
    State st = order[head];
    table.push_back(std::vector<Edge>(in_letters.size()));
    for (size_t a = 0; a < in_letters.size(); ++a) {
      auto [nx, out] = step(st, in_letters[a]);
      auto [it, fresh] = ids.insert({nx, (int)order.size()});
      if (fresh) order.push_back(nx);
      std::string on = out_name(out);
      auto [oit, ofresh] = out_ids.insert({on, (int)out_names.size()});
      if (ofresh) out_names.push_back(on);
      table[head][a] = {it->second, oit->second};
    }
  }
  Transducer t;
  t.input_alphabet = in_names;
  t.output_alphabet = out_names;
  for (const State& st : order) t.states.push_back(state_name(st));
  t.initial = 0;
  t.delta.assign(order.size(), std::vector<int>(in_names.size(), 0));
  t.lambda.assign(order.size(), std::vector<int>(in_names.size(), 0));
  for (size_t q = 0; q < order.size(); ++q)
    for (size_t a = 0; a < in_names.size(); ++a) {
      t.delta[q][a] = table[q][a].next;
      t.lambda[q][a] = table[q][a].out;
    }
  return t;
}

std::string p1_state_name(const P1State& s) { return "c" + std::to_string(s.c1) + std::to_string(s.c2); }
std::string p1_out_name(const P1Out& o) { return std::to_string(o.t) + std::to_string(o.m); }
std::string p2_state_name(const P2State& s) {
  return std::to_string(s.phase) + "-" + std::to_string(s.vbuf) + std::to_string(s.vbuf2) +
         std::to_string(s.debtbuf) + std::to_string(s.mprev) + std::to_string(s.cin);
}
std::string p2_out_name(const P2Out& o) {
  return std::to_string(o.v) + std::to_string(o.d) + std::to_string(o.v2) + std::to_string(o.tag);
}
std::string p3_state_name(const P3State& s) {
  return std::to_string(s.vreg) + std::to_string(s.l1) + std::to_string(s.l2) + std::to_string(s.l3) +
         std::to_string(s.k1) + std::to_string(s.k2);
}
std::string p3_out_name(const int& o) { return std::to_string(o); }

P2Out parse_p2_letter(const std::string& s) {
  return {s[0] - '0', s[1] - '0', s[2] - '0', s[3] - '0'};
}

Pipeline build_pipeline() {
  Pipeline pl;
  pl.p1 = build_pass<P1State, int>({"0", "1", "2"}, {0, 1, 2}, P1State{}, p1_step, p1_state_name,
                                   p1_out_name);
  pl.p1.direction = Direction::LeftToRight;

  std::vector<std::pair<int, int>> p2_in;
  for (const std::string& l : pl.p1.output_alphabet) p2_in.push_back({l[0] - '0', l[1] - '0'});
  pl.p2 = build_pass<P2State, std::pair<int, int>>(
      pl.p1.output_alphabet, p2_in, P2State{},
      [](P2State st, std::pair<int, int> l) { return p2_step(st, l.first, l.second); }, p2_state_name,
      p2_out_name);
  pl.p2.direction = Direction::RightToLeft;

  std::vector<P2Out> p3_in;
  for (const std::string& l : pl.p2.output_alphabet) p3_in.push_back(parse_p2_letter(l));
  pl.p3 = build_pass<P3State, P2Out>(pl.p2.output_alphabet, p3_in, P3State{}, p3_step, p3_state_name,
                                     p3_out_name);
  pl.p3.direction = Direction::LeftToRight;

  pl.p1.validate();
  pl.p2.validate();
  pl.p3.validate();
  return pl;
}

}  // namespace

const Pipeline& zeck_pipeline() {
  static const Pipeline pl = build_pipeline();
  return pl;
}

ZeckWord pipeline_add(const ZeckWord& a, const ZeckWord& b) {
  if (a.size() != b.size()) throw ContractError("operands must share a width");
  if (!zeck_valid(a) || !zeck_valid(b)) throw ContractError("operands must be valid digit words");
  const Pipeline& pl = zeck_pipeline();
  // three leading pad cells absorb the growth; the top output digit is
  // provably zero and dropped, leaving width n+2
  Word s(a.size() + 3, 0);
  for (size_t i = 0; i < a.size(); ++i) s[i + 3] = a[i] + b[i];
  Word o1 = run_transducer(pl.p1, s);
  Word o2 = run_transducer(pl.p2, o1);
  Word o3 = run_transducer(pl.p3, o2);
  ZeckWord out;
  for (size_t i = 0; i < o3.size(); ++i) {
    int digit = pl.p3.output_alphabet[o3[i]][0] - '0';
    if (i == 0) {
      if (digit != 0) throw ContractError("pipeline contract: top pad digit must stay zero");
      continue;
    }
    out.push_back(digit);
  }
  if (!zeck_valid(out)) throw ContractError("pipeline contract: output violates the digit invariant");
  return out;
}

// ------------------------------------------------------------------ reset report

namespace {

struct PassView {
  const Transducer* t;
  int zero_in;   // input letter carried by an all-zero stream
  int zero_out;  // output letter of the synchronized state under zero_in
  std::string name;
};

std::vector<std::pair<int, Word>> reachable_with_witness(const Transducer& t) {
  struct Node {
    int q, parent, letter;
  };
  std::vector<Node> nodes{{t.initial, -1, -1}};
  std::vector<char> seen(t.nq(), 0);
  seen[t.initial] = 1;
  std::vector<std::pair<int, Word>> out;
  auto emit = [&](int idx) {
    Word w;
    for (int i = idx; nodes[i].parent != -1; i = nodes[i].parent) w.push_back(nodes[i].letter);
    std::reverse(w.begin(), w.end());
    out.push_back({nodes[idx].q, w});
  };
  emit(0);
  for (size_t head = 0; head < nodes.size(); ++head)
    for (int a = 0; a < t.na(); ++a) {
      int r = t.delta[nodes[head].q][a];
      if (!seen[r]) {
        seen[r] = 1;
        nodes.push_back({r, (int)head, a});
        emit((int)nodes.size() - 1);
      }
    }
  return out;
}

std::string word_str(const Transducer& t, const Word& w) {
  std::string s;
  for (int a : w) {
    if (!s.empty()) s += " ";
    s += t.input_alphabet[a];
  }
  return s.empty() ? "(empty)" : s;
}

PassCheck check_pass(const PassView& pv, int required_reset, int shrink_slack) {
  const Transducer& t = *pv.t;
  PassCheck pc;
  pc.name = pv.name;
  pc.required_reset_len = required_reset;
  auto reach = reachable_with_witness(t);

  // reset: required_reset zero letters must drive every reachable state home
  pc.reset_ok = true;
  for (auto& [q, wit] : reach) {
    int s = q;
    for (int i = 0; i < required_reset; ++i) s = t.delta[s][pv.zero_in];
    if (s != t.initial) {
      pc.reset_ok = false;
      if (pc.reset_counterexample.empty())
        pc.reset_counterexample = "state " + t.states[q] + " (reached by: " + word_str(t, wit) +
                                  ") not reset by " + std::to_string(required_reset) + " zeros";
    }
  }
  // measured horizon for collapsing every reachable state to one common
  // state under zeros (the common state need not be the initial one)
  pc.measured_sync_len = -1;
  for (int z = 1; z <= 12 && pc.measured_sync_len == -1; ++z) {
    int common = -1;
    bool all = true;
    for (auto& [q, wit] : reach) {
      int s = q;
      for (int i = 0; i < z; ++i) s = t.delta[s][pv.zero_in];
      if (common == -1) common = s;
      if (s != common) all = false;
    }
    if (all) pc.measured_sync_len = z;
  }
  // shrink: z zeros in (z >= shrink_slack + 1) must yield >= z - shrink_slack
  // trailing zeros out
  pc.shrink_ok = true;
  for (int z = shrink_slack + 1; z <= 10; ++z) {
    for (auto& [q, wit] : reach) {
      int s = q;
      int trailing = 0;
      std::vector<int> outs;
      for (int i = 0; i < z; ++i) {
        outs.push_back(t.lambda[s][pv.zero_in]);
        s = t.delta[s][pv.zero_in];
      }
      for (auto it = outs.rbegin(); it != outs.rend() && *it == pv.zero_out; ++it) ++trailing;
      if (trailing < z - shrink_slack) {
        pc.shrink_ok = false;
        if (pc.shrink_counterexample.empty())
          pc.shrink_counterexample = "state " + t.states[q] + " (reached by: " + word_str(t, wit) +
                                     "): " + std::to_string(z) + " zeros in gave only " +
                                     std::to_string(trailing) + " trailing zeros out";
      }
    }
  }
  return pc;
}

}  // namespace

ResetReport check_reset_properties(const Pipeline& pl) {
  ResetReport rep;
  // zero letters along the chain: the steady outputs of synchronized states
  int z1_in = pl.p1.letter_index("0");
  int z1_out = pl.p1.lambda[pl.p1.initial][z1_in];
  int z2_in = pl.p2.letter_index(pl.p1.output_alphabet[z1_out]);
  // pass 2's generic zero output comes from its steady (post-start) phase
  int p2_steady = pl.p2.initial;
  for (int i = 0; i < 6; ++i) p2_steady = pl.p2.delta[p2_steady][z2_in];
  int z2_out = pl.p2.lambda[p2_steady][z2_in];
  int z3_in = pl.p3.letter_index(pl.p2.output_alphabet[z2_out]);
  int p3_steady = pl.p3.initial;
  for (int i = 0; i < 6; ++i) p3_steady = pl.p3.delta[p3_steady][z3_in];
  int z3_out = pl.p3.lambda[p3_steady][z3_in];

  rep.pass[0] = check_pass({&pl.p1, z1_in, z1_out, "pass 1"}, 3, 2);
  rep.pass[1] = check_pass({&pl.p2, z2_in, z2_out, "pass 2"}, 2, 1);
  rep.pass[2] = check_pass({&pl.p3, z3_in, z3_out, "pass 3"}, 2, 1);
  // five zeros reset the whole chain iff every per-pass budget holds:
  // 5 -> >=3 zeros into pass 2 -> >=2 into pass 3, each run resetting its pass
  rep.composite_ok = true;
  for (const PassCheck& pc : rep.pass) rep.composite_ok = rep.composite_ok && pc.reset_ok && pc.shrink_ok;
  rep.all_ok = rep.composite_ok;
  return rep;
}

std::string ResetReport::text() const {
  std::ostringstream os;
  for (const PassCheck& pc : pass) {
    os << pc.name << ": reset by " << pc.required_reset_len
       << " zeros: " << (pc.reset_ok ? "ok" : "FAIL") << " (measured horizon: ";
    if (pc.measured_sync_len == -1)
      os << ">12";
    else
      os << pc.measured_sync_len;
    os << ")";
    if (!pc.reset_ok) os << "\n  counterexample: " << pc.reset_counterexample;
    os << "\n" << pc.name << ": zero-run shrink: " << (pc.shrink_ok ? "ok" : "FAIL");
    if (!pc.shrink_ok) os << "\n  counterexample: " << pc.shrink_counterexample;
    os << "\n";
  }
  os << "composite five-zero reset: " << (composite_ok ? "ok" : "FAIL") << "\n";
  return os.str();
}

// ------------------------------------------------------------------ sampler

namespace {

// floor(2^64 / phi^2): the limit of F_m / F_{m+2}
constexpr uint64_t kPhi2Threshold = 7046029254386353130ULL;

uint64_t ratio_threshold(int num_idx, int den_idx) {
  if (den_idx > 93) return kPhi2Threshold;
  unsigned __int128 n = fib(num_idx);
  return (uint64_t)((n << 64) / fib(den_idx));
}

}  // namespace

ZeckWord markov_sample(int n, SplitMix64& rng) {
  if (n < 2) throw ContractError("sampler requires width >= 2");
  ZeckWord w(n - 1, 0);
  // digits a_2..a_n, sampled in that order (stored back to front)
  int prev = 0;
  for (int k = 2; k <= n; ++k) {
    int digit = 0;
    if (prev == 1) {
      digit = 0;
    } else {
      uint64_t thr = k == 2 ? ratio_threshold(n - 1, n + 1) : ratio_threshold(n - k + 1, n - k + 3);
      digit = rng.bernoulli_u64(thr) ? 1 : 0;
    }
    w[n - k] = digit;
    prev = digit;
  }
  return w;
}

ZeckWord markov_sample(int n, uint64_t seed) {
  SplitMix64 rng(seed);
  return markov_sample(n, rng);
}

std::pair<uint64_t, uint64_t> markov_word_prob(const ZeckWord& w) {
  int n = zeck_width(w);
  if (n > 40) throw GuardrailError("exact chain probabilities supported up to width 40");
  if (!zeck_valid(w)) return {0, 1};
  unsigned __int128 num = 1, den = 1;
  auto mul = [&](uint64_t pn, uint64_t pd) {
    num *= pn;
    den *= pd;
    unsigned __int128 a = num, b = den;
    while (b) {
      auto t = a % b;
      a = b;
      b = t;
    }
    if (a > 1) {
      num /= a;
      den /= a;
    }
  };
  int prev = 0;
  for (int k = 2; k <= n; ++k) {
    int digit = w[n - k];
    if (prev == 1) {
      if (digit != 0) return {0, 1};
      // probability 1
    } else {
      uint64_t pn = k == 2 ? fib(n - 1) : fib(n - k + 1);
      uint64_t pd = k == 2 ? fib(n + 1) : fib(n - k + 3);
      if (digit == 1)
        mul(pn, pd);
      else
        mul(pd - pn, pd);
    }
    prev = digit;
  }
  return {(uint64_t)num, (uint64_t)den};
}

double markov_marginal_one(int n, int k) {
  return (double)fib(k - 1) * (double)fib(n - k + 1) / (double)fib(n + 1);
}

std::pair<uint64_t, uint64_t> zero_run_prob(int n, int j, int k) {
  if (j < 2 || k < 1 || j + k - 1 > n) throw ContractError("zero-run positions out of range");
  // zeroing digits a_j..a_{j+k-1} splits the word into independent segments
  // of lengths j-2 and n-j-k+1; a length-L segment has fib(L+2) valid words
  uint64_t count = fib((j - 2) + 2) * fib((n - j - k + 1) + 2);
  uint64_t total = fib(n + 1);
  uint64_t g = std::gcd(count, total);
  return {count / g, total / g};
}

// ------------------------------------------------------------------ chained delay sim

SimResult pipeline_delay_sim(int n, int trials, uint64_t seed) {
  if (trials < 1) throw ContractError("simulation requires at least one trial");
  if (n < 2) throw ContractError("width must be at least 2");
  const Pipeline& pl = zeck_pipeline();
  int W = (n - 1) + 3;  // cells, including the three growth pads
  // the three passes share one line: cell c sits at position c
  StepPos rev = [W](int m) { return W - m + 1; };
  StepPos fwd = [](int m) { return m; };
  Circuit c1 = synth_standard_transducer(pl.p1, W, Encoding::Closure, 1.0, rev);
  Circuit c2 = synth_standard_transducer(pl.p2, W, Encoding::Closure, 1.0, fwd);
  Circuit c3 = synth_standard_transducer(pl.p3, W, Encoding::Closure, 1.0, rev);

  SimResult res;
  res.automaton = "ZECK_PIPELINE";
  res.n = n;
  res.trials = trials;
  res.seed = seed;
  res.model = "zeckendorf";
  res.delays.assign(trials, 0.0);

  auto scan = [](const Transducer& t, const Word& x) {
    // processing-order outputs (x already in processing order)
    Word out;
    out.reserve(x.size());
    int q = t.initial;
    for (int a : x) {
      out.push_back(t.lambda[q][a]);
      q = t.delta[q][a];
    }
    return out;
  };

  int nthreads = std::min(thread_cap(), trials);
  auto worker = [&](int t0, int stride) {
    for (int t = t0; t < trials; t += stride) {
      SplitMix64 rng = substream(seed, (uint64_t)t);
      ZeckWord a = markov_sample(n, rng), b = markov_sample(n, rng);
      // pass 1 scans cells W..1 (most significant first)
      Word x1(W, 0);
      for (int i = 0; i < n - 1; ++i) x1[i + 3] = a[i] + b[i];
      Word o1 = scan(pl.p1, x1);
      SettleProfile s1 = settle(c1, x1);
      // pass 2 scans cells 1..W
      Word x2(o1.rbegin(), o1.rend());
      Word o2 = scan(pl.p2, x2);
      std::vector<double> init2((size_t)W * c2.na, kNever);
      for (int m = 1; m <= W; ++m)
        init2[(size_t)(m - 1) * c2.na + x2[m - 1]] = output_rise(c1, s1, W - m + 1, x2[m - 1]);
      SettleProfile s2 = settle(c2, x2, &init2);
      // pass 3 scans cells W..1 again
      Word x3(o2.rbegin(), o2.rend());
      Word o3 = scan(pl.p3, x3);
      std::vector<double> init3((size_t)W * c3.na, kNever);
      for (int m = 1; m <= W; ++m)
        init3[(size_t)(m - 1) * c3.na + x3[m - 1]] = output_rise(c2, s2, W - m + 1, x3[m - 1]);
      SettleProfile s3 = settle(c3, x3, &init3);
      double d = settle_delay(c3, s3, o3);
      if (d == kNever) throw ContractError("pipeline circuit failed to settle");
      res.delays[t] = d;
    }
  };
  if (nthreads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int th = 0; th < nthreads; ++th) pool.emplace_back(worker, th, nthreads);
    for (auto& th : pool) th.join();
  }
  res.finalize();
  return res;
}

}  // namespace fsa
