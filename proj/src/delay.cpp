#include "fsa/delay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <thread>

namespace fsa {

SettleProfile settle(const Circuit& c, const Word& x, const std::vector<double>* init) {
  if ((int)x.size() != c.n) throw ContractError("input word length must equal the circuit's step count");
  SettleProfile p;
  p.rise.assign(c.gates.size(), kNever);
  for (int m = 1; m <= c.n; ++m)
    for (int a = 0; a < c.na; ++a) {
      double r = init ? (*init)[(size_t)(m - 1) * c.na + a] : (a == x[m - 1] ? 0.0 : kNever);
      p.rise[c.in_id(m, a)] = r;
    }
  for (const Gate& g : c.gates) {
    auto arrival = [&](int i) {
      const Gate& f = c.gates[g.fan_in[i]];
      double r = p.rise[f.id];
      return r == kNever ? kNever : r + c.wire_coeff * std::abs(g.position - f.position);
    };
    switch (g.kind) {
      case GateKind::Input:
        break;  // seeded above
      case GateKind::Const1:
        p.rise[g.id] = 0.0;
        break;
      case GateKind::And:
        p.rise[g.id] = 1.0 + std::max(arrival(0), arrival(1));
        break;
      case GateKind::Or: {
        double r = std::min(arrival(0), arrival(1));
        p.rise[g.id] = r == kNever ? kNever : 1.0 + r;
        break;
      }
      case GateKind::Output: {
        double r = arrival(0);
        p.rise[g.id] = r == kNever ? kNever : 1.0 + r;
        break;
      }
      case GateKind::Not:
        throw ContractError("monotone settling cannot evaluate NOT gates");
    }
  }
  return p;
}

double output_rise(const Circuit& c, const SettleProfile& p, int m, int b) {
  int g = c.out_id(m, b);
  return g == -1 ? kNever : p.rise[g];
}

double settle_delay(const Circuit& c, const SettleProfile& p, const Word& expected) {
  if ((int)expected.size() != c.n) throw ContractError("expected trace length must equal the step count");
  double d = 0;
  for (int m = 1; m <= c.n; ++m) d = std::max(d, output_rise(c, p, m, expected[m - 1]));
  return d;
}

int suffix_determination(const Automaton& m, const Word& x, int pos) {
  if (pos < 1 || pos > (int)x.size()) throw ContractError("position out of range");
  int target = m.omega[run(m, m.initial, Word(x.begin(), x.begin() + pos))];
  int nq = m.nq();
  // comp[q] = state after reading the current suffix from q
  std::vector<int> comp(nq), next(nq);
  for (int q = 0; q < nq; ++q) comp[q] = q;
  for (int j = 0;; ++j) {
    bool forced = true;
    for (int q = 0; q < nq && forced; ++q) forced = m.omega[comp[q]] == target;
    if (forced) return j;
    if (j == pos) return pos;  // no proper suffix suffices; the prefix does
    int a = x[pos - 1 - j];
    for (int q = 0; q < nq; ++q) next[q] = comp[m.delta[q][a]];
    comp.swap(next);
  }
}

void SimResult::finalize() {
  trials = (int)delays.size();
  if (trials == 0) throw ContractError("simulation requires at least one trial");
  std::vector<double> s = delays;
  std::sort(s.begin(), s.end());
  auto quant = [&](double q) {
    int idx = (int)std::ceil(q * trials) - 1;
    return s[std::clamp(idx, 0, trials - 1)];
  };
  mean = 0;
  for (double d : delays) mean += d;
  mean /= trials;
  p50 = quant(0.50);
  p90 = quant(0.90);
  p99 = quant(0.99);
  max = s.back();
  double lg = std::log2((double)n);
  auto tail = [&](double d) {
    int c = 0;
    for (double v : delays)
      if (v > d * lg) ++c;
    return (double)c / trials;
  };
  tail_d2 = tail(2);
  tail_d4 = tail(4);
  tail_d8 = tail(8);
}

std::string SimResult::csv_header() {
  return "automaton,n,trials,seed,model,mean,p50,p90,p99,max,tail_d2,tail_d4,tail_d8";
}

std::string SimResult::csv_row() const {
  char buf[512];
  std::snprintf(buf, sizeof(buf), "%s,%d,%d,%llu,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f",
                automaton.c_str(), n, trials, (unsigned long long)seed, model.c_str(), mean, p50, p90,
                p99, max, tail_d2, tail_d4, tail_d8);
  return buf;
}

int thread_cap() {
  if (const char* env = std::getenv("FSA_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? (int)hw : 1;
}

SimResult simulate_average(const Automaton& m, int n, int trials, InputModel model, uint64_t seed,
                           Encoding enc, double wire_coeff) {
  if (trials < 1) throw ContractError("simulation requires at least one trial");
  Circuit c = synth_standard(m, n, enc, wire_coeff);
  SimResult res;
  res.n = n;
  res.trials = trials;
  res.seed = seed;
  res.model = "uniform";
  res.delays.assign(trials, 0.0);

  int nthreads = std::min(thread_cap(), trials);
  auto worker = [&](int t0, int stride) {
    Word x(n);
    for (int t = t0; t < trials; t += stride) {
      SplitMix64 rng = substream(seed, (uint64_t)t);
      for (int i = 0; i < n; ++i) x[i] = (int)rng.below((uint64_t)m.na());
      SettleProfile p = settle(c, x);
      res.delays[t] = settle_delay(c, p, output_trace(m, x));
    }
  };
  (void)model;
  if (nthreads == 1) {
    worker(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t, nthreads);
    for (auto& th : pool) th.join();
  }
  res.finalize();
  return res;
}

std::set<int> dependence_set_exact(const Automaton& m, int n, int pos) {
  if (pos < 1 || pos > n) throw ContractError("output position out of range");
  int nq = m.nq();
  // forward: states reachable by words of exact length i
  std::vector<std::vector<char>> reach(pos);
  reach[0].assign(nq, 0);
  reach[0][m.initial] = 1;
  for (int i = 1; i < pos; ++i) {
    reach[i].assign(nq, 0);
    for (int q = 0; q < nq; ++q)
      if (reach[i - 1][q])
        for (int a = 0; a < m.na(); ++a) reach[i][m.delta[q][a]] = 1;
  }
  // backward: pairs distinguishable by a continuation of exact length l
  std::vector<char> dist(nq * nq, 0);
  for (int p = 0; p < nq; ++p)
    for (int q = p + 1; q < nq; ++q)
      if (m.omega[p] != m.omega[q]) dist[p * nq + q] = 1;
  std::set<int> out;
  auto scan = [&](int i) {
    // position i relevant iff some state reachable at i-1 splits, under two
    // letters, into a pair distinguished by exactly pos-i further letters
    for (int q = 0; q < nq; ++q) {
      if (!reach[i - 1][q]) continue;
      for (int a = 0; a < m.na(); ++a)
        for (int b = a + 1; b < m.na(); ++b) {
          int r = m.delta[q][a], s = m.delta[q][b];
          if (r == s) continue;
          if (r > s) std::swap(r, s);
          if (dist[r * nq + s]) {
            out.insert(i);
            return;
          }
        }
    }
  };
  for (int l = 0; l <= pos - 1; ++l) {
    scan(pos - l);
    // advance to exact length l+1
    std::vector<char> next(nq * nq, 0);
    for (int p = 0; p < nq; ++p)
      for (int q = p + 1; q < nq; ++q)
        for (int a = 0; a < m.na(); ++a) {
          int r = m.delta[p][a], s = m.delta[q][a];
          if (r == s) continue;
          if (r > s) std::swap(r, s);
          if (dist[r * nq + s]) {
            next[p * nq + q] = 1;
            break;
          }
        }
    dist.swap(next);
  }
  return out;
}

std::set<int> dependence_set_bruteforce(const Automaton& m, int n, int pos) {
  if (pos < 1 || pos > n) throw ContractError("output position out of range");
  double words = std::pow((double)m.na(), (double)n);
  if (words > (double)(1 << 20))
    throw GuardrailError("bruteforce enumeration exceeds the cap of 2^20 = " +
                         std::to_string(1 << 20) + " words");
  std::set<int> out;
  Word x(n, 0);
  std::vector<int> st(pos + 1);
  for (;;) {
    st[0] = m.initial;
    for (int i = 1; i <= pos; ++i) st[i] = m.delta[st[i - 1]][x[i - 1]];
    int base = m.omega[st[pos]];
    for (int i = 1; i <= pos; ++i) {
      if (out.count(i)) continue;
      for (int a = 0; a < m.na(); ++a) {
        if (a == x[i - 1]) continue;
        int q = m.delta[st[i - 1]][a];
        for (int j = i + 1; j <= pos; ++j) q = m.delta[q][x[j - 1]];
        if (m.omega[q] != base) {
          out.insert(i);
          break;
        }
      }
    }
    int i = n - 1;
    while (i >= 0 && x[i] == m.na() - 1) x[i--] = 0;
    if (i < 0) break;
    ++x[i];
  }
  return out;
}

std::string growth_model_name(GrowthModel m) {
  switch (m) {
    case GrowthModel::Constant:
      return "constant";
    case GrowthModel::Log:
      return "log";
    case GrowthModel::Linear:
      return "linear";
  }
  return "?";
}

GrowthFit fit_growth(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 4) throw ContractError("growth fit requires at least 4 points");
  for (size_t i = 1; i < points.size(); ++i)
    if (points[i].first <= points[i - 1].first)
      throw ContractError("growth fit requires strictly increasing n");
  if (points.back().first < 8 * points.front().first)
    throw ContractError("growth fit requires n to span at least 3 doublings");
  double vnorm = 0;
  for (auto& [n, v] : points) vnorm += v * v;
  if (vnorm == 0) vnorm = 1;
  GrowthFit fit;
  double best = kNever;
  for (int mi = 0; mi < 3; ++mi) {
    double sb2 = 0, svb = 0;
    for (auto& [n, v] : points) {
      double b = mi == 0 ? 1.0 : mi == 1 ? std::log2(n) : n;
      sb2 += b * b;
      svb += v * b;
    }
    double coef = svb / sb2;
    double resid = 0;
    for (auto& [n, v] : points) {
      double b = mi == 0 ? 1.0 : mi == 1 ? std::log2(n) : n;
      resid += (v - coef * b) * (v - coef * b);
    }
    resid /= vnorm;
    fit.residual[mi] = resid;
    if (resid < best) {
      best = resid;
      fit.model = (GrowthModel)mi;
      fit.coefficient = coef;
    }
  }
  return fit;
}

}  // namespace fsa
