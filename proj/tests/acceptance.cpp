// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
// A clause marked `known` is a documented conflict in the target values; it
// still prints FAIL but does not fail the process. Any other failing clause
// gives a nonzero exit status.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "honeycomb/colorings.hpp"
#include "honeycomb/evaluator.hpp"
#include "honeycomb/lattice.hpp"
#include "honeycomb/phase_space.hpp"
#include "honeycomb/recoupling.hpp"
#include "honeycomb/tl_oracle.hpp"

using namespace honeycomb;

namespace {

const QParam C = QParam::classical();

struct Clause {
  std::string what;
  bool ok;
  std::string known;  // reason, when the clause is expected to fail
};

using Clauses = std::vector<Clause>;

std::string count_str(long long good, long long total) {
  return std::to_string(good) + "/" + std::to_string(total);
}

// Criterion 1
Clauses recoupling_vs_oracle() {
  long long n = 0, good = 0;
  for (int a = 0; a <= 4; ++a, ++n) good += oracle_evaluate(loop_graph(), {a}, C) == delta(a, C);
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 4; ++c)
        if (is_admissible(a, b, c, C)) {
          ++n;
          good += oracle_evaluate(theta_graph(), {a, b, c}, C) == theta(a, b, c, C);
        }
  const PlanarGraph g = tet_graph();
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int e = 0; e <= 4; ++e)
        for (int c = 0; c <= 4; ++c)
          for (int d = 0; d <= 4; ++d)
            for (int f = 0; f <= 4; ++f) {
              if (!is_admissible(a, b, e, C) || !is_admissible(c, d, e, C) || !is_admissible(a, d, f, C) ||
                  !is_admissible(b, c, f, C))
                continue;
              ++n;
              good += oracle_evaluate(g, {a, b, e, c, d, f}, C) == tet(a, b, e, c, d, f, C);
            }
  return {{"delta/theta/tet tuples agree " + count_str(good, n), good == n && n > 0, ""}};
}

// Criterion 2
Clauses bubble_and_schur() {
  Clauses out;
  const PlanarGraph g = tet_graph();
  long long n = 0, good = 0;
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 3; ++c)
        for (int d = 0; d <= 3; ++d)
          for (int e = 0; e <= 3; ++e)
            for (int f = 0; f <= 3; ++f) {
              // The triangle (a,b,e), (c,d,e), (a,d,f) collapses onto the vertex (b,c,f).
              if (!is_admissible(b, c, f, C)) continue;
              ++n;
              good += bubble_move(a, b, c, d, e, f, C) * theta(b, c, f, C) ==
                      oracle_evaluate(g, {a, b, e, c, d, f}, C);
            }
  out.push_back({"bubble move " + count_str(good, n), good == n && n > 0, ""});

  // Two bubbles on a pair of strands x, y: edges x=0, y=1, u=2, v=3, s=4, t=5.
  const PlanarGraph dbl = PlanarGraph::from_rotations(6, {{0, 2, 3}, {1, 3, 2}, {0, 5, 4}, {1, 4, 5}});
  n = good = 0;
  for (int x = 0; x <= 3; ++x)
    for (int y = 0; y <= 3; ++y)
      for (int u = 0; u <= 3; ++u)
        for (int v = 0; v <= 3; ++v)
          for (int s = 0; s <= 3; ++s)
            for (int t = 0; t <= 3; ++t) {
              ++n;
              QScalar want(Rational(0));
              if (x == y && is_admissible(x, u, v, C) && is_admissible(x, s, t, C))
                want = QScalar(Rational(theta(x, u, v, C).rational() * theta(x, s, t, C).rational() /
                                        delta(x, C).rational()));
              good += oracle_evaluate(dbl, {x, y, u, v, s, t}, C) == want;
            }
  out.push_back({"Schur lemma " + count_str(good, n), good == n, ""});
  return out;
}

// Criterion 3
struct Pentagon {
  int c1, c2, c3, c4, c5, p, q, r, s;
};

bool pentagon_admissible(const Pentagon& x, const QParam& P) {
  return is_admissible(x.c1, x.c2, x.p, P) && is_admissible(x.p, x.c3, x.q, P) && is_admissible(x.q, x.c4, x.c5, P) &&
         is_admissible(x.c3, x.c4, x.r, P) && is_admissible(x.c2, x.r, x.s, P) && is_admissible(x.s, x.c5, x.c1, P);
}

// Returns |lhs - rhs| of the pentagon identity.
double pentagon_defect(const Pentagon& x, const QParam& P, bool* exact_equal) {
  auto [c1, c2, c3, c4, c5, p, q, r, s] = x;
  const QScalar lhs = sixj(p, c3, q, c4, c5, r, P) * sixj(c1, c2, p, r, c5, s, P);
  QScalar rhs = P.is_quantum() ? QScalar(Complex()) : QScalar(Rational(0));
  for (int t = 0; t <= 2 * 6; ++t)
    rhs = rhs + sixj(c1, c2, p, c3, q, t, P) * sixj(c1, t, q, c4, c5, s, P) * sixj(c2, c3, t, c4, s, r, P);
  if (exact_equal) *exact_equal = lhs == rhs;
  return std::abs((lhs - rhs).complex());
}

Clauses pentagon_orthogonality() {
  Clauses out;
  for (const QParam& P : {C, QParam::root_of_unity(10)}) {
    std::mt19937 rng(P.is_quantum() ? 10 : 1);
    std::uniform_int_distribution<int> col(0, std::min(6, P.max_color()));
    int found = 0, good = 0;
    double worst = 0;
    while (found < 100) {
      Pentagon x{col(rng), col(rng), col(rng), col(rng), col(rng), col(rng), col(rng), col(rng), col(rng)};
      if (!pentagon_admissible(x, P)) continue;
      ++found;
      bool eq = false;
      const double d = pentagon_defect(x, P, &eq);
      worst = std::max(worst, d);
      good += P.is_quantum() ? d <= 1e-8 : eq;
    }
    std::ostringstream w;
    w << "pentagon " << P.str() << " " << count_str(good, found);
    if (P.is_quantum()) w << " max defect " << worst;
    out.push_back({w.str(), good == found, ""});

    found = good = 0;
    worst = 0;
    while (found < 100) {
      const int a = col(rng), b = col(rng), c = col(rng), d = col(rng), e = col(rng), e2 = col(rng);
      if (!is_admissible(a, b, e, P) || !is_admissible(c, d, e, P) || !is_admissible(a, b, e2, P) ||
          !is_admissible(c, d, e2, P))
        continue;
      ++found;
      QScalar sum = P.is_quantum() ? QScalar(Complex()) : QScalar(Rational(0));
      for (int f = 0; f <= 12; ++f) sum = sum + sixj(a, b, e, c, d, f, P) * sixj(d, a, f, b, c, e2, P);
      const QScalar want = P.is_quantum() ? QScalar(Complex(e == e2 ? 1.0 : 0.0)) : QScalar(Rational(e == e2));
      const double dd = std::abs((sum - want).complex());
      worst = std::max(worst, dd);
      good += P.is_quantum() ? dd <= 1e-8 : sum == want;
    }
    std::ostringstream o;
    o << "orthogonality " << P.str() << " " << count_str(good, found);
    if (P.is_quantum()) o << " max defect " << worst;
    out.push_back({o.str(), good == found, ""});
  }
  return out;
}

std::vector<EdgeColoring> admissible_colorings(const HoneycombNet& h, int cmax, const QParam& p) {
  // One free color per smoothed edge and per closed loop.
  const SmoothNet s = smooth(h);
  std::vector<int> var = s.edge_of_raw;
  int k = static_cast<int>(s.edges.size());
  for (const auto& loop : s.loops) {
    for (int e : loop) var[e] = k;
    ++k;
  }
  std::vector<int> sc(k, 0);
  std::vector<EdgeColoring> out;
  while (true) {
    EdgeColoring c(h.num_edges());
    for (int e = 0; e < h.num_edges(); ++e) c[e] = sc[var[e]];
    if (coloring_admissible(h, c, p)) out.push_back(c);
    int i = 0;
    while (i < k && ++sc[i] > cmax) sc[i++] = 0;
    if (i == k) break;
  }
  return out;
}

EdgeColoring random_admissible(const HoneycombNet& h, int cmax, std::mt19937& rng, const QParam& p) {
  std::bernoulli_distribution coin(0.5);
  while (true) {
    EdgeColoring c(h.num_edges(), 0);
    for (int layer = 0; layer < cmax; ++layer) {
      std::vector<int> parity(h.num_edges(), 0);
      for (int r = 0; r < h.n; ++r)
        for (int col = 0; col < h.n; ++col)
          if (coin(rng))
            for (int e : hex_edges(h, r, col)) parity[e] ^= 1;
      for (int e = 0; e < h.num_edges(); ++e) c[e] += parity[e];
    }
    if (coloring_admissible(h, c, p)) return c;
  }
}

// Criterion 4
Clauses evaluator_vs_oracle() {
  Clauses out;
  for (int n : {1, 2}) {
    const HoneycombNet h = build_h(n);
    const auto cols = admissible_colorings(h, 2, C);
    long long good = 0;
    for (const auto& c : cols) good += evaluate(h, c, C) == oracle_evaluate(h.planar(), c, C);
    out.push_back({"H_" + std::to_string(n) + " exhaustive " + count_str(good, cols.size()),
                   good == static_cast<long long>(cols.size()) && !cols.empty(), ""});
  }
  const HoneycombNet h3 = build_h(3);
  std::mt19937 rng(2024);
  int good = 0;
  for (int k = 0; k < 20; ++k) {
    const auto c = random_admissible(h3, 1, rng, C);
    good += evaluate(h3, c, C) == oracle_evaluate(h3.planar(), c, C);
  }
  out.push_back({"H_3 samples " + count_str(good, 20), good == 20, ""});
  return out;
}

// Criterion 5
Clauses count_targets() {
  Clauses out;
  const std::vector<std::pair<int, std::size_t>> want{{2, 14}, {3, 280}, {4, 18370}};
  for (auto [n, count] : want) {
    const std::size_t got = enumerate_cycles(n).size();
    out.push_back({"cycles(n=" + std::to_string(n) + ")=" + std::to_string(got), got == count, ""});
  }
  out.push_back({"config_count(14,6)=" + config_count(14, 6).get_str(), config_count(14, 6) == 38759, ""});
  out.push_back({"config_count(280,2)=" + config_count(280, 2).get_str(), config_count(280, 2) == 39620, ""});
  const mpz_class big = config_count(18370, 2);
  out.push_back({"config_count(18370,2)=" + big.get_str() + " (target 168737635)", big == 168737635,
                 "the target equals multichoose(18370,2) and omits the 18370 single-cycle configs, "
                 "which the 38759 and 39620 targets include"});
  return out;
}

// Criterion 6
Clauses summation_counts() {
  Clauses out;
  for (int n : {3, 4}) {
    const HoneycombNet h = build_h(n);
    std::mt19937 rng(n);
    EvaluationTrace tr;
    evaluate(h, random_admissible(h, 2, rng, C), C, &tr);
    const long long a = summation_count(n), a_prev = summation_count(n - 1);
    const bool ok = tr.summed_index_count() == a && a == a_prev + 2 * n - 5 &&
                    tr.indices_per_level.at(n) == 2 * n - 5;
    out.push_back({"n=" + std::to_string(n) + " trace indices " + std::to_string(tr.summed_index_count()) +
                       " a_n " + std::to_string(a),
                   ok, ""});
  }
  return out;
}

EvalVector n2_c2() {
  const HoneycombNet h = build_h(2);
  return evaluate_config_range(h, enumerate_cycles(h), 2, C, 0, 119);
}

// Criterion 7
Clauses phase_space_structure() {
  const EvalVector ev = n2_c2();
  TransitionMatrix m = build_matrix(ev);
  rank_states(m);
  const auto blocks = detect_blocks(m, 0.0);
  const auto exact = exact_scores(ev);
  std::vector<int> block_of(m.dim, -1);
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b)
    for (auto x : blocks.blocks[b].members) block_of[x] = static_cast<int>(b);
  bool diag = true, classes = true, spread = true;
  for (std::uint64_t i = 0; i < m.dim; ++i)
    for (std::uint64_t j = 0; j < m.dim; ++j) {
      const bool same = block_of[i] == block_of[j];
      const bool same_mag = abs(ev.values[i].rational()) == abs(ev.values[j].rational());
      if (same && m.entry(i, j) != 1.0f) diag = false;
      if (same != same_mag) classes = false;
      if (same && exact[i] != exact[j]) spread = false;
    }
  // Block diagonal in the ranked order: each block is a contiguous run.
  std::vector<std::uint64_t> pos(m.dim);
  for (std::uint64_t r = 0; r < m.dim; ++r) pos[m.perm[r]] = r;
  bool contiguous = true;
  for (const auto& b : blocks.blocks) {
    std::uint64_t lo = m.dim, hi = 0;
    for (auto x : b.members) lo = std::min(lo, pos[x]), hi = std::max(hi, pos[x]);
    contiguous = contiguous && hi - lo + 1 == b.members.size();
  }
  return {{"dim " + std::to_string(m.dim) + ", " + std::to_string(blocks.blocks.size()) + " blocks", m.dim == 119, ""},
          {"ranked blocks contiguous", contiguous, ""},
          {"intra-block entries 1", diag, ""},
          {"blocks = equal |<H>| classes", classes, ""},
          {"exact intra-block S spread 0", spread, ""}};
}

// Criterion 8
Clauses transition_identity() {
  Clauses out;
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> d(-4, 4);
  int literal = 0, display = 0;
  for (int k = 0; k < 1000; ++k) {
    const QScalar a(Complex(d(rng), d(rng))), b(Complex(d(rng), d(rng)));
    const double na = a.norm(), nb = b.norm();
    const double entry = transition_entry(a, b);
    const double ratio = std::min(na, nb) / std::max(na, nb);
    literal += std::abs(entry - ratio * ratio) <= 1e-12;
    display += std::abs(entry - physical_inner_product(a, b).norm() / std::max(na * na, nb * nb)) <= 1e-12 &&
               std::abs(entry - ratio) <= 1e-12;
  }
  out.push_back({"A_ij = |<e_i,e_j>|^2/max(|e_i|^4,|e_j|^4) = min/max of |e|^2 " + count_str(display, 1000),
                 display == 1000, ""});
  out.push_back({"A_ij = (min/max of |e|^2)^2 " + count_str(literal, 1000), literal == 1000,
                 "the squared form contradicts the defining formula of A_ij and its worked values "
                 "(e = 2, 4 gives 0.25)"});
  const EvalVector ev = n2_c2();
  const TransitionMatrix m = build_matrix(ev);
  bool diag = true, sym = true, range = true;
  for (std::uint64_t i = 0; i < m.dim; ++i) {
    if (!ev.values[i].is_zero()) diag = diag && m.entry(i, i) == 1.0f;
    for (std::uint64_t j = 0; j < m.dim; ++j) {
      sym = sym && m.entry(i, j) == m.entry(j, i);
      range = range && m.entry(i, j) >= 0.0f && m.entry(i, j) <= 1.0f;
    }
  }
  out.push_back({"n=2 c_M=2: diagonal 1", diag, ""});
  out.push_back({"symmetric", sym, ""});
  out.push_back({"entries in [0,1]", range, ""});
  return out;
}

// Criterion 9
Clauses streaming_scores() {
  Clauses out;
  const EvalVector ev = n2_c2();
  const auto dense = build_matrix(ev), stream = build_streaming(ev);
  double worst = 0;
  for (std::uint64_t i = 0; i < dense.dim; ++i)
    worst = std::max(worst, std::abs(dense.S[i] - stream.S[i]) / std::max(1.0, std::abs(dense.S[i])));
  std::ostringstream w;
  w << "n=2 c_M=2 streaming vs materialized, max rel diff " << worst;
  out.push_back({w.str(), worst <= 1e-9, ""});

  const HoneycombNet h = build_h(2);
  const auto cycles = enumerate_cycles(h);
  const EvalVector big = evaluate_config_range(h, cycles, 6, C, 0, 38759);
  const auto t0 = std::chrono::steady_clock::now();
  const auto s = build_streaming(big);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::ostringstream b;
  b << "n=2 c_M=6 streaming: " << s.dim << " scores, stored entries " << s.entries.size() << ", " << secs << "s";
  out.push_back({b.str(), s.dim == 38759 && s.S.size() == 38759 && s.entries.empty(), ""});
  return out;
}

// Criterion 10
Clauses quantum_classical() {
  const QParam q = QParam::root_of_unity(1000000);
  const HoneycombNet h = build_h(2);
  std::mt19937 rng(10);
  int good = 0, nonzero = 0;
  double worst = 0;
  for (int k = 0; k < 10; ++k) {
    const auto c = random_admissible(h, 2, rng, C);
    const double x = evaluate(h, c, C).real();
    const QScalar y = evaluate(h, c, q);
    const double rel = std::abs(y.complex() - x) / std::max(std::abs(x), 1e-300);
    nonzero += x != 0;
    if (x == 0) good += std::abs(y.complex()) <= 1e-6;
    else good += rel <= 1e-6, worst = std::max(worst, rel);
  }
  std::ostringstream o;
  o << "r=1e6 vs classical " << count_str(good, 10) << " (" << nonzero << " nonzero), max rel diff " << worst;
  return {{o.str(), good == 10, ""}};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Clauses()>>> criteria{
      {"recoupling vs oracle, colors <= 4", recoupling_vs_oracle},
      {"bubble move and Schur lemma, colors <= 3", bubble_and_schur},
      {"pentagon and 6j orthogonality", pentagon_orthogonality},
      {"evaluator vs oracle on H_1, H_2, H_3", evaluator_vs_oracle},
      {"cycle and config counts", count_targets},
      {"summation-count recursion", summation_counts},
      {"phase-space block structure", phase_space_structure},
      {"transition-entry identity", transition_identity},
      {"streaming scores", streaming_scores},
      {"quantum/classical consistency", quantum_classical},
  };
  int unexpected = 0, red = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Clauses cl;
    std::string crash;
    try {
      cl = criteria[i].second();
    } catch (const std::exception& e) {
      crash = e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = crash.empty();
    for (const auto& c : cl) pass = pass && c.ok;
    std::printf("criterion %zu: %s  %s (%.2fs)\n", i + 1, pass ? "PASS" : "FAIL", criteria[i].first.c_str(), secs);
    if (!crash.empty()) {
      std::printf("    error: %s\n", crash.c_str());
      ++unexpected;
    }
    for (const auto& c : cl) {
      std::printf("    [%s] %s\n", c.ok ? "ok" : "FAIL", c.what.c_str());
      if (!c.ok && c.known.empty()) ++unexpected;
      if (!c.ok && !c.known.empty()) std::printf("           known conflict: %s\n", c.known.c_str());
    }
    red += !pass;
  }
  std::printf("%d of %zu criteria red, %d unexpected failures\n", red, criteria.size(), unexpected);
  return unexpected == 0 ? 0 : 1;
}
