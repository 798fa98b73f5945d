#include <doctest.h>

#include <random>

#include "honeycomb/evaluator.hpp"
#include "honeycomb/tl_oracle.hpp"

using namespace honeycomb;

namespace {

// Every admissible coloring of net with colors <= cmax, built from colors on
// the smoothed edges.
std::vector<EdgeColoring> admissible_colorings(const HoneycombNet& h, int cmax, const QParam& p) {
  const SmoothNet s = smooth(h);
  const int k = static_cast<int>(s.edges.size());
  std::vector<int> sc(k, 0);
  std::vector<EdgeColoring> out;
  while (true) {
    EdgeColoring c(h.num_edges());
    for (int e = 0; e < h.num_edges(); ++e) c[e] = sc[s.edge_of_raw[e]];
    if (coloring_admissible(h, c, p)) out.push_back(c);
    int i = 0;
    while (i < k && ++sc[i] > cmax) sc[i++] = 0;
    if (i == k) break;
  }
  return out;
}

// Sum of cmax even subgraphs, each a symmetric difference of random hexagon
// boundaries; always admissible classically.
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

}  // namespace

TEST_CASE("bubble move") {
  const QParam p = QParam::classical();
  CHECK(bubble_move(1, 1, 1, 1, 2, 3, p).is_zero());
  // Collapsing the triangle of a tetrahedron leaves a theta net.
  for (auto t : std::vector<TetArgs>{{1, 1, 2, 1, 1, 2}, {2, 2, 2, 2, 2, 2}, {1, 2, 1, 2, 1, 3}, {2, 1, 1, 2, 1, 1}}) {
    auto [a, b, e, c, d, f] = t;
    QScalar lhs = bubble_move(a, b, c, d, e, f, p) * theta(b, c, f, p);
    CHECK(lhs == oracle_evaluate(tet_graph(), {a, b, e, c, d, f}, p));
  }
  CHECK(bubble_move(1, 1, 1, 1, 2, 2, QParam::root_of_unity(7)) ==
        QScalar(sixj(1, 1, 2, 1, 1, 2, QParam::root_of_unity(7)).complex() / delta(2, QParam::root_of_unity(7)).complex() *
                theta(1, 1, 2, QParam::root_of_unity(7)).complex()));
}

TEST_CASE("iota on coefficient terms") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pos(-6, 6), lv(-1, 5), let(0, 4);
  const char letters[] = {'a', 'b', 'c', 'd', 'e'};
  for (int trial = 0; trial < 50; ++trial) {
    CoeffTerm t;
    Factor f{FactorKind::SixJ, {}};
    for (int i = 0; i < 6; ++i) f.args.push_back({letters[let(rng)], lv(rng), pos(rng)});
    t.factors.push_back(f);
    t.summed_indices.push_back({'i', lv(rng), pos(rng)});
    CHECK(iota(iota(t)) == t);
  }
  CoeffTerm t{{Factor{FactorKind::Delta, {EdgeLabel{'d', 3, 2}}}}, {}};
  CHECK(iota(t).factors[0].args[0] == EdgeLabel{'c', 3, -2});
}

TEST_CASE("summation counts") {
  CHECK(summation_count(2) == 0);
  CHECK(summation_count(3) == 1);
  CHECK(summation_count(4) == 4);
  CHECK(summation_count(5) == summation_count(4) + 5);
  CHECK_THROWS(summation_count(1));
  for (int n = 3; n <= 6; ++n) {
    const auto& plan = reduction_plan(n);
    CHECK(static_cast<int>(plan.indices.size()) == 2 * n - 5);
    CHECK(plan.target.size() == static_cast<std::size_t>(build_h(n - 1).num_edges()));
    // Every summed index appears in some factor.
    const CoeffTerm all = plan.combined();
    for (const auto& l : all.summed_indices) {
      bool seen = false;
      for (const auto& f : all.factors)
        for (const auto& a : f.args) seen = seen || a == l;
      CHECK(seen);
    }
  }
  CHECK(reduction_plan(3).phi.factors.empty());
  CHECK(!reduction_plan(4).phi.factors.empty());
}

TEST_CASE("plans are mirror symmetric") {
  for (int n = 3; n <= 5; ++n) {
    const auto& plan = reduction_plan(n);
    CHECK(plan.psi.factors.size() == plan.iota_psi.factors.size());
    CHECK(iota(iota(plan.psi)) == plan.psi);
  }
}

TEST_CASE("H_1 and H_2 against the oracle") {
  const QParam p = QParam::classical();
  const HoneycombNet h1 = build_h(1);
  for (int c = 0; c <= 4; ++c) CHECK(evaluate(h1, EdgeColoring(h1.num_edges(), c), p) == delta(c, p));
  EdgeColoring bad(h1.num_edges(), 1);
  bad[0] = 3;
  CHECK(evaluate(h1, bad, p).is_zero());

  const HoneycombNet h2 = build_h(2);
  const auto cols = admissible_colorings(h2, 2, p);
  CHECK(cols.size() > 100);
  int nonzero = 0;
  for (const auto& c : cols) {
    QScalar fast = evaluate(h2, c, p);
    QScalar slow = oracle_evaluate(h2.planar(), c, p);
    CHECK(fast == slow);
    nonzero += !fast.is_zero();
  }
  CHECK(nonzero > 0);
}

TEST_CASE("H_2 quantum against the oracle") {
  for (int r : {5, 7}) {
    const QParam p = QParam::root_of_unity(r);
    const HoneycombNet h2 = build_h(2);
    std::mt19937 rng(r);
    for (int trial = 0; trial < 15; ++trial) {
      auto c = random_admissible(h2, 2, rng, p);
      CHECK(evaluate(h2, c, p).equals(oracle_evaluate(h2.planar(), c, p), 1e-8));
    }
  }
}

TEST_CASE("H_3 against the oracle") {
  const QParam p = QParam::classical();
  const HoneycombNet h3 = build_h(3);
  std::mt19937 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    auto c = random_admissible(h3, 1, rng, p);
    CHECK(evaluate(h3, c, p) == oracle_evaluate(h3.planar(), c, p));
  }
  // A few colorings with color 2 as well.
  for (int trial = 0; trial < 4; ++trial) {
    auto c = random_admissible(h3, 2, rng, p);
    try {
      OracleOptions opt;
      opt.budget = 20'000'000;
      CHECK(evaluate(h3, c, p) == oracle_evaluate(h3.planar(), c, p, opt));
    } catch (const OracleBudgetExceeded&) {
    }
  }
}

TEST_CASE("zero soundness") {
  const QParam p = QParam::classical();
  const HoneycombNet h3 = build_h(3);
  EdgeColoring c(h3.num_edges(), 1);  // every trivalent vertex sees three odd colors
  CHECK(evaluate(h3, c, p).is_zero());
  CHECK(reduce_step(h3, c, p).empty());
  EdgeColoring z(h3.num_edges(), 0);
  CHECK(evaluate(h3, z, p) == QScalar(Rational(1)));
}

TEST_CASE("reduce_step terms") {
  const QParam p = QParam::classical();
  const HoneycombNet h3 = build_h(3);
  std::mt19937 rng(7);
  auto c = random_admissible(h3, 2, rng, p);
  auto terms = reduce_step(h3, c, p);
  CHECK(!terms.empty());
  const HoneycombNet h2 = build_h(2);
  QScalar total;
  for (const auto& t : terms) {
    CHECK(t.indices.size() == 1);
    CHECK(coloring_admissible(h2, t.coloring, p));
    total = total + t.weight * evaluate(h2, t.coloring, p);
  }
  CHECK(total == evaluate(h3, c, p));
  CHECK_THROWS_AS(reduce_step(h2, EdgeColoring(h2.num_edges(), 0), p), std::invalid_argument);
}

TEST_CASE("coefficient pieces") {
  const QParam p = QParam::classical();
  const HoneycombNet h2 = build_h(2);
  CHECK(psi_coeff(EdgeColoring(h2.num_edges(), 0), {}, 2, p) == QScalar(Rational(1)));
  CHECK(phi_coeff(EdgeColoring(h2.num_edges(), 0), {}, 3, p) == QScalar(Rational(1)));
  const HoneycombNet h4 = build_h(4);
  std::mt19937 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    auto c = random_admissible(h4, 2, rng, p);
    for (const auto& t : reduce_step(h4, c, p)) {
      // Left and right recouplings are mirror images of each other.
      CHECK(psi_coeff(c, t.indices, 4, p) ==
            iota_psi_coeff(mirror_coloring(h4, c), mirror_indices(t.indices), 4, p));
      CHECK(!phi_coeff(c, t.indices, 4, p).is_zero());
    }
  }
  auto c = random_admissible(h4, 2, rng, p);
  CHECK_THROWS_AS(psi_coeff(c, {}, 4, p), std::invalid_argument);
}

TEST_CASE("mirror invariance and determinism") {
  const QParam p = QParam::classical();
  for (int n = 3; n <= 4; ++n) {
    const HoneycombNet h = build_h(n);
    std::mt19937 rng(n);
    for (int trial = 0; trial < 5; ++trial) {
      auto c = random_admissible(h, 2, rng, p);
      QScalar v = evaluate(h, c, p);
      CHECK(v == evaluate(h, mirror_coloring(h, c), p));
      CHECK(v == evaluate(h, c, p));
    }
  }
}

TEST_CASE("trace replay") {
  for (const QParam& p : {QParam::classical(), QParam::root_of_unity(8)}) {
    const HoneycombNet h = build_h(4);
    std::mt19937 rng(3);
    auto c = random_admissible(h, 2, rng, p);
    EvaluationTrace tr;
    QScalar v = evaluate(h, c, p, &tr);
    CHECK(v.equals(evaluate(h, c, p), 0.0));
    QScalar r = replay(tr);
    CHECK(r.equals(v, 0.0));
    CHECK(tr.summed_index_count() == summation_count(4));
    CHECK(tr.indices_per_level.at(3) == 1);
    CHECK(tr.indices_per_level.at(4) == 3);
    CHECK(tr.to_json().find("schur_burst") != std::string::npos);
  }
}

TEST_CASE("evaluate input checks") {
  const QParam p = QParam::classical();
  const HoneycombNet o = build_o(2);
  CHECK_THROWS_AS(evaluate(o, EdgeColoring(o.num_edges(), 0), p), std::invalid_argument);
  const HoneycombNet h = build_h(2);
  CHECK_THROWS_AS(evaluate(h, EdgeColoring(3, 0), p), std::invalid_argument);
}

TEST_CASE("H_4 against the oracle") {
  const HoneycombNet h4 = build_h(4);
  std::mt19937 rng(404);
  for (const QParam& p : {QParam::classical(), QParam::root_of_unity(7)}) {
    for (int trial = 0; trial < 8; ++trial) {
      auto c = random_admissible(h4, 2, rng, p);
      CHECK(evaluate(h4, c, p).equals(oracle_evaluate(h4.planar(), c, p), 1e-8));
    }
  }
}

TEST_CASE("H_3 with larger colors against the oracle") {
  const QParam p = QParam::classical();
  const HoneycombNet h3 = build_h(3);
  std::mt19937 rng(33);
  int checked = 0;
  for (int trial = 0; trial < 6; ++trial) {
    auto c = random_admissible(h3, 4, rng, p);
    try {
      OracleOptions opt;
      opt.budget = 5'000'000;
      CHECK(evaluate(h3, c, p) == oracle_evaluate(h3.planar(), c, p, opt));
      ++checked;
    } catch (const OracleBudgetExceeded&) {
    }
  }
  CHECK(checked > 0);
}
