#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "honeycomb/evaluator.hpp"
#include "honeycomb/phase_space.hpp"

using namespace honeycomb;

namespace {

EvalVector from_rationals(const std::vector<int>& xs) {
  EvalVector v;
  for (int x : xs) v.push_back(QScalar(Rational(x)));
  return v;
}

}  // namespace

TEST_CASE("physical inner product") {
  CHECK(physical_inner_product(QScalar(Rational(3)), QScalar(Rational(-2))) == QScalar(Rational(-6)));
  CHECK(physical_inner_product(QScalar(Rational(0)), QScalar(Rational(5))).is_zero());
  const QScalar z(Complex(1, 2));
  CHECK(physical_inner_product(z, z).equals(QScalar(Complex(5, 0))));
}

TEST_CASE("transition entries") {
  const QScalar two(Rational(2)), four(Rational(-4)), zero(Rational(0));
  CHECK(transition_entry(two, two) == 1.0);
  CHECK(transition_entry(zero, four) == 0.0);
  CHECK(transition_entry(zero, zero) == 0.0);
  CHECK(transition_entry(two, four) == doctest::Approx(0.25));
  CHECK(transition_entry(QScalar(Rational(1)), QScalar(Rational(3))) == doctest::Approx(1.0 / 9));
  // Reduction to the magnitude ratio, on random pairs.
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(-5, 5);
  for (int k = 0; k < 1000; ++k) {
    const QScalar a(Complex(d(rng), d(rng))), b(Complex(d(rng), d(rng)));
    const double na = a.norm(), nb = b.norm();
    const double direct = physical_inner_product(a, b).norm() / std::max(na * na, nb * nb);
    CHECK(std::abs(transition_entry(a, b) - direct) < 1e-12);
    CHECK(std::abs(transition_entry(a, b) - std::min(na, nb) / std::max(na, nb)) < 1e-12);
  }
}

TEST_CASE("small matrices") {
  auto m = build_matrix(from_rationals({1, 3}));
  CHECK(m.entry(0, 0) == 1.0f);
  CHECK(m.entry(0, 1) == doctest::Approx(1.0 / 9));
  CHECK(m.entry(1, 0) == m.entry(0, 1));

  auto r = build_matrix(from_rationals({1, -1, 3}));
  rank_states(r);
  CHECK(r.S[0] == doctest::Approx(2 + 1.0 / 9));
  CHECK(r.S[2] == doctest::Approx(1 + 2.0 / 9));
  CHECK(r.perm[0] == 2);
  auto blocks = detect_blocks(r);
  REQUIRE(blocks.blocks.size() == 2);
  CHECK(blocks.blocks[0].members == std::vector<std::uint64_t>{2});
  CHECK(blocks.blocks[1].members == std::vector<std::uint64_t>{0, 1});

  auto same = build_matrix(from_rationals({5, 5, -5, 5}));
  rank_states(same);
  CHECK(same.perm == std::vector<std::uint64_t>{0, 1, 2, 3});
  CHECK(detect_blocks(same).blocks.size() == 1);

  // Distinct magnitudes far apart: identity-like, singleton blocks.
  auto ident = build_matrix(from_rationals({1, 1000, 1000000}));
  rank_states(ident);
  CHECK(detect_blocks(ident).blocks.size() == 3);
  CHECK_THROWS_AS(build_matrix(from_rationals({1, 2, 3}), 16), MatrixBudgetExceeded);
}

TEST_CASE("zero evaluations are isolated") {
  auto m = build_matrix(from_rationals({0, 0, 2, 2}));
  CHECK(m.entry(0, 0) == 0.0f);
  CHECK(m.entry(0, 1) == 0.0f);
  rank_states(m);
  auto b = detect_blocks(m);
  CHECK(b.blocks.size() == 3);
}

TEST_CASE("streaming and exact scores") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> d(-6, 6);
  std::vector<int> xs;
  for (int k = 0; k < 300; ++k) xs.push_back(d(rng));
  const EvalVector ev = from_rationals(xs);
  const auto dense = build_matrix(ev);
  const auto stream = build_streaming(ev);
  const auto exact = exact_scores(ev);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::abs(dense.S[i] - stream.S[i]) <= 1e-9 * std::max(1.0, dense.S[i]));
    CHECK(std::abs(exact[i].get_d() - stream.S[i]) <= 1e-9 * std::max(1.0, dense.S[i]));
  }
  auto ranked = stream;
  rank_states(ranked);
  auto blocks = detect_blocks(ranked);
  // Blocks are the classes of equal nonzero magnitude plus singleton zeros.
  std::set<int> mags;
  int zeros = 0;
  for (int x : xs) {
    if (x == 0) ++zeros;
    else mags.insert(std::abs(x));
  }
  CHECK(blocks.blocks.size() == mags.size() + zeros);
  CHECK(blocks.s_consistent);
}

TEST_CASE("matrix file round trip") {
  auto m = build_matrix(from_rationals({1, 2, 2, 7}));
  rank_states(m);
  std::stringstream buf;
  write_matrix(buf, m, false);
  CHECK(buf.str().size() == 16 + 16 * 4);
  CHECK(buf.str().substr(0, 4) == "HCTM");
  auto back = read_matrix(buf);
  CHECK(back.dim == 4);
  for (std::uint64_t i = 0; i < 4; ++i)
    for (std::uint64_t j = 0; j < 4; ++j) CHECK(back.entry(i, j) == m.entry(i, j));
  std::stringstream bad("HCTX");
  CHECK_THROWS(read_matrix(bad));

  std::stringstream img;
  write_heatmap(img, m);
  CHECK(img.str().substr(0, 2) == "P5");
  std::stringstream csv;
  write_ranking_csv(csv, m, detect_blocks(m));
  CHECK(csv.str().rfind("rank,index,S,norm2,block\n", 0) == 0);
  CHECK(blocks_to_json(m, detect_blocks(m)).find("\"num_blocks\":3") != std::string::npos);
}

TEST_CASE("n = 2 phase space is block diagonal") {
  const HoneycombNet h = build_h(2);
  const auto cycles = enumerate_cycles(h);
  const auto ev = evaluate_config_range(h, cycles, 2, QParam::classical(), 0, 1000);
  REQUIRE(ev.size() == 119);
  auto m = build_matrix(ev);
  rank_states(m);
  const auto blocks = detect_blocks(m, 0.0);
  const auto exact = exact_scores(ev);
  for (const auto& b : blocks.blocks) {
    for (auto x : b.members) {
      for (auto y : b.members) CHECK(m.entry(x, y) == 1.0f);
      CHECK(exact[x] == exact[b.members.front()]);
      CHECK(abs(ev.values[x].rational()) == abs(ev.values[b.members.front()].rational()));
    }
  }
  std::set<Rational> mags;
  for (const auto& v : ev.values) mags.insert(abs(v.rational()));
  CHECK(blocks.blocks.size() == mags.size());
}
