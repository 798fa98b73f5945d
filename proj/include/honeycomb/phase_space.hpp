#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "honeycomb/colorings.hpp"
#include "honeycomb/scalar.hpp"

namespace honeycomb {

// conj(e1) * e2
QScalar physical_inner_product(const QScalar& e1, const QScalar& e2);
// |conj(e_i) e_j|^2 / max(|e_i|^4, |e_j|^4); 0 if either evaluation vanishes.
double transition_entry(const QScalar& ei, const QScalar& ej);

struct EvalVector {
  std::vector<QScalar> values;
  std::vector<double> norm2;  // |e|^2

  std::size_t size() const { return values.size(); }
  void push_back(const QScalar& v);
  bool exact() const;
};

// Evaluations of the configs with ranks [begin, end) of the stream.
EvalVector evaluate_config_range(const HoneycombNet& h, const std::vector<Cycle>& cycles, int cmax,
                                 const QParam& p, std::uint64_t begin, std::uint64_t end);

class MatrixBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TransitionMatrix {
  std::uint64_t dim = 0;
  std::vector<double> norm2;  // per config
  std::vector<float> entries;  // row-major; empty when implicit
  std::vector<double> S;
  std::vector<std::uint64_t> perm;  // ranked position -> config index

  bool materialized() const { return !entries.empty() || dim == 0; }
  double entry(std::uint64_t i, std::uint64_t j) const;
};

// Entry value from two squared magnitudes.
double transition_from_norms(double a, double b);

// Materialized matrix with S accumulated in double precision. Throws
// MatrixBudgetExceeded when dim^2 * 4 bytes exceeds max_bytes.
TransitionMatrix build_matrix(const EvalVector& evals, std::uint64_t max_bytes = 1ull << 30);
// Implicit matrix; S from sorted prefix sums in O(N log N).
TransitionMatrix build_streaming(const EvalVector& evals);

// Exact S_i in the classical backend.
std::vector<Rational> exact_scores(const EvalVector& evals);

// Sorts by ascending S, ties by index.
void rank_states(TransitionMatrix& m);

struct Block {
  std::vector<std::uint64_t> members;  // config indices in ranked order
  double S = 0;
  double s_spread = 0;
};

struct ClassPartition {
  std::vector<Block> blocks;
  bool s_consistent = true;  // every block's S spread within tol
};

ClassPartition detect_blocks(const TransitionMatrix& m, double tol = 1e-6);

// "HCTM", u32 version, u64 dim, then f32 little-endian entries, in ranked
// order if the matrix is ranked.
void write_matrix(std::ostream& out, const TransitionMatrix& m, bool ranked = true);
TransitionMatrix read_matrix(std::istream& in);

// Ranked matrix as an 8-bit grayscale image (white = 1), at most `side` pixels wide.
void write_heatmap(std::ostream& out, const TransitionMatrix& m, std::uint64_t side = 1024);

void write_ranking_csv(std::ostream& out, const TransitionMatrix& m, const ClassPartition& blocks);
std::string blocks_to_json(const TransitionMatrix& m, const ClassPartition& blocks);

}  // namespace honeycomb
