#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "honeycomb/lattice.hpp"
#include "honeycomb/recoupling.hpp"

namespace honeycomb {

enum class FactorKind { SixJ, Theta, Delta, DeltaInv, Tet };

std::string to_string(FactorKind k);

struct Factor {
  FactorKind kind = FactorKind::Delta;
  std::vector<EdgeLabel> args;  // 6, 3 or 1 labels
  std::string str() const;
  friend auto operator<=>(const Factor&, const Factor&) = default;
};

struct CoeffTerm {
  std::vector<Factor> factors;
  std::vector<EdgeLabel> summed_indices;
  std::string str() const;
  friend bool operator==(const CoeffTerm&, const CoeffTerm&) = default;
};

CoeffTerm iota(const CoeffTerm& t);

// Colors of crown and index labels.
using LabelColors = std::map<EdgeLabel, int>;

// Product of the factors; zero if any label is missing a color or any
// triple is non-admissible.
QScalar evaluate_term(const CoeffTerm& t, const LabelColors& colors, const QParam& p);

// sixj(a,b,e,c,d,f) / Delta_f * theta(a,d,f): collapses the triangle with
// corners (a,b,e), (c,d,e), (a,d,f) into a vertex (b,c,f).
QScalar bubble_move(int a, int b, int c, int d, int e, int f, const QParam& p);

// A summation index ranges over colors x with (a, b, x) admissible for all
// constraint pairs (a, b).
struct IndexSpec {
  EdgeLabel label;
  std::vector<std::pair<EdgeLabel, EdgeLabel>> triangles;
};

enum class MoveKind { BubbleMove, Recoupling, SchurBurst, Recomposition, Theta };
std::string to_string(MoveKind k);

struct MoveRecord {
  MoveKind kind = MoveKind::BubbleMove;
  std::string note;
  std::vector<Factor> factors;
};

// Symbolic reduction of H_m to H_{m-1} (m >= 3), or the closed form of H_2.
struct ReductionPlan {
  int m = 0;
  CoeffTerm prefactor;  // crown top and the final bubble burst
  CoeffTerm psi;        // left recouplings
  CoeffTerm iota_psi;   // right recouplings
  CoeffTerm phi;        // remaining triangle collapses (empty for m <= 3)
  std::vector<IndexSpec> indices;  // in enumeration order
  // Raw edge id of H_{m-1} -> H_m label or summation index.
  std::vector<EdgeLabel> target;
  std::vector<MoveRecord> moves;

  CoeffTerm combined() const;
};

const ReductionPlan& reduction_plan(int m);

struct ReductionTerm {
  QScalar weight;
  EdgeColoring coloring;  // of H_{m-1}
  LabelColors indices;
};

// net must be H_{n+1}; every term carries a nonzero weight.
std::vector<ReductionTerm> reduce_step(const HoneycombNet& net, const EdgeColoring& coloring, const QParam& p);

// Index colors of `indices` for the plan of H_n, labels in plan order.
QScalar psi_coeff(const EdgeColoring& coloring, const LabelColors& indices, int n, const QParam& p);
QScalar iota_psi_coeff(const EdgeColoring& coloring, const LabelColors& indices, int n, const QParam& p);
QScalar phi_coeff(const EdgeColoring& coloring, const LabelColors& indices, int n, const QParam& p);

// Coloring of the mirror image: edge e takes the color of its mirror edge.
EdgeColoring mirror_coloring(const HoneycombNet& h, const EdgeColoring& coloring);
// Mirror image of an index assignment.
LabelColors mirror_indices(const LabelColors& indices);

// a_2 = 0, a_n = a_{n-1} + 2n - 5.
long long summation_count(int n);

struct TraceNode {
  int n = 0;
  EdgeColoring coloring;
  LabelColors indices;  // assignment that produced this node (empty at the root)
  std::vector<TraceNode> children;
};

struct EvaluationTrace {
  QParam param = QParam::classical();
  TraceNode root;
  // Per level m: the moves of the reduction and the number of summed indices.
  std::map<int, std::vector<MoveRecord>> moves;
  std::map<int, int> indices_per_level;
  QScalar value;

  long long summed_index_count() const;
  std::string to_json() const;
};

QScalar evaluate(const HoneycombNet& net, const EdgeColoring& coloring, const QParam& p,
                 EvaluationTrace* trace = nullptr);
QScalar replay(const EvaluationTrace& trace);

}  // namespace honeycomb
