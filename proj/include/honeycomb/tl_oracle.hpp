#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "honeycomb/planar_graph.hpp"
#include "honeycomb/recoupling.hpp"

namespace honeycomb {

// Non-crossing perfect matching on 2n boundary points: bottom 0..n-1 and
// top n..2n-1, both read left to right.
struct PlanarPairing {
  std::vector<std::uint8_t> partner;

  int strands() const { return static_cast<int>(partner.size() / 2); }
  static PlanarPairing identity(int n);
  // Cup-cap joining strands i and i+1.
  static PlanarPairing cup_cap(int n, int i);
  PlanarPairing tensor_one() const;
  bool non_crossing() const;
  friend auto operator<=>(const PlanarPairing&, const PlanarPairing&) = default;
};

// `top` stacked on `bottom`; returns the result and the number of closed loops.
std::pair<PlanarPairing, int> compose(const PlanarPairing& top, const PlanarPairing& bottom);

template <class Scalar>
using TLElement = std::map<PlanarPairing, Scalar>;

class OracleBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  // Upper bound on (state, basis term) combinations visited.
  long long budget = 1'000'000;
};

template <class Field>
class TLOracle {
 public:
  using Scalar = typename Field::value_type;

  explicit TLOracle(Field f = Field{}) : field_(f) {}

  Scalar loop_value() const { return -field_.qint(2); }
  // Jones-Wenzl idempotent on n strands (Wenzl recursion). Cached.
  const TLElement<Scalar>& jw(int n) const;
  TLElement<Scalar> multiply(const TLElement<Scalar>& top, const TLElement<Scalar>& bottom) const;

  // Closed net evaluation by projector expansion and loop counting.
  // Colors are indexed by edge id.
  Scalar evaluate(const PlanarGraph& g, const std::vector<int>& colors, const OracleOptions& opt = {}) const;

 private:
  Field field_;
  mutable std::mutex mu_;
  mutable std::map<int, TLElement<Scalar>> jw_;
};

extern template class TLOracle<ClassicalField>;
extern template class TLOracle<RootOfUnityField>;

// Backend-erased entry points. The element map converts to QScalar values.
TLElement<QScalar> jw_projector(int n, const QParam& p);
QScalar oracle_evaluate(const PlanarGraph& g, const std::vector<int>& colors, const QParam& p,
                        const OracleOptions& opt = {});

}  // namespace honeycomb
