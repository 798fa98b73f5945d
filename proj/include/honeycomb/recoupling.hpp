#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include "honeycomb/scalar.hpp"

namespace honeycomb {

using SpinColor = int;

// Parity, triangle inequality and (quantum) level bound.
bool is_admissible(int a, int b, int c, const QParam& p);

// Tetrahedral nets are addressed by their four vertex triples
// (a,b,e), (c,d,e), (a,d,f), (b,c,f).
using TetArgs = std::array<int, 6>;
// Lexicographically smallest argument tuple under the 24 tetrahedral symmetries.
TetArgs tet_canonical(const TetArgs& t);

template <class Field>
class Recoupling {
 public:
  using Scalar = typename Field::value_type;

  explicit Recoupling(Field f = Field{}, bool caching = true) : field_(f), caching_(caching) {}
  Recoupling(const Recoupling&) = delete;
  Recoupling& operator=(const Recoupling&) = delete;

  const Field& field() const { return field_; }
  QParam param() const { return field_.param(); }
  bool caching() const { return caching_; }

  bool admissible(int a, int b, int c) const { return is_admissible(a, b, c, param()); }

  Scalar qint(int n) const { return field_.qint(n); }
  Scalar qfactorial(int n) const;
  Scalar delta(int n) const;
  Scalar theta(int a, int b, int c) const;
  Scalar tet(int a, int b, int e, int c, int d, int f) const;
  Scalar sixj(int a, int b, int e, int c, int d, int f) const;

  // Cache persistence hooks. Keys are canonical argument tuples.
  void for_each_theta(const std::function<void(const std::array<int, 3>&, const Scalar&)>& fn) const;
  void for_each_tet(const std::function<void(const TetArgs&, const Scalar&)>& fn) const;
  void for_each_sixj(const std::function<void(const TetArgs&, const Scalar&)>& fn) const;
  void insert_theta(const std::array<int, 3>& k, const Scalar& v) const;
  void insert_tet(const TetArgs& k, const Scalar& v) const;
  void insert_sixj(const TetArgs& k, const Scalar& v) const;
  std::size_t cache_size() const;
  void clear_cache() const;

 private:
  Scalar theta_raw(int a, int b, int c) const;
  Scalar tet_raw(const TetArgs& t) const;

  template <std::size_t N>
  static std::uint64_t pack(const std::array<int, N>& k);
  template <std::size_t N>
  static std::array<int, N> unpack(std::uint64_t key);
  static bool packable(std::initializer_list<int> xs);

  Field field_;
  bool caching_;
  mutable std::shared_mutex mu_;
  mutable std::vector<Scalar> fact_;
  mutable std::unordered_map<std::uint64_t, Scalar> theta_, tet_, sixj_;
};

extern template class Recoupling<ClassicalField>;
extern template class Recoupling<RootOfUnityField>;

// Shared, thread-safe instances per backend.
Recoupling<ClassicalField>& classical_recoupling();
Recoupling<RootOfUnityField>& quantum_recoupling(int r);

// Backend-erased facade.
QScalar quantum_int(int n, const QParam& p);
QScalar delta(int n, const QParam& p);
QScalar theta(int a, int b, int c, const QParam& p);
QScalar tet(int a, int b, int e, int c, int d, int f, const QParam& p);
QScalar sixj(int a, int b, int e, int c, int d, int f, const QParam& p);

// Calls fn with the shared Recoupling instance matching p.
template <class Fn>
decltype(auto) with_backend(const QParam& p, Fn&& fn) {
  if (p.is_quantum()) return fn(quantum_recoupling(p.level()));
  return fn(classical_recoupling());
}

}  // namespace honeycomb
