#include "honeycomb/recoupling.hpp"

#include <algorithm>
#include <map>
#include <memory>

namespace honeycomb {

bool is_admissible(int a, int b, int c, const QParam& p) {
  if (a < 0 || b < 0 || c < 0) return false;
  if ((a + b + c) % 2 != 0) return false;
  if (c > a + b || a > b + c || b > a + c) return false;
  if (p.is_quantum()) {
    const int r = p.level();
    if (a > r - 2 || b > r - 2 || c > r - 2) return false;
    if (a + b + c > 2 * r - 4) return false;
  }
  return true;
}

namespace {

// Edge slots of a tetrahedron indexed by vertex pairs 01,02,03,12,13,23.
// Vertex 0 = (a,b,e), 1 = (c,d,e), 2 = (a,d,f), 3 = (b,c,f).
constexpr int kPair[4][4] = {{-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};

std::array<int, 6> to_pairs(const TetArgs& t) {
  const auto [a, b, e, c, d, f] = t;
  // 01 = e, 02 = a, 03 = b, 12 = d, 13 = c, 23 = f
  return {e, a, b, d, c, f};
}

TetArgs from_pairs(const std::array<int, 6>& p) {
  return {p[1], p[2], p[0], p[4], p[3], p[5]};
}

}  // namespace

TetArgs tet_canonical(const TetArgs& t) {
  const auto pairs = to_pairs(t);
  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<int, 6> best{};
  bool first = true;
  do {
    std::array<int, 6> q{};
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j) q[kPair[i][j]] = pairs[kPair[perm[i]][perm[j]]];
    if (first || q < best) best = q;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return from_pairs(best);
}

template <class Field>
bool Recoupling<Field>::packable(std::initializer_list<int> xs) {
  for (int x : xs)
    if (x < 0 || x >= 1024) return false;
  return true;
}

template <class Field>
template <std::size_t N>
std::uint64_t Recoupling<Field>::pack(const std::array<int, N>& k) {
  std::uint64_t key = 0;
  for (int x : k) key = (key << 10) | static_cast<std::uint64_t>(x);
  return key;
}

template <class Field>
template <std::size_t N>
std::array<int, N> Recoupling<Field>::unpack(std::uint64_t key) {
  std::array<int, N> k{};
  for (std::size_t i = N; i-- > 0;) {
    k[i] = static_cast<int>(key & 1023u);
    key >>= 10;
  }
  return k;
}

template <class Field>
typename Recoupling<Field>::Scalar Recoupling<Field>::qfactorial(int n) const {
  {
    std::shared_lock lock(mu_);
    if (n < static_cast<int>(fact_.size())) return fact_[n];
  }
  std::unique_lock lock(mu_);
  if (fact_.empty()) fact_.push_back(field_.one());
  while (static_cast<int>(fact_.size()) <= n) {
    const int k = static_cast<int>(fact_.size());
    fact_.push_back(fact_.back() * field_.qint(k));
  }
  return fact_[n];
}

template <class Field>
typename Recoupling<Field>::Scalar Recoupling<Field>::delta(int n) const {
  Scalar v = field_.qint(n + 1);
  return n % 2 ? Scalar(-v) : v;
}

template <class Field>
typename Recoupling<Field>::Scalar Recoupling<Field>::theta_raw(int a, int b, int c) const {
  const int m = (a + b - c) / 2, n = (b + c - a) / 2, p = (a + c - b) / 2;
  Scalar num = qfactorial(m + n + p + 1) * qfactorial(m) * qfactorial(n) * qfactorial(p);
  Scalar den = qfactorial(m + n) * qfactorial(n + p) * qfactorial(m + p);
  Scalar v = num / den;
  return (m + n + p) % 2 ? Scalar(-v) : v;
}

template <class Field>
typename Recoupling<Field>::Scalar Recoupling<Field>::theta(int a, int b, int c) const {
  if (!admissible(a, b, c)) return field_.zero();
  std::array<int, 3> k{a, b, c};
  std::sort(k.begin(), k.end());
  if (!caching_ || !packable({k[0], k[1], k[2]})) return theta_raw(k[0], k[1], k[2]);
  const auto key = pack(k);
  {
    std::shared_lock lock(mu_);
    if (auto it = theta_.find(key); it != theta_.end()) return it->second;
  }
  Scalar v = theta_raw(k[0], k[1], k[2]);
  std::unique_lock lock(mu_);
  theta_.emplace(key, v);
  return v;
}

template <class Field>
typename Recoupling<Field>::Scalar Recoupling<Field>::tet_raw(const TetArgs& t) const {
  const auto [a, b, e, c, d, f] = t;
  const std::array<int, 4> lo{(a + b + e) / 2, (c + d + e) / 2, (a + d + f) / 2, (b + c + f) / 2};
  const std::array<int, 3> hi{(b + d + e + f) / 2, (a + c + e + f) / 2, (a + b + c + d) / 2};
  Scalar pre = field_.one();
  for (int x : lo)
    for (int y : hi) pre *= qfactorial(y - x);
  for (int x : t) pre /= qfactorial(x);
  const int smin = *std::max_element(lo.begin(), lo.end());
  const int smax = *std::min_element(hi.begin(), hi.end());
  Scalar sum = field_.zero();
  for (int s = smin; s <= smax; ++s) {
    Scalar den = field_.one();
    for (int x : lo) den *= qfactorial(s - x);
    for (int y : hi) den *= qfactorial(y - s);
    Scalar term = qfactorial(s + 1) / den;
    if (s % 2) sum -= term;
    else sum += term;
  }
  return pre * sum;
}

template <class Field>
typename Recoupling<Field>::Scalar Recoupling<Field>::tet(int a, int b, int e, int c, int d, int f) const {
  if (!admissible(a, b, e) || !admissible(c, d, e) || !admissible(a, d, f) || !admissible(b, c, f))
    return field_.zero();
  const TetArgs k = tet_canonical({a, b, e, c, d, f});
  if (!caching_ || !packable({a, b, c, d, e, f})) return tet_raw(k);
  const auto key = pack(k);
  {
    std::shared_lock lock(mu_);
    if (auto it = tet_.find(key); it != tet_.end()) return it->second;
  }
  Scalar v = tet_raw(k);
  std::unique_lock lock(mu_);
  tet_.emplace(key, v);
  return v;
}

template <class Field>
typename Recoupling<Field>::Scalar Recoupling<Field>::sixj(int a, int b, int e, int c, int d, int f) const {
  if (!admissible(a, b, e) || !admissible(c, d, e) || !admissible(a, d, f) || !admissible(b, c, f))
    return field_.zero();
  const TetArgs k{a, b, e, c, d, f};
  const bool cached = caching_ && packable({a, b, c, d, e, f});
  if (cached) {
    std::shared_lock lock(mu_);
    if (auto it = sixj_.find(pack(k)); it != sixj_.end()) return it->second;
  }
  Scalar v = tet(a, b, e, c, d, f) * delta(f) / (theta(a, d, f) * theta(b, c, f));
  if (cached) {
    std::unique_lock lock(mu_);
    sixj_.emplace(pack(k), v);
  }
  return v;
}

template <class Field>
void Recoupling<Field>::for_each_theta(
    const std::function<void(const std::array<int, 3>&, const Scalar&)>& fn) const {
  std::shared_lock lock(mu_);
  std::map<std::uint64_t, const Scalar*> sorted;
  for (const auto& [k, v] : theta_) sorted.emplace(k, &v);
  for (const auto& [k, v] : sorted) fn(unpack<3>(k), *v);
}

template <class Field>
void Recoupling<Field>::for_each_tet(const std::function<void(const TetArgs&, const Scalar&)>& fn) const {
  std::shared_lock lock(mu_);
  std::map<std::uint64_t, const Scalar*> sorted;
  for (const auto& [k, v] : tet_) sorted.emplace(k, &v);
  for (const auto& [k, v] : sorted) fn(unpack<6>(k), *v);
}

template <class Field>
void Recoupling<Field>::for_each_sixj(const std::function<void(const TetArgs&, const Scalar&)>& fn) const {
  std::shared_lock lock(mu_);
  std::map<std::uint64_t, const Scalar*> sorted;
  for (const auto& [k, v] : sixj_) sorted.emplace(k, &v);
  for (const auto& [k, v] : sorted) fn(unpack<6>(k), *v);
}

template <class Field>
void Recoupling<Field>::insert_theta(const std::array<int, 3>& k, const Scalar& v) const {
  std::unique_lock lock(mu_);
  theta_.emplace(pack(k), v);
}

template <class Field>
void Recoupling<Field>::insert_tet(const TetArgs& k, const Scalar& v) const {
  std::unique_lock lock(mu_);
  tet_.emplace(pack(tet_canonical(k)), v);
}

template <class Field>
void Recoupling<Field>::insert_sixj(const TetArgs& k, const Scalar& v) const {
  std::unique_lock lock(mu_);
  sixj_.emplace(pack(k), v);
}

template <class Field>
std::size_t Recoupling<Field>::cache_size() const {
  std::shared_lock lock(mu_);
  return theta_.size() + tet_.size() + sixj_.size();
}

template <class Field>
void Recoupling<Field>::clear_cache() const {
  std::unique_lock lock(mu_);
  theta_.clear();
  tet_.clear();
  sixj_.clear();
}

template class Recoupling<ClassicalField>;
template class Recoupling<RootOfUnityField>;

Recoupling<ClassicalField>& classical_recoupling() {
  static Recoupling<ClassicalField> inst;
  return inst;
}

Recoupling<RootOfUnityField>& quantum_recoupling(int r) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<Recoupling<RootOfUnityField>>> registry;
  QParam::root_of_unity(r);
  std::lock_guard lock(mu);
  auto& slot = registry[r];
  if (!slot) slot = std::make_unique<Recoupling<RootOfUnityField>>(RootOfUnityField{r});
  return *slot;
}

QScalar quantum_int(int n, const QParam& p) {
  return with_backend(p, [&](auto& rc) { return QScalar(rc.qint(n)); });
}

QScalar delta(int n, const QParam& p) {
  return with_backend(p, [&](auto& rc) { return QScalar(rc.delta(n)); });
}

QScalar theta(int a, int b, int c, const QParam& p) {
  return with_backend(p, [&](auto& rc) { return QScalar(rc.theta(a, b, c)); });
}

QScalar tet(int a, int b, int e, int c, int d, int f, const QParam& p) {
  return with_backend(p, [&](auto& rc) { return QScalar(rc.tet(a, b, e, c, d, f)); });
}

QScalar sixj(int a, int b, int e, int c, int d, int f, const QParam& p) {
  return with_backend(p, [&](auto& rc) { return QScalar(rc.sixj(a, b, e, c, d, f)); });
}

}  // namespace honeycomb
