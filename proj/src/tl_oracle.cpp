#include "honeycomb/tl_oracle.hpp"

#include <algorithm>
#include <deque>
#include <memory>
#include <unordered_map>

namespace honeycomb {

PlanarPairing PlanarPairing::identity(int n) {
  PlanarPairing p;
  p.partner.resize(2 * n);
  for (int i = 0; i < n; ++i) {
    p.partner[i] = static_cast<std::uint8_t>(n + i);
    p.partner[n + i] = static_cast<std::uint8_t>(i);
  }
  return p;
}

PlanarPairing PlanarPairing::cup_cap(int n, int i) {
  PlanarPairing p = identity(n);
  p.partner[i] = static_cast<std::uint8_t>(i + 1);
  p.partner[i + 1] = static_cast<std::uint8_t>(i);
  p.partner[n + i] = static_cast<std::uint8_t>(n + i + 1);
  p.partner[n + i + 1] = static_cast<std::uint8_t>(n + i);
  return p;
}

PlanarPairing PlanarPairing::tensor_one() const {
  const int n = strands();
  auto remap = [n](int x) { return x < n ? x : x + 1; };
  PlanarPairing p;
  p.partner.resize(2 * (n + 1));
  for (int x = 0; x < 2 * n; ++x) p.partner[remap(x)] = static_cast<std::uint8_t>(remap(partner[x]));
  p.partner[n] = static_cast<std::uint8_t>(2 * n + 1);
  p.partner[2 * n + 1] = static_cast<std::uint8_t>(n);
  return p;
}

bool PlanarPairing::non_crossing() const {
  // Walk the boundary circle: bottom left to right, then top right to left.
  const int n = strands();
  auto circ = [n](int x) { return x < n ? x : 3 * n - 1 - x; };
  for (int x = 0; x < 2 * n; ++x) {
    if (partner[partner[x]] != x || partner[x] == x) return false;
    const int a = std::min(circ(x), circ(partner[x])), b = std::max(circ(x), circ(partner[x]));
    for (int y = 0; y < 2 * n; ++y) {
      const int c = circ(y), d = circ(partner[y]);
      const bool in_c = a < c && c < b, in_d = a < d && d < b;
      if (in_c != in_d) return false;
    }
  }
  return true;
}

std::pair<PlanarPairing, int> compose(const PlanarPairing& top, const PlanarPairing& bottom) {
  const int n = bottom.strands();
  if (top.strands() != n) throw std::invalid_argument("strand count mismatch");
  auto next = [&](int node) {
    return node < 2 * n ? static_cast<int>(bottom.partner[node]) : 2 * n + top.partner[node - 2 * n];
  };
  auto terminal = [n](int node) { return node < n || node >= 3 * n; };
  auto glue = [n](int node) { return node < 2 * n ? node + n : node - n; };
  auto out = [n](int node) { return node < n ? node : node - 2 * n; };

  PlanarPairing res;
  res.partner.assign(2 * n, 0);
  std::vector<char> seen(4 * n, 0);
  for (int k = 0; k < 2 * n; ++k) {
    const int start = k < n ? k : 2 * n + k;
    if (seen[start]) continue;
    int cur = start;
    seen[cur] = 1;
    while (true) {
      const int p = next(cur);
      seen[p] = 1;
      if (terminal(p)) {
        res.partner[out(start)] = static_cast<std::uint8_t>(out(p));
        res.partner[out(p)] = static_cast<std::uint8_t>(out(start));
        break;
      }
      cur = glue(p);
      seen[cur] = 1;
    }
  }
  int loops = 0;
  for (int g = n; g < 2 * n; ++g) {
    if (seen[g]) continue;
    ++loops;
    int cur = g;
    while (!seen[cur]) {
      seen[cur] = 1;
      const int p = next(cur);
      seen[p] = 1;
      cur = glue(p);
    }
  }
  return {res, loops};
}

template <class Field>
TLElement<typename TLOracle<Field>::Scalar> TLOracle<Field>::multiply(const TLElement<Scalar>& top,
                                                                     const TLElement<Scalar>& bottom) const {
  const Scalar d = loop_value();
  TLElement<Scalar> out;
  for (const auto& [x, cx] : top)
    for (const auto& [y, cy] : bottom) {
      auto [z, loops] = compose(x, y);
      Scalar c = cx * cy;
      for (int i = 0; i < loops; ++i) c *= d;
      auto [it, fresh] = out.emplace(z, c);
      if (!fresh) it->second += c;
    }
  std::erase_if(out, [&](const auto& kv) { return field_.is_zero(kv.second); });
  return out;
}

template <class Field>
const TLElement<typename TLOracle<Field>::Scalar>& TLOracle<Field>::jw(int n) const {
  std::lock_guard lock(mu_);
  if (n < 0) throw std::invalid_argument("negative strand count");
  if (n > field_.max_color()) throw std::invalid_argument("Jones-Wenzl projector beyond the level bound");
  if (jw_.empty()) {
    jw_[0] = {{PlanarPairing::identity(0), field_.one()}};
    jw_[1] = {{PlanarPairing::identity(1), field_.one()}};
  }
  for (int k = jw_.rbegin()->first; k < n; ++k) {
    // P_{k+1} = P_k x 1 - (D_{k-1}/D_k) (P_k x 1) U_k (P_k x 1)
    TLElement<Scalar> ext;
    for (const auto& [p, c] : jw_[k]) ext.emplace(p.tensor_one(), c);
    TLElement<Scalar> u{{PlanarPairing::cup_cap(k + 1, k - 1), field_.one()}};
    TLElement<Scalar> mid = multiply(multiply(ext, u), ext);
    Scalar dk = field_.qint(k + 1), dk1 = field_.qint(k);
    // D_{k-1}/D_k = -[k]/[k+1]
    Scalar coef = dk1 / dk;
    TLElement<Scalar> next = ext;
    for (const auto& [p, c] : mid) {
      auto [it, fresh] = next.emplace(p, c * coef);
      if (!fresh) it->second += c * coef;
    }
    std::erase_if(next, [&](const auto& kv) { return field_.is_zero(kv.second); });
    jw_[k + 1] = std::move(next);
  }
  return jw_.at(n);
}

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (int x : v) h = (h ^ static_cast<std::size_t>(x + 1)) * 1099511628211ull;
    return h;
  }
};

}  // namespace

template <class Field>
typename TLOracle<Field>::Scalar TLOracle<Field>::evaluate(const PlanarGraph& g, const std::vector<int>& colors,
                                                          const OracleOptions& opt) const {
  const int ne = g.num_edges();
  if (static_cast<int>(colors.size()) != ne) throw std::invalid_argument("coloring size does not match edges");
  if (!g.closed()) throw std::invalid_argument("open-ended network");
  for (int c : colors)
    if (c < 0) throw std::invalid_argument("negative color");

  // Points: offset[e] + end * x_e + i, i counted counterclockwise at that end.
  std::vector<int> offset(ne + 1, 0);
  for (int e = 0; e < ne; ++e) offset[e + 1] = offset[e] + 2 * colors[e];
  const int np = offset[ne];
  auto point = [&](int e, int end, int i) { return offset[e] + end * colors[e] + i; };
  std::vector<int> wire(np, -1), edge_of(np);
  for (int e = 0; e < ne; ++e)
    for (int k = offset[e]; k < offset[e + 1]; ++k) edge_of[k] = e;

  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto& rot = g.rotation[v];
    const int deg = static_cast<int>(rot.size());
    if (deg == 0) continue;
    if (deg == 1) throw std::invalid_argument("open-ended network");
    if (deg > 3) throw std::invalid_argument("vertex of valence > 3");
    int e[3], end[3], x[3];
    for (int t = 0; t < 3; ++t) {
      if (t < deg) {
        e[t] = rot[t];
        end[t] = g.end_at(v, t);
        x[t] = colors[e[t]];
      } else {
        e[t] = -1;
        end[t] = 0;
        x[t] = 0;
      }
    }
    for (int t = 0; t < 3; ++t) {
      const int s = x[t] + x[(t + 1) % 3] - x[(t + 2) % 3];
      if (s < 0 || s % 2) return field_.zero();
    }
    for (int t = 0; t < 3; ++t) {
      const int t1 = (t + 1) % 3;
      const int m = (x[t] + x[t1] - x[(t + 2) % 3]) / 2;
      for (int k = 0; k < m; ++k) {
        const int p = point(e[t], end[t], x[t] - 1 - k);
        const int q = point(e[t1], end[t1], k);
        wire[p] = q;
        wire[q] = p;
      }
    }
  }

  // Edge order: breadth-first over vertices keeps the frontier small.
  std::vector<int> order;
  {
    std::vector<char> vseen(g.num_vertices(), 0), eseen(ne, 0);
    for (int s = 0; s < g.num_vertices(); ++s) {
      if (vseen[s]) continue;
      std::deque<int> q{s};
      vseen[s] = 1;
      while (!q.empty()) {
        const int v = q.front();
        q.pop_front();
        for (int e : g.rotation[v]) {
          if (eseen[e]) continue;
          eseen[e] = 1;
          order.push_back(e);
          const int w = g.edges[e].u == v ? g.edges[e].v : g.edges[e].u;
          if (!vseen[w]) {
            vseen[w] = 1;
            q.push_back(w);
          }
        }
      }
    }
  }

  const Scalar d = loop_value();
  std::vector<int> processed(ne, 0);
  std::vector<int> dangling;  // points, fixed order per stage
  std::unordered_map<std::vector<int>, Scalar, VecHash> states;
  states.emplace(std::vector<int>{}, field_.one());
  long long work = 0;

  for (int e : order) {
    const int x = colors[e];
    processed[e] = 1;
    if (x == 0) continue;
    const auto& proj = jw(x);
    const int nd = static_cast<int>(dangling.size());
    const int nn = nd + 2 * x;
    // Node ids: [0, nd) old dangling slots, [nd, nn) the 2x ports of e.
    std::vector<int> link_b(nn, -1);
    std::unordered_map<int, int> slot_of;
    for (int s = 0; s < nd; ++s) slot_of[dangling[s]] = s;
    auto port_node = [&](int pt) { return nd + (pt - offset[e]); };
    for (int s = 0; s < nd; ++s) {
      const int w = wire[dangling[s]];
      if (edge_of[w] == e) link_b[s] = port_node(w);
    }
    std::vector<int> new_dangling;
    std::vector<int> new_nodes;
    for (int s = 0; s < nd; ++s)
      if (link_b[s] < 0) {
        new_dangling.push_back(dangling[s]);
        new_nodes.push_back(s);
      }
    for (int k = 0; k < 2 * x; ++k) {
      const int pt = offset[e] + k;
      const int w = wire[pt];
      const int node = nd + k;
      if (edge_of[w] == e) link_b[node] = port_node(w);
      else if (processed[edge_of[w]]) link_b[node] = slot_of.at(w);
      else {
        new_dangling.push_back(pt);
        new_nodes.push_back(node);
      }
    }
    std::vector<int> new_index(nn, -1);
    for (int i = 0; i < static_cast<int>(new_nodes.size()); ++i) new_index[new_nodes[i]] = i;
    // Projector position -> port: bottom b at end 0 point x-1-b, top t at end 1 point t.
    std::vector<int> pos_port(2 * x);
    for (int b = 0; b < x; ++b) pos_port[b] = nd + (x - 1 - b);
    for (int t = 0; t < x; ++t) pos_port[x + t] = nd + x + t;

    std::unordered_map<std::vector<int>, Scalar, VecHash> next;
    std::vector<int> link_a(nn);
    std::vector<char> seen(nn);
    for (const auto& [state, coef] : states) {
      for (int s = 0; s < nd; ++s) link_a[s] = state[s];
      for (const auto& [diag, dc] : proj) {
        if (++work > opt.budget) throw OracleBudgetExceeded("oracle budget exceeded");
        for (int pos = 0; pos < 2 * x; ++pos) link_a[pos_port[pos]] = pos_port[diag.partner[pos]];
        std::fill(seen.begin(), seen.end(), 0);
        std::vector<int> key(new_nodes.size(), -1);
        for (int node : new_nodes) {
          if (seen[node]) continue;
          int cur = node;
          seen[cur] = 1;
          while (true) {
            const int a = link_a[cur];
            seen[a] = 1;
            if (link_b[a] < 0) {
              key[new_index[node]] = new_index[a];
              key[new_index[a]] = new_index[node];
              break;
            }
            cur = link_b[a];
            seen[cur] = 1;
          }
        }
        int loops = 0;
        for (int node = 0; node < nn; ++node) {
          if (seen[node]) continue;
          ++loops;
          int cur = node;
          while (!seen[cur]) {
            seen[cur] = 1;
            const int a = link_a[cur];
            seen[a] = 1;
            cur = link_b[a];
          }
        }
        Scalar c = coef * dc;
        for (int i = 0; i < loops; ++i) c *= d;
        auto [it, fresh] = next.emplace(std::move(key), c);
        if (!fresh) it->second += c;
      }
    }
    std::erase_if(next, [&](const auto& kv) { return field_.is_zero(kv.second); });
    states = std::move(next);
    dangling = std::move(new_dangling);
    if (states.empty()) return field_.zero();
  }
  auto it = states.find(std::vector<int>{});
  return it == states.end() ? field_.zero() : it->second;
}

template class TLOracle<ClassicalField>;
template class TLOracle<RootOfUnityField>;

namespace {

TLOracle<ClassicalField>& classical_oracle() {
  static TLOracle<ClassicalField> o;
  return o;
}

TLOracle<RootOfUnityField>& quantum_oracle(int r) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<TLOracle<RootOfUnityField>>> reg;
  std::lock_guard lock(mu);
  auto& slot = reg[r];
  if (!slot) slot = std::make_unique<TLOracle<RootOfUnityField>>(RootOfUnityField{r});
  return *slot;
}

}  // namespace

TLElement<QScalar> jw_projector(int n, const QParam& p) {
  TLElement<QScalar> out;
  if (p.is_quantum()) {
    for (const auto& [k, v] : quantum_oracle(p.level()).jw(n)) out.emplace(k, QScalar(v));
  } else {
    for (const auto& [k, v] : classical_oracle().jw(n)) out.emplace(k, QScalar(v));
  }
  return out;
}

QScalar oracle_evaluate(const PlanarGraph& g, const std::vector<int>& colors, const QParam& p,
                        const OracleOptions& opt) {
  if (p.is_quantum()) return QScalar(quantum_oracle(p.level()).evaluate(g, colors, opt));
  return QScalar(classical_oracle().evaluate(g, colors, opt));
}

}  // namespace honeycomb
