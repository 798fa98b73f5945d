#include "honeycomb/evaluator.hpp"

#include <algorithm>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace honeycomb {

std::string to_string(FactorKind k) {
  switch (k) {
    case FactorKind::SixJ: return "sixj";
    case FactorKind::Theta: return "theta";
    case FactorKind::Delta: return "delta";
    case FactorKind::DeltaInv: return "delta_inv";
    case FactorKind::Tet: return "tet";
  }
  return "?";
}

std::string to_string(MoveKind k) {
  switch (k) {
    case MoveKind::BubbleMove: return "bubble_move";
    case MoveKind::Recoupling: return "recoupling";
    case MoveKind::SchurBurst: return "schur_burst";
    case MoveKind::Recomposition: return "recomposition";
    case MoveKind::Theta: return "theta";
  }
  return "?";
}

std::string Factor::str() const {
  std::string s = to_string(kind) + "(";
  for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + args[i].str();
  return s + ")";
}

std::string CoeffTerm::str() const {
  std::string s;
  if (!summed_indices.empty()) {
    s += "sum[";
    for (std::size_t i = 0; i < summed_indices.size(); ++i) s += (i ? "," : "") + summed_indices[i].str();
    s += "] ";
  }
  for (std::size_t i = 0; i < factors.size(); ++i) s += (i ? " " : "") + factors[i].str();
  return s.empty() ? "1" : s;
}

CoeffTerm iota(const CoeffTerm& t) {
  CoeffTerm r = t;
  for (auto& f : r.factors)
    for (auto& a : f.args) a = iota(a);
  for (auto& l : r.summed_indices) l = iota(l);
  return r;
}

CoeffTerm ReductionPlan::combined() const {
  CoeffTerm t;
  for (const CoeffTerm* part : {&prefactor, &psi, &iota_psi, &phi})
    t.factors.insert(t.factors.end(), part->factors.begin(), part->factors.end());
  for (const auto& ix : indices) t.summed_indices.push_back(ix.label);
  return t;
}

namespace {

std::size_t arity(FactorKind k) {
  switch (k) {
    case FactorKind::SixJ:
    case FactorKind::Tet: return 6;
    case FactorKind::Theta: return 3;
    default: return 1;
  }
}

template <class Field>
typename Field::value_type factor_value(const Recoupling<Field>& R, FactorKind k, const int* c) {
  switch (k) {
    case FactorKind::SixJ: return R.sixj(c[0], c[1], c[2], c[3], c[4], c[5]);
    case FactorKind::Tet: return R.tet(c[0], c[1], c[2], c[3], c[4], c[5]);
    case FactorKind::Theta: return R.theta(c[0], c[1], c[2]);
    case FactorKind::Delta: return R.delta(c[0]);
    case FactorKind::DeltaInv: {
      if (c[0] < 0) return R.field().zero();
      auto d = R.delta(c[0]);
      if (R.field().is_zero(d)) return R.field().zero();
      return R.field().one() / d;
    }
  }
  return R.field().zero();
}

// Trivalent rotation-system graph on which the moves are carried out
// symbolically. Vertices remember the lattice site they stand for.
class MoveGraph {
 public:
  struct V {
    std::vector<int> rot;
    std::optional<Site> site;
    bool alive = true;
  };
  struct E {
    int u = -1, v = -1;
    EdgeLabel label;
    bool alive = true;
  };

  std::vector<V> vs;
  std::vector<E> es;

  MoveGraph(const HoneycombNet& h, const SmoothNet& s) {
    std::map<int, int> id;
    for (int v : s.nodes) {
      if (h.valence(v) != 3) throw std::invalid_argument("reduction needs a trivalent net");
      id[v] = static_cast<int>(vs.size());
      vs.push_back({{}, h.vertices[v].site, true});
    }
    for (const auto& se : s.edges) {
      if (se.u < 0 || se.v < 0 || se.u == se.v) throw std::invalid_argument("malformed network");
      es.push_back({id.at(se.u), id.at(se.v), se.label, true});
    }
    for (int v : s.nodes)
      for (int raw : h.vertices[v].edges) vs[id.at(v)].rot.push_back(s.edge_of_raw[raw]);
  }

  int vertex_at(Site s) const {
    for (int v = 0; v < static_cast<int>(vs.size()); ++v)
      if (vs[v].alive && vs[v].site && *vs[v].site == s) return v;
    throw std::logic_error("no node at site");
  }

  std::vector<int> edges_between(int a, int b) const {
    std::vector<int> r;
    for (int e = 0; e < static_cast<int>(es.size()); ++e)
      if (es[e].alive && ((es[e].u == a && es[e].v == b) || (es[e].u == b && es[e].v == a))) r.push_back(e);
    return r;
  }

  int edge_between(int a, int b) const {
    auto r = edges_between(a, b);
    if (r.size() != 1) throw std::logic_error("expected a single edge between nodes");
    return r[0];
  }

  int other_end(int e, int v) const { return es[e].u == v ? es[e].v : es[e].u; }

  // Rotation at v read from e: (e, next, next).
  std::array<int, 3> rot_from(int v, int e) const {
    const auto& r = vs[v].rot;
    auto it = std::find(r.begin(), r.end(), e);
    if (r.size() != 3 || it == r.end()) throw std::logic_error("bad rotation");
    const int k = static_cast<int>(it - r.begin());
    return {r[k], r[(k + 1) % 3], r[(k + 2) % 3]};
  }

  int third_edge(int v, int e1, int e2) const {
    for (int e : vs[v].rot)
      if (e != e1 && e != e2) return e;
    throw std::logic_error("no third edge");
  }

  void move_end(int e, int from, int to) {
    if (es[e].u == from) es[e].u = to;
    else if (es[e].v == from) es[e].v = to;
    else throw std::logic_error("edge not incident");
  }

  const EdgeLabel& L(int e) const { return es[e].label; }

  struct FMove {
    int u, v;
    Factor factor;
    std::pair<EdgeLabel, EdgeLabel> tri_u, tri_v;
  };

  // Recouples edge e; its vertices become (e', x2, y1) and (e', y2, x1).
  FMove fmove(int e, const EdgeLabel& fresh) {
    const int u = es[e].u, v = es[e].v;
    auto [e0, x1, x2] = rot_from(u, e);
    auto [e1, y1, y2] = rot_from(v, e);
    const std::set<int> legs{x1, x2, y1, y2};
    if (legs.size() != 4 || legs.count(e)) throw std::logic_error("recoupling needs four distinct legs");
    FMove m{u, v, Factor{FactorKind::SixJ, {L(x1), L(x2), L(e), L(y1), L(y2), fresh}}, {L(x2), L(y1)},
            {L(y2), L(x1)}};
    vs[u].rot = {e, x2, y1};
    vs[v].rot = {e, y2, x1};
    move_end(y1, v, u);
    move_end(x1, u, v);
    es[e].label = fresh;
    vs[u].site.reset();
    vs[v].site.reset();
    return m;
  }

  // Collapses the triangular face v1 v2 v3 into v1.
  std::vector<Factor> triangle(int v1, int v2, int v3) {
    const int e12 = edge_between(v1, v2), e23 = edge_between(v2, v3), e31 = edge_between(v3, v1);
    const int x1 = third_edge(v1, e12, e31), x2 = third_edge(v2, e12, e23), x3 = third_edge(v3, e23, e31);
    // Contract e12, then e31; the doubled e23 must be adjacent for a face.
    auto a = rot_from(v1, e12), b = rot_from(v2, e12);
    std::vector<int> merged{a[1], a[2], b[1], b[2]};
    auto it = std::find(merged.begin(), merged.end(), e31);
    std::rotate(merged.begin(), it, merged.end());
    auto c = rot_from(v3, e31);
    std::vector<int> ring{merged[1], merged[2], merged[3], c[1], c[2]};
    std::vector<int> out;
    bool ok = false;
    for (int k = 0; k < 5; ++k)
      if (ring[k] == e23 && ring[(k + 1) % 5] == e23) {
        for (int j = 2; j < 5; ++j) out.push_back(ring[(k + j) % 5]);
        ok = true;
      }
    if (!ok) throw std::logic_error("triangle is not a face");
    std::vector<Factor> f{Factor{FactorKind::SixJ, {L(e31), L(x1), L(e12), L(x2), L(e23), L(x3)}},
                          Factor{FactorKind::DeltaInv, {L(x3)}}, Factor{FactorKind::Theta, {L(e31), L(e23), L(x3)}}};
    vs[v1].rot = out;
    vs[v1].site.reset();
    move_end(x2, v2, v1);
    move_end(x3, v3, v1);
    for (int e : {e12, e23, e31}) es[e].alive = false;
    vs[v2].alive = vs[v3].alive = false;
    return f;
  }

  // Bursts the bubble between u and v (two parallel edges). Returns the
  // factors and the labels (x, y) of the outer legs, which are identified.
  std::pair<std::vector<Factor>, std::pair<EdgeLabel, EdgeLabel>> bubble(int u, int v) {
    auto par = edges_between(u, v);
    if (par.size() != 2) throw std::logic_error("bubble needs two parallel edges");
    const int x = third_edge(u, par[0], par[1]), y = third_edge(v, par[0], par[1]);
    std::vector<Factor> f{Factor{FactorKind::Theta, {L(x), L(par[0]), L(par[1])}}, Factor{FactorKind::DeltaInv, {L(x)}}};
    auto labels = std::make_pair(L(x), L(y));
    const int w = other_end(y, v);
    std::replace(vs[w].rot.begin(), vs[w].rot.end(), y, x);
    move_end(x, u, w);
    es[y].alive = es[par[0]].alive = es[par[1]].alive = false;
    vs[u].alive = vs[v].alive = false;
    return {f, labels};
  }

  void rename(const EdgeLabel& from, const EdgeLabel& to) {
    for (auto& e : es)
      if (e.alive && e.label == from) e.label = to;
  }
};

void rename_in(std::vector<Factor>& fs, const EdgeLabel& from, const EdgeLabel& to) {
  for (auto& f : fs)
    for (auto& a : f.args)
      if (a == from) a = to;
}

EdgeLabel index_label(int level, int pos) { return EdgeLabel{'i', level, pos}; }

const HoneycombNet& cached_h(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<HoneycombNet>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<HoneycombNet>(build_h(n));
  return *slot;
}

ReductionPlan build_base_plan() {
  const HoneycombNet& h = cached_h(2);
  MoveGraph g(h, smooth(h));
  ReductionPlan plan;
  plan.m = 2;
  const int ul = g.vertex_at(hex_corner(1, 0, 0)), ur = g.vertex_at(hex_corner(0, 1, 0)),
            y = g.vertex_at(hex_corner(1, 1, 3));
  const int el = g.vertex_at(hex_corner(1, 0, 3)), v0 = g.vertex_at(hex_corner(1, 0, 2)),
            er = g.vertex_at(hex_corner(0, 1, 3));
  auto f1 = g.triangle(ul, ur, y);
  plan.moves.push_back({MoveKind::BubbleMove, "collapse top hexagon", f1});
  auto f2 = g.triangle(el, v0, er);
  plan.moves.push_back({MoveKind::BubbleMove, "collapse bottom hexagon", f2});
  auto es = g.edges_between(ul, el);
  if (es.size() != 3) throw std::logic_error("H_2 does not reduce to a theta net");
  std::vector<Factor> f3{Factor{FactorKind::Theta, {g.L(es[0]), g.L(es[1]), g.L(es[2])}}};
  plan.moves.push_back({MoveKind::Theta, "theta net", f3});
  for (auto* fs : {&f1, &f2, &f3}) plan.prefactor.factors.insert(plan.prefactor.factors.end(), fs->begin(), fs->end());
  return plan;
}

ReductionPlan build_plan(int m) {
  const HoneycombNet& h = cached_h(m);
  MoveGraph g(h, smooth(h));
  ReductionPlan plan;
  plan.m = m;
  const int k = m - 1;
  auto at = [&](int r, int c, int corner) { return g.vertex_at(hex_corner(r, c, corner)); };
  auto record = [&](MoveKind kind, std::string note, const std::vector<Factor>& fs, CoeffTerm& into) {
    plan.moves.push_back({kind, std::move(note), fs});
    into.factors.insert(into.factors.end(), fs.begin(), fs.end());
  };

  // Crown nodes are looked up before any move, while sites are intact.
  const int ul = at(k, k - 1, 0), ur = at(k - 1, k, 0), y = at(k, k, 3), v0 = at(k, k - 1, 2);
  struct Side {
    int end;
    std::vector<int> a, b, t;
  } left{at(k, 0, 3), {}, {}, {}}, right{at(0, k, 3), {}, {}, {}};
  for (int j = 1; j <= m - 2; ++j) {
    left.a.push_back(at(k, j - 1, 2));
    left.b.push_back(at(k, j - 1, 1));
    left.t.push_back(at(k, j - 1, 0));
    right.a.push_back(at(j - 1, k, 4));
    right.b.push_back(at(j - 1, k, 5));
    right.t.push_back(at(j - 1, k, 0));
  }
  std::vector<Site> a_sites_l, a_sites_r;
  for (int j = 0; j < m - 2; ++j) {
    a_sites_l.push_back(hex_corner(k, j, 2));
    a_sites_r.push_back(hex_corner(j, k, 4));
  }

  {
    auto f = g.triangle(ul, ur, y);
    record(MoveKind::BubbleMove, "collapse top hexagon", f, plan.prefactor);
  }
  const int top = ul;

  auto run_side = [&](Side& s, const std::vector<Site>& a_sites, int sign, CoeffTerm& psi) {
    int cur = s.end;
    for (int j = 1; j <= m - 2; ++j) {
      const int a = s.a[j - 1];
      const int e = g.edge_between(cur, a);
      const int down = g.third_edge(a, e, g.edge_between(a, s.b[j - 1]));
      const EdgeLabel fresh = index_label(k, sign * j);
      auto mv = g.fmove(e, fresh);
      record(MoveKind::Recoupling, "recouple " + g.L(down).str() + " side into " + fresh.str(), {mv.factor}, psi);
      plan.indices.push_back({fresh, {mv.tri_u, mv.tri_v}});
      const auto& ru = g.vs[mv.u].rot;
      const bool u_is_p = std::find(ru.begin(), ru.end(), down) != ru.end();
      const int p = u_is_p ? mv.u : mv.v, q = u_is_p ? mv.v : mv.u;
      g.vs[p].site = a_sites[j - 1];
      auto f = g.triangle(q, s.t[j - 1], s.b[j - 1]);
      record(MoveKind::BubbleMove, "collapse crown hexagon " + std::to_string(j), f, j == 1 ? psi : plan.phi);
      cur = q;
    }
    s.end = cur;
  };
  run_side(left, a_sites_l, -1, plan.psi);
  run_side(right, a_sites_r, +1, plan.iota_psi);

  {
    auto f = g.triangle(left.end, top, v0);
    record(MoveKind::BubbleMove, "join crown top", f, plan.prefactor);
  }
  auto [fb, legs] = g.bubble(left.end, right.end);
  record(MoveKind::SchurBurst, "burst " + legs.first.str() + " = " + legs.second.str(), fb, plan.prefactor);

  // Identify the two outer legs with one index.
  const EdgeLabel merged = index_label(k, 0);
  g.rename(legs.first, merged);
  g.rename(legs.second, merged);
  for (CoeffTerm* t : {&plan.prefactor, &plan.psi, &plan.iota_psi, &plan.phi}) {
    rename_in(t->factors, legs.first, merged);
    rename_in(t->factors, legs.second, merged);
  }
  for (auto& mv : plan.moves) {
    rename_in(mv.factors, legs.first, merged);
    rename_in(mv.factors, legs.second, merged);
  }
  IndexSpec joined{merged, {}};
  std::vector<IndexSpec> kept;
  for (auto& ix : plan.indices) {
    if (ix.label == legs.first || ix.label == legs.second) {
      joined.triangles.insert(joined.triangles.end(), ix.triangles.begin(), ix.triangles.end());
    } else {
      kept.push_back(ix);
    }
  }
  kept.push_back(joined);
  for (auto& ix : kept)
    for (auto& [x, yy] : ix.triangles) {
      if (x == legs.first || x == legs.second) x = merged;
      if (yy == legs.first || yy == legs.second) yy = merged;
    }
  plan.indices = kept;

  // Left indices, right indices, then the joined one.
  std::stable_sort(plan.indices.begin(), plan.indices.end(), [](const IndexSpec& x, const IndexSpec& z) {
    auto key = [](const IndexSpec& s) { return s.label.position == 0 ? 2 : (s.label.position < 0 ? 0 : 1); };
    return key(x) < key(z);
  });
  for (CoeffTerm* t : {&plan.prefactor, &plan.psi, &plan.iota_psi, &plan.phi}) {
    std::set<EdgeLabel> used;
    for (const auto& f : t->factors)
      for (const auto& a : f.args)
        if (a.letter == 'i') used.insert(a);
    t->summed_indices.assign(used.begin(), used.end());
  }

  // What remains is H_{m-1}; match its smoothed edges by their end sites.
  const HoneycombNet& lower = cached_h(m - 1);
  const SmoothNet ls = smooth(lower);
  int alive_edges = 0;
  for (const auto& e : g.es) alive_edges += e.alive;
  if (alive_edges != static_cast<int>(ls.edges.size())) throw std::logic_error("reduction left a malformed net");
  std::vector<EdgeLabel> smooth_target(ls.edges.size());
  for (std::size_t i = 0; i < ls.edges.size(); ++i) {
    const auto& se = ls.edges[i];
    const int u = g.vertex_at(lower.vertices[se.u].site), v = g.vertex_at(lower.vertices[se.v].site);
    smooth_target[i] = g.L(g.edge_between(u, v));
  }
  plan.target.resize(lower.num_edges());
  for (int e = 0; e < lower.num_edges(); ++e) plan.target[e] = smooth_target[ls.edge_of_raw[e]];
  plan.moves.push_back({MoveKind::Recomposition, "read off H_" + std::to_string(m - 1), {}});
  return plan;
}

// Plan with labels resolved to slots: raw edges of H_m first, then indices.
struct CompiledFactor {
  FactorKind kind;
  std::array<int, 6> slot{};
};

struct CompiledPlan {
  const ReductionPlan* plan = nullptr;
  int num_edges = 0;
  std::vector<CompiledFactor> prefactor, psi, iota_psi, phi;
  std::vector<std::vector<std::pair<int, int>>> domains;  // per index
  std::vector<int> target;                                // raw edge of H_{m-1} -> slot
};

CompiledPlan compile(const ReductionPlan& plan) {
  const HoneycombNet& h = cached_h(plan.m);
  CompiledPlan c;
  c.plan = &plan;
  c.num_edges = h.num_edges();
  std::map<EdgeLabel, int> slot;
  for (int e = 0; e < h.num_edges(); ++e) slot[h.edges[e].label] = e;
  for (std::size_t i = 0; i < plan.indices.size(); ++i) slot[plan.indices[i].label] = c.num_edges + static_cast<int>(i);
  auto res = [&](const EdgeLabel& l) {
    auto it = slot.find(l);
    if (it == slot.end()) throw std::logic_error("unresolved label " + l.str());
    return it->second;
  };
  auto conv = [&](const CoeffTerm& t, std::vector<CompiledFactor>& out) {
    for (const auto& f : t.factors) {
      CompiledFactor cf{f.kind, {}};
      for (std::size_t i = 0; i < f.args.size(); ++i) cf.slot[i] = res(f.args[i]);
      out.push_back(cf);
    }
  };
  conv(plan.prefactor, c.prefactor);
  conv(plan.psi, c.psi);
  conv(plan.iota_psi, c.iota_psi);
  conv(plan.phi, c.phi);
  for (const auto& ix : plan.indices) {
    std::vector<std::pair<int, int>> d;
    for (const auto& [a, b] : ix.triangles) d.push_back({res(a), res(b)});
    c.domains.push_back(d);
  }
  for (const auto& l : plan.target) c.target.push_back(res(l));
  return c;
}

const CompiledPlan& compiled_plan(int m) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<ReductionPlan>> plans;
  static std::map<int, std::unique_ptr<CompiledPlan>> compiled;
  std::lock_guard lock(mu);
  auto& cp = compiled[m];
  if (!cp) {
    auto& p = plans[m];
    p = std::make_unique<ReductionPlan>(m == 2 ? build_base_plan() : build_plan(m));
    cp = std::make_unique<CompiledPlan>(compile(*p));
  }
  return *cp;
}

template <class Field>
typename Field::value_type product(const Recoupling<Field>& R, const std::vector<CompiledFactor>& fs,
                                   const std::vector<int>& col, typename Field::value_type acc) {
  for (const auto& f : fs) {
    if (R.field().is_zero(acc)) return acc;
    int c[6];
    for (std::size_t i = 0; i < arity(f.kind); ++i) c[i] = col[f.slot[i]];
    acc *= factor_value(R, f.kind, c);
  }
  return acc;
}

template <class Field>
typename Field::value_type plan_weight(const Recoupling<Field>& R, const CompiledPlan& cp, const std::vector<int>& col) {
  auto w = R.field().one();
  for (const auto* fs : {&cp.prefactor, &cp.psi, &cp.iota_psi, &cp.phi}) w = product(R, *fs, col, w);
  return w;
}

// Calls fn(col) for every admissible index assignment, in lexicographic order.
template <class Field, class Fn>
void for_each_assignment(const Recoupling<Field>& R, const CompiledPlan& cp, std::vector<int>& col, std::size_t k,
                         Fn&& fn) {
  if (k == cp.domains.size()) {
    fn(col);
    return;
  }
  int lo = 0, hi = 1 << 20, parity = -1;
  for (auto [sa, sb] : cp.domains[k]) {
    const int a = col[sa], b = col[sb];
    lo = std::max(lo, std::abs(a - b));
    hi = std::min(hi, a + b);
    parity = (a + b) & 1;
  }
  const int slot = cp.num_edges + static_cast<int>(k);
  for (int x = lo; x <= hi; ++x) {
    if (parity >= 0 && (x & 1) != parity) continue;
    bool ok = true;
    for (auto [sa, sb] : cp.domains[k]) ok = ok && R.admissible(col[sa], col[sb], x);
    if (!ok) continue;
    col[slot] = x;
    for_each_assignment(R, cp, col, k + 1, fn);
  }
  col[slot] = -1;
}

// Coloring expressed on the canonical H_n edge ids.
EdgeColoring canonical_coloring(const HoneycombNet& net, const EdgeColoring& coloring) {
  if (!net.open_ends.empty()) throw std::invalid_argument("evaluation needs a closed network");
  if (static_cast<int>(coloring.size()) != net.num_edges()) throw std::invalid_argument("coloring size mismatch");
  const HoneycombNet& h = cached_h(net.n);
  if (net.num_edges() != h.num_edges()) throw std::invalid_argument("network is not a honeycomb H_n");
  EdgeColoring out(h.num_edges(), -1);
  for (int e = 0; e < net.num_edges(); ++e) {
    auto id = h.find_edge(net.edges[e].label);
    if (!id) throw std::invalid_argument("network is not a honeycomb H_n");
    out[*id] = coloring[e];
  }
  return out;
}

template <class Field>
class Evaluator {
 public:
  using Scalar = typename Field::value_type;
  explicit Evaluator(const Recoupling<Field>& R) : R_(R) {}

  Scalar value(int n, const EdgeColoring& c, TraceNode* node) {
    if (n == 1) {
      for (int x : c)
        if (x != c[0]) return R_.field().zero();
      return R_.delta(c[0]);
    }
    if (!node) {
      auto it = memo_.find({n, c});
      if (it != memo_.end()) return it->second;
    }
    Scalar v = R_.field().zero();
    const CompiledPlan& cp = compiled_plan(n);
    std::vector<int> col(c.begin(), c.end());
    col.resize(cp.num_edges + cp.domains.size(), -1);
    if (n == 2) {
      v = plan_weight(R_, cp, col);
    } else {
      for_each_assignment(R_, cp, col, 0, [&](const std::vector<int>& full) {
        Scalar w = plan_weight(R_, cp, full);
        if (R_.field().is_zero(w)) return;
        EdgeColoring child(cp.target.size());
        for (std::size_t e = 0; e < child.size(); ++e) child[e] = full[cp.target[e]];
        TraceNode* sub = nullptr;
        if (node) {
          node->children.push_back({n - 1, child, assignment(cp, full), {}});
          sub = &node->children.back();
        }
        v += w * value(n - 1, child, sub);
      });
    }
    if (!node) memo_.emplace(std::make_pair(n, c), v);
    return v;
  }

  static LabelColors assignment(const CompiledPlan& cp, const std::vector<int>& full) {
    LabelColors a;
    for (std::size_t i = 0; i < cp.domains.size(); ++i) a[cp.plan->indices[i].label] = full[cp.num_edges + i];
    return a;
  }

  Scalar replay(const TraceNode& node) {
    if (node.n == 1) {
      for (int x : node.coloring)
        if (x != node.coloring[0]) return R_.field().zero();
      return R_.delta(node.coloring[0]);
    }
    const CompiledPlan& cp = compiled_plan(node.n);
    std::vector<int> col(node.coloring.begin(), node.coloring.end());
    col.resize(cp.num_edges + cp.domains.size(), -1);
    if (node.n == 2) return plan_weight(R_, cp, col);
    Scalar v = R_.field().zero();
    for (const auto& ch : node.children) {
      for (std::size_t i = 0; i < cp.domains.size(); ++i) col[cp.num_edges + i] = ch.indices.at(cp.plan->indices[i].label);
      v += plan_weight(R_, cp, col) * replay(ch);
    }
    return v;
  }

 private:
  const Recoupling<Field>& R_;
  std::map<std::pair<int, EdgeColoring>, Scalar> memo_;
};

nlohmann::ordered_json node_json(const TraceNode& t) {
  nlohmann::ordered_json j;
  j["n"] = t.n;
  j["coloring"] = t.coloring;
  if (!t.indices.empty()) {
    auto& ix = j["indices"] = nlohmann::ordered_json::object();
    for (const auto& [l, c] : t.indices) ix[l.str()] = c;
  }
  if (!t.children.empty()) {
    auto& ch = j["children"] = nlohmann::ordered_json::array();
    for (const auto& c : t.children) ch.push_back(node_json(c));
  }
  return j;
}

LabelColors crown_colors(int n, const EdgeColoring& coloring, const LabelColors& indices) {
  const HoneycombNet& h = cached_h(n);
  if (static_cast<int>(coloring.size()) != h.num_edges()) throw std::invalid_argument("coloring size mismatch");
  const ReductionPlan& plan = reduction_plan(n);
  if (indices.size() != plan.indices.size()) throw std::invalid_argument("index set arity mismatch");
  for (const auto& ix : plan.indices)
    if (!indices.count(ix.label)) throw std::invalid_argument("index set arity mismatch");
  LabelColors lc = indices;
  for (int e = 0; e < h.num_edges(); ++e) lc[h.edges[e].label] = coloring[e];
  return lc;
}

}  // namespace

QScalar evaluate_term(const CoeffTerm& t, const LabelColors& colors, const QParam& p) {
  return with_backend(p, [&](auto& R) -> QScalar {
    auto acc = R.field().one();
    for (const auto& f : t.factors) {
      if (f.args.size() != arity(f.kind)) throw std::invalid_argument("factor arity mismatch");
      int c[6];
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        auto it = colors.find(f.args[i]);
        c[i] = it == colors.end() ? -1 : it->second;
      }
      acc *= factor_value(R, f.kind, c);
    }
    return QScalar(acc);
  });
}

QScalar bubble_move(int a, int b, int c, int d, int e, int f, const QParam& p) {
  return with_backend(p, [&](auto& R) -> QScalar {
    auto s = R.sixj(a, b, e, c, d, f);
    if (R.field().is_zero(s)) return QScalar(R.field().zero());
    const int args[1] = {f};
    return QScalar(s * factor_value(R, FactorKind::DeltaInv, args) * R.theta(a, d, f));
  });
}

const ReductionPlan& reduction_plan(int m) {
  if (m < 2) throw std::invalid_argument("reduction plans start at H_2");
  return *compiled_plan(m).plan;
}

std::vector<ReductionTerm> reduce_step(const HoneycombNet& net, const EdgeColoring& coloring, const QParam& p) {
  if (net.n < 3) throw std::invalid_argument("reduce_step needs H_n with n >= 3");
  const EdgeColoring c = canonical_coloring(net, coloring);
  std::vector<ReductionTerm> out;
  if (!coloring_admissible(cached_h(net.n), c, p)) return out;
  const CompiledPlan& cp = compiled_plan(net.n);
  with_backend(p, [&](auto& R) {
    std::vector<int> col(c.begin(), c.end());
    col.resize(cp.num_edges + cp.domains.size(), -1);
    for_each_assignment(R, cp, col, 0, [&](const std::vector<int>& full) {
      auto w = plan_weight(R, cp, full);
      if (R.field().is_zero(w)) return;
      ReductionTerm t;
      t.weight = QScalar(w);
      t.coloring.resize(cp.target.size());
      for (std::size_t e = 0; e < cp.target.size(); ++e) t.coloring[e] = full[cp.target[e]];
      for (std::size_t i = 0; i < cp.domains.size(); ++i) t.indices[cp.plan->indices[i].label] = full[cp.num_edges + i];
      out.push_back(std::move(t));
    });
  });
  return out;
}

QScalar psi_coeff(const EdgeColoring& coloring, const LabelColors& indices, int n, const QParam& p) {
  if (n <= 2) return with_backend(p, [](auto& R) { return QScalar(R.field().one()); });
  return evaluate_term(reduction_plan(n).psi, crown_colors(n, coloring, indices), p);
}

QScalar iota_psi_coeff(const EdgeColoring& coloring, const LabelColors& indices, int n, const QParam& p) {
  if (n <= 2) return with_backend(p, [](auto& R) { return QScalar(R.field().one()); });
  return evaluate_term(reduction_plan(n).iota_psi, crown_colors(n, coloring, indices), p);
}

QScalar phi_coeff(const EdgeColoring& coloring, const LabelColors& indices, int n, const QParam& p) {
  if (n < 4) return with_backend(p, [](auto& R) { return QScalar(R.field().one()); });
  return evaluate_term(reduction_plan(n).phi, crown_colors(n, coloring, indices), p);
}

EdgeColoring mirror_coloring(const HoneycombNet& h, const EdgeColoring& coloring) {
  EdgeColoring out(coloring.size());
  for (int e = 0; e < h.num_edges(); ++e) out[e] = coloring[h.edge_id(iota(h.edges[e].label))];
  return out;
}

LabelColors mirror_indices(const LabelColors& indices) {
  LabelColors out;
  for (const auto& [l, c] : indices) out[iota(l)] = c;
  return out;
}

long long summation_count(int n) {
  if (n < 2) throw std::invalid_argument("summation_count needs n >= 2");
  long long a = 0;
  for (int m = 3; m <= n; ++m) a += 2 * m - 5;
  return a;
}

long long EvaluationTrace::summed_index_count() const {
  long long s = 0;
  for (const auto& [m, c] : indices_per_level) s += c;
  return s;
}

std::string EvaluationTrace::to_json() const {
  nlohmann::ordered_json j;
  j["backend"] = param.str();
  j["value"] = value.str();
  j["summed_indices"] = summed_index_count();
  auto& lv = j["levels"] = nlohmann::ordered_json::array();
  for (const auto& [m, mv] : moves) {
    nlohmann::ordered_json l;
    l["n"] = m;
    l["indices"] = indices_per_level.count(m) ? indices_per_level.at(m) : 0;
    auto& arr = l["moves"] = nlohmann::ordered_json::array();
    for (const auto& r : mv) {
      nlohmann::ordered_json jm;
      jm["kind"] = to_string(r.kind);
      jm["note"] = r.note;
      auto& fs = jm["factors"] = nlohmann::ordered_json::array();
      for (const auto& f : r.factors) fs.push_back(f.str());
      arr.push_back(jm);
    }
    lv.push_back(l);
  }
  j["tree"] = node_json(root);
  return j.dump(2);
}

QScalar evaluate(const HoneycombNet& net, const EdgeColoring& coloring, const QParam& p, EvaluationTrace* trace) {
  if (net.kind != NetKind::H && net.kind != NetKind::Composite) throw std::invalid_argument("evaluate needs H_n");
  if (net.n < 1) throw std::invalid_argument("evaluate needs n >= 1");
  const EdgeColoring c = canonical_coloring(net, coloring);
  if (trace) {
    *trace = EvaluationTrace{};
    trace->param = p;
    trace->root = TraceNode{net.n, c, {}, {}};
    for (int m = 2; m <= net.n; ++m) {
      trace->moves[m] = reduction_plan(m).moves;
      trace->indices_per_level[m] = static_cast<int>(reduction_plan(m).indices.size());
    }
  }
  QScalar v = with_backend(p, [&](auto& R) -> QScalar {
    using F = std::decay_t<decltype(R.field())>;
    if (net.zero || !coloring_admissible(cached_h(net.n), c, p)) return QScalar(R.field().zero());
    Evaluator<F> ev(R);
    return QScalar(ev.value(net.n, c, trace ? &trace->root : nullptr));
  });
  if (trace) trace->value = v;
  return v;
}

QScalar replay(const EvaluationTrace& trace) {
  return with_backend(trace.param, [&](auto& R) -> QScalar {
    using F = std::decay_t<decltype(R.field())>;
    const HoneycombNet& h = cached_h(trace.root.n);
    if (!coloring_admissible(h, trace.root.coloring, trace.param)) return QScalar(R.field().zero());
    Evaluator<F> ev(R);
    return QScalar(ev.replay(trace.root));
  });
}

}  // namespace honeycomb
