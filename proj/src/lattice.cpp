#include "honeycomb/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "honeycomb/recoupling.hpp"

namespace honeycomb {

// ---------------------------------------------------------------- labels

std::string EdgeLabel::str() const {
  return std::string(1, letter) + "_" + std::to_string(level) + "^" + std::to_string(position);
}

EdgeLabel EdgeLabel::parse(const std::string& s) {
  EdgeLabel l;
  const auto us = s.find('_'), car = s.find('^');
  if (s.size() < 5 || us != 1 || car == std::string::npos || car < 3)
    throw std::invalid_argument("bad edge label '" + s + "'");
  l.letter = s[0];
  l.level = std::stoi(s.substr(2, car - 2));
  l.position = std::stoi(s.substr(car + 1));
  return l;
}

EdgeLabel iota(const EdgeLabel& l) {
  EdgeLabel r = l;
  switch (l.letter) {
    case 'a': r.letter = 'b'; break;
    case 'b': r.letter = 'a'; break;
    case 'c': r.letter = 'd'; break;
    case 'd': r.letter = 'c'; break;
    default: break;
  }
  r.position = -l.position;
  return r;
}

namespace {

int letter_group(char c) { return (c == 'a' || c == 'b' || c == 'c' || c == 'd') ? 0 : 1; }

auto precedence_key(const EdgeLabel& l) {
  return std::make_tuple(l.level, letter_group(l.letter), std::abs(l.position), l.position, l.letter);
}

}  // namespace

bool label_precedes(const EdgeLabel& x, const EdgeLabel& y) { return precedence_key(x) < precedence_key(y); }

std::string to_string(NetKind k) {
  switch (k) {
    case NetKind::H: return "H";
    case NetKind::O: return "O";
    case NetKind::HH: return "HH";
    case NetKind::BO: return "BO";
    case NetKind::Composite: return "composite";
  }
  return "?";
}

std::string to_string(Branch b) {
  switch (b) {
    case Branch::None: return "none";
    case Branch::Left: return "left";
    case Branch::Center: return "center";
    case Branch::Right: return "right";
  }
  return "?";
}

// ---------------------------------------------------------------- geometry

namespace {

enum Dir { UR = 0, R = 1, LR = 2, LL = 3, L = 4, UL = 5 };
constexpr Site kOffset[6] = {{0, 2}, {1, 1}, {1, -1}, {0, -2}, {-1, -1}, {-1, 1}};
constexpr int kNeighbor[6][2] = {{0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}};

Site hex_center(int r, int c) { return {c - r, 3 * (c + r)}; }
Site hex_vertex(int r, int c, int k) {
  const Site o = hex_center(r, c);
  return {o.x + kOffset[k].x, o.y + kOffset[k].y};
}

constexpr int kOutside = std::numeric_limits<int>::max();
int hex_level(int r, int c) { return (r < 0 || c < 0) ? kOutside : std::max(r, c); }

EdgeLabel make(char letter, int level, int pos) { return EdgeLabel{letter, level, pos}; }

// Intrinsic label of edge `k` of hexagon (r, c).
EdgeLabel raw_label(int r, int c, int k) {
  const int nr = r + kNeighbor[k][0], nc = c + kNeighbor[k][1];
  const int own = hex_level(r, c), other = hex_level(nr, nc);
  if (other < own) return raw_label(nr, nc, (k + 3) % 6);
  const int K = own;
  if (K == 0) {
    switch (k) {
      case UL: return make('c', 0, -1);
      case UR: return make('d', 0, 1);
      case L: return make('e', 0, -1);
      case R: return make('e', 0, 1);
      case LL: return make('d', -1, 0);
      default: return make('c', -1, 0);
    }
  }
  if (other == own) {
    if (r == K && nr == K) return make('e', K, -(K - std::min(c, nc)));
    if (c == K && nc == K) return make('e', K, K - std::min(r, nr));
    return make('e', K, 0);
  }
  if (r == K && (k == UL || k == L || k == LL)) {
    const int j = K - c;
    if (k == UL) return make('c', K, -(2 * j + 1));
    if (k == L) return make('c', K, -(2 * j + 2));
    return make('c', K, -(2 * j + 3));
  }
  if (c == K && (k == UR || k == R || k == LR)) {
    const int j = K - r;
    if (k == UR) return make('d', K, 2 * j + 1);
    if (k == R) return make('d', K, 2 * j + 2);
    return make('d', K, 2 * j + 3);
  }
  throw std::logic_error("unlabeled honeycomb edge");
}

double angle(Site from, Site to) {
  return std::atan2((to.y - from.y) * 0.5, (to.x - from.x) * std::sqrt(3.0) / 2.0);
}

Branch branch_of(const EdgeLabel& l) {
  if (l.position < 0) return Branch::Left;
  if (l.position > 0) return Branch::Right;
  return Branch::Center;
}

// Collects raw edges of the given hexagons (filtered by `keep`).
template <class Keep>
HoneycombNet net_from_hexes(const std::vector<std::pair<int, int>>& hexes, Keep keep) {
  std::map<std::pair<Site, Site>, EdgeLabel> raw;
  for (auto [r, c] : hexes)
    for (int k = 0; k < 6; ++k) {
      Site a = hex_vertex(r, c, k), b = hex_vertex(r, c, (k + 1) % 6);
      if (b < a) std::swap(a, b);
      const EdgeLabel l = raw_label(r, c, k);
      if (!keep(l)) continue;
      auto [it, fresh] = raw.emplace(std::make_pair(a, b), l);
      if (!fresh && it->second != l) throw std::logic_error("inconsistent edge labels");
    }
  std::set<Site> sites;
  for (const auto& [ends, l] : raw) {
    sites.insert(ends.first);
    sites.insert(ends.second);
  }
  std::vector<Site> order(sites.begin(), sites.end());
  std::sort(order.begin(), order.end(), [](Site a, Site b) { return std::tie(a.y, a.x) < std::tie(b.y, b.x); });
  HoneycombNet net;
  std::map<Site, int> vid;
  for (Site s : order) {
    vid[s] = net.num_vertices();
    net.vertices.push_back({s, {}});
  }
  std::vector<std::pair<EdgeLabel, std::pair<Site, Site>>> es;
  for (const auto& [ends, l] : raw) es.push_back({l, ends});
  std::sort(es.begin(), es.end(), [](const auto& x, const auto& y) {
    return std::make_tuple(x.first.level, x.first.position, x.first.letter) <
           std::make_tuple(y.first.level, y.first.position, y.first.letter);
  });
  for (const auto& [l, ends] : es) {
    NetEdge e;
    e.u = vid.at(ends.first);
    e.v = vid.at(ends.second);
    e.tip = ends.second;
    e.label = l;
    e.branch = branch_of(l);
    const int id = net.num_edges();
    net.edges.push_back(e);
    net.vertices[e.u].edges.push_back(id);
    net.vertices[e.v].edges.push_back(id);
  }
  net.sort_rotations();
  return net;
}

std::vector<std::pair<int, int>> rhombus(int n) {
  std::vector<std::pair<int, int>> hexes;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) hexes.push_back({r, c});
  return hexes;
}

void check_size(int n) {
  if (n < 1) throw std::invalid_argument("lattice size must be >= 1");
}

}  // namespace

// ---------------------------------------------------------------- net basics

std::optional<int> HoneycombNet::find_vertex(Site s) const {
  for (int v = 0; v < num_vertices(); ++v)
    if (vertices[v].site == s) return v;
  return std::nullopt;
}

std::optional<int> HoneycombNet::find_edge(const EdgeLabel& l) const {
  for (int e = 0; e < num_edges(); ++e)
    if (edges[e].label == l) return e;
  return std::nullopt;
}

int HoneycombNet::edge_id(const EdgeLabel& l) const {
  auto e = find_edge(l);
  if (!e) throw std::out_of_range("no edge labeled " + l.str());
  return *e;
}

Site HoneycombNet::site_of(int edge, int end) const {
  const NetEdge& e = edges[edge];
  if (end == 0) return vertices[e.u].site;
  return e.v >= 0 ? vertices[e.v].site : e.tip;
}

void HoneycombNet::sort_rotations() {
  for (int v = 0; v < num_vertices(); ++v) {
    auto& inc = vertices[v].edges;
    const Site s = vertices[v].site;
    std::sort(inc.begin(), inc.end(), [&](int a, int b) {
      const Site ta = edges[a].u == v ? site_of(a, 1) : site_of(a, 0);
      const Site tb = edges[b].u == v ? site_of(b, 1) : site_of(b, 0);
      return angle(s, ta) < angle(s, tb);
    });
  }
}

void HoneycombNet::rebuild_open_ends() {
  open_ends.clear();
  for (int e = 0; e < num_edges(); ++e)
    if (edges[e].v < 0) open_ends.push_back(e);
}

PlanarGraph HoneycombNet::planar() const {
  if (!open_ends.empty()) throw std::invalid_argument("open-ended network");
  std::vector<std::vector<int>> rot;
  for (const auto& v : vertices) rot.push_back(v.edges);
  return PlanarGraph::from_rotations(num_edges(), rot);
}

std::string HoneycombNet::canonical_form() const {
  auto end_sig = [&](int v) {
    if (v < 0) return std::string("*");
    // Counterclockwise labels starting from the smallest.
    std::vector<EdgeLabel> ls;
    for (int e : vertices[v].edges) ls.push_back(edges[e].label);
    auto it = std::min_element(ls.begin(), ls.end());
    std::rotate(ls.begin(), it, ls.end());
    std::string s = "(";
    for (const auto& l : ls) s += l.str() + " ";
    return s + ")";
  };
  std::vector<std::string> lines;
  for (const auto& e : edges) {
    std::string a = end_sig(e.u), b = end_sig(e.v);
    if (b < a) std::swap(a, b);
    lines.push_back(e.label.str() + ":" + a + "-" + b);
  }
  std::sort(lines.begin(), lines.end());
  std::string out = zero ? "zero;" : "";
  for (const auto& l : lines) out += l + ";";
  return out;
}

std::string HoneycombNet::to_json() const {
  nlohmann::ordered_json j;
  j["kind"] = to_string(kind);
  j["n"] = n;
  j["zero"] = zero;
  auto& vs = j["vertices"] = nlohmann::ordered_json::array();
  for (int v = 0; v < num_vertices(); ++v) {
    nlohmann::ordered_json jv;
    jv["id"] = v;
    jv["site"] = {vertices[v].site.x, vertices[v].site.y};
    jv["edges"] = vertices[v].edges;
    vs.push_back(jv);
  }
  auto& es = j["edges"] = nlohmann::ordered_json::array();
  for (int e = 0; e < num_edges(); ++e) {
    nlohmann::ordered_json je;
    je["id"] = e;
    je["label"] = edges[e].label.str();
    je["u"] = edges[e].u;
    if (edges[e].v >= 0) je["v"] = edges[e].v;
    else je["v"] = nullptr;
    je["branch"] = to_string(edges[e].branch);
    es.push_back(je);
  }
  j["open_ends"] = open_ends;
  return j.dump(2);
}

// ---------------------------------------------------------------- builders

HoneycombNet build_h(int n) {
  check_size(n);
  HoneycombNet net = net_from_hexes(rhombus(n), [](const EdgeLabel&) { return true; });
  net.kind = NetKind::H;
  net.n = n;
  for (auto& e : net.edges) e.branch = Branch::None;
  return net;
}

HoneycombNet build_o(int n) {
  check_size(n);
  // The crown of H_{n+1}; ends on H_n vertices become free.
  const HoneycombNet inner = build_h(n);
  HoneycombNet crown = net_from_hexes(rhombus(n + 1), [n](const EdgeLabel& l) { return l.level == n; });
  HoneycombNet net;
  net.kind = NetKind::O;
  net.n = n;
  std::vector<int> vid(crown.num_vertices(), -1);
  for (int v = 0; v < crown.num_vertices(); ++v) {
    if (inner.find_vertex(crown.vertices[v].site)) continue;
    vid[v] = net.num_vertices();
    net.vertices.push_back({crown.vertices[v].site, {}});
  }
  for (const auto& e : crown.edges) {
    NetEdge ne = e;
    int u = vid[e.u], v = vid[e.v];
    Site tip = crown.vertices[e.v].site;
    if (u < 0) {
      u = v;
      v = -1;
      tip = crown.vertices[e.u].site;
    } else if (v < 0) {
      tip = crown.vertices[e.v].site;
    }
    if (u < 0) throw std::logic_error("crown edge with both ends inside");
    ne.u = u;
    ne.v = v;
    ne.tip = tip;
    const int id = net.num_edges();
    net.edges.push_back(ne);
    net.vertices[u].edges.push_back(id);
    if (v >= 0) net.vertices[v].edges.push_back(id);
  }
  net.sort_rotations();
  for (int k = 0; k < 6; ++k)
    if (auto e = net.find_edge(raw_label(n, n, k))) net.edges[*e].branch = Branch::None;
  // Free ends ordered left to right along the bottom of the crown.
  net.rebuild_open_ends();
  std::sort(net.open_ends.begin(), net.open_ends.end(), [&](int a, int b) {
    return std::make_pair(net.edges[a].tip.x, net.edges[a].tip.y) < std::make_pair(net.edges[b].tip.x, net.edges[b].tip.y);
  });
  return net;
}

HoneycombNet build_hh(int n) {
  check_size(n);
  HoneycombNet net;
  if (n == 1) {
    net = net_from_hexes({{0, 0}}, [](const EdgeLabel& l) { return l.level == -1; });
  } else {
    // Keep H_{n-1} and the two obtuse corner cells of the top crown.
    std::vector<std::pair<int, int>> kept = rhombus(n - 1);
    kept.push_back({n - 1, 0});
    kept.push_back({0, n - 1});
    net = net_from_hexes(kept, [](const EdgeLabel&) { return true; });
  }
  net.kind = NetKind::HH;
  net.n = n;
  for (auto& e : net.edges) e.branch = Branch::None;
  return net;
}

HoneycombNet build_bo(int n) {
  check_size(n);
  const int m = n - 1;  // bubbles per side
  HoneycombNet net;
  net.kind = NetKind::BO;
  net.n = n;
  int next_pos = 0;
  auto add_vertex = [&](Site s) {
    net.vertices.push_back({s, {}});
    return net.num_vertices() - 1;
  };
  auto add_edge = [&](int u, int v, Site tip, EdgeLabel l, Branch b) {
    NetEdge e;
    e.u = u;
    e.v = v;
    e.tip = v >= 0 ? net.vertices[v].site : tip;
    e.label = l;
    e.branch = b;
    const int id = net.num_edges();
    net.edges.push_back(e);
    net.vertices[u].edges.push_back(id);
    if (v >= 0) net.vertices[v].edges.push_back(id);
    return id;
  };
  // Left half first; the right half is its mirror image.
  struct Half {
    int top_start = -1;  // vertex where the path meets the top arc
    int inner_leg = -1;  // lower-arc vertex of the innermost bubble
  };
  auto build_side = [&](int sgn) {
    Half h;
    const char side = sgn < 0 ? 'c' : 'd';
    const Branch br = sgn < 0 ? Branch::Left : Branch::Right;
    int path_pos = 0, leg_pos = 0;
    auto path_label = [&] { return EdgeLabel{side, n, sgn * ++path_pos}; };
    auto leg_label = [&] { return EdgeLabel{'e', n, sgn * ++leg_pos}; };
    int prev = -1;
    Site prev_tip{sgn * (4 * m + 4), 0};
    for (int j = 1; j <= m; ++j) {
      const int cx = sgn * 4 * (m - j + 1);
      const int lv = add_vertex({cx - sgn, 0});
      const int rv = add_vertex({cx + sgn, 0});
      const int up = add_vertex({cx, 1});
      const int mid = add_vertex({cx, -1});
      if (prev < 0) add_edge(lv, -1, prev_tip, path_label(), br);
      else add_edge(prev, lv, {}, path_label(), br);
      add_edge(lv, up, {}, path_label(), br);
      add_edge(up, rv, {}, path_label(), br);
      add_edge(lv, mid, {}, path_label(), br);
      add_edge(mid, rv, {}, path_label(), br);
      if (j < m) add_edge(mid, -1, {cx, -4}, leg_label(), br);
      else h.inner_leg = mid;
      prev = rv;
    }
    const int ts = add_vertex({sgn * 2, 2});
    if (prev < 0) add_edge(ts, -1, prev_tip, path_label(), br);
    else add_edge(prev, ts, {}, path_label(), br);
    h.top_start = ts;
    if (h.inner_leg >= 0) {
      const int corner = add_vertex({sgn * 4, -4});
      add_edge(h.inner_leg, corner, {}, leg_label(), br);
      h.inner_leg = corner;
    }
    next_pos = std::max(next_pos, leg_pos);
    return h;
  };
  const Half left = build_side(-1);
  const Half right = build_side(1);
  const int apex = add_vertex({0, 3});
  add_edge(left.top_start, apex, {}, EdgeLabel{'c', n, -(4 * m + 100)}, Branch::Left);
  add_edge(apex, right.top_start, {}, EdgeLabel{'d', n, 4 * m + 100}, Branch::Right);
  if (m >= 1) {
    const int center = add_vertex({0, -6});
    add_edge(left.inner_leg, center, {}, EdgeLabel{'e', n, -(next_pos + 1)}, Branch::Left);
    add_edge(center, right.inner_leg, {}, EdgeLabel{'e', n, next_pos + 1}, Branch::Right);
    add_edge(center, -1, {0, -9}, EdgeLabel{'e', n, 0}, Branch::Center);
  }
  net.sort_rotations();
  net.rebuild_open_ends();
  return net;
}

std::vector<int> octopus_attach_vertices(const HoneycombNet& base, int n) {
  const HoneycombNet o = build_o(n);
  std::vector<int> at;
  for (int e : o.open_ends) {
    auto v = base.find_vertex(o.edges[e].tip);
    if (!v) throw std::invalid_argument("base lacks an octopus attachment vertex");
    at.push_back(*v);
  }
  return at;
}

Site hex_corner(int r, int c, int k) { return hex_vertex(r, c, k); }

std::vector<int> hex_edges(const HoneycombNet& h, int r, int c) {
  std::vector<int> ids;
  for (int k = 0; k < 6; ++k) ids.push_back(h.edge_id(raw_label(r, c, k)));
  return ids;
}

// ---------------------------------------------------------------- composition

namespace {

HoneycombNet compose_impl(const HoneycombNet& base, const EdgeColoring* base_colors, const HoneycombNet& attach,
                          const EdgeColoring* attach_colors, const std::vector<int>& at, EdgeColoring* out_colors,
                          const QParam& p) {
  if (attach.open_ends.size() != at.size())
    throw std::invalid_argument("composition arity mismatch: " + std::to_string(attach.open_ends.size()) +
                                " free ends, " + std::to_string(at.size()) + " vertices");
  for (int v : at)
    if (v < 0 || v >= base.num_vertices()) throw std::invalid_argument("composition vertex out of range");
  HoneycombNet out = base;
  out.kind = NetKind::Composite;
  if (out_colors) *out_colors = *base_colors;
  std::vector<int> vmap(attach.num_vertices(), -1);
  for (int v = 0; v < attach.num_vertices(); ++v) {
    if (auto b = base.find_vertex(attach.vertices[v].site)) vmap[v] = *b;
    else {
      vmap[v] = out.num_vertices();
      out.vertices.push_back({attach.vertices[v].site, {}});
    }
  }
  std::map<int, int> free_target;
  for (std::size_t i = 0; i < at.size(); ++i) free_target[attach.open_ends[i]] = at[i];
  std::set<int> touched(at.begin(), at.end());
  for (int e = 0; e < attach.num_edges(); ++e) {
    NetEdge ne = attach.edges[e];
    ne.u = vmap[ne.u];
    ne.v = ne.v >= 0 ? vmap[ne.v] : free_target.at(e);
    ne.tip = out.vertices[ne.v].site;
    const int color = attach_colors ? (*attach_colors)[e] : 0;
    bool merged = false;
    for (int b = 0; b < base.num_edges(); ++b) {
      const NetEdge& be = out.edges[b];
      if (be.label != ne.label) continue;
      const bool same = (be.u == ne.u && be.v == ne.v) || (be.u == ne.v && be.v == ne.u);
      if (!same) throw std::invalid_argument("composition label clash on " + ne.label.str());
      if (out_colors && (*out_colors)[b] != color) out.zero = true;
      merged = true;
      break;
    }
    if (merged) continue;
    const int id = out.num_edges();
    out.edges.push_back(ne);
    out.vertices[ne.u].edges.push_back(id);
    out.vertices[ne.v].edges.push_back(id);
    touched.insert(ne.u);
    touched.insert(ne.v);
    if (out_colors) out_colors->push_back(color);
  }
  out.sort_rotations();
  out.rebuild_open_ends();
  if (out_colors) {
    for (int v : touched) {
      const auto& inc = out.vertices[v].edges;
      if (inc.size() == 2 && (*out_colors)[inc[0]] != (*out_colors)[inc[1]]) out.zero = true;
      if (inc.size() == 3 &&
          !is_admissible((*out_colors)[inc[0]], (*out_colors)[inc[1]], (*out_colors)[inc[2]], p))
        out.zero = true;
      if (inc.size() > 3) throw std::invalid_argument("composition created a vertex of valence > 3");
    }
  }
  out.zero = out.zero || base.zero || attach.zero;
  return out;
}

}  // namespace

HoneycombNet compose(const HoneycombNet& base, const HoneycombNet& attach, const std::vector<int>& at) {
  return compose_impl(base, nullptr, attach, nullptr, at, nullptr, QParam::classical());
}

HoneycombNet compose(const HoneycombNet& base, const EdgeColoring& base_colors, const HoneycombNet& attach,
                     const EdgeColoring& attach_colors, const std::vector<int>& at, EdgeColoring& out_colors,
                     const QParam& p) {
  if (static_cast<int>(base_colors.size()) != base.num_edges() ||
      static_cast<int>(attach_colors.size()) != attach.num_edges())
    throw std::invalid_argument("coloring size does not match edges");
  return compose_impl(base, &base_colors, attach, &attach_colors, at, &out_colors, p);
}

// ---------------------------------------------------------------- smoothing

SmoothNet smooth(const HoneycombNet& net) {
  SmoothNet s;
  s.edge_of_raw.assign(net.num_edges(), -1);
  for (int v = 0; v < net.num_vertices(); ++v)
    if (net.valence(v) != 2) s.nodes.push_back(v);
  std::vector<char> used(net.num_edges(), 0);
  auto other = [&](int e, int v) { return net.edges[e].u == v ? net.edges[e].v : net.edges[e].u; };
  auto walk = [&](int start_vertex, int first_edge) {
    SmoothEdge se;
    se.u = start_vertex;
    int v = start_vertex, e = first_edge;
    while (true) {
      used[e] = 1;
      se.raw.push_back(e);
      const int w = other(e, v);
      if (w < 0 || net.valence(w) != 2) {
        se.v = w;
        break;
      }
      const auto& inc = net.vertices[w].edges;
      e = inc[0] == e ? inc[1] : inc[0];
      v = w;
    }
    return se;
  };
  auto finish = [&](SmoothEdge se) {
    se.label = net.edges[se.raw.front()].label;
    for (int e : se.raw)
      if (label_precedes(net.edges[e].label, se.label)) se.label = net.edges[e].label;
    const int id = static_cast<int>(s.edges.size());
    for (int e : se.raw) s.edge_of_raw[e] = id;
    s.edges.push_back(std::move(se));
  };
  for (int v : s.nodes)
    for (int e : net.vertices[v].edges)
      if (!used[e]) finish(walk(v, e));
  // Chains that start at a free end and never meet a node.
  for (int e = 0; e < net.num_edges(); ++e)
    if (!used[e] && net.edges[e].v < 0) finish(walk(-1, e));
  for (int e = 0; e < net.num_edges(); ++e) {
    if (used[e]) continue;
    std::vector<int> loop;
    int v = net.edges[e].u, cur = e;
    while (!used[cur]) {
      used[cur] = 1;
      loop.push_back(cur);
      v = other(cur, v);
      const auto& inc = net.vertices[v].edges;
      cur = inc[0] == cur ? inc[1] : inc[0];
    }
    s.loops.push_back(loop);
  }
  return s;
}

std::string SmoothNet::canonical_form(const HoneycombNet& net) const {
  auto sig = [&](int v) {
    if (v < 0) return std::string("*");
    std::vector<EdgeLabel> ls;
    for (int e : net.vertices[v].edges) ls.push_back(edges[edge_of_raw[e]].label);
    auto it = std::min_element(ls.begin(), ls.end());
    std::rotate(ls.begin(), it, ls.end());
    std::string s = "(";
    for (const auto& l : ls) s += l.str() + " ";
    return s + ")";
  };
  std::vector<std::string> lines;
  for (const auto& e : edges) {
    std::string a = sig(e.u), b = sig(e.v);
    if (b < a) std::swap(a, b);
    lines.push_back(e.label.str() + ":" + a + "-" + b);
  }
  std::sort(lines.begin(), lines.end());
  std::string out = "loops=" + std::to_string(loops.size()) + ";";
  for (const auto& l : lines) out += l + ";";
  return out;
}

bool coloring_admissible(const HoneycombNet& net, const EdgeColoring& coloring, const QParam& p) {
  if (static_cast<int>(coloring.size()) != net.num_edges())
    throw std::invalid_argument("coloring size does not match edges");
  for (int c : coloring)
    if (c < 0 || c > p.max_color()) return false;
  for (const auto& v : net.vertices) {
    const auto& inc = v.edges;
    if (inc.size() == 2 && coloring[inc[0]] != coloring[inc[1]]) return false;
    if (inc.size() == 3 && !is_admissible(coloring[inc[0]], coloring[inc[1]], coloring[inc[2]], p)) return false;
  }
  return true;
}

// ---------------------------------------------------------------- pixels

PixelGrid read_pixel_text(std::istream& in) {
  PixelGrid g;
  if (!(in >> g.n >> g.max_value) || g.n < 1 || g.max_value < 0)
    throw std::invalid_argument("pixel grid: bad header");
  g.values.resize(static_cast<std::size_t>(g.n) * g.n);
  for (auto& v : g.values) {
    if (!(in >> v)) throw std::invalid_argument("pixel grid: too few values");
    if (v < 0 || v > g.max_value) throw std::invalid_argument("pixel grid: value out of range");
  }
  return g;
}

namespace {

int pgm_token(std::istream& in) {
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::string rest;
      std::getline(in, rest);
      continue;
    }
    return std::stoi(tok);
  }
  throw std::invalid_argument("pgm: truncated header");
}

}  // namespace

PixelGrid read_pgm(std::istream& in) {
  std::string magic;
  in >> magic;
  if (magic != "P5") throw std::invalid_argument("pgm: only binary P5 is supported");
  const int w = pgm_token(in), h = pgm_token(in), maxval = pgm_token(in);
  if (w != h || w < 1) throw std::invalid_argument("pgm: image must be square");
  if (maxval < 1 || maxval > 255) throw std::invalid_argument("pgm: only 8-bit images are supported");
  in.get();
  PixelGrid g;
  g.n = w;
  g.max_value = maxval;
  g.values.resize(static_cast<std::size_t>(w) * h);
  for (auto& v : g.values) {
    const int c = in.get();
    if (c == EOF) throw std::invalid_argument("pgm: truncated pixel data");
    v = c;
    if (v > maxval) throw std::invalid_argument("pgm: value exceeds maxval");
  }
  return g;
}

PixelGrid read_pixel_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  if (in.peek() == 'P') return read_pgm(in);
  return read_pixel_text(in);
}

void write_pgm(std::ostream& out, int width, int height, const std::vector<unsigned char>& pixels) {
  out << "P5\n" << width << ' ' << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

std::pair<HoneycombNet, EdgeColoring> pixels_to_coloring(const PixelGrid& grid) {
  if (grid.n < 1 || static_cast<int>(grid.values.size()) != grid.n * grid.n)
    throw std::invalid_argument("pixel grid: shape mismatch");
  HoneycombNet h = build_h(grid.n);
  EdgeColoring col(h.num_edges(), 0);
  for (int i = 0; i < grid.n; ++i)
    for (int j = 0; j < grid.n; ++j) {
      const int v = grid.at(i, j);
      for (int e : hex_edges(h, grid.n - 1 - i, grid.n - 1 - j)) col[e] += v;
    }
  return {std::move(h), std::move(col)};
}

}  // namespace honeycomb
