#include "honeycomb/planar_graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace honeycomb {

bool PlanarGraph::closed() const {
  return std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.u >= 0 && e.v >= 0; });
}

PlanarGraph PlanarGraph::from_rotations(int num_edges, std::vector<std::vector<int>> rotations) {
  PlanarGraph g;
  g.edges.assign(num_edges, Edge{});
  g.rotation = std::move(rotations);
  for (int v = 0; v < g.num_vertices(); ++v) {
    for (int e : g.rotation[v]) {
      if (e < 0 || e >= num_edges) throw std::invalid_argument("rotation references unknown edge");
      auto& ed = g.edges[e];
      if (ed.u < 0) ed.u = v;
      else if (ed.v < 0) ed.v = v;
      else throw std::invalid_argument("edge used more than twice");
    }
  }
  return g;
}

PlanarGraph PlanarGraph::from_embedding(const std::vector<std::pair<double, double>>& points,
                                        const std::vector<std::pair<int, int>>& edge_list) {
  PlanarGraph g;
  g.rotation.assign(points.size(), {});
  std::vector<std::vector<std::pair<double, int>>> around(points.size());
  for (int e = 0; e < static_cast<int>(edge_list.size()); ++e) {
    auto [u, v] = edge_list[e];
    g.edges.push_back({u, v});
    if (u == v) throw std::invalid_argument("straight-line embedding cannot hold loops");
    around[u].push_back({std::atan2(points[v].second - points[u].second, points[v].first - points[u].first), e});
    if (v >= 0)
      around[v].push_back({std::atan2(points[u].second - points[v].second, points[u].first - points[v].first), e});
  }
  for (std::size_t v = 0; v < points.size(); ++v) {
    std::sort(around[v].begin(), around[v].end());
    for (auto& [ang, e] : around[v]) g.rotation[v].push_back(e);
  }
  return g;
}

int PlanarGraph::end_at(int vertex, int slot) const {
  const int e = rotation[vertex][slot];
  const Edge& ed = edges[e];
  if (ed.u != ed.v) return ed.u == vertex ? 0 : 1;
  for (int k = 0; k < slot; ++k)
    if (rotation[vertex][k] == e) return 1;
  return 0;
}

int PlanarGraph::num_faces() const {
  // Darts are (edge, end); dart index = 2*e + end.
  const int nd = 2 * num_edges();
  std::vector<int> slot_of(nd, -1), vert_of(nd, -1);
  for (int v = 0; v < num_vertices(); ++v)
    for (int s = 0; s < static_cast<int>(rotation[v].size()); ++s) {
      const int d = 2 * rotation[v][s] + end_at(v, s);
      slot_of[d] = s;
      vert_of[d] = v;
    }
  std::vector<char> seen(nd, 0);
  int faces = 0;
  for (int start = 0; start < nd; ++start) {
    if (seen[start] || vert_of[start] < 0) continue;
    ++faces;
    int d = start;
    while (!seen[d]) {
      seen[d] = 1;
      const int opp = d ^ 1;
      const int w = vert_of[opp];
      const auto& rot = rotation[w];
      const int next_slot = (slot_of[opp] + 1) % static_cast<int>(rot.size());
      d = 2 * rot[next_slot] + end_at(w, next_slot);
    }
  }
  return faces;
}

PlanarGraph loop_graph() { return PlanarGraph::from_rotations(1, {{0, 0}}); }

PlanarGraph theta_graph() { return PlanarGraph::from_rotations(3, {{0, 1, 2}, {0, 2, 1}}); }

PlanarGraph tet_graph() {
  // Vertices (a,b,e), (c,d,e), (a,d,f) on the outside, (b,c,f) in the middle.
  const std::vector<std::pair<double, double>> pts{{0, 1}, {-1, -1}, {1, -1}, {0, 0}};
  // a: 0-2, b: 0-3, e: 0-1, c: 1-3, d: 1-2, f: 2-3
  return PlanarGraph::from_embedding(pts, {{0, 2}, {0, 3}, {0, 1}, {1, 3}, {1, 2}, {2, 3}});
}

}  // namespace honeycomb
