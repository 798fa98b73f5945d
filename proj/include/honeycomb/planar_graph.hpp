#pragma once

#include <utility>
#include <vector>

namespace honeycomb {

// Rotation-system embedding of a planar multigraph. rotation[v] lists the
// incident edge ids counterclockwise; a loop edge appears twice. Edge ends
// with v == -1 are free (open) ends.
struct PlanarGraph {
  struct Edge {
    int u = -1;
    int v = -1;
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> rotation;

  int num_vertices() const { return static_cast<int>(rotation.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  bool closed() const;

  // Endpoints are derived from the rotations. Throws if an edge id is used
  // more than twice.
  static PlanarGraph from_rotations(int num_edges, std::vector<std::vector<int>> rotations);
  // Straight-line embedding; rotations follow the angle of each edge.
  static PlanarGraph from_embedding(const std::vector<std::pair<double, double>>& points,
                                    const std::vector<std::pair<int, int>>& edge_list);

  // Which end (0 = u, 1 = v) the k-th entry of rotation[v] refers to.
  int end_at(int vertex, int slot) const;
  // Number of faces of the embedding (each connected component counted separately).
  int num_faces() const;
};

// Small closed nets. Edge order follows the argument order of the
// corresponding recoupling functions.
PlanarGraph loop_graph();   // one edge, one binary vertex
PlanarGraph theta_graph();  // edges (a, b, c)
PlanarGraph tet_graph();    // edges (a, b, e, c, d, f); vertices (a,b,e) (c,d,e) (a,d,f) (b,c,f)

}  // namespace honeycomb
