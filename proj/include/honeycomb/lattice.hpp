#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "honeycomb/planar_graph.hpp"
#include "honeycomb/scalar.hpp"

namespace honeycomb {

// Lattice point. Physical coordinates are (x * sqrt(3)/2, y / 2); hexagon
// (r, c) is centered at (c - r, 3 (c + r)).
struct Site {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Site&, const Site&) = default;
};

// Edge label letter_level^position, e.g. c_{-1}^0. Letters c/d sit on the
// left/right of a crown, e labels rungs and separators, i summation indices.
struct EdgeLabel {
  char letter = 'e';
  int level = 0;
  int position = 0;

  std::string str() const;
  static EdgeLabel parse(const std::string& s);
  friend auto operator<=>(const EdgeLabel&, const EdgeLabel&) = default;
};

// Left-right involution: c <-> d, a <-> b, position -> -position.
EdgeLabel iota(const EdgeLabel& l);
// Order used to pick the representative label of a smoothed edge.
bool label_precedes(const EdgeLabel& x, const EdgeLabel& y);

enum class NetKind { H, O, HH, BO, Composite };
enum class Branch { None, Left, Center, Right };

std::string to_string(NetKind k);
std::string to_string(Branch b);

struct NetVertex {
  Site site;
  std::vector<int> edges;  // counterclockwise
};

struct NetEdge {
  int u = -1;
  int v = -1;  // -1: free end located at `tip`
  Site tip;
  EdgeLabel label;
  Branch branch = Branch::None;
};

using EdgeColoring = std::vector<int>;  // indexed by edge id

class HoneycombNet {
 public:
  NetKind kind = NetKind::H;
  int n = 0;
  std::vector<NetVertex> vertices;
  std::vector<NetEdge> edges;
  std::vector<int> open_ends;  // edge ids with a free end
  bool zero = false;           // composition produced a vanishing network

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int valence(int v) const { return static_cast<int>(vertices[v].edges.size()); }
  std::optional<int> find_vertex(Site s) const;
  std::optional<int> find_edge(const EdgeLabel& l) const;
  int edge_id(const EdgeLabel& l) const;  // throws if absent
  Site site_of(int edge, int end) const;

  // Closed nets only.
  PlanarGraph planar() const;
  // Labeled, embedding-aware description; equal strings mean isomorphic nets.
  std::string canonical_form() const;
  std::string to_json() const;

  // Recomputes counterclockwise orders from the vertex sites.
  void sort_rotations();
  void rebuild_open_ends();
};

HoneycombNet build_h(int n);
HoneycombNet build_o(int n);
HoneycombNet build_hh(int n);
HoneycombNet build_bo(int n);

// Joins the free ends of `attach` to the vertices `at` of `base` (in order).
// Attach vertices lying on a base vertex are identified with it, and edges
// present in both nets (same label, same ends) are merged, as projectors are
// idempotent. With colorings, incompatible joins mark the result as zero.
HoneycombNet compose(const HoneycombNet& base, const HoneycombNet& attach, const std::vector<int>& at);
HoneycombNet compose(const HoneycombNet& base, const EdgeColoring& base_colors, const HoneycombNet& attach,
                     const EdgeColoring& attach_colors, const std::vector<int>& at, EdgeColoring& out_colors,
                     const QParam& p = QParam::classical());

// Vertices of `base` that the free ends of build_o(n) attach to, in the
// order of build_o(n).open_ends.
std::vector<int> octopus_attach_vertices(const HoneycombNet& base, int n);

// Corner k of hexagon (r, c); k = 0..5 runs clockwise from the top
// (90, 30, -30, -90, -150, 150 degrees).
Site hex_corner(int r, int c, int k);

// Hexagon cells of H_n as (r, c); raw edge ids of a cell in the order
// UR, R, LR, LL, L, UL.
std::vector<int> hex_edges(const HoneycombNet& h, int r, int c);

// Chains of raw edges through binary vertices.
struct SmoothEdge {
  int u = -1;  // net vertex ids of valence != 2, or -1 for a free end
  int v = -1;
  std::vector<int> raw;
  EdgeLabel label;  // representative (smallest) raw label
};

struct SmoothNet {
  std::vector<int> nodes;  // net vertices of valence != 2
  std::vector<SmoothEdge> edges;
  std::vector<int> edge_of_raw;  // raw edge id -> smooth edge id (-1 for closed binary loops)
  std::vector<std::vector<int>> loops;  // components without any node
  std::string canonical_form(const HoneycombNet& net) const;
};

SmoothNet smooth(const HoneycombNet& net);

// Binary vertices carry equal colors; trivalent vertices are admissible.
bool coloring_admissible(const HoneycombNet& net, const EdgeColoring& coloring, const QParam& p);

struct PixelGrid {
  int n = 0;
  int max_value = 0;
  std::vector<int> values;  // row-major, n * n
  int at(int row, int col) const { return values[row * n + col]; }
};

PixelGrid read_pixel_text(std::istream& in);
PixelGrid read_pgm(std::istream& in);
PixelGrid read_pixel_file(const std::string& path);
void write_pgm(std::ostream& out, int width, int height, const std::vector<unsigned char>& pixels);

// Pixel (row i, col j) colors hexagon (n-1-i, n-1-j); shared edges get the
// sum of both pixels.
std::pair<HoneycombNet, EdgeColoring> pixels_to_coloring(const PixelGrid& grid);

}  // namespace honeycomb
