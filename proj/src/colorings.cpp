#include "honeycomb/colorings.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace honeycomb {

namespace {

struct Johnson {
  const std::vector<std::vector<int>>& adj;
  int s = 0;
  std::vector<char> in_comp, blocked;
  std::vector<std::vector<int>> B;
  std::vector<int> stack;
  std::vector<std::vector<int>> found;

  explicit Johnson(const std::vector<std::vector<int>>& a)
      : adj(a), in_comp(a.size(), 0), blocked(a.size(), 0), B(a.size()) {}

  void unblock(int u) {
    blocked[u] = 0;
    while (!B[u].empty()) {
      int w = B[u].back();
      B[u].pop_back();
      if (blocked[w]) unblock(w);
    }
  }

  bool circuit(int v) {
    bool f = false;
    stack.push_back(v);
    blocked[v] = 1;
    for (int w : adj[v]) {
      if (!in_comp[w]) continue;
      if (w == s) {
        // Each undirected cycle shows up once per direction; keep one.
        if (stack.size() >= 3 && stack[1] < stack.back()) found.push_back(stack);
        f = true;
      } else if (!blocked[w] && circuit(w)) {
        f = true;
      }
    }
    if (f) {
      unblock(v);
    } else {
      for (int w : adj[v])
        if (in_comp[w] && std::find(B[w].begin(), B[w].end(), v) == B[w].end()) B[w].push_back(v);
    }
    stack.pop_back();
    return f;
  }

  void run() {
    const int nv = static_cast<int>(adj.size());
    for (s = 0; s < nv; ++s) {
      std::fill(in_comp.begin(), in_comp.end(), 0);
      std::vector<int> queue{s};
      in_comp[s] = 1;
      for (std::size_t k = 0; k < queue.size(); ++k)
        for (int w : adj[queue[k]])
          if (w > s && !in_comp[w]) {
            in_comp[w] = 1;
            queue.push_back(w);
          }
      if (queue.size() < 3) continue;
      for (int v : queue) {
        blocked[v] = 0;
        B[v].clear();
      }
      circuit(s);
    }
  }
};

mpz_class multichoose(std::uint64_t n, std::uint64_t k) {
  if (k == 0) return 1;
  if (n == 0) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n + k - 1, k);
  return r;
}

void put_u32(std::ostream& o, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::ostream& o, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) o.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
std::uint64_t get_le(std::istream& in, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    int c = in.get();
    if (c == EOF) throw std::runtime_error("truncated checkpoint");
    v |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
  }
  return v;
}

constexpr std::uint32_t kCheckpointVersion = 1;

}  // namespace

std::vector<Cycle> enumerate_cycles(const HoneycombNet& net) {
  if (!net.open_ends.empty()) throw std::invalid_argument("cycle enumeration needs a closed network");
  const int nv = net.num_vertices();
  std::vector<std::vector<int>> adj(nv);
  std::map<std::pair<int, int>, int> edge_of;
  for (int e = 0; e < net.num_edges(); ++e) {
    const auto& ed = net.edges[e];
    if (ed.u == ed.v) continue;
    adj[ed.u].push_back(ed.v);
    adj[ed.v].push_back(ed.u);
    edge_of[{std::min(ed.u, ed.v), std::max(ed.u, ed.v)}] = e;
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  Johnson j(adj);
  j.run();
  std::vector<Cycle> out;
  out.reserve(j.found.size());
  for (auto& vs : j.found) {
    Cycle c;
    c.vertices = vs;
    for (std::size_t k = 0; k < vs.size(); ++k) {
      const int a = vs[k], b = vs[(k + 1) % vs.size()];
      c.edges.push_back(edge_of.at({std::min(a, b), std::max(a, b)}));
    }
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const Cycle& x, const Cycle& y) {
    if (x.edges.size() != y.edges.size()) return x.edges.size() < y.edges.size();
    return x.edges < y.edges;
  });
  return out;
}

std::vector<Cycle> enumerate_cycles(int n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  return enumerate_cycles(build_h(n));
}

std::string cycles_to_json(const std::vector<Cycle>& cycles, int n) {
  nlohmann::ordered_json j;
  j["n"] = n;
  j["count"] = cycles.size();
  auto& arr = j["cycles"] = nlohmann::ordered_json::array();
  for (const auto& c : cycles) arr.push_back(c.edges);
  return j.dump();
}

mpz_class multiset_count(std::uint64_t n_cycles, int k) { return multichoose(n_cycles, k); }

mpz_class config_count(std::uint64_t n_cycles, int cmax) {
  mpz_class total = 0;
  for (int k = 1; k <= cmax; ++k) total += multichoose(n_cycles, k);
  return total;
}

CycleMultiset to_multiset(const std::vector<int>& ids) {
  CycleMultiset m;
  for (int id : ids) {
    if (!m.empty() && m.back().first == id) ++m.back().second;
    else m.push_back({id, 1});
  }
  return m;
}

ColoringConfig make_config(const std::vector<Cycle>& cycles, int num_edges, const CycleMultiset& m) {
  ColoringConfig c;
  c.coloring.assign(num_edges, 0);
  c.cycles = m;
  for (auto [id, mult] : m)
    for (int e : cycles.at(id).edges) c.coloring[e] += mult;
  return c;
}

std::vector<int> unrank_multiset(const mpz_class& rank, std::uint64_t n_cycles, int cmax) {
  if (rank < 0 || rank >= config_count(n_cycles, cmax)) throw std::out_of_range("config rank out of range");
  mpz_class r = rank;
  int k = 1;
  for (;; ++k) {
    mpz_class block = multichoose(n_cycles, k);
    if (r < block) break;
    r -= block;
  }
  std::vector<int> ids;
  std::uint64_t v = 0;
  for (int p = 0; p < k; ++p) {
    for (;; ++v) {
      mpz_class cnt = multichoose(n_cycles - v, k - p - 1);
      if (r < cnt) break;
      r -= cnt;
    }
    ids.push_back(static_cast<int>(v));
  }
  return ids;
}

mpz_class rank_multiset(const std::vector<int>& ids, std::uint64_t n_cycles, int cmax) {
  const int k = static_cast<int>(ids.size());
  if (k < 1 || k > cmax || !std::is_sorted(ids.begin(), ids.end())) throw std::invalid_argument("bad multiset");
  mpz_class r = config_count(n_cycles, k - 1);
  std::uint64_t v = 0;
  for (int p = 0; p < k; ++p) {
    for (; v < static_cast<std::uint64_t>(ids[p]); ++v) r += multichoose(n_cycles - v, k - p - 1);
  }
  return r;
}

ConfigStream::ConfigStream(const std::vector<Cycle>& cycles, int num_edges, int cmax)
    : cycles_(&cycles), num_edges_(num_edges), cmax_(cmax), n_(cycles.size()) {
  if (cmax < 1) throw std::invalid_argument("cmax must be at least 1");
  total_ = config_count(n_, cmax);
  rank_ = 0;
  done_ = total_ == 0;
  if (!done_) ids_ = {0};
}

ColoringConfig ConfigStream::current() const {
  if (done_) throw std::out_of_range("config stream exhausted");
  return make_config(*cycles_, num_edges_, to_multiset(ids_));
}

void ConfigStream::next() {
  if (done_) return;
  rank_ += 1;
  if (rank_ >= total_) {
    done_ = true;
    return;
  }
  int p = static_cast<int>(ids_.size()) - 1;
  while (p >= 0 && static_cast<std::uint64_t>(ids_[p]) == n_ - 1) --p;
  if (p < 0) {
    ids_.assign(ids_.size() + 1, 0);
    return;
  }
  const int v = ids_[p] + 1;
  for (std::size_t q = p; q < ids_.size(); ++q) ids_[q] = v;
}

void ConfigStream::seek(const mpz_class& rank) {
  if (rank >= total_) {
    rank_ = total_;
    done_ = true;
    return;
  }
  ids_ = unrank_multiset(rank, n_, cmax_);
  rank_ = rank;
  done_ = false;
}

void ConfigStream::save_checkpoint(std::ostream& out) const {
  out.write("HCCK", 4);
  put_u32(out, kCheckpointVersion);
  put_u64(out, n_);
  put_u32(out, static_cast<std::uint32_t>(cmax_));
  std::string digits = rank_.get_str(16);
  put_u32(out, static_cast<std::uint32_t>(digits.size()));
  out.write(digits.data(), static_cast<std::streamsize>(digits.size()));
}

void ConfigStream::load_checkpoint(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "HCCK") throw std::runtime_error("not a config checkpoint");
  if (get_le(in, 4) != kCheckpointVersion) throw std::runtime_error("unsupported checkpoint version");
  if (get_le(in, 8) != n_ || static_cast<int>(get_le(in, 4)) != cmax_)
    throw std::runtime_error("checkpoint belongs to a different cycle set");
  const auto len = get_le(in, 4);
  std::string digits(len, '\0');
  if (!in.read(digits.data(), static_cast<std::streamsize>(len))) throw std::runtime_error("truncated checkpoint");
  seek(mpz_class(digits, 16));
}

ConfigStats config_stats(const std::vector<Cycle>& cycles, int num_edges, int cmax) {
  struct Hash {
    std::size_t operator()(const EdgeColoring& c) const {
      std::size_t h = 1469598103934665603ull;
      for (int x : c) h = (h ^ static_cast<std::size_t>(x)) * 1099511628211ull;
      return h;
    }
  };
  std::unordered_set<EdgeColoring, Hash> seen;
  ConfigStats st;
  for (ConfigStream s(cycles, num_edges, cmax); !s.done(); s.next()) {
    ++st.total;
    seen.insert(s.current().coloring);
  }
  st.distinct_colorings = seen.size();
  return st;
}

}  // namespace honeycomb
