#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "honeycomb/lattice.hpp"

namespace honeycomb {

// Simple cycle of the underlying graph. Vertices start at the smallest id
// and run in the direction whose second vertex is smaller than the last;
// edges[k] joins vertices[k] and vertices[k+1] (cyclically).
struct Cycle {
  std::vector<int> vertices;
  std::vector<int> edges;
  friend auto operator<=>(const Cycle&, const Cycle&) = default;
};

// All simple cycles of H_n (Johnson's algorithm), sorted by length then edges.
std::vector<Cycle> enumerate_cycles(const HoneycombNet& net);
std::vector<Cycle> enumerate_cycles(int n);
std::string cycles_to_json(const std::vector<Cycle>& cycles, int n);

// C(n_cycles + k - 1, k): multisets of exactly k cycles.
mpz_class multiset_count(std::uint64_t n_cycles, int k);
// sum_{k=1..cmax} C(n_cycles + k - 1, k)
mpz_class config_count(std::uint64_t n_cycles, int cmax);

// Cycle multiset as sorted (cycle id, multiplicity) pairs.
using CycleMultiset = std::vector<std::pair<int, int>>;

struct ColoringConfig {
  EdgeColoring coloring;
  CycleMultiset cycles;
};

ColoringConfig make_config(const std::vector<Cycle>& cycles, int num_edges, const CycleMultiset& m);

// Multisets of total size 1..cmax in canonical order: by size, then
// lexicographic on the nondecreasing id sequence.
std::vector<int> unrank_multiset(const mpz_class& rank, std::uint64_t n_cycles, int cmax);
mpz_class rank_multiset(const std::vector<int>& ids, std::uint64_t n_cycles, int cmax);

class ConfigStream {
 public:
  ConfigStream(const std::vector<Cycle>& cycles, int num_edges, int cmax);

  bool done() const { return done_; }
  const mpz_class& rank() const { return rank_; }
  const mpz_class& total() const { return total_; }
  // Current multiset as a nondecreasing id sequence.
  const std::vector<int>& ids() const { return ids_; }
  ColoringConfig current() const;
  void next();
  void seek(const mpz_class& rank);

  // Resumable cursor: magic "HCCK", version, cycle count, cmax, rank.
  void save_checkpoint(std::ostream& out) const;
  void load_checkpoint(std::istream& in);

 private:
  const std::vector<Cycle>* cycles_;
  int num_edges_;
  int cmax_;
  std::uint64_t n_;
  mpz_class total_;
  mpz_class rank_;
  std::vector<int> ids_;
  bool done_ = false;
};

CycleMultiset to_multiset(const std::vector<int>& ids);

struct ConfigStats {
  std::uint64_t total = 0;
  std::uint64_t distinct_colorings = 0;
};

// Streams every config and counts distinct induced colorings.
ConfigStats config_stats(const std::vector<Cycle>& cycles, int num_edges, int cmax);

}  // namespace honeycomb
