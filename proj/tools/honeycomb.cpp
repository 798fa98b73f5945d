// honeycomb: evaluation of hexagonal spin networks and their phase space.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "honeycomb/cache.hpp"
#include "honeycomb/colorings.hpp"
#include "honeycomb/evaluator.hpp"
#include "honeycomb/lattice.hpp"
#include "honeycomb/phase_space.hpp"
#include "honeycomb/recoupling.hpp"
#include "honeycomb/tl_oracle.hpp"

using namespace honeycomb;
using json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit { kOk = 0, kInput = 1, kBudget = 2, kInternal = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string backend = "classical";
  int workers = 1;
  std::string cache;
  bool no_cache = false;
  long long oracle_budget = 1'000'000;
  std::uint64_t matrix_bytes = 1ull << 30;
  double tol = 1e-6;
  std::string output;

  int n = 0;
  int uniform = -1;
  std::string coloring_file, pixels_file, trace_file;
  bool json_out = false;
  bool check_oracle = false;

  int cmax = 1;
  bool count_only = false;
  bool stats = false;
  std::uint64_t limit = 0;
  std::string checkpoint;

  bool stream = false;
  std::string heatmap, blocks_file;
  std::uint64_t heatmap_side = 1024;

  QParam param() const {
    try {
      return QParam::parse(backend);
    } catch (const std::exception& e) {
      throw InputError(std::string("bad backend: ") + e.what());
    }
  }
};

void write_sidecar(const std::string& path, const RunConfig& cfg, const std::string& command, json extra = {}) {
  json j;
  j["tool"] = "honeycomb";
  j["version"] = kVersion;
  j["command"] = command;
  j["backend"] = cfg.backend;
  j["n"] = cfg.n;
  j["conventions"] = {{"zero_evaluation", "A_ij = 0 when either evaluation is 0"},
                      {"tie_break", "ascending S, ties by original index"},
                      {"transition", "|conj(e_i) e_j|^2 / max(|e_i|^4, |e_j|^4)"},
                      {"configs", "cycle multisets of total multiplicity 1..cmax, c_min = 0"}};
  for (auto& [k, v] : extra.items()) j[k] = v;
  std::ofstream(path + ".meta.json") << j.dump(2) << '\n';
}

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw InputError("cannot write " + path);
  return out;
}

// Splits [0, total) into `workers` contiguous chunks; results come back in
// chunk order, so the outcome does not depend on the worker count.
template <class T, class Fn>
std::vector<T> run_chunks(std::uint64_t total, int workers, Fn fn) {
  const std::uint64_t w = std::max<std::uint64_t>(1, std::min<std::uint64_t>(workers, std::max<std::uint64_t>(total, 1)));
  std::vector<T> out(w);
  std::vector<std::exception_ptr> err(w);
  std::vector<std::thread> pool;
  for (std::uint64_t k = 0; k < w; ++k) {
    const std::uint64_t b = total * k / w, e = total * (k + 1) / w;
    pool.emplace_back([&, k, b, e] {
      try {
        out[k] = fn(b, e);
      } catch (...) {
        err[k] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : err)
    if (e) std::rethrow_exception(e);
  return out;
}

EvalVector evaluate_configs(const HoneycombNet& h, const std::vector<Cycle>& cycles, const RunConfig& cfg,
                            std::uint64_t count) {
  const QParam p = cfg.param();
  auto parts = run_chunks<EvalVector>(count, cfg.workers, [&](std::uint64_t b, std::uint64_t e) {
    return evaluate_config_range(h, cycles, cfg.cmax, p, b, e);
  });
  EvalVector all;
  for (auto& part : parts)
    for (std::size_t i = 0; i < part.size(); ++i) {
      all.values.push_back(part.values[i]);
      all.norm2.push_back(part.norm2[i]);
    }
  return all;
}

std::pair<HoneycombNet, EdgeColoring> read_coloring(const RunConfig& cfg) {
  std::ifstream in(cfg.coloring_file);
  if (!in) throw InputError("cannot read " + cfg.coloring_file);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed coloring file: ") + e.what());
  }
  int n = cfg.n;
  if (j.is_object() && j.contains("n")) n = j["n"].get<int>();
  if (n < 1) throw InputError("coloring needs --n");
  HoneycombNet h = build_h(n);
  EdgeColoring c(h.num_edges(), -1);
  const json& cols = j.is_object() && j.contains("coloring") ? j["coloring"] : j;
  try {
    if (cols.is_array()) {
      if (static_cast<int>(cols.size()) != h.num_edges())
        throw InputError("coloring has " + std::to_string(cols.size()) + " entries, H_" + std::to_string(n) + " has " +
                         std::to_string(h.num_edges()) + " edges");
      for (int e = 0; e < h.num_edges(); ++e) c[e] = cols[e].get<int>();
    } else if (cols.is_object()) {
      for (auto& [k, v] : cols.items()) c[h.edge_id(EdgeLabel::parse(k))] = v.get<int>();
    } else {
      throw InputError("coloring must be an array or an object");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed coloring: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  for (int x : c)
    if (x < 0) throw InputError("coloring misses edges or has negative colors");
  return {h, c};
}

int cmd_eval(const RunConfig& cfg) {
  const QParam p = cfg.param();
  HoneycombNet h;
  EdgeColoring c;
  if (!cfg.pixels_file.empty()) {
    PixelGrid g;
    try {
      g = read_pixel_file(cfg.pixels_file);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    std::tie(h, c) = pixels_to_coloring(g);
  } else if (!cfg.coloring_file.empty()) {
    std::tie(h, c) = read_coloring(cfg);
  } else if (cfg.uniform >= 0) {
    if (cfg.n < 1) throw InputError("--uniform-color needs --n");
    h = build_h(cfg.n);
    c.assign(h.num_edges(), cfg.uniform);
  } else {
    throw InputError("eval needs --uniform-color, --coloring or --pixels");
  }
  EvaluationTrace trace;
  const QScalar v = evaluate(h, c, p, cfg.trace_file.empty() ? nullptr : &trace);
  std::optional<QScalar> oracle;
  if (cfg.check_oracle) {
    OracleOptions opt;
    opt.budget = cfg.oracle_budget;
    oracle = oracle_evaluate(h.planar(), c, p, opt);
  }
  if (cfg.json_out) {
    json j;
    j["kind"] = "H";
    j["n"] = h.n;
    j["backend"] = p.str();
    j["coloring"] = c;
    j["value"] = v.str();
    if (oracle) j["oracle"] = oracle->str();
    std::cout << j.dump() << '\n';
  } else {
    std::cout << v.str() << '\n';
    if (oracle) std::cout << "oracle " << oracle->str() << '\n';
  }
  if (!cfg.trace_file.empty()) {
    open_out(cfg.trace_file) << trace.to_json() << '\n';
    write_sidecar(cfg.trace_file, cfg, "eval", {{"value", v.str()}});
  }
  if (oracle && !oracle->equals(v)) {
    std::cerr << "evaluation disagrees with the oracle\n";
    return kInternal;
  }
  return kOk;
}

int cmd_cycles(const RunConfig& cfg) {
  if (cfg.n < 1) throw InputError("--n must be at least 1");
  const auto cycles = enumerate_cycles(cfg.n);
  std::cout << cycles.size() << '\n';
  if (!cfg.output.empty()) {
    open_out(cfg.output) << cycles_to_json(cycles, cfg.n) << '\n';
    write_sidecar(cfg.output, cfg, "cycles", {{"count", cycles.size()}});
  }
  return kOk;
}

int cmd_configs(const RunConfig& cfg) {
  if (cfg.n < 1) throw InputError("--n must be at least 1");
  if (cfg.cmax < 1) throw InputError("--cmax must be at least 1");
  const HoneycombNet h = build_h(cfg.n);
  const auto cycles = enumerate_cycles(h);
  const mpz_class total = config_count(cycles.size(), cfg.cmax);
  if (cfg.count_only) {
    std::cout << total.get_str() << '\n';
    return kOk;
  }
  if (cfg.stats) {
    if (total > mpz_class(50'000'000)) throw InputError("too many configs for duplicate statistics");
    const auto st = config_stats(cycles, h.num_edges(), cfg.cmax);
    std::cout << "configs " << st.total << "\ndistinct_colorings " << st.distinct_colorings << '\n';
    return kOk;
  }
  ConfigStream s(cycles, h.num_edges(), cfg.cmax);
  if (!cfg.checkpoint.empty() && std::filesystem::exists(cfg.checkpoint)) {
    std::ifstream in(cfg.checkpoint, std::ios::binary);
    try {
      s.load_checkpoint(in);
    } catch (const std::runtime_error& e) {
      throw InputError(e.what());
    }
  }
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!cfg.output.empty()) {
    file = open_out(cfg.output);
    out = &file;
  }
  std::uint64_t written = 0;
  for (; !s.done() && (cfg.limit == 0 || written < cfg.limit); s.next(), ++written) {
    const auto c = s.current();
    json j;
    j["rank"] = s.rank().get_str();
    j["cycles"] = c.cycles;
    j["coloring"] = c.coloring;
    *out << j.dump() << '\n';
  }
  if (!cfg.checkpoint.empty()) {
    std::ofstream ck(cfg.checkpoint, std::ios::binary);
    s.save_checkpoint(ck);
  }
  std::cerr << written << " of " << total.get_str() << " configs\n";
  if (!cfg.output.empty()) write_sidecar(cfg.output, cfg, "configs", {{"total", total.get_str()}, {"written", written}});
  return kOk;
}

std::uint64_t checked_count(const std::vector<Cycle>& cycles, int cmax) {
  const mpz_class total = config_count(cycles.size(), cmax);
  if (!total.fits_ulong_p()) throw InputError("config count does not fit in 64 bits");
  return total.get_ui();
}

int cmd_matrix(const RunConfig& cfg, bool rank_only) {
  if (cfg.n < 1) throw InputError("--n must be at least 1");
  const HoneycombNet h = build_h(cfg.n);
  const auto cycles = enumerate_cycles(h);
  const std::uint64_t count = checked_count(cycles, cfg.cmax);
  if (!cfg.stream && count > cfg.matrix_bytes / 4 / std::max<std::uint64_t>(count, 1))
    throw MatrixBudgetExceeded("matrix of dimension " + std::to_string(count) +
                               " exceeds the storage budget; use --stream");
  const EvalVector ev = evaluate_configs(h, cycles, cfg, count);
  TransitionMatrix m = cfg.stream ? build_streaming(ev) : build_matrix(ev, cfg.matrix_bytes);
  rank_states(m);
  const ClassPartition blocks = detect_blocks(m, cfg.tol);
  std::size_t zeros = 0;
  for (double x : ev.norm2) zeros += x == 0;
  json summary{{"dim", m.dim},
               {"blocks", blocks.blocks.size()},
               {"s_consistent", blocks.s_consistent},
               {"zero_evaluations", zeros},
               {"mode", cfg.stream ? "streaming" : "materialized"}};
  std::cout << summary.dump() << '\n';

  if (!rank_only) {
    const std::string path = cfg.output.empty() ? "matrix.hctm" : cfg.output;
    auto out = open_out(path, true);
    write_matrix(out, m, true);
    write_sidecar(path, cfg, "matrix", summary);
  } else {
    const std::string path = cfg.output.empty() ? "ranking.csv" : cfg.output;
    auto out = open_out(path);
    write_ranking_csv(out, m, blocks);
    write_sidecar(path, cfg, "rank", summary);
  }
  if (!cfg.blocks_file.empty()) {
    open_out(cfg.blocks_file) << blocks_to_json(m, blocks) << '\n';
    write_sidecar(cfg.blocks_file, cfg, rank_only ? "rank" : "matrix", summary);
  }
  if (!cfg.heatmap.empty()) {
    auto out = open_out(cfg.heatmap, true);
    write_heatmap(out, m, cfg.heatmap_side);
    write_sidecar(cfg.heatmap, cfg, rank_only ? "rank" : "matrix", summary);
  }
  return kOk;
}

std::string colors_descriptor(const std::string& head, const std::vector<int>& xs) {
  std::string s = head + "(";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + ")";
}

// Oracle-derived reference values.
int cmd_golden(const RunConfig& cfg) {
  const QParam p = cfg.param();
  OracleOptions opt;
  opt.budget = cfg.oracle_budget;
  json values;
  for (int n = 0; n <= std::min(6, p.max_color()); ++n) values[colors_descriptor("delta", {n})] = oracle_evaluate(loop_graph(), {n}, p, opt).str();
  for (int a = 0; a <= 3; ++a)
    for (int b = a; b <= 3; ++b)
      for (int c = b; c <= 3; ++c)
        if (is_admissible(a, b, c, p))
          values[colors_descriptor("theta", {a, b, c})] = oracle_evaluate(theta_graph(), {a, b, c}, p, opt).str();
  const PlanarGraph tg = tet_graph();
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int e = 0; e <= 2; ++e)
        for (int c = 0; c <= 2; ++c)
          for (int d = 0; d <= 2; ++d)
            for (int f = 0; f <= 2; ++f) {
              if (!is_admissible(a, b, e, p) || !is_admissible(c, d, e, p) || !is_admissible(a, d, f, p) ||
                  !is_admissible(b, c, f, p))
                continue;
              const std::vector<int> t{a, b, e, c, d, f};
              if (tet_canonical({a, b, e, c, d, f}) != TetArgs{a, b, e, c, d, f}) continue;
              values[colors_descriptor("tet", t)] = oracle_evaluate(tg, t, p, opt).str();
            }
  for (const std::vector<int>& t : {std::vector<int>{2, 2, 2, 2, 2, 2}, {1, 2, 1, 2, 1, 3}, {3, 3, 2, 3, 3, 2}})
    values[colors_descriptor("tet", t)] = oracle_evaluate(tg, t, p, opt).str();
  // Bubble move: Tet / theta(b, c, f) with argument order (a, b, c, d, e, f).
  for (const std::vector<int>& t : {std::vector<int>{1, 1, 1, 1, 2, 2}, {2, 2, 2, 2, 2, 2}, {1, 2, 2, 1, 1, 1}}) {
    const int a = t[0], b = t[1], c = t[2], d = t[3], e = t[4], f = t[5];
    const QScalar tv = oracle_evaluate(tg, {a, b, e, c, d, f}, p, opt);
    const QScalar th = oracle_evaluate(theta_graph(), {b, c, f}, p, opt);
    if (!tv.is_exact() || th.is_zero()) continue;
    values[colors_descriptor("bubble", t)] = rational_str(Rational(tv.rational() / th.rational()));
  }
  for (int c = 0; c <= std::min(4, p.max_color()); ++c) {
    const HoneycombNet h1 = build_h(1);
    values["H1:" + std::to_string(c)] =
        oracle_evaluate(h1.planar(), EdgeColoring(h1.num_edges(), c), p, opt).str();
  }
  std::mt19937 rng(20240601);
  for (int n = 2; n <= 3; ++n) {
    const HoneycombNet h = build_h(n);
    const auto cycles = enumerate_cycles(h);
    const int samples = n == 2 ? 30 : 15;
    std::uniform_int_distribution<std::size_t> pick(0, cycles.size() - 1);
    for (int k = 0; k < samples; ++k) {
      CycleMultiset ms{{static_cast<int>(pick(rng)), 1}};
      const int extra = static_cast<int>(pick(rng));
      if (extra != ms[0].first && k % 2 == 0) ms.push_back({extra, 1});
      std::sort(ms.begin(), ms.end());
      const auto cfgc = make_config(cycles, h.num_edges(), ms);
      std::string key = "H" + std::to_string(n) + ":";
      for (std::size_t e = 0; e < cfgc.coloring.size(); ++e) key += (e ? "," : "") + std::to_string(cfgc.coloring[e]);
      values[key] = oracle_evaluate(h.planar(), cfgc.coloring, p, opt).str();
    }
  }
  json j;
  j["backend"] = p.str();
  j["source"] = "Temperley-Lieb expansion oracle";
  j["values"] = values;
  const std::string path = cfg.output.empty() ? "golden.json" : cfg.output;
  open_out(path) << j.dump(2) << '\n';
  std::cout << values.size() << " values\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation of hexagonal spin networks and their transition phase space"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  if (const char* w = std::getenv("HONEYCOMB_WORKERS")) cfg.workers = std::max(1, std::atoi(w));
  if (const char* c = std::getenv("HONEYCOMB_CACHE")) cfg.cache = c;

  app.add_option("--backend", cfg.backend, "classical or q:r (root of unity of level r)");
  app.add_option("--workers", cfg.workers, "worker threads (env HONEYCOMB_WORKERS)")->check(CLI::PositiveNumber);
  app.add_option("--cache", cfg.cache, "recoupling cache file (env HONEYCOMB_CACHE)");
  app.add_flag("--no-cache", cfg.no_cache, "do not read or write the cache file");
  app.add_option("--oracle-budget", cfg.oracle_budget, "oracle basis-term budget")->check(CLI::PositiveNumber);
  app.add_option("--matrix-budget", cfg.matrix_bytes, "matrix storage budget in bytes")->check(CLI::PositiveNumber);
  app.add_option("--tol", cfg.tol, "block detection tolerance");

  auto* eval = app.add_subcommand("eval", "evaluate a colored honeycomb H_n");
  eval->add_option("--n", cfg.n, "lattice size");
  eval->add_option("--uniform-color", cfg.uniform, "color every edge alike");
  eval->add_option("--coloring", cfg.coloring_file, "JSON coloring: array by edge id or object by label");
  eval->add_option("--pixels", cfg.pixels_file, "pixel grid (PGM or text)");
  eval->add_option("--trace", cfg.trace_file, "write the evaluation trace as JSON");
  eval->add_flag("--json", cfg.json_out, "print a JSON record");
  eval->add_flag("--check-oracle", cfg.check_oracle, "also evaluate with the Temperley-Lieb oracle");

  auto* cycles = app.add_subcommand("cycles", "enumerate simple cycles of H_n");
  cycles->add_option("--n", cfg.n, "lattice size")->required();
  cycles->add_option("-o,--output", cfg.output, "write the cycle list as JSON");

  auto* configs = app.add_subcommand("configs", "stream cycle-multiset coloring configs");
  configs->add_option("--n", cfg.n, "lattice size")->required();
  configs->add_option("--cmax", cfg.cmax, "maximum total cycle multiplicity")->required();
  configs->add_flag("--count-only", cfg.count_only, "print only the number of configs");
  configs->add_flag("--stats", cfg.stats, "count distinct induced colorings");
  configs->add_option("--limit", cfg.limit, "stop after this many configs");
  configs->add_option("--checkpoint", cfg.checkpoint, "resume from and save the stream cursor");
  configs->add_option("-o,--output", cfg.output, "write configs as JSON lines");

  auto* matrix = app.add_subcommand("matrix", "build the ranked transition matrix");
  auto* rank = app.add_subcommand("rank", "rank configs by S and detect classes");
  for (auto* sub : {matrix, rank}) {
    sub->add_option("--n", cfg.n, "lattice size")->required();
    sub->add_option("--cmax", cfg.cmax, "maximum total cycle multiplicity")->required();
    sub->add_flag("--stream", cfg.stream, "compute S without storing the matrix");
    sub->add_option("-o,--output", cfg.output, "output file");
    sub->add_option("--heatmap", cfg.heatmap, "write a PGM heatmap of the ranked matrix");
    sub->add_option("--heatmap-size", cfg.heatmap_side, "heatmap side in pixels");
    sub->add_option("--blocks", cfg.blocks_file, "write the class partition as JSON");
  }

  auto* golden = app.add_subcommand("golden", "write oracle reference values");
  golden->add_option("-o,--output", cfg.output, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kInput;
  }

  try {
    const QParam p = cfg.param();
    const bool use_cache = !cfg.cache.empty() && !cfg.no_cache;
    if (use_cache) load_cache(cfg.cache, p);
    int rc = kOk;
    if (*eval) rc = cmd_eval(cfg);
    else if (*cycles) rc = cmd_cycles(cfg);
    else if (*configs) rc = cmd_configs(cfg);
    else if (*matrix) rc = cmd_matrix(cfg, false);
    else if (*rank) rc = cmd_matrix(cfg, true);
    else if (*golden) rc = cmd_golden(cfg);
    if (use_cache) save_cache(cfg.cache, p);
    return rc;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const OracleBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const MatrixBudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return kBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}
