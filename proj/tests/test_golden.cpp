#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "honeycomb/cache.hpp"
#include "honeycomb/evaluator.hpp"
#include "honeycomb/recoupling.hpp"

using namespace honeycomb;

namespace {

std::vector<int> ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) out.push_back(std::stoi(tok));
  return out;
}

QScalar fast_value(const std::string& key, const QParam& p) {
  if (key[0] == 'H') {
    const auto colon = key.find(':');
    const int n = std::stoi(key.substr(1, colon - 1));
    const HoneycombNet h = build_h(n);
    auto c = ints(key.substr(colon + 1));
    if (c.size() == 1) c.assign(h.num_edges(), c[0]);
    return evaluate(h, c, p);
  }
  const auto open = key.find('(');
  const std::string head = key.substr(0, open);
  const auto a = ints(key.substr(open + 1, key.size() - open - 2));
  if (head == "delta") return delta(a[0], p);
  if (head == "theta") return theta(a[0], a[1], a[2], p);
  if (head == "tet") return tet(a[0], a[1], a[2], a[3], a[4], a[5], p);
  if (head == "bubble") return bubble_move(a[0], a[1], a[2], a[3], a[4], a[5], p);
  throw std::invalid_argument("unknown descriptor " + key);
}

}  // namespace

TEST_CASE("fast path reproduces the frozen oracle values") {
  std::ifstream in(std::string(HONEYCOMB_TEST_DATA) + "/golden.json");
  REQUIRE(in);
  const auto j = nlohmann::json::parse(in);
  const QParam p = QParam::parse(j.at("backend").get<std::string>());
  REQUIRE(j.at("values").size() > 60);
  for (auto& [key, v] : j.at("values").items()) {
    INFO(key);
    CHECK(fast_value(key, p) == QScalar(parse_rational(v.get<std::string>())));
  }
}

TEST_CASE("recoupling cache round trip") {
  const auto dir = std::filesystem::temp_directory_path();
  for (const QParam p : {QParam::classical(), QParam::root_of_unity(9)}) {
    const std::string path = (dir / ("honeycomb_cache_" + std::to_string(p.level()) + ".json")).string();
    const QScalar before = evaluate(build_h(3), EdgeColoring(build_h(3).num_edges(), 2), p);
    const QScalar t = tet(2, 2, 2, 2, 2, 2, p);
    save_cache(path, p);
    const std::size_t saved = with_backend(p, [](auto& rec) { return rec.cache_size(); });
    with_backend(p, [](auto& rec) { rec.clear_cache(); });
    CHECK(load_cache(path, p) == saved);
    CHECK(with_backend(p, [](auto& rec) { return rec.cache_size(); }) == saved);
    CHECK(load_cache(path, p == QParam::classical() ? QParam::root_of_unity(9) : QParam::classical()) == 0);
    CHECK(evaluate(build_h(3), EdgeColoring(build_h(3).num_edges(), 2), p) == before);
    CHECK(tet(2, 2, 2, 2, 2, 2, p) == t);
    std::ifstream f(path);
    const auto j = nlohmann::json::parse(f);
    CHECK(j.at("version") == kCacheVersion);
    CHECK(j.at("backend") == p.str());
    std::filesystem::remove(path);
  }
  CHECK(load_cache("/nonexistent/cache.json", QParam::classical()) == 0);
  const std::string bad = (dir / "honeycomb_cache_bad.json").string();
  std::ofstream(bad) << "{\"format\": \"honeycomb-cache\", trunc";
  CHECK(load_cache(bad, QParam::classical()) == 0);
  std::filesystem::remove(bad);
}
