#include "honeycomb/cache.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "honeycomb/recoupling.hpp"

namespace honeycomb {

namespace {

using json = nlohmann::ordered_json;

json value_json(const Rational& q) { return rational_str(q); }
json value_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

void read_value(const json& j, Rational& out) { out = parse_rational(j.get<std::string>()); }
void read_value(const json& j, Complex& out) { out = Complex(j.at(0).get<double>(), j.at(1).get<double>()); }

template <class R>
json dump_tables(const R& rec) {
  json j;
  auto& th = j["theta"] = json::array();
  rec.for_each_theta([&](const std::array<int, 3>& k, const auto& v) {
    th.push_back(json::array({k[0], k[1], k[2], value_json(v)}));
  });
  auto& te = j["tet"] = json::array();
  rec.for_each_tet([&](const TetArgs& k, const auto& v) {
    te.push_back(json::array({k[0], k[1], k[2], k[3], k[4], k[5], value_json(v)}));
  });
  auto& sj = j["sixj"] = json::array();
  rec.for_each_sixj([&](const TetArgs& k, const auto& v) {
    sj.push_back(json::array({k[0], k[1], k[2], k[3], k[4], k[5], value_json(v)}));
  });
  return j;
}

template <class R>
std::size_t load_tables(const R& rec, const json& j) {
  using S = typename R::Scalar;
  std::size_t n = 0;
  for (const auto& e : j.at("theta")) {
    S v;
    read_value(e.at(3), v);
    rec.insert_theta({e.at(0).get<int>(), e.at(1).get<int>(), e.at(2).get<int>()}, v);
    ++n;
  }
  for (const char* name : {"tet", "sixj"}) {
    for (const auto& e : j.at(name)) {
      TetArgs k;
      for (int i = 0; i < 6; ++i) k[i] = e.at(i).get<int>();
      S v;
      read_value(e.at(6), v);
      if (std::string(name) == "tet") rec.insert_tet(k, v);
      else rec.insert_sixj(k, v);
      ++n;
    }
  }
  return n;
}

}  // namespace

void save_cache(const std::string& path, const QParam& p) {
  json j;
  j["format"] = "honeycomb-cache";
  j["version"] = kCacheVersion;
  j["backend"] = p.str();
  json t = with_backend(p, [](auto& rec) { return dump_tables(rec); });
  for (auto& [k, v] : t.items()) j[k] = v;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write cache file " + path);
    out << j.dump() << '\n';
  }
  std::filesystem::rename(tmp, path);
}

std::size_t load_cache(const std::string& path, const QParam& p) {
  std::ifstream in(path);
  if (!in) return 0;
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error&) {
    return 0;
  }
  if (j.value("format", "") != "honeycomb-cache" || j.value("version", -1) != kCacheVersion ||
      j.value("backend", "") != p.str())
    return 0;
  return with_backend(p, [&](auto& rec) { return load_tables(rec, j); });
}

}  // namespace honeycomb
