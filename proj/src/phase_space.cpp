#include "honeycomb/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

#include <json.hpp>

#include "honeycomb/evaluator.hpp"

namespace honeycomb {

namespace {

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
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
    if (c == EOF) throw std::runtime_error("truncated matrix file");
    v |= static_cast<std::uint64_t>(c & 0xff) << (8 * i);
  }
  return v;
}
void put_f32(std::ostream& o, float f) {
  std::uint32_t bits;
  std::memcpy(&bits, &f, 4);
  put_u32(o, bits);
}

constexpr std::uint32_t kMatrixVersion = 1;

}  // namespace

QScalar physical_inner_product(const QScalar& e1, const QScalar& e2) { return e1.conj() * e2; }

double transition_from_norms(double a, double b) {
  if (a == 0 || b == 0) return 0;
  return a < b ? a / b : b / a;
}

double transition_entry(const QScalar& ei, const QScalar& ej) {
  if (ei.is_zero() || ej.is_zero()) return 0;
  if (ei.is_exact() && ej.is_exact()) {
    const Rational a = ei.rational() * ei.rational(), b = ej.rational() * ej.rational();
    const Rational r = a < b ? Rational(a / b) : Rational(b / a);
    return r.get_d();
  }
  return transition_from_norms(ei.norm(), ej.norm());
}

void EvalVector::push_back(const QScalar& v) {
  values.push_back(v);
  norm2.push_back(v.is_exact() ? Rational(v.rational() * v.rational()).get_d() : v.norm());
}

bool EvalVector::exact() const {
  return std::all_of(values.begin(), values.end(), [](const QScalar& v) { return v.is_exact(); });
}

EvalVector evaluate_config_range(const HoneycombNet& h, const std::vector<Cycle>& cycles, int cmax,
                                 const QParam& p, std::uint64_t begin, std::uint64_t end) {
  EvalVector out;
  ConfigStream s(cycles, h.num_edges(), cmax);
  s.seek(mpz_class(std::to_string(begin)));
  for (std::uint64_t k = begin; k < end && !s.done(); ++k, s.next()) out.push_back(evaluate(h, s.current().coloring, p));
  return out;
}

double TransitionMatrix::entry(std::uint64_t i, std::uint64_t j) const {
  if (!entries.empty()) return entries[i * dim + j];
  return transition_from_norms(norm2[i], norm2[j]);
}

TransitionMatrix build_matrix(const EvalVector& evals, std::uint64_t max_bytes) {
  TransitionMatrix m;
  m.dim = evals.size();
  if (m.dim != 0 && m.dim > max_bytes / 4 / m.dim)
    throw MatrixBudgetExceeded("matrix of dimension " + std::to_string(m.dim) +
                               " exceeds the storage budget; use streaming mode");
  m.norm2 = evals.norm2;
  m.entries.resize(m.dim * m.dim);
  m.S.resize(m.dim);
  std::vector<double> row(m.dim);
  for (std::uint64_t i = 0; i < m.dim; ++i) {
    for (std::uint64_t j = 0; j < m.dim; ++j) {
      row[j] = transition_from_norms(m.norm2[i], m.norm2[j]);
      m.entries[i * m.dim + j] = static_cast<float>(row[j]);
    }
    m.S[i] = pairwise_sum(row.data(), row.size());
  }
  m.perm.resize(m.dim);
  std::iota(m.perm.begin(), m.perm.end(), 0);
  return m;
}

TransitionMatrix build_streaming(const EvalVector& evals) {
  TransitionMatrix m;
  m.dim = evals.size();
  m.norm2 = evals.norm2;
  m.S.assign(m.dim, 0.0);
  std::vector<std::uint64_t> order;
  for (std::uint64_t i = 0; i < m.dim; ++i)
    if (m.norm2[i] > 0) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return m.norm2[a] < m.norm2[b]; });
  // Groups of equal magnitude share S.
  const std::size_t k = order.size();
  std::vector<std::size_t> group_end(k);
  for (std::size_t i = k; i-- > 0;)
    group_end[i] = (i + 1 < k && m.norm2[order[i + 1]] == m.norm2[order[i]]) ? group_end[i + 1] : i + 1;
  // prefix[i] = sum of m over order[0..i), suffix_inv[i] = sum of 1/m over order[i..k).
  std::vector<long double> prefix(k + 1, 0), suffix_inv(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) prefix[i + 1] = prefix[i] + m.norm2[order[i]];
  for (std::size_t i = k; i-- > 0;) suffix_inv[i] = suffix_inv[i + 1] + 1.0L / m.norm2[order[i]];
  for (std::size_t i = 0; i < k; ++i) {
    const long double a = m.norm2[order[i]];
    const std::size_t e = group_end[i];
    m.S[order[i]] = static_cast<double>(prefix[e] / a + a * suffix_inv[e]);
  }
  m.perm.resize(m.dim);
  std::iota(m.perm.begin(), m.perm.end(), 0);
  return m;
}

std::vector<Rational> exact_scores(const EvalVector& evals) {
  if (!evals.exact()) throw std::invalid_argument("exact scores need classical evaluations");
  std::vector<Rational> norms(evals.size());
  std::map<Rational, std::uint64_t> count;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    norms[i] = evals.values[i].rational() * evals.values[i].rational();
    if (norms[i] != 0) ++count[norms[i]];
  }
  // below[x] = sum over m <= x of cnt*m, above[x] = sum over m > x of cnt/m.
  std::map<Rational, Rational> below, above;
  Rational acc = 0;
  for (auto& [x, c] : count) below[x] = (acc += x * c);
  acc = 0;
  for (auto it = count.rbegin(); it != count.rend(); ++it) {
    above[it->first] = acc;
    acc += Rational(it->second) / it->first;
  }
  std::vector<Rational> S(evals.size(), Rational(0));
  for (std::size_t i = 0; i < evals.size(); ++i)
    if (norms[i] != 0) S[i] = below[norms[i]] / norms[i] + norms[i] * above[norms[i]];
  return S;
}

void rank_states(TransitionMatrix& m) {
  m.perm.resize(m.dim);
  std::iota(m.perm.begin(), m.perm.end(), 0);
  std::stable_sort(m.perm.begin(), m.perm.end(), [&](auto a, auto b) { return m.S[a] < m.S[b]; });
}

ClassPartition detect_blocks(const TransitionMatrix& m, double tol) {
  ClassPartition out;
  const double thresh = 1.0 - tol;
  std::uint64_t p = 0;
  while (p < m.dim) {
    Block b;
    const std::uint64_t first = m.perm[p];
    b.members.push_back(first);
    std::uint64_t lo = first, hi = first;  // smallest and largest magnitude so far
    auto fits = [&](std::uint64_t c) {
      if (m.entry(c, c) < thresh) return false;
      // With magnitudes known, the entry falls with their ratio, so the
      // extremes bound every pair.
      if (!m.norm2.empty()) return m.entry(c, lo) >= thresh && m.entry(c, hi) >= thresh;
      return std::all_of(b.members.begin(), b.members.end(), [&](auto x) { return m.entry(c, x) >= thresh; });
    };
    for (std::uint64_t q = p + 1; q < m.dim && fits(m.perm[q]); ++q) {
      const std::uint64_t c = m.perm[q];
      if (!m.norm2.empty()) {
        if (m.norm2[c] < m.norm2[lo]) lo = c;
        if (m.norm2[c] > m.norm2[hi]) hi = c;
      }
      b.members.push_back(c);
    }
    double smin = m.S[first], smax = smin;
    for (auto x : b.members) {
      smin = std::min(smin, m.S[x]);
      smax = std::max(smax, m.S[x]);
    }
    b.S = smin;
    b.s_spread = smax - smin;
    if (b.s_spread > tol * std::max(1.0, std::abs(smax))) out.s_consistent = false;
    p += b.members.size();
    out.blocks.push_back(std::move(b));
  }
  return out;
}

void write_matrix(std::ostream& out, const TransitionMatrix& m, bool ranked) {
  out.write("HCTM", 4);
  put_u32(out, kMatrixVersion);
  put_u64(out, m.dim);
  for (std::uint64_t a = 0; a < m.dim; ++a) {
    const std::uint64_t i = ranked ? m.perm[a] : a;
    for (std::uint64_t b = 0; b < m.dim; ++b) {
      const std::uint64_t j = ranked ? m.perm[b] : b;
      put_f32(out, static_cast<float>(m.entry(i, j)));
    }
  }
}

TransitionMatrix read_matrix(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "HCTM") throw std::runtime_error("not a matrix file");
  if (get_le(in, 4) != kMatrixVersion) throw std::runtime_error("unsupported matrix file version");
  TransitionMatrix m;
  m.dim = get_le(in, 8);
  m.entries.resize(m.dim * m.dim);
  for (auto& e : m.entries) {
    const auto bits = static_cast<std::uint32_t>(get_le(in, 4));
    std::memcpy(&e, &bits, 4);
  }
  m.S.resize(m.dim);
  for (std::uint64_t i = 0; i < m.dim; ++i) {
    std::vector<double> row(m.entries.begin() + i * m.dim, m.entries.begin() + (i + 1) * m.dim);
    m.S[i] = pairwise_sum(row.data(), row.size());
  }
  m.perm.resize(m.dim);
  std::iota(m.perm.begin(), m.perm.end(), 0);
  return m;
}

void write_heatmap(std::ostream& out, const TransitionMatrix& m, std::uint64_t side) {
  const std::uint64_t w = std::max<std::uint64_t>(1, std::min(m.dim, side));
  std::vector<unsigned char> px(w * w, 0);
  for (std::uint64_t a = 0; a < w && m.dim; ++a)
    for (std::uint64_t b = 0; b < w; ++b) {
      const double v = m.entry(m.perm[a * m.dim / w], m.perm[b * m.dim / w]);
      px[a * w + b] = static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
    }
  write_pgm(out, static_cast<int>(w), static_cast<int>(w), px);
}

void write_ranking_csv(std::ostream& out, const TransitionMatrix& m, const ClassPartition& blocks) {
  std::vector<std::size_t> block_of(m.dim, 0);
  for (std::size_t b = 0; b < blocks.blocks.size(); ++b)
    for (auto x : blocks.blocks[b].members) block_of[x] = b;
  out << "rank,index,S,norm2,block\n";
  out.precision(17);
  for (std::uint64_t a = 0; a < m.dim; ++a) {
    const auto i = m.perm[a];
    out << a << ',' << i << ',' << m.S[i] << ',' << (m.norm2.empty() ? 0.0 : m.norm2[i]) << ',' << block_of[i]
        << '\n';
  }
}

std::string blocks_to_json(const TransitionMatrix& m, const ClassPartition& blocks) {
  nlohmann::ordered_json j;
  j["dim"] = m.dim;
  j["num_blocks"] = blocks.blocks.size();
  j["s_consistent"] = blocks.s_consistent;
  auto& arr = j["blocks"] = nlohmann::ordered_json::array();
  for (const auto& b : blocks.blocks) {
    nlohmann::ordered_json jb;
    jb["size"] = b.members.size();
    jb["S"] = b.S;
    jb["s_spread"] = b.s_spread;
    jb["members"] = b.members;
    arr.push_back(jb);
  }
  return j.dump();
}

}  // namespace honeycomb
