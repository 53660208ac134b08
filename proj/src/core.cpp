#include "setlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_set>

namespace setlab {

SetSystem::SetSystem(std::uint32_t universe, std::vector<std::vector<Elem>> sets)
    : universe_(universe), sets_(std::move(sets)) {
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    const auto& s = sets_[i];
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] < 1 || s[k] > universe_) {
        throw InstanceError(InstanceError::Kind::ElementOutOfRange,
                            "set " + std::to_string(i + 1) + ": element " +
                                std::to_string(s[k]) + " outside 1.." +
                                std::to_string(universe_));
      }
      if (k > 0 && s[k] <= s[k - 1]) {
        throw InstanceError(InstanceError::Kind::Unsorted,
                            "set " + std::to_string(i + 1) + " is not strictly increasing");
      }
    }
    total_ += s.size();
    max_size_ = std::max(max_size_, s.size());
  }
}

std::span<const Elem> SetSystem::set(std::size_t i) const {
  check_set_index(*this, i);
  return sets_[i - 1];
}

void check_set_index(const SetSystem& sys, std::size_t i) {
  if (i < 1 || i > sys.m()) {
    throw std::out_of_range("set index " + std::to_string(i) + " outside 1.." +
                            std::to_string(sys.m()));
  }
}

QueryResult IntersectionIndex::query(std::size_t i, std::size_t j, CostMeter* meter) const {
  if (meter != nullptr) meter->begin_query();
  std::vector<Elem> out;
  enumerate(
      i, j,
      [&out](Elem e) {
        out.push_back(e);
        return true;
      },
      meter);
  std::sort(out.begin(), out.end());
  return QueryResult::of(std::move(out));
}

bool IntersectionIndex::disjoint(std::size_t i, std::size_t j, CostMeter* meter) const {
  if (meter != nullptr) meter->begin_query();
  bool found = false;
  enumerate(
      i, j,
      [&found](Elem) {
        found = true;
        return false;
      },
      meter);
  return !found;
}

// -- rng ----------------------------------------------------------------------

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("Rng::below: zero bound");
  // Rejection over the largest multiple of bound.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::between: empty range");
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(engine_());
  return lo + static_cast<std::int64_t>(below(span));
}

double Rng::unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

// -- generators ---------------------------------------------------------------

SetSystem gen_random_instance(std::size_t m, std::uint32_t u, std::size_t target_n,
                              std::uint64_t seed) {
  if (m < 1 || u < 1) {
    throw InstanceError(InstanceError::Kind::Generator, "generator needs m >= 1 and u >= 1");
  }
  if (target_n > m * static_cast<std::size_t>(u)) {
    throw InstanceError(InstanceError::Kind::Generator,
                        "target_n " + std::to_string(target_n) + " exceeds m*u = " +
                            std::to_string(m * static_cast<std::size_t>(u)));
  }
  Rng rng(seed);
  std::vector<std::unordered_set<Elem>> members(m);
  std::size_t count = 0;
  while (count < target_n) {
    const auto s = static_cast<std::size_t>(rng.below(m));
    const auto e = static_cast<Elem>(rng.below(u) + 1);
    if (members[s].insert(e).second) ++count;
  }
  std::vector<std::vector<Elem>> sets(m);
  for (std::size_t s = 0; s < m; ++s) {
    sets[s].assign(members[s].begin(), members[s].end());
    std::sort(sets[s].begin(), sets[s].end());
  }
  return SetSystem(u, std::move(sets));
}

SetSystem gen_skewed_instance(const SkewedParams& p) {
  if (p.m < 1 || p.u < 1) {
    throw InstanceError(InstanceError::Kind::Generator, "generator needs m >= 1 and u >= 1");
  }
  if (p.target_n > p.m * static_cast<std::size_t>(p.u)) {
    throw InstanceError(InstanceError::Kind::Generator, "target_n exceeds m*u");
  }
  Rng rng(p.seed);

  std::vector<double> weight(p.m);
  for (std::size_t k = 0; k < p.m; ++k) {
    weight[k] = std::pow(static_cast<double>(k + 1), -p.size_exponent);
  }
  const double wsum = std::accumulate(weight.begin(), weight.end(), 0.0);

  // Zipf CDF over ranks, mapped to elements through a random relabelling.
  std::vector<double> cdf(p.u);
  double acc = 0;
  for (std::uint32_t k = 0; k < p.u; ++k) {
    acc += std::pow(static_cast<double>(k + 1), -p.element_exponent);
    cdf[k] = acc;
  }
  std::vector<Elem> label(p.u);
  std::iota(label.begin(), label.end(), Elem{1});
  for (std::size_t k = p.u; k > 1; --k) {
    std::swap(label[k - 1], label[rng.below(k)]);
  }

  std::vector<std::vector<Elem>> sets(p.m);
  for (std::size_t k = 0; k < p.m; ++k) {
    const double want = weight[k] / wsum * static_cast<double>(p.target_n);
    const auto size = std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(want)), 1,
                                              p.u);
    std::unordered_set<Elem> members;
    std::size_t attempts = 0;
    while (members.size() < size) {
      Elem e;
      if (attempts++ < 20 * size) {
        const double x = rng.unit() * acc;
        const auto rank = static_cast<std::size_t>(
            std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
        e = label[std::min<std::size_t>(rank, p.u - 1)];
      } else {
        e = static_cast<Elem>(rng.below(p.u) + 1);
      }
      members.insert(e);
    }
    sets[k].assign(members.begin(), members.end());
    std::sort(sets[k].begin(), sets[k].end());
  }
  return SetSystem(p.u, std::move(sets));
}

// -- oracle -------------------------------------------------------------------

std::vector<Elem> merge_intersect(std::span<const Elem> a, std::span<const Elem> b) {
  std::vector<Elem> out;
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] < b[y]) {
      ++x;
    } else if (a[x] > b[y]) {
      ++y;
    } else {
      out.push_back(a[x]);
      ++x;
      ++y;
    }
  }
  return out;
}

std::size_t merge_intersect_count(std::span<const Elem> a, std::span<const Elem> b) {
  std::size_t count = 0, x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    if (a[x] < b[y]) {
      ++x;
    } else if (a[x] > b[y]) {
      ++y;
    } else {
      ++count;
      ++x;
      ++y;
    }
  }
  return count;
}

QueryResult oracle_intersect(const SetSystem& sys, std::size_t i, std::size_t j) {
  return QueryResult::of(merge_intersect(sys.set(i), sys.set(j)));
}

std::uint64_t OracleIndex::words() const { return sys_.total() + sys_.m(); }

void OracleIndex::enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                            CostMeter* meter) const {
  const auto a = sys_.set(i);
  const auto b = sys_.set(j);
  std::size_t x = 0, y = 0;
  while (x < a.size() && y < b.size()) {
    add_probes(meter, 1);
    if (a[x] < b[y]) {
      ++x;
    } else if (a[x] > b[y]) {
      ++y;
    } else {
      if (!visit(a[x])) return;
      ++x;
      ++y;
    }
  }
}

// -- files --------------------------------------------------------------------

void write_instance(std::ostream& os, const SetSystem& sys) {
  os << sys.m() << ' ' << sys.u() << '\n';
  for (const auto& s : sys.sets()) {
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (k > 0) os << ' ';
      os << s[k];
    }
    os << '\n';
  }
}

namespace {

bool parse_uint(const std::string& token, std::uint64_t& out) {
  if (token.empty() || token.size() > 19) return false;
  std::uint64_t v = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = v;
  return true;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string t;
  while (in >> t) tokens.push_back(t);
  return tokens;
}

}  // namespace

SetSystem read_instance(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) {
    throw InstanceError(InstanceError::Kind::MalformedHeader, "missing header line");
  }
  const auto header = split_ws(line);
  std::uint64_t m = 0, u = 0;
  if (header.size() != 2 || !parse_uint(header[0], m) || !parse_uint(header[1], u) ||
      u > std::numeric_limits<std::uint32_t>::max()) {
    throw InstanceError(InstanceError::Kind::MalformedHeader,
                        "header must be `m u`, got: " + line);
  }
  std::vector<std::vector<Elem>> sets;
  sets.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i) {
    if (!std::getline(is, line)) {
      throw InstanceError(InstanceError::Kind::MissingLines,
                          "expected " + std::to_string(m) + " set lines, got " +
                              std::to_string(i));
    }
    std::vector<Elem> s;
    for (const auto& token : split_ws(line)) {
      std::uint64_t v = 0;
      if (!parse_uint(token, v)) {
        throw InstanceError(InstanceError::Kind::MalformedLine,
                            "set " + std::to_string(i + 1) + ": bad token '" + token + "'");
      }
      if (v < 1 || v > u) {
        throw InstanceError(InstanceError::Kind::ElementOutOfRange,
                            "set " + std::to_string(i + 1) + ": element " + token +
                                " outside 1.." + std::to_string(u));
      }
      if (!s.empty() && v <= s.back()) {
        throw InstanceError(InstanceError::Kind::Unsorted,
                            "set " + std::to_string(i + 1) + " is not strictly increasing");
      }
      s.push_back(static_cast<Elem>(v));
    }
    sets.push_back(std::move(s));
  }
  return SetSystem(static_cast<std::uint32_t>(u), std::move(sets));
}

void save_instance(const SetSystem& sys, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot write " + path);
  write_instance(os, sys);
  if (!os) throw std::ios_base::failure("write failed: " + path);
}

SetSystem load_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::ios_base::failure("cannot read " + path);
  return read_instance(is);
}

void write_pairs(std::ostream& os, std::span<const QueryPair> pairs) {
  for (const auto& [i, j] : pairs) os << i << ' ' << j << '\n';
}

std::vector<QueryPair> read_pairs(std::istream& is) {
  std::vector<QueryPair> pairs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    std::uint64_t i = 0, j = 0;
    if (tokens.size() != 2 || !parse_uint(tokens[0], i) || !parse_uint(tokens[1], j)) {
      throw InstanceError(InstanceError::Kind::MalformedLine,
                          "query line " + std::to_string(lineno) + " must be `i j`");
    }
    pairs.emplace_back(i, j);
  }
  return pairs;
}

std::vector<QueryPair> load_pairs(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::ios_base::failure("cannot read " + path);
  return read_pairs(is);
}

std::vector<QueryPair> all_pairs(std::size_t m) {
  std::vector<QueryPair> pairs;
  pairs.reserve(m * m);
  for (std::size_t i = 1; i <= m; ++i)
    for (std::size_t j = 1; j <= m; ++j) pairs.emplace_back(i, j);
  return pairs;
}

std::vector<QueryPair> random_pairs(std::size_t m, std::size_t count, std::uint64_t seed) {
  std::vector<QueryPair> pairs;
  if (m == 0) return pairs;
  Rng rng(seed);
  pairs.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto i = rng.below(m) + 1;
    const auto j = rng.below(m) + 1;
    pairs.emplace_back(i, j);
  }
  return pairs;
}

}  // namespace setlab
