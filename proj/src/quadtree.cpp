#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "setlab/quadtree.hpp"

namespace setlab::qt {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::size_t isqrt_ceil(std::size_t x) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while (r * r < x) ++r;
  return r;
}

SubVector merge(const SubVector& first, const SubVector& second) {
  SubVector out;
  out.base = first.base;
  out.ones.reserve(first.ones.size() + second.ones.size());
  std::merge(first.ones.begin(), first.ones.end(), second.ones.begin(), second.ones.end(),
             std::back_inserter(out.ones));
  return out;
}

std::vector<std::vector<SubVector>> build_levels(std::vector<SubVector> leaf, std::size_t entries) {
  const Pos last = leaf.empty() ? 0 : leaf.back().base;
  leaf.resize(entries, SubVector{last, {}});
  std::vector<std::vector<SubVector>> levels;
  levels.push_back(std::move(leaf));
  while (levels.back().size() > 1) {
    const auto& below = levels.back();
    std::vector<SubVector> up;
    up.reserve(below.size() / 2);
    for (std::size_t k = 0; k + 1 < below.size(); k += 2) up.push_back(merge(below[k], below[k + 1]));
    levels.push_back(std::move(up));
  }
  return levels;
}

std::vector<Pos> local_ones(const SubVector& sub) {
  std::vector<Pos> out;
  out.reserve(sub.ones.size());
  for (Pos p : sub.ones) out.push_back(p - sub.base);
  return out;
}

}  // namespace

std::vector<SubVector> leaf_sequence(const CharVector& cv, std::size_t leaf_len, std::size_t cap) {
  if (leaf_len < 1 || cap < 1) throw std::invalid_argument("leaf length and cap must be positive");
  std::vector<SubVector> seq;
  const std::size_t windows = std::max<std::size_t>(1, (cv.length + leaf_len - 1) / leaf_len);
  auto it = cv.ones.begin();
  for (std::size_t w = 0; w < windows; ++w) {
    const auto base = static_cast<Pos>(w * leaf_len);
    const auto end = std::lower_bound(it, cv.ones.end(), static_cast<Pos>(base + leaf_len));
    const auto count = static_cast<std::size_t>(end - it);
    if (count <= cap) {
      seq.push_back(SubVector{base, std::vector<Pos>(it, end)});
    } else {
      for (auto chunk = it; chunk != end;) {
        const auto take = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(cap), end - chunk);
        seq.push_back(SubVector{base, std::vector<Pos>(chunk, chunk + take)});
        chunk += take;
      }
    }
    it = end;
  }
  return seq;
}

TreeShape plan_shape(std::size_t n, std::size_t X, double eps, bool si, std::size_t cap) {
  if (X < 1) throw std::invalid_argument("X must be positive");
  if (eps < 0) throw std::invalid_argument("eps must be non-negative");
  TreeShape s;
  s.n = n;
  s.X = X;
  s.eps = eps;
  s.si = si;
  s.cap = std::max<std::size_t>(cap, 1);
  if (si) {
    s.implicit = 1;
    s.leaf_len = X;
    return s;
  }
  const double lx = std::log2(static_cast<double>(X));
  const auto k = X >= 2 ? static_cast<std::size_t>(std::ceil(2 * eps * lx - 1e-9)) : 0;
  if (k == 0) {
    s.leaf_len = X;
    return s;
  }
  const std::size_t n_pad = std::bit_ceil(std::max<std::size_t>(n, 1));
  const auto top_exp = static_cast<unsigned>(std::floor((1 + eps) * lx + 1e-9));
  const std::size_t z1 = std::min<std::size_t>(std::size_t{1} << top_exp, n_pad);
  const auto lz = static_cast<std::size_t>(std::countr_zero(z1));
  s.implicit = std::min(k, lz + 1);
  s.leaf_len = z1 >> (s.implicit - 1);
  return s;
}

QuadForest::QuadForest(std::vector<CharVector> a_side, std::vector<CharVector> b_side,
                       TreeShape shape)
    : shape_(shape), a_side_(std::move(a_side)), b_side_(std::move(b_side)) {
  std::vector<std::vector<SubVector>> a_seq;
  std::vector<std::vector<SubVector>> b_seq;
  std::size_t longest = 1;
  for (const auto& cv : a_side_) {
    a_seq.push_back(leaf_sequence(cv, shape_.leaf_len, shape_.cap));
    longest = std::max(longest, a_seq.back().size());
  }
  for (const auto& cv : b_side_) {
    b_seq.push_back(leaf_sequence(cv, shape_.leaf_len, shape_.cap));
    longest = std::max(longest, b_seq.back().size());
  }
  shape_.entries = std::bit_ceil(longest);
  shape_.height = static_cast<std::size_t>(std::countr_zero(shape_.entries));
  shape_.implicit = std::min(shape_.implicit, shape_.height + 1);
  for (auto& seq : a_seq) a_levels_.push_back(build_levels(std::move(seq), shape_.entries));
  for (auto& seq : b_seq) b_levels_.push_back(build_levels(std::move(seq), shape_.entries));

  for (std::size_t level = 0; level < shape_.implicit; ++level) {
    LevelInstance li;
    li.inst = std::make_unique<ShiftSetInstance>(shape_.length(level));
    const std::size_t count = entries(level);
    for (const auto& levels : a_levels_) {
      std::vector<std::size_t> first(count, kNone);
      for (std::size_t k = 0; k < count; ++k) {
        if (!levels[level][k].ones.empty()) first[k] = li.inst->add_a(local_ones(levels[level][k]));
      }
      li.a_first.push_back(std::move(first));
    }
    for (const auto& levels : b_levels_) {
      std::vector<std::size_t> first(count, kNone);
      for (std::size_t k = 0; k < count; ++k) {
        if (!levels[level][k].ones.empty()) first[k] = li.inst->add_b(local_ones(levels[level][k]));
      }
      li.b_first.push_back(std::move(first));
    }
    const SetSystem sys = li.inst->system();
    const std::size_t threshold = isqrt_ceil(sys.total());
    if (shape_.si) {
      li.si_index = std::make_unique<si::Alg1Structure>(si::Alg1Structure::build(sys, threshold));
    } else {
      li.sd = std::make_unique<si::SdCountStructure>(si::SdCountStructure::build(sys, threshold));
    }
    implicit_.push_back(std::move(li));
  }

  pairs_.resize(a_side_.size() * b_side_.size());
  pair_once_ = std::make_unique<std::once_flag[]>(pairs_.size());
}

const QuadForest::PairTables& QuadForest::pair(std::size_t i, std::size_t j) const {
  const std::size_t idx = i * b_side_.size() + j;
  std::call_once(pair_once_[idx], [&] { pairs_[idx] = build_pair(i, j); });
  return *pairs_[idx];
}

void QuadForest::materialize_all() const {
  for (std::size_t i = 0; i < a_count(); ++i) {
    for (std::size_t j = 0; j < b_count(); ++j) pair(i, j);
  }
}

std::size_t QuadForest::materialized_pairs() const {
  return static_cast<std::size_t>(
      std::count_if(pairs_.begin(), pairs_.end(), [](const auto& p) { return p != nullptr; }));
}

std::unique_ptr<QuadForest::PairTables> QuadForest::build_pair(std::size_t i, std::size_t j) const {
  auto tables = std::make_unique<PairTables>();
  const std::size_t lowest = shape_.implicit;
  for (std::size_t level = lowest; level <= shape_.height; ++level) {
    const std::size_t count = entries(level);
    const std::size_t width = 2 * shape_.length(level) - 1;
    std::vector<std::uint32_t> offsets{0};
    std::vector<std::uint32_t> data;
    offsets.reserve(count * count + 1);
    for (std::size_t kA = 0; kA < count; ++kA) {
      const SubVector& sa = a_levels_[i][level][kA];
      for (std::size_t kB = 0; kB < count; ++kB) {
        const SubVector& sb = b_levels_[j][level][kB];
        if (sa.ones.empty() || sb.ones.empty()) {
          offsets.push_back(static_cast<std::uint32_t>(data.size()));
          continue;
        }
        const std::size_t at = data.size();
        data.resize(at + width, 0);
        std::uint32_t* c = data.data() + at;
        if (level == lowest) {
          // sparse direct products
          for (Pos a : sa.ones) {
            for (Pos b : sb.ones) ++c[(a - sa.base) + (b - sb.base)];
          }
        } else {
          const auto& below_off = tables->offsets.back();
          const auto& below = tables->data.back();
          const std::size_t below_count = count * 2;
          for (std::size_t x = 0; x < 2; ++x) {
            const SubVector& ca = a_levels_[i][level - 1][2 * kA + x];
            for (std::size_t y = 0; y < 2; ++y) {
              const SubVector& cb = b_levels_[j][level - 1][2 * kB + y];
              const std::size_t cell = (2 * kA + x) * below_count + (2 * kB + y);
              const std::size_t lo = below_off[cell];
              const std::size_t hi = below_off[cell + 1];
              const std::size_t shift = (ca.base - sa.base) + (cb.base - sb.base);
              for (std::size_t t = lo; t < hi; ++t) {
                if (below[t] != 0) c[shift + (t - lo)] += below[t];
              }
            }
          }
        }
        offsets.push_back(static_cast<std::uint32_t>(data.size()));
      }
    }
    tables->offsets.push_back(std::move(offsets));
    tables->data.push_back(std::move(data));
  }
  return tables;
}

std::span<const std::uint32_t> QuadForest::conv(std::size_t i, std::size_t j, std::size_t level,
                                                std::size_t kA, std::size_t kB) const {
  if (!is_explicit(level) || level > shape_.height) {
    throw std::out_of_range("no stored convolution at this level");
  }
  const PairTables& t = pair(i, j);
  const std::size_t l = level - shape_.implicit;
  const std::size_t cell = kA * entries(level) + kB;
  const auto& off = t.offsets[l];
  return std::span<const std::uint32_t>(t.data[l]).subspan(off[cell], off[cell + 1] - off[cell]);
}

bool QuadForest::position_nonzero(std::size_t i, std::size_t j, std::size_t level,
                                  std::size_t kA, std::size_t kB, std::size_t t,
                                  QueryStats* stats) const {
  if (is_explicit(level)) {
    const auto c = conv(i, j, level, kA, kB);
    if (stats != nullptr) ++stats->probes;
    return t < c.size() && c[t] != 0;
  }
  const LevelInstance& li = implicit_[level];
  const std::size_t fa = li.a_first[i][kA];
  const std::size_t fb = li.b_first[j][kB];
  if (fa == kNone || fb == kNone) return false;
  if (li.sd) {
    if (stats != nullptr) ++stats->sd_queries;
    return conv_position_nonzero(*li.inst, fa, fb, t,
                                 [&](std::size_t x, std::size_t y) { return li.sd->disjoint(x, y); });
  }
  if (stats != nullptr) ++stats->si_queries;
  return conv_position_nonzero(*li.inst, fa, fb, t,
                               [&](std::size_t x, std::size_t y) { return li.si_index->disjoint(x, y); });
}

bool QuadForest::descend(std::size_t i, std::size_t j, std::uint64_t g, std::size_t level,
                         std::size_t kA, std::size_t kB,
                         const std::function<bool(const LeafHit&)>& leaf,
                         QueryStats* stats) const {
  const SubVector& sa = a_levels_[i][level][kA];
  const SubVector& sb = b_levels_[j][level][kB];
  if (sa.ones.empty() || sb.ones.empty()) return true;
  const std::uint64_t origin = static_cast<std::uint64_t>(sa.base) + sb.base;
  if (g < origin) return true;
  const std::uint64_t t = g - origin;
  if (t > 2 * shape_.length(level) - 2) return true;

  if (level == 0 && shape_.si && !is_explicit(0)) {
    // one SetIntersection query yields every witness position pair
    const LevelInstance& li = implicit_[0];
    const auto [x, y] = li.inst->sets_for(li.a_first[i][kA], li.b_first[j][kB], t);
    if (stats != nullptr) ++stats->si_queries;
    CostMeter meter;
    const QueryResult common = li.si_index->query(x, y, &meter);
    if (stats != nullptr) stats->probes += meter.probes;
    if (common.disjoint) return true;
    LeafHit hit{kA, kB, {}};
    for (Elem e : common.elements) {
      const auto [p, q] = li.inst->decode(t, e);
      hit.positions.emplace_back(sa.base + p, sb.base + q);
    }
    return leaf(hit);
  }

  if (!position_nonzero(i, j, level, kA, kB, t, stats)) return true;
  if (level == 0) return leaf(LeafHit{kA, kB, {}});
  for (std::size_t x = 0; x < 2; ++x) {
    for (std::size_t y = 0; y < 2; ++y) {
      if (!descend(i, j, g, level - 1, 2 * kA + x, 2 * kB + y, leaf, stats)) return false;
    }
  }
  return true;
}

bool QuadForest::search(std::size_t i, std::size_t j, std::uint64_t g,
                        const std::function<bool(const LeafHit&)>& leaf, QueryStats* stats) const {
  return descend(i, j, g, shape_.height, 0, 0, leaf, stats);
}

std::vector<LevelInfo> QuadForest::level_info() const {
  std::vector<LevelInfo> out;
  const double n = static_cast<double>(shape_.n);
  const double X = static_cast<double>(shape_.X);
  const double R = static_cast<double>(a_side_.size());
  for (std::size_t level = shape_.implicit; level-- > 0;) {
    const LevelInstance& li = implicit_[level];
    LevelInfo info;
    info.level = level;
    info.Z = shape_.length(level);
    info.universe = li.inst->universe();
    info.sets = li.inst->sets().size();
    for (const auto& s : li.inst->sets()) {
      info.elements += s.size();
      info.max_set_size = std::max(info.max_set_size, s.size());
    }
    const double i = static_cast<double>(shape_.implicit - level);
    info.u_i = std::pow(X, 1 + shape_.eps) / std::pow(2.0, i - 1);
    info.N_i = n * std::sqrt(info.u_i);
    info.m_i = n * std::sqrt(X / info.u_i);
    info.m_proof = n * R / std::sqrt(static_cast<double>(info.Z));
    out.push_back(info);
  }
  return out;
}

std::uint64_t QuadForest::words() const {
  std::uint64_t w = 0;
  for (const auto* side : {&a_levels_, &b_levels_}) {
    for (const auto& levels : *side) {
      for (const auto& level : levels) {
        for (const auto& sub : level) w += 1 + sub.ones.size();
      }
    }
  }
  for (const auto& li : implicit_) {
    w += li.sd ? li.sd->words() : li.si_index->words();
    for (const auto& f : li.a_first) w += f.size();
    for (const auto& f : li.b_first) w += f.size();
  }
  for (const auto& p : pairs_) {
    if (!p) continue;
    for (const auto& o : p->offsets) w += o.size();
    for (const auto& d : p->data) w += d.size();
  }
  return w;
}

QuadForest build_quadtree(const CharVector& vA, const CharVector& vB, std::size_t X, double eps,
                          std::size_t cap) {
  const TreeShape shape = plan_shape(std::max(vA.length, vB.length), X, eps, false, cap);
  return QuadForest({vA}, {vB}, shape);
}

}  // namespace setlab::qt
