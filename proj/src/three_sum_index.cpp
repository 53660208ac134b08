#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "setlab/quadtree.hpp"

namespace setlab::qt {

namespace {

std::size_t ceil_sqrt(std::size_t x) {
  auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(x)));
  while (r * r > x) --r;
  while (r * r < x) ++r;
  return r;
}

std::size_t count_sorted(const std::vector<Value>& v, Value x) {
  const auto [lo, hi] = std::equal_range(v.begin(), v.end(), x);
  return static_cast<std::size_t>(hi - lo);
}

// recovered values of a leaf sub-vector, each tagged with its position
std::vector<std::pair<Value, Pos>> recover(const CharVector& cv, const SubVector& sub) {
  std::vector<std::pair<Value, Pos>> out;
  for (Pos p : sub.ones) {
    for (Value x : cv.recovery(p)) out.emplace_back(x, p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ThreeSumIndex ThreeSumIndex::build(std::span<const Value> A, std::span<const Value> B,
                                   const ThreeSumParams& params) {
  if (A.empty() || A.size() != B.size()) {
    throw std::invalid_argument("3SUM-Indexing needs two arrays of equal positive length");
  }
  if (params.X < 1 || params.X > A.size()) {
    throw std::invalid_argument("X must lie in [1, n]");
  }
  ThreeSumIndex st;
  st.params_ = params;
  st.n_ = A.size();
  const std::size_t R = ceil_sqrt(params.X);
  Rng rng(params.seed);
  st.h1_ = LinearHash::random(R, rng);
  st.h2_ = LinearHash::random(st.n_, rng);
  st.buckets_ = bucketize(A, B, R, st.h1_);

  std::vector<CharVector> a_side;
  std::vector<CharVector> b_side;
  for (std::size_t i = 0; i < R; ++i) {
    a_side.push_back(char_vector(st.buckets_.a[i], st.h2_, st.n_));
    b_side.push_back(char_vector(st.buckets_.b[i], st.h2_, st.n_));
  }
  const std::size_t cap = (params.X + R - 1) / R;
  const TreeShape shape = plan_shape(st.n_, params.X, params.eps, params.si, cap);
  st.forest_ = std::make_unique<QuadForest>(std::move(a_side), std::move(b_side), shape);
  return st;
}

bool ThreeSumIndex::run(Value z, bool all, std::vector<ValuePair>* out, QueryStats* stats) const {
  QueryStats local;
  QueryStats& s = stats != nullptr ? *stats : local;
  const auto emit = [&](Value x, Value y, std::size_t copies) {
    for (std::size_t c = 0; c < copies; ++c) out->emplace_back(x, y);
    return all || copies == 0;
  };

  // overflow lists first, against the sorted arrays
  for (std::size_t k = 0; k < buckets_.overflow_a.size(); ++k) {
    const Value x = buckets_.overflow_a[k];
    if (k > 0 && buckets_.overflow_a[k - 1] == x) continue;
    s.probes += 1;
    const std::size_t copies =
        count_sorted(buckets_.overflow_a, x) * buckets_.count_b(z - x);
    if (!emit(x, z - x, copies)) return true;
  }
  for (std::size_t k = 0; k < buckets_.overflow_b.size(); ++k) {
    const Value y = buckets_.overflow_b[k];
    if (k > 0 && buckets_.overflow_b[k - 1] == y) continue;
    s.probes += 1;
    const Value x = z - y;
    // pairs whose x also overflowed were reported above
    const std::size_t xs = buckets_.count_a(x) - count_sorted(buckets_.overflow_a, x);
    if (!emit(x, y, count_sorted(buckets_.overflow_b, y) * xs)) return true;
  }

  std::vector<std::uint64_t> targets;
  for (std::uint64_t c : h2_.sum_candidates(z)) {
    for (std::uint64_t g : {c, c + n_}) {
      if (g <= 2 * n_ - 2) targets.push_back(g);
    }
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

  const std::size_t R = buckets_.R;
  const auto bucket_sums = h1_.sum_candidates(z);
  bool stopped = false;
  for (std::size_t i = 0; i < R && !stopped; ++i) {
    if (buckets_.a[i].empty()) continue;
    std::vector<std::size_t> partners;
    for (std::uint64_t c : bucket_sums) partners.push_back((c + R - i % R) % R);
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()), partners.end());
    for (std::size_t j : partners) {
      if (stopped) break;
      if (buckets_.b[j].empty()) continue;
      const CharVector& va = forest_->a_vector(i);
      const CharVector& vb = forest_->b_vector(j);
      for (std::uint64_t g : targets) {
        const auto leaf = [&](const QuadForest::LeafHit& hit) {
          if (!hit.positions.empty()) {
            for (const auto& [pa, pb] : hit.positions) {
              for (Value x : va.recovery(pa)) {
                for (Value y : vb.recovery(pb)) {
                  if (x + y != z) {
                    ++s.false_witnesses;
                  } else if (!emit(x, y, 1)) {
                    return false;
                  }
                }
              }
            }
            return true;
          }
          const SubVector& sa = forest_->a_sub(i, 0, hit.kA);
          const SubVector& sb = forest_->b_sub(j, 0, hit.kB);
          for (Pos pa : sa.ones) {
            if (g < pa || g - pa >= n_) continue;
            const auto pb = static_cast<Pos>(g - pa);
            if (!std::binary_search(sb.ones.begin(), sb.ones.end(), pb)) continue;
            for (Value x : va.recovery(pa)) {
              for (Value y : vb.recovery(pb)) s.false_witnesses += x + y != z ? 1 : 0;
            }
          }
          const auto ra = recover(va, sa);
          const auto rb = recover(vb, sb);
          std::vector<Value> xa;
          std::vector<Value> yb;
          for (const auto& e : ra) xa.push_back(e.first);
          for (const auto& e : rb) yb.push_back(e.first);
          for (const auto& [x, y] : twosum_scan(xa, yb, z, &s.probes)) {
            // a pair belongs to the target its positions add up to
            if (h2_(x) + h2_(y) != g) continue;
            if (!emit(x, y, 1)) return false;
          }
          return true;
        };
        if (!forest_->search(i, j, g, leaf, &s)) {
          stopped = true;
          break;
        }
      }
    }
  }
  return !out->empty();
}

std::optional<ValuePair> ThreeSumIndex::query(Value z, QueryStats* stats) const {
  std::vector<ValuePair> out;
  if (!run(z, false, &out, stats)) return std::nullopt;
  const ValuePair p = out.front();
  if (p.first + p.second != z || buckets_.count_a(p.first) == 0 ||
      buckets_.count_b(p.second) == 0) {
    throw std::logic_error("3SUM index produced an invalid witness");
  }
  return p;
}

std::vector<ValuePair> ThreeSumIndex::query_reporting(Value z, QueryStats* stats) const {
  std::vector<ValuePair> out;
  run(z, true, &out, stats);
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t ThreeSumIndex::words() const {
  std::uint64_t w = buckets_.sorted_a.size() + buckets_.sorted_b.size() +
                    buckets_.overflow_a.size() + buckets_.overflow_b.size() + 4;
  for (const auto& b : buckets_.a) w += b.size();
  for (const auto& b : buckets_.b) w += b.size();
  return w + forest_->words();
}

ThreeSumIndex ts_build(std::span<const Value> A, std::span<const Value> B, std::size_t X,
                       double eps, std::uint64_t seed, bool si) {
  ThreeSumParams p;
  p.X = X;
  p.eps = eps;
  p.seed = seed;
  p.si = si;
  return ThreeSumIndex::build(A, B, p);
}

bool threesum_solve(std::span<const Value> A, std::span<const Value> B, std::span<const Value> C,
                    std::size_t X, double eps, std::uint64_t seed) {
  if (C.empty()) return false;
  const ThreeSumIndex st = ts_build(A, B, X, eps, seed);
  return std::any_of(C.begin(), C.end(), [&](Value c) { return st.query(c).has_value(); });
}

ThreeSumWorkload gen_threesum_workload(std::size_t n, std::uint64_t value_range,
                                       std::size_t queries, std::uint64_t seed) {
  ThreeSumWorkload w;
  Rng rng(seed);
  for (std::size_t k = 0; k < n; ++k) w.A.push_back(static_cast<Value>(rng.below(value_range)));
  for (std::size_t k = 0; k < n; ++k) w.B.push_back(static_cast<Value>(rng.below(value_range)));
  for (std::size_t q = 0; q < queries; ++q) {
    if (q % 2 == 0 && n > 0) {
      w.queries.push_back(w.A[rng.below(n)] + w.B[rng.below(n)]);
    } else {
      w.queries.push_back(static_cast<Value>(rng.below(2 * value_range)));
    }
  }
  return w;
}

}  // namespace setlab::qt
