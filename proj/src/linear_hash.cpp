#include <algorithm>
#include <numeric>

#include "setlab/quadtree.hpp"

namespace setlab::qt {

LinearHash LinearHash::random(std::uint64_t range, Rng& rng) {
  LinearHash h;
  h.range = std::max<std::uint64_t>(range, 1);
  if (h.range <= 2) return h;
  do {
    h.a = 1 + rng.below(h.range - 1);
  } while (std::gcd(h.a, h.range) != 1);
  return h;
}

std::uint64_t LinearHash::operator()(Value x) const noexcept {
  const auto r = static_cast<__int128>(range);
  __int128 v = (static_cast<__int128>(a) * x) % r;
  if (v < 0) v += r;
  return static_cast<std::uint64_t>(v);
}

std::vector<std::uint64_t> LinearHash::sum_candidates(Value z) const {
  std::vector<std::uint64_t> out;
  const std::uint64_t hz = (*this)(z);
  for (int k = 0; k < candidate_count; ++k) {
    out.push_back((hz + correction + static_cast<std::uint64_t>(k)) % range);
  }
  return out;
}

namespace {

std::size_t count_in(const std::vector<Value>& sorted, Value x) {
  const auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), x);
  return static_cast<std::size_t>(hi - lo);
}

void fill_side(std::span<const Value> values, const LinearHash& h1, std::size_t cap,
               std::vector<std::vector<Value>>& buckets, std::vector<Value>& overflow,
               std::vector<Value>& sorted) {
  for (Value x : values) buckets[h1(x)].push_back(x);
  for (auto& bucket : buckets) {
    std::sort(bucket.begin(), bucket.end());
    if (bucket.size() > cap) {
      overflow.insert(overflow.end(), bucket.begin() + static_cast<std::ptrdiff_t>(cap),
                      bucket.end());
      bucket.resize(cap);
    }
  }
  std::sort(overflow.begin(), overflow.end());
  sorted.assign(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
}

}  // namespace

std::size_t BucketedArrays::count_a(Value x) const { return count_in(sorted_a, x); }
std::size_t BucketedArrays::count_b(Value y) const { return count_in(sorted_b, y); }

BucketedArrays bucketize(std::span<const Value> A, std::span<const Value> B, std::size_t R,
                         const LinearHash& h1) {
  if (R < 1) throw std::invalid_argument("bucketize: R must be positive");
  if (h1.range != R) throw std::invalid_argument("bucketize: h1 range must equal R");
  BucketedArrays out;
  out.R = R;
  const std::size_t n = std::max(A.size(), B.size());
  out.cap = 3 * n / R;
  out.a.resize(R);
  out.b.resize(R);
  fill_side(A, h1, out.cap, out.a, out.overflow_a, out.sorted_a);
  fill_side(B, h1, out.cap, out.b, out.overflow_b, out.sorted_b);
  return out;
}

bool CharVector::at(Pos p) const { return std::binary_search(ones.begin(), ones.end(), p); }

std::span<const Value> CharVector::recovery(Pos p) const {
  const auto it = std::lower_bound(ones.begin(), ones.end(), p);
  if (it == ones.end() || *it != p) return {};
  const auto k = static_cast<std::size_t>(it - ones.begin());
  return std::span<const Value>(values).subspan(offsets[k], offsets[k + 1] - offsets[k]);
}

CharVector char_vector(std::span<const Value> bucket, const LinearHash& h2, std::size_t n) {
  if (h2.range != n) throw std::invalid_argument("char_vector: h2 range must equal n");
  std::vector<std::pair<Pos, Value>> hashed;
  hashed.reserve(bucket.size());
  for (Value x : bucket) hashed.emplace_back(static_cast<Pos>(h2(x)), x);
  std::sort(hashed.begin(), hashed.end());
  CharVector cv;
  cv.length = n;
  cv.offsets.push_back(0);
  for (std::size_t k = 0; k < hashed.size(); ++k) {
    if (k == 0 || hashed[k].first != hashed[k - 1].first) {
      if (k != 0) cv.offsets.push_back(static_cast<std::uint32_t>(k));
      cv.ones.push_back(hashed[k].first);
    }
    cv.values.push_back(hashed[k].second);
  }
  if (!hashed.empty()) cv.offsets.push_back(static_cast<std::uint32_t>(hashed.size()));
  return cv;
}

std::vector<std::uint32_t> convolve(std::span<const std::uint8_t> v,
                                    std::span<const std::uint8_t> w) {
  const std::size_t len = std::max(v.size(), w.size());
  if (len == 0) return {};
  std::vector<std::uint32_t> c(2 * len - 1, 0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i]) continue;
    for (std::size_t j = 0; j < w.size(); ++j) c[i + j] += w[j] ? 1 : 0;
  }
  return c;
}

std::vector<ValuePair> twosum_scan(std::span<const Value> sorted_a,
                                   std::span<const Value> sorted_b, Value z,
                                   std::uint64_t* probes) {
  std::vector<ValuePair> out;
  if (sorted_a.empty() || sorted_b.empty()) return out;
  std::size_t i = sorted_a.size();  // one past the current A element
  std::size_t j = 0;
  std::uint64_t steps = 0;
  while (i > 0 && j < sorted_b.size()) {
    ++steps;
    const Value x = sorted_a[i - 1];
    const Value y = sorted_b[j];
    if (x + y > z) {
      --i;
    } else if (x + y < z) {
      ++j;
    } else {
      std::size_t i0 = i;
      while (i0 > 0 && sorted_a[i0 - 1] == x) --i0;
      std::size_t j1 = j;
      while (j1 < sorted_b.size() && sorted_b[j1] == y) ++j1;
      for (std::size_t p = i; p > i0; --p) {
        for (std::size_t q = j; q < j1; ++q) out.emplace_back(sorted_a[p - 1], sorted_b[q]);
      }
      steps += (i - i0) + (j1 - j);
      i = i0;
      j = j1;
    }
  }
  if (probes != nullptr) *probes += steps;
  return out;
}

std::vector<ValuePair> all_pairs_summing(std::span<const Value> A, std::span<const Value> B,
                                         Value z) {
  std::vector<ValuePair> out;
  for (Value x : A) {
    for (Value y : B) {
      if (x + y == z) out.emplace_back(x, y);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace setlab::qt
