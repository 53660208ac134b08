#include <algorithm>
#include <stdexcept>
#include <string>

#include "setlab/apps.hpp"
#include "setlab/membership.hpp"

namespace setlab::apps {

RangeModeEncoding rangemode_encode(const SetSystem& sys) {
  RangeModeEncoding enc;
  enc.m = sys.m();
  enc.u = sys.u();
  const std::size_t u = sys.u();
  enc.str.reserve(2 * enc.m * u);
  std::vector<char> in(u + 1, 0);
  const auto complement = [&](std::span<const Elem> s) {
    std::fill(in.begin(), in.end(), 0);
    for (Elem e : s) in[e] = 1;
    std::vector<Elem> out;
    for (Elem e = 1; e <= u; ++e) {
      if (!in[e]) out.push_back(e);
    }
    return out;
  };
  for (std::size_t i = 1; i <= enc.m; ++i) {
    const auto s = sys.set(i);
    const auto rest = complement(s);
    enc.str.insert(enc.str.end(), rest.begin(), rest.end());
    enc.a.push_back(enc.str.size());
    enc.str.insert(enc.str.end(), s.begin(), s.end());
  }
  for (std::size_t j = 1; j <= enc.m; ++j) {
    const auto s = sys.set(j);
    enc.str.insert(enc.str.end(), s.begin(), s.end());
    enc.b.push_back(enc.str.size());
    const auto rest = complement(s);
    enc.str.insert(enc.str.end(), rest.begin(), rest.end());
  }
  return enc;
}

RangeQuery rangemode_query_range(const RangeModeEncoding& enc, std::size_t i, std::size_t j) {
  zero_based(enc.m, i, j);
  return RangeQuery{enc.a[i - 1] + 1, enc.b[j - 1], enc.m - i + j + 1};
}

namespace {

void check_range(std::size_t n, std::size_t lo, std::size_t hi) {
  if (lo < 1 || lo > hi || hi > n) {
    throw std::out_of_range("range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            "] outside 1.." + std::to_string(n));
  }
}

std::vector<std::size_t> counts_over(std::span<const Elem> str, std::size_t lo, std::size_t hi) {
  const Elem top = *std::max_element(str.begin() + static_cast<std::ptrdiff_t>(lo - 1),
                                     str.begin() + static_cast<std::ptrdiff_t>(hi));
  std::vector<std::size_t> count(static_cast<std::size_t>(top) + 1, 0);
  for (std::size_t p = lo - 1; p < hi; ++p) ++count[str[p]];
  return count;
}

}  // namespace

Mode brute_mode(std::span<const Elem> str, std::size_t lo, std::size_t hi) {
  check_range(str.size(), lo, hi);
  const auto count = counts_over(str, lo, hi);
  Mode best;
  for (std::size_t e = 0; e < count.size(); ++e) {
    if (count[e] > best.frequency) best = Mode{static_cast<Elem>(e), count[e]};
  }
  return best;
}

std::vector<Elem> brute_mode_all(std::span<const Elem> str, std::size_t lo, std::size_t hi) {
  check_range(str.size(), lo, hi);
  const auto count = counts_over(str, lo, hi);
  const std::size_t top = *std::max_element(count.begin(), count.end());
  std::vector<Elem> out;
  for (std::size_t e = 0; e < count.size(); ++e) {
    if (count[e] == top) out.push_back(static_cast<Elem>(e));
  }
  return out;
}

bool rangemode_decide(const RangeModeEncoding& enc, std::size_t i, std::size_t j, const Mode& mode) {
  return mode.frequency == rangemode_query_range(enc, i, j).threshold;
}

bool rangemode_decide_by_element(const SetSystem& sys, std::size_t i, std::size_t j,
                                 const Mode& mode) {
  const auto a = sys.set(i);
  const auto b = sys.set(j);
  return std::binary_search(a.begin(), a.end(), mode.element) &&
         std::binary_search(b.begin(), b.end(), mode.element);
}

RangeModeBaseline::RangeModeBaseline(std::vector<Elem> str, std::size_t blocks)
    : str_(std::move(str)) {
  const std::size_t n = str_.size();
  if (blocks < 1 || blocks > n) throw std::invalid_argument("block count must lie in [1, |str|]");
  block_len_ = (n + blocks - 1) / blocks;
  blocks_ = (n + block_len_ - 1) / block_len_;

  const Elem top = *std::max_element(str_.begin(), str_.end());
  positions_.resize(static_cast<std::size_t>(top) + 1);
  for (std::size_t p = 0; p < n; ++p) positions_[str_[p]].push_back(static_cast<std::uint32_t>(p));

  span_.resize(TriangularLists::cells(blocks_));
  std::vector<std::size_t> count(positions_.size(), 0);
  for (std::size_t x = 0; x < blocks_; ++x) {
    Mode best;
    for (std::size_t y = x; y < blocks_; ++y) {
      const std::size_t end = std::min(n, (y + 1) * block_len_);
      for (std::size_t p = y * block_len_; p < end; ++p) {
        const Elem e = str_[p];
        const std::size_t c = ++count[e];
        if (c > best.frequency || (c == best.frequency && e < best.element)) best = Mode{e, c};
      }
      span_[cell(x, y)] = best;
    }
    for (std::size_t p = x * block_len_; p < n; ++p) count[str_[p]] = 0;
  }
}

std::size_t RangeModeBaseline::cell(std::size_t x, std::size_t y) const {
  return TriangularLists::index(x, y);
}

std::uint64_t RangeModeBaseline::words() const {
  return 2 * span_.size() + 2 * str_.size() + positions_.size();
}

RangeModeBaseline::Parts RangeModeBaseline::split(std::size_t lo, std::size_t hi) const {
  check_range(str_.size(), lo, hi);
  const std::size_t l = lo - 1;
  const std::size_t h = hi;  // exclusive
  Parts parts;
  parts.full_lo = (l + block_len_ - 1) / block_len_;
  parts.full_hi = h == str_.size() ? blocks_ : h / block_len_;
  if (parts.full_lo >= parts.full_hi) {
    parts.full_lo = parts.full_hi = 0;
    for (std::size_t p = l; p < h; ++p) parts.partial.push_back(p);
    return parts;
  }
  for (std::size_t p = l; p < parts.full_lo * block_len_; ++p) parts.partial.push_back(p);
  for (std::size_t p = std::min(h, parts.full_hi * block_len_); p < h; ++p) parts.partial.push_back(p);
  return parts;
}

std::size_t RangeModeBaseline::frequency(Elem e, std::size_t lo, std::size_t hi,
                                         CostMeter* meter) const {
  add_probes(meter, 1);
  const auto& pos = positions_[e];
  const auto first = std::lower_bound(pos.begin(), pos.end(), static_cast<std::uint32_t>(lo - 1));
  const auto last = std::upper_bound(first, pos.end(), static_cast<std::uint32_t>(hi - 1));
  return static_cast<std::size_t>(last - first);
}

Mode RangeModeBaseline::query(std::size_t lo, std::size_t hi, CostMeter* meter) const {
  if (meter != nullptr) meter->begin_query();
  const Parts parts = split(lo, hi);
  std::vector<Elem> candidates;
  candidates.reserve(parts.partial.size() + 1);
  for (std::size_t p : parts.partial) candidates.push_back(str_[p]);
  if (parts.full_lo < parts.full_hi) {
    add_probes(meter, 1);
    candidates.push_back(span_[cell(parts.full_lo, parts.full_hi - 1)].element);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  Mode best;
  for (Elem e : candidates) {
    const std::size_t f = frequency(e, lo, hi, meter);
    if (f > best.frequency) best = Mode{e, f};
  }
  return best;
}

std::vector<Elem> RangeModeBaseline::reporting(std::size_t lo, std::size_t hi,
                                               CostMeter* meter) const {
  const Mode best = query(lo, hi, meter);
  const Parts parts = split(lo, hi);
  const bool span_ties = parts.full_lo < parts.full_hi &&
                         span_[cell(parts.full_lo, parts.full_hi - 1)].frequency == best.frequency;
  std::vector<Elem> out;
  if (span_ties) {
    // elements living only inside the full blocks can tie as well
    add_probes(meter, hi - lo + 1);
    return brute_mode_all(str_, lo, hi);
  }
  for (std::size_t p : parts.partial) {
    const Elem e = str_[p];
    if (std::find(out.begin(), out.end(), e) == out.end() &&
        frequency(e, lo, hi, meter) == best.frequency) {
      out.push_back(e);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace setlab::apps
