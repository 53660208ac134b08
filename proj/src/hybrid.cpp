#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "setlab/si_structures.hpp"

namespace setlab::si {

namespace {

// thresholds at which either sub-structure changes: 0 and every distinct set size
std::vector<std::size_t> size_steps(const SetSystem& sys) {
  std::vector<std::size_t> steps{0};
  for (const auto& s : sys.sets()) steps.push_back(s.size());
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

std::uint64_t sd_words_at(const SetSystem& sys, std::uint64_t table_words, std::size_t threshold) {
  std::uint64_t p = 0;
  for (const auto& s : sys.sets()) p += s.size() > threshold ? 1 : 0;
  return table_words + p + (p * (p + 1) / 2 + 1) / 2;
}

}  // namespace

const char* to_string(HybridPath path) {
  switch (path) {
    case HybridPath::Empty: return "empty";
    case HybridPath::SmallOutput: return "small";
    case HybridPath::LargeOutput: return "large";
  }
  return "?";
}

std::uint64_t HybridStructure::minimum_budget(const SetSystem& sys) {
  // each half must at least hold the per-set tables; the reporter adds one offset word
  return 2 * (SetTables(sys).words() + 1);
}

HybridStructure HybridStructure::build(const SetSystem& sys, std::uint64_t space_budget,
                                       const HybridOptions& options) {
  const std::uint64_t floor = minimum_budget(sys);
  if (space_budget < floor) {
    throw std::invalid_argument("hybrid budget " + std::to_string(space_budget) +
                                " below the " + std::to_string(floor) +
                                " words needed to store the instance");
  }
  HybridStructure st;
  st.budget_ = space_budget;
  const std::uint64_t half = space_budget / 2;
  const std::uint64_t table_words = SetTables(sys).words();
  const auto steps = size_steps(sys);

  std::size_t sd_t = steps.back();
  for (std::size_t t : steps) {
    if (sd_words_at(sys, table_words, t) <= half) {
      sd_t = t;
      break;
    }
  }
  st.sizer_ = SdCountStructure::build(sys, sd_t);

  // reporter words are non-increasing in r
  std::size_t lo = 0;
  std::size_t hi = steps.size() - 1;
  auto best = std::make_unique<Alg1Structure>(Alg1Structure::build(sys, steps[hi]));
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    auto cand = std::make_unique<Alg1Structure>(Alg1Structure::build(sys, steps[mid]));
    if (cand->words() <= half) {
      best = std::move(cand);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  st.reporter_ = std::move(best);

  const double n = static_cast<double>(sys.total());
  if (n >= 2) {
    const double ratio = std::log(static_cast<double>(space_budget)) / std::log(n);
    st.t_ = std::clamp((2.0 - ratio) / 2.0, 0.0, 0.5);
  }
  st.threshold_ = options.threshold ? *options.threshold
                                    : std::pow(std::max(n, 1.0), st.t_ / (1.0 - st.t_));
  return st;
}

std::uint64_t HybridStructure::words() const { return sizer_.words() + reporter_->words(); }

HybridPath HybridStructure::dispatch(std::size_t, std::size_t, std::size_t count,
                                     std::optional<HybridPath> force) const {
  if (count == 0) return HybridPath::Empty;
  if (force && *force != HybridPath::Empty) return *force;
  return static_cast<double>(count) < threshold_ ? HybridPath::SmallOutput
                                                 : HybridPath::LargeOutput;
}

void HybridStructure::serve(HybridPath path, std::size_t a, std::size_t b,
                            const ElemVisitor& visit, CostMeter* meter) const {
  if (path == HybridPath::Empty) return;
  if (path == HybridPath::LargeOutput) {
    reporter_->enumerate(a + 1, b + 1, visit, meter);
    return;
  }
  const auto& tables = reporter_->tables();
  auto x = tables.list(a);
  auto y = tables.list(b);
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < x.size() && q < y.size()) {
    add_probes(meter, 1);
    if (x[p] < y[q]) {
      ++p;
    } else if (y[q] < x[p]) {
      ++q;
    } else {
      if (!visit(x[p])) return;
      ++p;
      ++q;
    }
  }
}

void HybridStructure::enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                                CostMeter* meter) const {
  auto [a, b] = zero_based(set_count(), i, j);
  const std::size_t count = sizer_.count(i, j, meter);
  serve(dispatch(a, b, count, std::nullopt), a, b, visit, meter);
}

QueryResult HybridStructure::query_traced(std::size_t i, std::size_t j, CostMeter* meter,
                                          HybridPath* served,
                                          std::optional<HybridPath> force) const {
  if (meter != nullptr) meter->begin_query();
  auto [a, b] = zero_based(set_count(), i, j);
  const std::size_t count = sizer_.count(i, j, meter);
  const HybridPath path = dispatch(a, b, count, force);
  if (served != nullptr) *served = path;
  std::vector<Elem> out;
  out.reserve(count);
  serve(path, a, b, [&](Elem e) { out.push_back(e); return true; }, meter);
  std::sort(out.begin(), out.end());
  return QueryResult::of(std::move(out));
}

}  // namespace setlab::si
