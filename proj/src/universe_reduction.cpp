#include "setlab/universe_reduction.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "setlab/si_structures.hpp"

namespace setlab::ur {

namespace {

constexpr std::uint64_t kPrime = (1ull << 61) - 1;

std::size_t floor_pow(double base, double exponent) {
  const double v = std::pow(base, exponent);
  return v <= 0 ? 0 : static_cast<std::size_t>(std::floor(v + 1e-9));
}

std::size_t ceil_pow(double base, double exponent) {
  const double v = std::pow(base, exponent);
  return v <= 0 ? 0 : static_cast<std::size_t>(std::ceil(v - 1e-9));
}

std::vector<Elem> hashed_sorted(std::span<const Elem> s, const UniversalHash& h) {
  std::vector<Elem> out;
  out.reserve(s.size());
  for (Elem x : s) out.push_back(h(x));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "sd") return Mode::SD;
  if (s == "si") return Mode::SI;
  throw std::invalid_argument("mode must be sd or si, got '" + s + "'");
}

const char* to_string(Mode mode) { return mode == Mode::SD ? "sd" : "si"; }

SizeClassification classify(const SetSystem& sys, std::uint32_t u, double eps, Mode mode,
                            double alpha) {
  if (u < 2) throw std::invalid_argument("classify: u must be at least 2");
  if (!(eps > 0 && eps <= 0.5)) throw std::invalid_argument("classify: eps must lie in (0, 1/2]");
  if (mode == Mode::SI && !(alpha >= 0.5 && alpha <= 1.0)) {
    throw std::invalid_argument("classify: alpha must lie in [1/2, 1]");
  }
  if (sys.u() > u) throw std::invalid_argument("classify: instance universe exceeds u");

  SizeClassification c;
  c.mode = mode;
  if (mode == Mode::SD) {
    c.large_min = floor_pow(u, 0.5) + 1;
    c.small_max = floor_pow(u, 0.5 - eps);
  } else {
    c.large_min = ceil_pow(u, alpha - 0.75 * eps);
    c.small_max = floor_pow(u, alpha - eps);
  }
  c.of.resize(sys.m());
  c.order.assign(sys.m(), -1);
  for (std::size_t s = 0; s < sys.m(); ++s) {
    const std::size_t n = sys.sets()[s].size();
    if (n >= c.large_min) {
      c.of[s] = SizeClass::Large;
      c.order[s] = static_cast<std::int32_t>(c.large_ids.size());
      c.large_ids.push_back(s + 1);
    } else if (n <= c.small_max) {
      c.of[s] = SizeClass::Small;
      c.small_ids.push_back(s + 1);
    } else {
      c.of[s] = SizeClass::Medium;
      c.order[s] = static_cast<std::int32_t>(c.medium_ids.size());
      c.medium_ids.push_back(s + 1);
    }
  }
  return c;
}

Elem UniversalHash::operator()(Elem x) const noexcept {
  const unsigned __int128 v = static_cast<unsigned __int128>(a) * x + b;
  return static_cast<Elem>(static_cast<std::uint64_t>(v % kPrime) % range) + 1;
}

std::size_t false_collisions(std::span<const Elem> a, std::span<const Elem> b,
                             const UniversalHash& h) {
  const auto ha = hashed_sorted(a, h);
  const auto hb = hashed_sorted(b, h);
  const auto common = merge_intersect(ha, hb);
  if (common.empty()) return 0;
  const auto genuine = hashed_sorted(merge_intersect(a, b), h);
  return common.size() - genuine.size();
}

bool battery_ok(const SetSystem& sys, const SizeClassification& cls, const HashBattery& battery,
                std::size_t budget) {
  const auto& med = cls.medium_ids;
  for (std::size_t x = 0; x < med.size(); ++x) {
    for (std::size_t y = x + 1; y < med.size(); ++y) {
      const auto a = sys.set(med[x]);
      const auto b = sys.set(med[y]);
      if (cls.mode == Mode::SD && merge_intersect_count(a, b) != 0) continue;
      bool separated = false;
      for (const auto& h : battery.functions) {
        if (false_collisions(a, b, h) <= budget) {
          separated = true;
          break;
        }
      }
      if (!separated) return false;
    }
  }
  return true;
}

std::size_t battery_size(const SetSystem& sys) {
  const std::size_t n = std::max<std::size_t>({sys.total(), sys.m(), 2});
  return static_cast<std::size_t>(std::bit_width(n - 1));
}

HashBattery select_hash_battery(const SetSystem& sys, const SizeClassification& cls,
                                std::uint32_t u, std::size_t budget, std::size_t max_rounds,
                                std::uint64_t seed) {
  if (max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  Rng rng(seed);
  HashBattery battery;
  battery.range = 8ull * u;
  const std::size_t k = battery_size(sys);
  for (std::size_t round = 1; round <= max_rounds; ++round) {
    battery.functions.clear();
    for (std::size_t f = 0; f < k; ++f) {
      UniversalHash h;
      h.a = 1 + rng.below(kPrime - 1);
      h.b = rng.below(kPrime);
      h.range = battery.range;
      battery.functions.push_back(h);
    }
    battery.rounds_used = round;
    if (battery_ok(sys, cls, battery, budget)) return battery;
  }
  throw BatteryError("no valid hash battery after " + std::to_string(max_rounds) + " rounds");
}

InnerBuilder oracle_builder() {
  return [](const SetSystem& s) { return std::make_unique<OracleIndex>(s); };
}

InnerBuilder alg1_builder() {
  return [](const SetSystem& s) {
    const auto r = static_cast<std::size_t>(std::sqrt(static_cast<double>(s.total())));
    return std::make_unique<si::Alg1Structure>(si::Alg1Structure::build(s, r));
  };
}

InnerBuilder inner_builder(const std::string& name) {
  if (name == "oracle") return oracle_builder();
  if (name == "alg1") return alg1_builder();
  throw std::invalid_argument("inner structure must be oracle or alg1, got '" + name + "'");
}

std::size_t default_budget(const ReductionParams& params) {
  if (params.false_positive_budget) return *params.false_positive_budget;
  if (params.mode == Mode::SD) return 0;
  return floor_pow(params.u, 2 * params.alpha - 1 - 1.5 * params.eps);
}

ReducedStructure ReducedStructure::build(const SetSystem& sys, const ReductionParams& params,
                                         const InnerBuilder& inner) {
  ReducedStructure rs;
  rs.cls_ = classify(sys, params.u, params.eps, params.mode, params.alpha);
  rs.tables_ = SetTables(sys);
  rs.budget_ = default_budget(params);
  const std::size_t d = rs.cls_.d();
  const std::size_t e = rs.cls_.e();
  rs.cols_ = d + e;

  std::vector<std::size_t> columns = rs.cls_.large_ids;
  columns.insert(columns.end(), rs.cls_.medium_ids.begin(), rs.cls_.medium_ids.end());
  if (params.mode == Mode::SD) {
    rs.bits_.assign((d * rs.cols_ + 63) / 64, 0);
  } else {
    rs.offsets_.assign(1, 0);
  }
  for (std::size_t row = 0; row < d; ++row) {
    const auto a = sys.set(rs.cls_.large_ids[row]);
    for (std::size_t col = 0; col < rs.cols_; ++col) {
      const auto b = sys.set(columns[col]);
      if (params.mode == Mode::SD) {
        if (merge_intersect_count(a, b) == 0) {
          const std::size_t bit = row * rs.cols_ + col;
          rs.bits_[bit / 64] |= 1ull << (bit % 64);
        }
      } else {
        const auto list = merge_intersect(a, b);
        rs.lists_.insert(rs.lists_.end(), list.begin(), list.end());
        rs.offsets_.push_back(static_cast<std::uint32_t>(rs.lists_.size()));
      }
    }
  }

  if (e == 0) {
    rs.battery_.range = 8ull * params.u;
    return rs;
  }
  rs.battery_ =
      select_hash_battery(sys, rs.cls_, params.u, rs.budget_, params.max_rounds, params.seed);
  for (const auto& h : rs.battery_.functions) {
    std::vector<std::vector<Elem>> sets;
    std::vector<std::vector<std::pair<Elem, Elem>>> pre;
    for (std::size_t id : rs.cls_.medium_ids) {
      sets.push_back(hashed_sorted(sys.set(id), h));
      std::vector<std::pair<Elem, Elem>> p;
      for (Elem x : sys.set(id)) p.emplace_back(h(x), x);
      std::sort(p.begin(), p.end());
      pre.push_back(std::move(p));
    }
    rs.hashed_.emplace_back(static_cast<std::uint32_t>(rs.battery_.range), std::move(sets));
    rs.inner_.push_back(inner(rs.hashed_.back()));
    rs.preimages_.push_back(std::move(pre));
  }
  return rs;
}

std::size_t ReducedStructure::column(std::size_t s) const {
  const auto pos = static_cast<std::size_t>(cls_.order[s]);
  return cls_.of[s] == SizeClass::Large ? pos : cls_.d() + pos;
}

bool ReducedStructure::matrix_disjoint(std::size_t row, std::size_t col) const {
  const std::size_t bit = row * cols_ + col;
  return (bits_.at(bit / 64) >> (bit % 64)) & 1;
}

std::span<const Elem> ReducedStructure::matrix_list(std::size_t row, std::size_t col) const {
  const std::size_t k = row * cols_ + col;
  return std::span<const Elem>(lists_).subspan(offsets_.at(k), offsets_.at(k + 1) - offsets_[k]);
}

bool ReducedStructure::both_medium(std::size_t a, std::size_t b, CostMeter* meter,
                                   std::vector<Elem>* out) const {
  const std::size_t qa = static_cast<std::size_t>(cls_.order[a]) + 1;
  const std::size_t qb = static_cast<std::size_t>(cls_.order[b]) + 1;
  if (cls_.mode == Mode::SD) {
    for (const auto& d : inner_) {
      if (meter != nullptr) ++meter->queries_issued;
      CostMeter inner_meter;
      const bool dis = d->disjoint(qa, qb, &inner_meter);
      add_probes(meter, inner_meter.probes);
      if (dis) return true;
    }
    return false;
  }
  for (std::size_t k = 0; k < inner_.size(); ++k) {
    const auto& pre = preimages_[k][qa - 1];
    std::vector<Elem> found;
    std::size_t misses = 0;
    bool aborted = false;
    if (meter != nullptr) ++meter->queries_issued;
    CostMeter inner_meter;
    inner_[k]->enumerate(qa, qb, [&](Elem v) {
      bool hit = false;
      auto it = std::lower_bound(pre.begin(), pre.end(), std::pair<Elem, Elem>{v, 0});
      for (; it != pre.end() && it->first == v; ++it) {
        add_probes(meter, 1);
        if (tables_.contains(b, it->second)) {
          found.push_back(it->second);
          hit = true;
        }
      }
      if (!hit && ++misses > budget_) {
        aborted = true;
        return false;
      }
      return true;
    }, &inner_meter);
    add_probes(meter, inner_meter.probes);
    if (aborted) continue;
    std::sort(found.begin(), found.end());
    *out = std::move(found);
    return out->empty();
  }
  throw BatteryError("every hash function exceeded the false-positive budget");
}

QueryResult ReducedStructure::query(std::size_t i, std::size_t j, CostMeter* meter) const {
  if (meter != nullptr) meter->begin_query();
  auto [a, b] = zero_based(tables_.m(), i, j);
  const bool si = cls_.mode == Mode::SI;
  QueryResult res;
  std::vector<Elem> out;

  if (cls_.of[a] == SizeClass::Small || cls_.of[b] == SizeClass::Small) {
    const bool b_small = cls_.of[b] == SizeClass::Small;
    if (cls_.of[a] != SizeClass::Small || (b_small && tables_.size_of(b) < tables_.size_of(a))) {
      std::swap(a, b);
    }
    for (Elem x : tables_.list(a)) {
      add_probes(meter, 1);
      if (tables_.contains(b, x)) {
        out.push_back(x);
        if (!si) break;
      }
    }
    res.disjoint = out.empty();
  } else if (cls_.of[a] == SizeClass::Large || cls_.of[b] == SizeClass::Large) {
    if (cls_.of[a] != SizeClass::Large) std::swap(a, b);
    const auto row = static_cast<std::size_t>(cls_.order[a]);
    add_probes(meter, 1);
    if (si) {
      const auto cell = matrix_list(row, column(b));
      out.assign(cell.begin(), cell.end());
      add_probes(meter, out.size());
      res.disjoint = out.empty();
    } else {
      res.disjoint = matrix_disjoint(row, column(b));
    }
  } else {
    res.disjoint = both_medium(a, b, meter, &out);
  }
  if (si) res.elements = std::move(out);
  return res;
}

bool ReducedStructure::disjoint(std::size_t i, std::size_t j, CostMeter* meter) const {
  return query(i, j, meter).disjoint;
}

std::uint64_t ReducedStructure::words() const {
  std::uint64_t w = tables_.words() + bits_.size() + offsets_.size() + lists_.size() +
                    2 * battery_.functions.size();
  for (const auto& d : inner_) w += d->words();
  for (const auto& per : preimages_) {
    for (const auto& p : per) w += p.size();
  }
  return w;
}

std::string ReducedStructure::summary() const {
  std::ostringstream os;
  os << cls_.d() << ' ' << cls_.e() << ' ' << battery_.k() << ' ' << battery_.rounds_used << ' '
     << battery_.range;
  return os.str();
}

}  // namespace setlab::ur
