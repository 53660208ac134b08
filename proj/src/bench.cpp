#include "setlab/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "setlab/membership.hpp"
#include "setlab/si_structures.hpp"

namespace setlab::bench {

namespace {

// Counts first, then merges the two lists only when the count is nonzero.
class CountingIndex final : public IntersectionIndex {
 public:
  CountingIndex(const SetSystem& sys, std::size_t T)
      : sd_(si::SdCountStructure::build(sys, T)), tables_(sys) {}

  std::size_t set_count() const override { return sd_.set_count(); }
  std::uint64_t words() const override { return sd_.words(); }
  void enumerate(std::size_t i, std::size_t j, const ElemVisitor& visit,
                 CostMeter* meter) const override {
    if (sd_.count(i, j, meter) == 0) return;
    const auto a = tables_.list(i - 1);
    const auto b = tables_.list(j - 1);
    add_probes(meter, a.size() + b.size());
    for (Elem e : merge_intersect(a, b)) {
      if (!visit(e)) return;
    }
  }

 private:
  si::SdCountStructure sd_;
  SetTables tables_;
};

std::uint64_t p99(std::vector<std::uint64_t> v) {
  if (v.empty()) return 0;
  std::sort(v.begin(), v.end());
  const std::size_t rank = (99 * v.size() + 99) / 100;  // nearest rank
  return v[rank - 1];
}

}  // namespace

SetSystem generate(const RunConfig& cfg) {
  if (cfg.generator == "uniform") return gen_random_instance(cfg.m, cfg.u, cfg.n, cfg.seed);
  if (cfg.generator == "skewed") {
    SkewedParams p;
    p.m = cfg.m;
    p.u = cfg.u;
    p.target_n = cfg.n;
    p.size_exponent = cfg.size_exponent;
    p.element_exponent = cfg.element_exponent;
    p.seed = cfg.seed;
    return gen_skewed_instance(p);
  }
  throw std::invalid_argument("unknown generator '" + cfg.generator + "'");
}

bool known_structure(const std::string& s) {
  return s == "alg1" || s == "alg2" || s == "alg3" || s == "sdcount" || s == "hybrid" ||
         s == "oracle";
}

std::unique_ptr<IntersectionIndex> make_index(const SetSystem& sys, const std::string& s,
                                              std::uint64_t param) {
  if (s == "alg1") return std::make_unique<si::Alg1Structure>(si::Alg1Structure::build(sys, param));
  if (s == "alg2") return std::make_unique<si::Alg2Structure>(si::Alg2Structure::build(sys, param));
  if (s == "alg3") return std::make_unique<si::Alg3Structure>(si::Alg3Structure::build(sys, param));
  if (s == "sdcount") return std::make_unique<CountingIndex>(sys, param);
  if (s == "hybrid") {
    return std::make_unique<si::HybridStructure>(si::HybridStructure::build(sys, param));
  }
  if (s == "oracle") return std::make_unique<OracleIndex>(sys);
  throw std::invalid_argument("unknown structure '" + s + "'");
}

std::uint64_t words_floor(const SetSystem& sys, const std::string& s) {
  if (s == "hybrid") return make_index(sys, s, si::HybridStructure::minimum_budget(sys))->words();
  return make_index(sys, s, std::max<std::size_t>(sys.total(), 1))->words();
}

std::vector<BenchRecord> run_sweep(const SetSystem& sys, const std::string& structure,
                                   std::span<const std::uint64_t> params,
                                   std::span<const QueryPair> pairs, std::size_t threads,
                                   bool timing) {
  std::vector<BenchRecord> out;
  threads = std::max<std::size_t>(threads, 1);
  for (std::uint64_t param : params) {
    const auto index = make_index(sys, structure, param);
    std::vector<std::uint64_t> probes(pairs.size(), 0);
    std::vector<std::uint64_t> outs(pairs.size(), 0);
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      CostMeter meter;  // one per worker
      for (std::size_t q = next++; q < pairs.size(); q = next++) {
        const QueryResult r = index->query(pairs[q].first, pairs[q].second, &meter);
        probes[q] = meter.probes;
        outs[q] = r.out();
      }
    };
    const auto start = std::chrono::steady_clock::now();
    if (threads == 1) {
      worker();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    const auto stop = std::chrono::steady_clock::now();

    BenchRecord rec;
    rec.structure = structure;
    rec.param = param;
    rec.words = index->words();
    rec.queries = pairs.size();
    if (!pairs.empty()) {
      std::uint64_t p = 0;
      std::uint64_t o = 0;
      for (std::size_t q = 0; q < pairs.size(); ++q) {
        p += probes[q];
        o += outs[q];
      }
      rec.probes_mean = static_cast<double>(p) / static_cast<double>(pairs.size());
      rec.out_mean = static_cast<double>(o) / static_cast<double>(pairs.size());
    }
    rec.probes_p99 = p99(std::move(probes));
    if (timing) rec.ms = std::chrono::duration<double, std::milli>(stop - start).count();
    out.push_back(rec);
  }
  return out;
}

std::vector<std::uint64_t> default_sweep() { return {2, 4, 8, 16, 32, 64, 128, 256}; }

void write_csv(std::ostream& os, std::span<const BenchRecord> records) {
  os << kCsvHeader << '\n' << kCsvColumns << '\n';
  for (const auto& r : records) {
    std::ostringstream line;
    line << std::fixed << std::setprecision(3) << r.structure << ',' << r.param << ','
         << r.words << ',' << r.probes_mean << ',' << r.probes_p99 << ',' << r.out_mean << ','
         << r.queries << ',' << r.ms;
    os << line.str() << '\n';
  }
}

std::optional<double> loglog_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] <= 0 || y[i] <= 0) continue;
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return std::nullopt;
  const double denom = static_cast<double>(k) * sxx - sx * sx;
  if (denom == 0) return std::nullopt;
  return (static_cast<double>(k) * sxy - sx * sy) / denom;
}

}  // namespace setlab::bench
