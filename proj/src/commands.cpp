#include "setlab/commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "setlab/apps.hpp"
#include "setlab/quadtree.hpp"
#include "setlab/si_structures.hpp"
#include "setlab/universe_reduction.hpp"

namespace setlab::cli {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

SetSystem input_instance(const Config& cfg) {
  return cfg.in.empty() ? bench::generate(cfg) : load_instance(cfg.in);
}

std::vector<QueryPair> workload(const Config& cfg, const SetSystem& sys) {
  if (!cfg.pairs.empty()) return load_pairs(cfg.pairs);
  return random_pairs(sys.m(), cfg.queries, cfg.seed + 1);
}

// Writes to cfg.out when set, else to `fallback`.
template <class F>
void emit(const std::string& path, std::ostream& fallback, F&& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream os(path);
  if (!os) throw std::ios_base::failure("cannot write " + path);
  body(os);
  if (!os) throw std::ios_base::failure("write failed: " + path);
}

void write_answer(std::ostream& os, std::size_t i, std::size_t j, const QueryResult& r) {
  os << i << ' ' << j << ' ' << r.out();
  for (Elem e : r.elements) os << ' ' << e;
  os << '\n';
}

std::vector<qt::Value> read_values(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::ios_base::failure("cannot read " + path);
  std::vector<qt::Value> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    qt::Value v = 0;
    if (!(ls >> v)) {
      throw InstanceError(InstanceError::Kind::MalformedLine,
                          path + ":" + std::to_string(lineno) + ": expected an integer");
    }
    out.push_back(v);
  }
  return out;
}

int reduce_universe(const Config& cfg, std::ostream& out) {
  const SetSystem sys = input_instance(cfg);
  ur::ReductionParams p;
  p.u = sys.u();
  p.eps = cfg.eps;
  p.mode = ur::parse_mode(cfg.mode);
  if (cfg.alpha) p.alpha = *cfg.alpha;
  p.false_positive_budget = cfg.budget;
  p.seed = cfg.seed;
  const auto st = ur::ReducedStructure::build(sys, p, ur::inner_builder(cfg.inner));
  out << st.summary() << '\n';
  if (cfg.report) {
    std::size_t bad = 0;
    for (const auto& [i, j] : all_pairs(sys.m())) {
      const QueryResult want = oracle_intersect(sys, i, j);
      const QueryResult got = st.query(i, j);
      bad += p.mode == ur::Mode::SD ? got.disjoint != want.disjoint : !(got == want);
    }
    out << "mismatches " << bad << '\n';
    if (bad != 0) return kMismatch;
  }
  return kOk;
}

int reduce_quadtree(const Config& cfg, std::ostream& out) {
  const std::size_t n = cfg.n;
  require(n >= 1, "--n must be positive");
  auto w = qt::gen_threesum_workload(n, std::uint64_t{n} * n, cfg.queries, cfg.seed);
  if (!cfg.queries_file.empty()) w.queries = read_values(cfg.queries_file);
  const auto st = qt::ts_build(w.A, w.B, cfg.x, cfg.eps, cfg.seed, cfg.si);
  const auto& shape = st.forest().shape();
  out << "shape n " << shape.n << " X " << shape.X << " R " << st.R() << " implicit "
      << shape.implicit << " leaf " << shape.leaf_len << " cap " << shape.cap << " height "
      << shape.height << '\n';
  out << std::fixed << std::setprecision(2);
  for (const auto& li : st.forest().level_info()) {
    out << "level " << li.level << " Z " << li.Z << " universe " << li.universe << " sets "
        << li.sets << " elements " << li.elements << " u_i " << li.u_i << " N_i " << li.N_i
        << " m_i " << li.m_i << " m_proof " << li.m_proof << '\n';
  }
  std::size_t bad = 0;
  for (qt::Value z : w.queries) {
    qt::QueryStats stats;
    bool found = false;
    if (cfg.si) {
      const auto pairs = st.query_reporting(z, &stats);
      found = !pairs.empty();
      if (cfg.report) bad += pairs != qt::all_pairs_summing(w.A, w.B, z);
    } else {
      found = st.query(z, &stats).has_value();
      if (cfg.report) bad += found == qt::all_pairs_summing(w.A, w.B, z).empty();
    }
    out << z << ' ' << found << ' ' << stats.sd_queries + stats.si_queries << ' '
        << stats.false_witnesses << '\n';
  }
  if (cfg.report) {
    out << "mismatches " << bad << '\n';
    if (bad != 0) return kMismatch;
  }
  return kOk;
}

int reduce_app(const Config& cfg, std::ostream& out) {
  require(!cfg.in.empty(), "reduce " + cfg.target + " needs --in");
  require(!cfg.out.empty(), "reduce " + cfg.target + " needs --out for the artifact");
  const SetSystem sys = load_instance(cfg.in);
  const auto answer = [&](bool intersecting) { return intersecting ? " | intersecting" : " | disjoint"; };
  std::size_t bad = 0;

  if (cfg.target == "rangemode") {
    const auto enc = apps::rangemode_encode(sys);
    emit(cfg.out, out, [&](std::ostream& os) {
      for (Elem e : enc.str) os << e << '\n';
    });
    for (const auto& [i, j] : all_pairs(sys.m())) {
      const auto q = apps::rangemode_query_range(enc, i, j);
      out << i << ' ' << j << " -> " << q.lo << ' ' << q.hi << ' ' << q.threshold;
      if (cfg.report) {
        const bool got = apps::rangemode_decide(enc, i, j, apps::brute_mode(enc.str, q.lo, q.hi));
        bad += got == oracle_intersect(sys, i, j).disjoint;
        out << answer(got);
      }
      out << '\n';
    }
  } else if (cfg.target == "distoracle") {
    const auto g = apps::distoracle_encode(sys);
    emit(cfg.out, out, [&](std::ostream& os) {
      os << g.vertices() << ' ' << g.edges() << '\n';
      for (std::size_t v = 0; v < sys.m(); ++v) {
        for (std::uint32_t w : g.neighbours(v)) os << v << ' ' << w << '\n';
      }
    });
    for (const auto& [i, j] : all_pairs(sys.m())) {
      if (i == j) continue;
      out << i << ' ' << j << " -> " << i - 1 << ' ' << j - 1 << " 2";
      if (cfg.report) {
        const auto d = apps::bfs_distance(g, i, j);
        const bool got = d && *d == 2;
        bad += got == oracle_intersect(sys, i, j).disjoint;
        out << answer(got);
      }
      out << '\n';
    }
  } else {
    const auto enc = apps::threesum_encode(sys);
    emit(cfg.out, out, [&](std::ostream& os) {
      os << enc.A.size() << ' ' << enc.B.size() << '\n';
      for (auto v : enc.A) os << v << '\n';
      for (auto v : enc.B) os << v << '\n';
    });
    const apps::ThreeSumSolver solver(enc);
    for (const auto& [i, j] : all_pairs(sys.m())) {
      const std::uint64_t z = apps::threesum_query_number(i, j, enc);
      out << i << ' ' << j << " -> " << z << " 1";
      if (cfg.report) {
        const bool got = solver.solve(z).has_value();
        bad += got == oracle_intersect(sys, i, j).disjoint;
        out << answer(got);
      }
      out << '\n';
    }
  }
  if (cfg.report && bad != 0) {
    out << "mismatches " << bad << '\n';
    return kMismatch;
  }
  return kOk;
}

}  // namespace

int cmd_gen(const Config& cfg, std::ostream& out) {
  require(!cfg.out.empty(), "gen needs --out");
  const SetSystem sys = bench::generate(cfg);
  save_instance(sys, cfg.out);
  out << "m " << sys.m() << " u " << sys.u() << " N " << sys.total() << '\n';
  return kOk;
}

int cmd_build(const Config& cfg, std::ostream& out) {
  require(bench::known_structure(cfg.structure), "unknown structure '" + cfg.structure + "'");
  const SetSystem sys = input_instance(cfg);
  const auto index = bench::make_index(sys, cfg.structure, cfg.param);
  out << "structure " << cfg.structure << " param " << cfg.param << " m " << sys.m() << " N "
      << sys.total() << " words " << index->words() << '\n';
  if (const auto* h = dynamic_cast<const si::HybridStructure*>(index.get())) {
    out << "sizer_T " << h->sizer().threshold() << " reporter_r " << h->reporter().r() << " t "
        << h->t() << " threshold " << h->threshold() << '\n';
  }
  return kOk;
}

int cmd_query(const Config& cfg, std::ostream& out) {
  require(bench::known_structure(cfg.structure), "unknown structure '" + cfg.structure + "'");
  const SetSystem sys = input_instance(cfg);
  const auto index = bench::make_index(sys, cfg.structure, cfg.param);
  const auto pairs = workload(cfg, sys);
  emit(cfg.out, out, [&](std::ostream& os) {
    for (const auto& [i, j] : pairs) write_answer(os, i, j, index->query(i, j));
  });
  return kOk;
}

int cmd_verify(const Config& cfg, std::ostream& out) {
  require(bench::known_structure(cfg.structure), "unknown structure '" + cfg.structure + "'");
  const SetSystem sys = input_instance(cfg);
  const auto index = bench::make_index(sys, cfg.structure, cfg.param);
  const auto pairs = cfg.pairs.empty() ? all_pairs(sys.m()) : load_pairs(cfg.pairs);
  std::size_t bad = 0;
  for (const auto& [i, j] : pairs) {
    const QueryResult want = oracle_intersect(sys, i, j);
    const QueryResult got = index->query(i, j);
    if (got == want) continue;
    if (++bad <= 10) {
      out << "mismatch ";
      write_answer(out, i, j, got);
      out << "expected ";
      write_answer(out, i, j, want);
    }
  }
  out << (bad == 0 ? "pass" : "FAIL") << ' ' << cfg.structure << " param " << cfg.param << ' '
      << pairs.size() << " queries " << bad << " mismatches\n";
  return bad == 0 ? kOk : kMismatch;
}

int cmd_bench(const Config& cfg, std::ostream& out) {
  require(bench::known_structure(cfg.structure), "unknown structure '" + cfg.structure + "'");
  const SetSystem sys = input_instance(cfg);
  const auto pairs = workload(cfg, sys);
  const auto params = cfg.sweep.empty() ? bench::default_sweep() : cfg.sweep;
  const auto records = bench::run_sweep(sys, cfg.structure, params, pairs, cfg.threads, cfg.timing);
  emit(cfg.out, out, [&](std::ostream& os) { bench::write_csv(os, records); });
  return kOk;
}

int cmd_reduce(const Config& cfg, std::ostream& out) {
  if (cfg.target == "universe") return reduce_universe(cfg, out);
  if (cfg.target == "quadtree") return reduce_quadtree(cfg, out);
  if (cfg.target == "rangemode" || cfg.target == "distoracle" || cfg.target == "threesum") {
    return reduce_app(cfg, out);
  }
  throw std::invalid_argument("unknown reduction '" + cfg.target + "'");
}

int guarded(int (*body)(const Config&, std::ostream&), const Config& cfg, std::ostream& out,
            std::ostream& err) {
  try {
    return body(cfg, out);
  } catch (const std::ios_base::failure& e) {
    err << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const InstanceError& e) {
    err << (e.kind() == InstanceError::Kind::Generator ? "config error: " : "parse error: ")
        << e.what() << '\n';
    return e.kind() == InstanceError::Kind::Generator ? kConfig : kParse;
  } catch (const ur::BatteryError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::logic_error& e) {  // invalid_argument, out_of_range
    err << "config error: " << e.what() << '\n';
    return kConfig;
  }
}

}  // namespace setlab::cli
