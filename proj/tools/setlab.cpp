// setlab gen|build|query|verify|bench|reduce [options] [--config file]

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "setlab/commands.hpp"

namespace {

using setlab::cli::Config;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// key=value lines become --key=value arguments placed after the command line,
// so with last-wins options the file overrides flags.
bool config_args(int argc, char** argv, std::vector<std::string>& args) {
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  std::string path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      path = args[k + 1];
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k),
                 args.begin() + static_cast<std::ptrdiff_t>(k + 2));
      break;
    }
    if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
      args.erase(args.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  if (path.empty()) return true;
  std::ifstream is(path);
  if (!is) {
    std::cerr << "io error: cannot read " << path << '\n';
    return false;
  }
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::cerr << "config error: expected key=value, got '" << line << "'\n";
      return false;
    }
    args.push_back("--" + trim(line.substr(0, eq)) + "=" + trim(line.substr(eq + 1)));
  }
  return true;
}

bool numeric(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

void add_options(CLI::App* sub, Config& cfg, std::string& alg, std::string& queries) {
  sub->add_option("--seed", cfg.seed, "RNG seed");
  sub->add_option("--m", cfg.m, "number of sets");
  sub->add_option("--u", cfg.u, "universe size");
  sub->add_option("--n", cfg.n, "total elements (array length for reduce quadtree)");
  sub->add_option("--generator", cfg.generator, "uniform | skewed");
  sub->add_option("--size-exponent", cfg.size_exponent, "skewed: set size power law");
  sub->add_option("--element-exponent", cfg.element_exponent, "skewed: Zipf exponent");
  sub->add_option("--alg,--structure", alg, "1 | 2 | 3 | sdcount | hybrid | oracle");
  sub->add_option("--r,--param", cfg.param, "r, T or space budget");
  sub->add_option("--sweep", cfg.sweep, "parameter list for bench")->delimiter(',');
  sub->add_option("--queries", queries, "workload size, or a query file");
  sub->add_option("--threads", cfg.threads, "query worker threads");
  sub->add_flag("--timing", cfg.timing, "record wall time in the ms column");
  sub->add_option("--in", cfg.in, "instance file");
  sub->add_option("--out", cfg.out, "output file");
  sub->add_option("--pairs", cfg.pairs, "query pair file");
  sub->add_option("--eps", cfg.eps, "epsilon");
  sub->add_option("--mode", cfg.mode, "sd | si");
  sub->add_option("--alpha", cfg.alpha, "SI-mode alpha");
  sub->add_option("--inner", cfg.inner, "oracle | alg1");
  sub->add_option("--fp-budget", cfg.budget, "false-positive budget B");
  sub->add_option("--x", cfg.x, "X for reduce quadtree");
  sub->add_flag("--si", cfg.si, "SI variant for reduce quadtree");
  sub->add_flag("--report", cfg.report, "also answer every translated query");
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args;
  if (!config_args(argc, argv, args)) return setlab::cli::kConfig;

  CLI::App app{"set intersection structures and reductions"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  Config cfg;
  std::string alg = cfg.structure;
  std::string queries;
  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const Config&, std::ostream&);
  };
  const Cmd cmds[] = {
      {"gen", "generate an instance file", setlab::cli::cmd_gen},
      {"build", "build a structure and report its size", setlab::cli::cmd_build},
      {"query", "answer query pairs", setlab::cli::cmd_query},
      {"verify", "compare a structure with the oracle", setlab::cli::cmd_verify},
      {"bench", "parameter sweep as CSV", setlab::cli::cmd_bench},
      {"reduce", "run a reduction", setlab::cli::cmd_reduce},
  };
  std::vector<CLI::App*> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_options(sub, cfg, alg, queries);
    if (std::string(c.name) == "reduce") {
      sub->add_option("target", cfg.target, "universe | quadtree | rangemode | distoracle | threesum")
          ->required();
    }
    subs.push_back(sub);
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : setlab::cli::kConfig;
  }

  cfg.structure = (alg == "1" || alg == "2" || alg == "3") ? "alg" + alg : alg;
  if (numeric(queries)) {
    cfg.queries = std::stoull(queries);
  } else if (!queries.empty()) {
    if (cfg.target == "quadtree") {
      cfg.queries_file = queries;
    } else {
      cfg.pairs = queries;
    }
  }
  for (std::size_t k = 0; k < subs.size(); ++k) {
    if (subs[k]->parsed()) return setlab::cli::guarded(cmds[k].run, cfg, std::cout, std::cerr);
  }
  return setlab::cli::kConfig;
}
