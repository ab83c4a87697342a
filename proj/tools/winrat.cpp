#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "winrat/config.hpp"
#include "winrat/driver.hpp"
#include "winrat/proof_io.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Numeric option that also accepts "inf".
uint32_t parse_bound(const std::string& text, const std::string& flag) {
  if (text == "inf" || text == "INF") return winrat::kInfinity;
  size_t pos = 0;
  unsigned long v = std::stoul(text, &pos);
  if (pos != text.size() || v == 0 || v > winrat::kInfinity)
    throw CLI::ValidationError(flag, "expects a positive integer or 'inf'");
  return static_cast<uint32_t>(v);
}

size_t parse_budget(const std::string& text) {
  if (text == "inf" || text == "INF")
    return std::numeric_limits<size_t>::max();
  size_t pos = 0;
  unsigned long long v = std::stoull(text, &pos);
  if (pos != text.size())
    throw CLI::ValidationError("--mem-budget",
                               "expects a non-negative integer or 'inf'");
  return static_cast<size_t>(v);
}

void print_stats(const winrat::Stats& st) {
  auto line = [](const char* k, auto v) {
    std::cout << "c " << k << " " << v << "\n";
  };
  line("rup_checks", st.rup_checks);
  line("rat_checks", st.rat_checks);
  line("resolvent_checks", st.resolvent_checks);
  line("fastpath_blocks", st.fastpath_blocks);
  line("occ_builds", st.occ_builds);
  line("window_misses", st.window_misses);
  line("window_retries", st.window_retries);
  line("propagations", st.propagations);
  line("probe_promotions", st.probe_promotions);
  line("subset_segments", st.subset_segments);
  line("subset_promotions", st.subset_promotions);
  line("deactivated", st.deactivated);
  line("pruned", st.pruned);
  line("restored", st.restored);
  line("evictions", st.evictions);
  line("reloads", st.reloads);
  line("conflict_audits", st.conflict_audits);
  line("conflict_audit_failures", st.conflict_audit_failures);
  auto tline = [](const char* k, double v) {
    std::cout << "c time_" << k << " " << v << "\n";
  };
  tline("probe", st.t_probe);
  tline("subset", st.t_subset);
  tline("seed", st.t_seed);
  tline("window", st.t_window);
  tline("exact", st.t_exact);
  tline("fastpath", st.t_fastpath);
  tline("rat", st.t_rat);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DRUP/DRAT proof checker with window-shifted backward verification"};
  std::string cnf_path, proof_path;
  std::string theta = "40000", mu = "6", span = "500", tail = "100000",
              add_max = "3", budget = "inf";
  bool no_probe = false, no_subset = false, no_window = false,
       no_deactivate = false, no_prune = false, no_fastpath = false;
  bool stats = false, quiet = false, audit_conflicts = false;

  app.add_option("cnf", cnf_path, "DIMACS CNF file")->required();
  app.add_option("proof", proof_path, "ASCII DRUP/DRAT proof file")->required();
  app.add_option("--theta", theta, "window width (positive or 'inf')");
  app.add_option("--mu", mu, "context clause size bound");
  app.add_option("--span", span, "subset segment span");
  app.add_option("--tail", tail, "prefilter tail start index");
  app.add_option("--add-max", add_max, "max promoted clause size");
  app.add_option("--mem-budget", budget,
                 "max inactive resident clause bodies ('inf' = unbounded)");
  app.add_flag("--no-probe", no_probe, "skip the unit probe stage");
  app.add_flag("--no-subset", no_subset, "skip the subset stage");
  app.add_flag("--no-window", no_window, "skip the finite window pass");
  app.add_flag("--no-deactivate", no_deactivate, "skip unit subsumption");
  app.add_flag("--no-prune", no_prune, "skip small-clause pruning");
  app.add_flag("--no-fastpath", no_fastpath, "skip the equivalence-block rule");
  app.add_flag("--stats", stats, "print counters as 'c' lines");
  app.add_flag("--quiet", quiet, "suppress warnings");
  app.add_flag("--audit-conflicts", audit_conflicts,
               "quasi-fixpoint falsified-clause diagnostic on small inputs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    winrat::Config cfg;
    cfg.theta = parse_bound(theta, "--theta");
    cfg.mu = parse_bound(mu, "--mu");
    cfg.span = parse_bound(span, "--span");
    cfg.tail = parse_bound(tail, "--tail");
    cfg.add_max = parse_bound(add_max, "--add-max");
    cfg.probe = !no_probe;
    cfg.subset = !no_subset;
    cfg.window = !no_window;
    cfg.deactivate = !no_deactivate;
    cfg.prune = !no_prune;
    cfg.fastpath = !no_fastpath;
    cfg.audit_conflicts = audit_conflicts;

    std::vector<std::string> warnings;
    winrat::Formula f =
        winrat::parse_dimacs(read_file(cnf_path), false, &warnings);
    winrat::ProofDB db =
        winrat::load_proof(winrat::make_file_source(proof_path),
                           parse_budget(budget));
    if (!quiet)
      for (const std::string& w : warnings) std::cout << "c warning: " << w << "\n";

    winrat::VerifyResult res = winrat::verify(f, db, cfg);
    if (stats) print_stats(res.stats);
    std::cout << (res.verdict.verified ? "s VERIFIED" : "s NOT VERIFIED")
              << std::endl;
    return res.verdict.verified ? 0 : 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
