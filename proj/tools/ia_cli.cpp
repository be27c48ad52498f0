#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ia/bench.hpp"
#include "ia/generate.hpp"
#include "ia/network.hpp"
#include "ia/pathcon.hpp"
#include "ia/search.hpp"
#include "ia/tractable.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInconsistent = 1;
constexpr int kTimeout = 2;
constexpr int kUsage = 3;

struct Output {
  bool quiet = false;
  bool print = false;
  std::ostream& report() { return quiet ? null_ : std::cout; }
  bool machine() const { return quiet && print; }

 private:
  std::ostringstream null_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ia::ParseError(0, "cannot write '" + path + "'");
  return out;
}

int verdict_code(ia::Verdict v) {
  switch (v) {
    case ia::Verdict::consistent: return kOk;
    case ia::Verdict::inconsistent: return kInconsistent;
    case ia::Verdict::timeout: return kTimeout;
  }
  return kUsage;
}

void report_stats(std::ostream& out, const ia::PCStats& s) {
  out << "compositions " << s.compositions << "\n"
      << "skipped_a    " << s.skipped_a << "\n"
      << "skipped_b    " << s.skipped_b << "\n"
      << "skipped_c    " << s.skipped_c << "\n"
      << "enqueues     " << s.enqueues << "\n"
      << "queue_peak   " << s.queue_peak << "\n"
      << "updates      " << s.updates << "\n";
}

// Edges narrower than I, by name; skipped for large networks.
void report_edges(std::ostream& out, const ia::IANetwork& net) {
  if (net.size() > 40) return;
  for (int i = 0; i < net.size(); ++i)
    for (int j = i + 1; j < net.size(); ++j)
      if (!net.at(i, j).is_all())
        out << "(" << net.display_name(i) << ", " << net.display_name(j) << ") = {"
            << ia::to_string(net.at(i, j)) << "}\n";
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("IA_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(s, &used);
      if (used == std::string(s).size()) return v;
    } catch (const std::exception&) {
    }
    throw ia::ParseError(0, std::string("IA_SEED is not an unsigned integer: '") + s + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Allen interval algebra: path consistency, backtracking search, generators "
               "and benchmarks"};
  app.require_subcommand(1);
  app.fallthrough();
  Output io;
  app.add_flag("--quiet", io.quiet, "Suppress the human-readable report");
  app.add_flag("--print", io.print, "With --quiet, write the machine-readable result to stdout");

  // pc
  auto* pc = app.add_subcommand("pc", "Path consistency closure of a network");
  std::string pc_in, pc_out, comp = "split", skip = "a,b,c", queue = "fifo";
  pc->add_option("network", pc_in, "Network file (edge-list or matrix)")->required();
  pc->add_option("--comp", comp, "Composition method: pairwise|split|vector")->capture_default_str();
  pc->add_option("--skip", skip, "Skipping techniques: subset like a,b,c or none")->capture_default_str();
  pc->add_option("--queue", queue, "Queue policy: fifo|lifo|weight|card|constr")->capture_default_str();
  pc->add_option("-o,--out", pc_out, "Write the closed network to this file");

  // solve
  auto* solve = app.add_subcommand("solve", "Find a consistent scenario by backtracking");
  std::string solve_in, decomp = "sa", var_order = "none", val_order = "none", freq_file,
                        emit_scenario, emit_intervals;
  double timeout = 1800.0;
  solve->add_option("network", solve_in, "Network file (edge-list or matrix)")->required();
  solve->add_option("--decomp", decomp, "Decomposition: si|sa|nb")->capture_default_str();
  solve->add_option("--var-order", var_order, "Static edge order keys, e.g. constr,weight,card, or none")
      ->capture_default_str();
  solve->add_option("--val-order", val_order, "Value ordering: freq|none")->capture_default_str();
  solve->add_option("--freq-table", freq_file, "Frequency table file for --val-order freq");
  solve->add_option("--timeout", timeout, "Timeout in seconds")->capture_default_str();
  solve->add_option("--emit-scenario", emit_scenario, "Write the scenario network to this file");
  solve->add_option("--emit-intervals", emit_intervals, "Write realizing intervals to this file");
  solve->add_option("--comp", comp, "Composition method for propagation")->capture_default_str();
  solve->add_option("--skip", skip, "Skipping techniques for propagation")->capture_default_str();
  solve->add_option("--queue", queue, "Queue policy for propagation")->capture_default_str();

  // classify
  auto* classify = app.add_subcommand("classify", "Class membership and decompositions of a label");
  std::string label_text, dump_file;
  classify->add_option("label", label_text, "Comma-separated relations, or I");
  classify->add_option("--dump-catalog", dump_file, "Write the catalog of all 8191 labels to this file");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a random network");
  gen->require_subcommand(1);
  std::string gen_out, p_text = "1/4";
  int n = 0;
  std::optional<std::uint64_t> seed_opt;
  double intersects = 0.06, disjoint = 0.17;
  bool no_embed = false;
  auto* gen_b = gen->add_subcommand("b", "Model B(n): sparse intersects/disjoint network");
  auto* gen_s = gen->add_subcommand("s", "Model S(n,p): random labels with an embedded solution");
  for (auto* g : {gen_b, gen_s}) {
    g->add_option("--n", n, "Number of intervals")->required();
    g->add_option("--seed", seed_opt, "Seed (default: IA_SEED or 0)");
    g->add_option("-o,--out", gen_out, "Output file");
  }
  gen_b->add_option("--intersects", intersects, "Fraction of pairs kept as intersects")->capture_default_str();
  gen_b->add_option("--disjoint", disjoint, "Fraction of pairs kept as disjoint")->capture_default_str();
  gen_s->add_option("--p", p_text, "Edge probability NUM/DEN")->capture_default_str();
  gen_s->add_flag("--no-embed", no_embed, "Skip embedding the witness solution");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a benchmark suite");
  std::string suite_file, csv_file, summary_file;
  int jobs = 0;
  bench->add_option("--suite", suite_file, "Suite specification")->required();
  bench->add_option("--out", csv_file, "CSV output file")->required();
  bench->add_option("--jobs", jobs, "Parallel worker slots (default: suite setting)");
  bench->add_option("--summary", summary_file, "Also write the summary table to this file");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Derive a value-ordering frequency table");
  std::string model_text = "s", cal_out;
  int k = 5;
  calibrate->add_option("--model", model_text, "Generator model: b|s")->capture_default_str();
  calibrate->add_option("--n", n, "Number of intervals")->required();
  calibrate->add_option("--p", p_text, "Edge probability NUM/DEN (model s)")->capture_default_str();
  calibrate->add_option("--seed", seed_opt, "First seed (default: IA_SEED or 0)");
  calibrate->add_option("--k", k, "Number of instances")->capture_default_str();
  std::string cal_decomp = "si", cal_var_order = "constr,weight,card";
  calibrate->add_option("--decomp", cal_decomp, "Decomposition: si|sa|nb")->capture_default_str();
  calibrate->add_option("--var-order", cal_var_order, "Static edge order keys or none")
      ->capture_default_str();
  calibrate->add_option("--timeout", timeout, "Per-instance timeout in seconds")->capture_default_str();
  calibrate->add_option("-o,--out", cal_out, "Frequency table output file");

  // verify
  auto* verify = app.add_subcommand("verify", "Check an interval assignment against a network");
  std::string verify_net, verify_intervals;
  verify->add_option("network", verify_net, "Network file")->required();
  verify->add_option("intervals", verify_intervals, "Interval assignment file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    std::ostream& out = io.report();
    if (pc->parsed()) {
      ia::IANetwork net = ia::read_network_file(pc_in);
      ia::PCConfig cfg;
      cfg.method = ia::parse_composition_method(comp);
      cfg.skip = ia::parse_skip_set(skip);
      cfg.queue = ia::parse_queue_policy(queue);
      const ia::PCResult r = ia::path_consistency(net, cfg);
      out << (r.consistent ? "consistent" : "inconsistent") << "\n";
      if (!r.consistent)
        out << "emptied (" << net.display_name(r.emptied.i) << ", "
            << net.display_name(r.emptied.j) << ")\n";
      report_stats(out, r.stats);
      if (r.consistent) report_edges(out, net);
      if (!pc_out.empty()) {
        auto f = open_out(pc_out);
        ia::serialize_network(net, f);
      }
      if (io.machine()) ia::serialize_network(net, std::cout);
      return r.consistent ? kOk : kInconsistent;
    }

    if (solve->parsed()) {
      const ia::IANetwork net = ia::read_network_file(solve_in);
      ia::SearchConfig cfg;
      cfg.method = ia::parse_decomposition(decomp);
      cfg.var_order = ia::parse_var_order(var_order);
      if (val_order == "freq") cfg.value_ordering = true;
      else if (val_order != "none") throw std::invalid_argument("--val-order must be freq or none");
      if (!freq_file.empty()) cfg.frequencies = ia::FrequencyTable::read_file(freq_file);
      cfg.timeout_seconds = timeout;
      cfg.pc.method = ia::parse_composition_method(comp);
      cfg.pc.skip = ia::parse_skip_set(skip);
      cfg.pc.queue = ia::parse_queue_policy(queue);
      const ia::SearchResult r = ia::backtrack_solve(net, cfg);
      const auto& st = r.stats;
      out << ia::name(r.verdict) << "\n"
          << "search_space " << ia::search_space_size(net, cfg.method) << "\n"
          << "nodes        " << st.nodes << "\n"
          << "backtracks   " << st.backtracks << "\n"
          << "trail_peak   " << st.trail_peak << "\n"
          << "branching    " << st.branching_edges << "\n"
          << "seconds      " << st.seconds << "\n";
      if (st.decided_by_preprocessing) out << "decided by preprocessing\n";
      report_stats(out, st.pc);
      if (r.verdict == ia::Verdict::consistent) {
        const ia::Scenario sc = ia::extract_scenario(r.solution, cfg.method);
        const ia::IntervalAssignment a = ia::realize(sc.network());
        if (!ia::verify_assignment(net, a)) throw std::logic_error("realized scenario fails verification");
        if (!emit_scenario.empty()) {
          auto f = open_out(emit_scenario);
          ia::serialize_network(sc.network(), f);
        }
        if (!emit_intervals.empty()) {
          auto f = open_out(emit_intervals);
          ia::write_intervals(a, f);
        }
        if (io.machine()) ia::serialize_network(sc.network(), std::cout);
      }
      return verdict_code(r.verdict);
    }

    if (classify->parsed()) {
      if (label_text.empty() && dump_file.empty())
        throw std::invalid_argument("give a label or --dump-catalog FILE");
      const auto& cat = ia::catalog();
      if (!dump_file.empty()) {
        auto f = open_out(dump_file);
        cat.dump(f);
      }
      if (!label_text.empty()) {
        const auto parsed = ia::parse_label(label_text);
        if (!parsed) throw std::invalid_argument("malformed label '" + label_text + "'");
        const ia::Label x = *parsed;
        if (x.empty()) throw std::invalid_argument("empty label");
        auto blocks = [&](ia::Decomposition d) {
          std::string s;
          for (ia::Label b : cat.blocks(x, d)) s += (s.empty() ? "{" : " {") + ia::to_string(b) + "}";
          return s;
        };
        out << "label        {" << ia::to_string(x) << "}\n"
            << "pointizable  " << (cat.sa_member(x) ? "yes" : "no") << "\n"
            << "ord-horn     " << (cat.nb_member(x) ? "yes" : "no") << "\n"
            << "si           " << blocks(ia::Decomposition::si) << "\n"
            << "sa           " << blocks(ia::Decomposition::sa) << "\n"
            << "nb           " << blocks(ia::Decomposition::nb) << "\n";
        if (io.machine())
          std::cout << cat.sa_member(x) << ' ' << cat.nb_member(x) << ' '
                    << cat.block_count(x, ia::Decomposition::si) << ' '
                    << cat.block_count(x, ia::Decomposition::sa) << ' '
                    << cat.block_count(x, ia::Decomposition::nb) << '\n';
      }
      return kOk;
    }

    if (gen->parsed()) {
      ia::GeneratorConfig g;
      g.model = gen_b->parsed() ? ia::Model::B : ia::Model::S;
      g.n = n;
      g.seed = seed_opt ? *seed_opt : default_seed();
      g.p = ia::Probability::parse(p_text);
      g.intersects = intersects;
      g.disjoint = disjoint;
      g.embed = !no_embed;
      if (gen_out.empty() && !io.machine()) throw std::invalid_argument("gen needs -o FILE");
      const ia::IANetwork net = ia::generate(g);
      if (!gen_out.empty()) {
        auto f = open_out(gen_out);
        ia::serialize_network(net, f);
        out << "wrote " << ia::name(g.model) << "(" << g.n
            << (g.model == ia::Model::S ? ", " + g.p.to_string() : "") << ") seed " << g.seed
            << " to " << gen_out << "\n";
      }
      if (io.machine()) ia::serialize_network(net, std::cout);
      return kOk;
    }

    if (bench->parsed()) {
      const ia::SuiteSpec spec = ia::read_suite_file(suite_file);
      auto csv = open_out(csv_file);
      const auto records = ia::run_suite(spec, &csv, jobs);
      const auto summary = ia::summarize(records, spec.timeout_seconds);
      ia::write_summary(summary, out);
      if (!summary_file.empty()) {
        auto f = open_out(summary_file);
        ia::write_summary(summary, f);
      }
      return kOk;
    }

    if (calibrate->parsed()) {
      ia::GeneratorConfig g;
      if (model_text == "b" || model_text == "B") g.model = ia::Model::B;
      else if (model_text == "s" || model_text == "S") g.model = ia::Model::S;
      else throw std::invalid_argument("--model must be b or s");
      g.n = n;
      g.p = ia::Probability::parse(p_text);
      g.seed = seed_opt ? *seed_opt : default_seed();
      ia::SearchConfig cfg;
      cfg.method = ia::parse_decomposition(cal_decomp);
      cfg.var_order = ia::parse_var_order(cal_var_order);
      cfg.timeout_seconds = timeout;
      std::vector<std::string> warnings;
      const ia::FrequencyTable t = ia::calibrate_frequencies(g, cfg, k, &warnings);
      for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
      t.write(out);
      if (!cal_out.empty()) {
        auto f = open_out(cal_out);
        t.write(f);
      }
      if (io.machine()) t.write(std::cout);
      return kOk;
    }

    if (verify->parsed()) {
      const ia::IANetwork net = ia::read_network_file(verify_net);
      std::ifstream in(verify_intervals);
      if (!in) throw ia::ParseError(0, "cannot open '" + verify_intervals + "'");
      const ia::IntervalAssignment a = ia::read_intervals(in);
      const bool ok = ia::verify_assignment(net, a);
      out << (ok ? "valid" : "invalid") << "\n";
      if (io.machine()) std::cout << (ok ? 1 : 0) << "\n";
      return ok ? kOk : kInconsistent;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ia::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
