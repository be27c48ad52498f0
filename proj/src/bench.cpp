#include "ia/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace ia {

std::string SolverSpec::fingerprint() const {
  std::ostringstream s;
  if (mode == Mode::pc) {
    s << "pc comp=" << ia::name(pc.method) << " skip=" << to_string(pc.skip)
      << " queue=" << ia::name(pc.queue);
  } else {
    s << "solve decomp=" << ia::name(search.method) << " var_order=" << to_string(search.var_order)
      << " val_order=" << (search.value_ordering ? "freq" : "none")
      << " comp=" << ia::name(search.pc.method) << " skip=" << to_string(search.pc.skip)
      << " queue=" << ia::name(search.pc.queue);
  }
  return s.str();
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T number(const std::string& v, std::size_t line) {
  std::istringstream s(v);
  T out{};
  if (!(s >> out) || !(s >> std::ws).eof()) throw ParseError(line, "malformed number '" + v + "'");
  return out;
}

bool boolean(const std::string& v, std::size_t line) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  throw ParseError(line, "expected true/false, got '" + v + "'");
}

}  // namespace

SuiteSpec parse_suite(std::istream& in) {
  SuiteSpec spec;
  enum class Section { none, suite, instances, config } section = Section::none;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text == "[suite]") section = Section::suite;
      else if (text == "[instances]") {
        section = Section::instances;
        spec.instances.emplace_back();
      } else if (text == "[config]") {
        section = Section::config;
        spec.configs.emplace_back();
        spec.configs.back().name = "config" + std::to_string(spec.configs.size());
      } else throw ParseError(line, "unknown section " + text);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    try {
      switch (section) {
        case Section::none: throw ParseError(line, "key outside a section");
        case Section::suite:
          if (key == "timeout") spec.timeout_seconds = number<double>(value, line);
          else if (key == "jobs") spec.jobs = number<int>(value, line);
          else throw ParseError(line, "unknown suite key '" + key + "'");
          break;
        case Section::instances: {
          InstanceSpec& is = spec.instances.back();
          if (key == "model") {
            if (value == "B" || value == "b") is.gen.model = Model::B;
            else if (value == "S" || value == "s") is.gen.model = Model::S;
            else throw ParseError(line, "unknown model '" + value + "'");
          } else if (key == "n") is.gen.n = number<int>(value, line);
          else if (key == "p") is.gen.p = Probability::parse(value);
          else if (key == "seed") is.gen.seed = number<std::uint64_t>(value, line);
          else if (key == "count") is.count = number<int>(value, line);
          else if (key == "intersects") is.gen.intersects = number<double>(value, line);
          else if (key == "disjoint") is.gen.disjoint = number<double>(value, line);
          else if (key == "embed") is.gen.embed = boolean(value, line);
          else throw ParseError(line, "unknown instances key '" + key + "'");
          break;
        }
        case Section::config: {
          SolverSpec& c = spec.configs.back();
          if (key == "name") c.name = value;
          else if (key == "mode") {
            if (value == "pc") c.mode = SolverSpec::Mode::pc;
            else if (value == "solve") c.mode = SolverSpec::Mode::solve;
            else throw ParseError(line, "unknown mode '" + value + "'");
          } else if (key == "comp") c.pc.method = c.search.pc.method = parse_composition_method(value);
          else if (key == "skip") c.pc.skip = c.search.pc.skip = parse_skip_set(value);
          else if (key == "queue") c.pc.queue = c.search.pc.queue = parse_queue_policy(value);
          else if (key == "decomp") c.search.method = parse_decomposition(value);
          else if (key == "var_order") c.search.var_order = parse_var_order(value);
          else if (key == "val_order") {
            if (value == "freq") c.search.value_ordering = true;
            else if (value == "none") c.search.value_ordering = false;
            else throw ParseError(line, "val_order must be freq or none");
          } else if (key == "freq_file") {
            c.search.frequencies = FrequencyTable::read_file(value);
            c.search.value_ordering = true;
          } else throw ParseError(line, "unknown config key '" + key + "'");
          break;
        }
      }
    } catch (const std::invalid_argument& e) {
      throw ParseError(line, e.what());
    }
  }
  if (spec.instances.empty()) throw ParseError(0, "suite has no [instances] section");
  if (spec.configs.empty()) throw ParseError(0, "suite has no [config] section");
  if (!(spec.timeout_seconds > 0)) throw ParseError(0, "timeout must be positive");
  for (const auto& is : spec.instances) {
    if (is.count < 1) throw ParseError(0, "count must be at least 1");
    if (is.gen.n < 2) throw ParseError(0, "n must be at least 2");
  }
  return spec;
}

SuiteSpec read_suite_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_suite(in);
}

void write_csv_header(std::ostream& out) {
  out << "instance_id,model,n,p_num,p_den,seed,config,verdict,time_ms,compositions,"
         "skip_a,skip_b,skip_c,enqueues,backtracks,nodes,trail_peak\n";
}

void write_csv_row(const RunRecord& r, std::ostream& out) {
  std::ostringstream s;
  s << r.instance_id << ',' << name(r.model) << ',' << r.n << ',' << r.p.num << ',' << r.p.den
    << ',' << r.seed << ',' << r.config << ',' << name(r.verdict) << ',' << std::fixed
    << std::setprecision(3) << r.time_ms << ',' << r.compositions << ',' << r.skip_a << ','
    << r.skip_b << ',' << r.skip_c << ',' << r.enqueues << ',' << r.backtracks << ','
    << r.nodes << ',' << r.trail_peak << '\n';
  out << s.str();
}

RunRecord run_one(const GeneratorConfig& gen, const SolverSpec& cfg, double timeout_seconds) {
  RunRecord r;
  r.model = gen.model;
  r.n = gen.n;
  r.p = gen.model == Model::S ? gen.p : Probability{0, 1};
  r.seed = gen.seed;
  r.config = cfg.name;
  IANetwork net = generate(gen);
  PCStats pc;
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.mode == SolverSpec::Mode::pc) {
    const PCResult res = path_consistency(net, cfg.pc);
    pc = res.stats;
    r.verdict = res.consistent ? Verdict::consistent : Verdict::inconsistent;
  } else {
    SearchConfig sc = cfg.search;
    sc.timeout_seconds = timeout_seconds;
    const SearchResult res = backtrack_solve(std::move(net), sc);
    pc = res.stats.pc;
    r.verdict = res.verdict;
    r.backtracks = res.stats.backtracks;
    r.nodes = res.stats.nodes;
    r.trail_peak = res.stats.trail_peak;
    r.decided_by_preprocessing = res.stats.decided_by_preprocessing;
  }
  r.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  r.compositions = pc.compositions;
  r.skip_a = pc.skipped_a;
  r.skip_b = pc.skipped_b;
  r.skip_c = pc.skipped_c;
  r.enqueues = pc.enqueues;
  return r;
}

std::vector<RunRecord> run_suite(const SuiteSpec& spec, std::ostream* csv, int jobs) {
  struct Task {
    std::size_t instance_id;
    GeneratorConfig gen;
    const SolverSpec* cfg;
  };
  std::vector<Task> tasks;
  std::size_t id = 0;
  for (const InstanceSpec& is : spec.instances)
    for (int k = 0; k < is.count; ++k, ++id) {
      GeneratorConfig g = is.gen;
      g.seed = is.gen.seed + static_cast<std::uint64_t>(k);
      for (const SolverSpec& c : spec.configs) tasks.push_back({id, g, &c});
    }

  std::vector<RunRecord> out(tasks.size());
  std::vector<char> done(tasks.size(), 0);
  std::size_t written = 0;  // rows go out in task order
  std::mutex sink;
  if (csv) write_csv_header(*csv);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  auto worker = [&](int slot) {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks.size()) return;
      try {
        RunRecord r = run_one(tasks[t].gen, *tasks[t].cfg, spec.timeout_seconds);
        r.instance_id = tasks[t].instance_id;
        r.slot = slot;
        std::lock_guard lock(sink);
        out[t] = std::move(r);
        done[t] = 1;
        for (; written < tasks.size() && done[written]; ++written)
          if (csv) {
            write_csv_row(out[written], *csv);
            csv->flush();
            if (!*csv) throw std::runtime_error("write to CSV sink failed");
          }
      } catch (...) {
        std::lock_guard lock(sink);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
        return;
      }
    }
  };
  const int slots = std::max(1, jobs > 0 ? jobs : spec.jobs);
  if (slots == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (int s = 0; s < slots; ++s) pool.emplace_back(worker, s);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

Distribution describe(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("no values to describe");
  std::sort(values.begin(), values.end());
  Distribution d;
  const double n = static_cast<double>(values.size());
  d.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0;
    for (double v : values) ss += (v - d.mean) * (v - d.mean);
    d.stddev = std::sqrt(ss / (n - 1));
  }
  d.cv = d.mean != 0 ? d.stddev / d.mean : 0;
  for (int q = 0; q <= 10; ++q) {
    const double rank = q / 10.0 * (n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, values.size() - 1);
    d.percentiles[q] = values[lo] + (rank - static_cast<double>(lo)) * (values[hi] - values[lo]);
  }
  return d;
}

std::vector<ConfigSummary> summarize(const std::vector<RunRecord>& records,
                                     std::optional<double> timeout_seconds) {
  if (records.empty()) throw std::invalid_argument("no records to summarize");
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    auto& g = groups[r.config];
    if (g.empty()) order.push_back(r.config);
    g.push_back(&r);
  }
  std::vector<ConfigSummary> out;
  for (const std::string& name : order) {
    ConfigSummary s;
    s.config = name;
    std::vector<double> time, nodes, comps;
    for (const RunRecord* r : groups[name]) {
      ++s.runs;
      double t = r->time_ms;
      if (r->verdict == Verdict::timeout) {
        ++s.censored;
        if (timeout_seconds) t = *timeout_seconds * 1000.0;
      }
      if (r->verdict == Verdict::inconsistent) ++s.inconsistent;
      time.push_back(t);
      nodes.push_back(static_cast<double>(r->nodes));
      comps.push_back(static_cast<double>(r->compositions));
    }
    s.time_ms = describe(std::move(time));
    s.nodes = describe(std::move(nodes));
    s.compositions = describe(std::move(comps));
    out.push_back(std::move(s));
  }
  return out;
}

void write_summary(const std::vector<ConfigSummary>& summaries, std::ostream& out) {
  auto row = [&](const char* what, const Distribution& d) {
    out << "  " << std::left << std::setw(13) << what << std::right << std::setprecision(6)
        << "mean " << d.mean << "  sd " << d.stddev << "  cv " << d.cv << "\n    pct";
    for (double p : d.percentiles) out << ' ' << p;
    out << '\n';
  };
  for (const auto& s : summaries) {
    out << s.config << ": " << s.runs << " runs, " << s.inconsistent << " inconsistent, "
        << s.censored << " censored\n";
    row("time_ms", s.time_ms);
    row("nodes", s.nodes);
    row("compositions", s.compositions);
  }
}

FrequencyTable calibrate_frequencies(const GeneratorConfig& gen, SearchConfig solver, int k,
                                     std::vector<std::string>* warnings) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  solver.value_ordering = false;
  std::array<std::uint64_t, kRelCount> tally{};
  std::uint64_t edges = 0;
  for (int t = 0; t < k; ++t) {
    GeneratorConfig g = gen;
    g.seed = gen.seed + static_cast<std::uint64_t>(t);
    const SearchResult r = backtrack_solve(generate(g), solver);
    if (r.verdict != Verdict::consistent) {
      if (warnings)
        warnings->push_back("seed " + std::to_string(g.seed) + ": " +
                            std::string(name(r.verdict)) + ", excluded");
      continue;
    }
    const Scenario sc = extract_scenario(r.solution, solver.method);
    for (int i = 0; i < sc.size(); ++i)
      for (int j = i + 1; j < sc.size(); ++j) {
        ++tally[index(sc.at(i, j))];
        ++edges;
      }
  }
  FrequencyTable out;
  if (edges == 0) return out;
  for (int r = 0; r < kRelCount; ++r)
    out.score[r] = (tally[r] * 10000 + edges / 2) / edges;
  return out;
}

}  // namespace ia
