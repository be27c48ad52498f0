#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ia/generate.hpp"
#include "ia/pathcon.hpp"
#include "ia/search.hpp"

namespace ia {

struct InstanceSpec {
  GeneratorConfig gen;  // gen.seed is the first seed; instance k uses seed + k
  int count = 1;
};

struct SolverSpec {
  enum class Mode { pc, solve };
  std::string name;
  Mode mode = Mode::solve;
  PCConfig pc;          // pc mode
  SearchConfig search;  // solve mode; its timeout is the suite's
  std::string fingerprint() const;
};

struct SuiteSpec {
  double timeout_seconds = 1800.0;
  int jobs = 1;
  std::vector<InstanceSpec> instances;
  std::vector<SolverSpec> configs;
};

/// INI-like text: '#' comments, one [suite] section (timeout, jobs), any
/// number of [instances] sections (model, n, p, seed, count, intersects,
/// disjoint, embed) and [config] sections (name, mode, comp, skip, queue,
/// decomp, var_order, val_order, freq_file). Values are key = value.
SuiteSpec parse_suite(std::istream& in);
SuiteSpec read_suite_file(const std::string& path);

struct RunRecord {
  std::size_t instance_id = 0;
  Model model = Model::S;
  int n = 0;
  Probability p;
  std::uint64_t seed = 0;
  std::string config;
  Verdict verdict = Verdict::inconsistent;
  double time_ms = 0;
  std::uint64_t compositions = 0;
  std::uint64_t skip_a = 0;
  std::uint64_t skip_b = 0;
  std::uint64_t skip_c = 0;
  std::uint64_t enqueues = 0;
  std::uint64_t backtracks = 0;
  std::uint64_t nodes = 0;
  std::uint64_t trail_peak = 0;
  bool decided_by_preprocessing = false;
  int slot = 0;
};

void write_csv_header(std::ostream& out);
void write_csv_row(const RunRecord& r, std::ostream& out);

/// Runs every (instance, configuration) pair. Records are appended to `csv`
/// as they complete (header first); the returned list is in (instance,
/// configuration) order. jobs <= 0 uses the suite's setting.
std::vector<RunRecord> run_suite(const SuiteSpec& spec, std::ostream* csv = nullptr,
                                 int jobs = 0);

/// One run, as run_suite performs it.
RunRecord run_one(const GeneratorConfig& gen, const SolverSpec& cfg, double timeout_seconds);

struct Distribution {
  double mean = 0;
  double stddev = 0;  // sample standard deviation, 0 for a single value
  double cv = 0;      // stddev / mean, 0 when the mean is 0
  std::array<double, 11> percentiles{};  // 0, 10, ..., 100
};

/// Percentiles interpolate linearly at rank q*(N-1) of the sorted values.
Distribution describe(std::vector<double> values);

struct ConfigSummary {
  std::string config;
  std::size_t runs = 0;
  std::size_t censored = 0;  // timeouts, entered at the timeout value
  std::size_t inconsistent = 0;
  Distribution time_ms;
  Distribution nodes;
  Distribution compositions;
};

/// Per configuration, in order of first appearance. Throws on empty input.
std::vector<ConfigSummary> summarize(const std::vector<RunRecord>& records,
                                     std::optional<double> timeout_seconds = std::nullopt);
void write_summary(const std::vector<ConfigSummary>& s, std::ostream& out);

/// Solves `k` instances (seeds gen.seed, gen.seed+1, ...) without value
/// ordering and tallies the relations of the extracted scenarios over edges
/// i<j, scaled to occurrences per 10000 edges. Timed-out or inconsistent
/// instances are skipped with a warning.
FrequencyTable calibrate_frequencies(const GeneratorConfig& gen, SearchConfig solver, int k,
                                     std::vector<std::string>* warnings = nullptr);

}  // namespace ia
