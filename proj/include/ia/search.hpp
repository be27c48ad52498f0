#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "ia/network.hpp"
#include "ia/pathcon.hpp"
#include "ia/tractable.hpp"

namespace ia {

enum class VarKey { cardinality, constrainedness, weight };
enum class Verdict { consistent, inconsistent, timeout };

std::string_view name(Verdict v);
std::string_view name(VarKey k);
/// "constr,weight,card" (any non-repeating sequence of keys) or "none".
std::vector<VarKey> parse_var_order(std::string_view s);
std::string to_string(const std::vector<VarKey>& keys);

/// Per-relation solution frequencies used to order branching values.
struct FrequencyTable {
  std::array<std::uint64_t, kRelCount> score{};

  /// Frequencies observed on S(100, 1/4) solutions (x10).
  static FrequencyTable standard();
  std::uint64_t block_score(Label x) const;

  /// Lines "<rel> <score>", '#' comments; unlisted relations score 0.
  static FrequencyTable parse(std::istream& in);
  static FrequencyTable read_file(const std::string& path);
  void write(std::ostream& out) const;
  bool operator==(const FrequencyTable&) const = default;
};

class SearchObserver {
 public:
  virtual ~SearchObserver() = default;
  /// Called just before a value is assigned at `depth`.
  virtual void before_decision(const IANetwork&, std::size_t /*depth*/) {}
  /// Called right after the decision at `depth` was undone.
  virtual void after_undo(const IANetwork&, std::size_t /*depth*/) {}
};

struct SearchConfig {
  Decomposition method = Decomposition::sa;
  std::vector<VarKey> var_order;  // empty: lexicographic edge order
  bool value_ordering = false;
  FrequencyTable frequencies = FrequencyTable::standard();
  double timeout_seconds = 1800.0;
  PCConfig pc{CompositionMethod::split, SkipSet::all(), QueuePolicy::fifo};
  SearchObserver* observer = nullptr;
};

struct SearchStats {
  std::uint64_t nodes = 0;       // values assigned
  std::uint64_t backtracks = 0;  // assignments undone
  std::uint64_t trail_peak = 0;
  std::uint64_t branching_edges = 0;  // edges that needed a choice
  PCStats pc;
  bool decided_by_preprocessing = false;
  double seconds = 0.0;
};

struct SearchResult {
  Verdict verdict = Verdict::inconsistent;
  /// On success every label belongs to the search's class (a singleton for
  /// SI); otherwise the input after preprocessing.
  IANetwork solution;
  SearchStats stats;
};

/// Static instantiation order over all edges i<j, ascending by the configured
/// keys; cardinality counts decomposition blocks. Ties fall back to (i,j).
std::vector<EdgeRef> order_variables(const IANetwork& net, const SearchConfig& cfg);
/// Most frequent first (sum of member scores) when value ordering is on;
/// stable, so catalog order breaks ties.
std::vector<Label> order_values(std::vector<Label> blocks, const SearchConfig& cfg);

/// Path consistency, then chronological backtracking over decomposition
/// blocks with incremental path consistency as forward checking.
SearchResult backtrack_solve(IANetwork net, const SearchConfig& cfg);

using BigInt = boost::multiprecision::cpp_int;
/// Product over edges i<j of the number of decomposition blocks.
BigInt search_space_size(const IANetwork& net, Decomposition method);

/// A network in which every edge carries a single basic relation.
class Scenario {
 public:
  explicit Scenario(IANetwork net);
  const IANetwork& network() const { return net_; }
  Rel at(int i, int j) const { return net_.at(i, j).first(); }
  int size() const { return net_.size(); }

 private:
  IANetwork net_;
};

using Rational = boost::rational<std::int64_t>;

struct Interval {
  Rational start;
  Rational end;
};

struct IntervalAssignment {
  std::vector<Interval> intervals;
};

/// Concrete intervals satisfying a path-consistent network whose labels are
/// all singletons or pointizable. Throws std::invalid_argument for other
/// labels and std::logic_error if the endpoint constraints are cyclic.
IntervalAssignment realize(const IANetwork& net);

/// Singleton refinement of a solved network: realised directly when every
/// label is pointizable, otherwise refined by a singleton search first.
Scenario extract_scenario(const IANetwork& solved, Decomposition method);

bool verify_assignment(const IANetwork& net, const IntervalAssignment& a);

/// One line per vertex: "<index> <start> <end>", rationals as p/q.
void write_intervals(const IntervalAssignment& a, std::ostream& out);
IntervalAssignment read_intervals(std::istream& in);

}  // namespace ia
