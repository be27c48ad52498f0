#pragma once

#include <cstdint>
#include <deque>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "ia/network.hpp"
#include "ia/simd.hpp"

namespace ia {

enum class CompositionMethod {
  pairwise,  // nested loop over the 13x13 basic table
  split,     // four lookups in the 2^7/2^6 split tables
  vector,    // per-pivot expanded operator applied to whole rows (SIMD kernels)
};

enum class QueuePolicy { fifo, lifo, weight, cardinality, constrainedness };

enum class HeuristicKind { weight, cardinality, constrainedness };

/// Skipping techniques: (a) never seed I-labelled edges, (b) skip
/// compositions whose result is provably I, (c) stop composing once the
/// partial union covers the target label.
struct SkipSet {
  bool a = false;
  bool b = false;
  bool c = false;

  static constexpr SkipSet none() { return {}; }
  static constexpr SkipSet all() { return {true, true, true}; }
  bool operator==(const SkipSet&) const = default;
};

struct PCStats {
  std::uint64_t compositions = 0;
  std::uint64_t skipped_a = 0;
  std::uint64_t skipped_b = 0;
  std::uint64_t skipped_c = 0;
  std::uint64_t enqueues = 0;
  std::uint64_t queue_peak = 0;
  std::uint64_t iterations = 0;
  std::uint64_t updates = 0;
  std::uint64_t shadow_violations = 0;

  PCStats& operator+=(const PCStats& o);
  bool operator==(const PCStats&) const = default;
};

struct PCConfig {
  CompositionMethod method = CompositionMethod::split;
  SkipSet skip;
  QueuePolicy queue = QueuePolicy::fifo;
  simd::Isa isa = simd::active();
  // Recompute every skipped composition and count the ones that would have
  // tightened their target.
  bool shadow_check = false;
};

struct TrailEntry {
  int i;
  int j;
  std::uint16_t previous;
};
using Trail = std::vector<TrailEntry>;

struct PCResult {
  bool consistent = true;
  EdgeRef emptied{-1, -1};  // first edge whose label became empty
  PCStats stats;
};

/// Worklist of undirected edges, stored as (i,j) with i<j. An edge already
/// present is not added again. Ordered policies pop the smallest heuristic
/// value computed at insertion time, ties broken by (i,j).
class EdgeQueue {
 public:
  EdgeQueue(int n, QueuePolicy policy, simd::Isa isa = simd::active());

  /// Returns false when the edge was already queued.
  bool push(EdgeRef e, const IANetwork& net);
  EdgeRef pop();
  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }
  bool contains(EdgeRef e) const;

 private:
  std::size_t slot(EdgeRef e) const { return static_cast<std::size_t>(e.i) * n_ + e.j; }

  int n_;
  QueuePolicy policy_;
  simd::Isa isa_;
  std::size_t size_ = 0;
  std::vector<char> member_;
  std::deque<EdgeRef> list_;
  std::set<std::tuple<std::int64_t, int, int>> ordered_;
};

/// Tightens `net` in place to its path-consistent closure. Returns
/// consistent=false as soon as any label becomes empty; the network is then
/// left partially tightened. When `trail` is given, every overwritten label is
/// recorded before it changes.
PCResult path_consistency(IANetwork& net, const PCConfig& cfg, Trail* trail = nullptr);

/// Same closure, assuming `net` was path consistent before `changed` was
/// tightened; only that edge seeds the worklist.
PCResult incremental_path_consistency(IANetwork& net, EdgeRef changed, const PCConfig& cfg,
                                      Trail* trail = nullptr);

std::int64_t edge_heuristic(const IANetwork& net, EdgeRef e, HeuristicKind kind,
                            simd::Isa isa = simd::active());

std::string_view name(CompositionMethod m);
std::string_view name(QueuePolicy q);
std::string to_string(SkipSet s);
CompositionMethod parse_composition_method(std::string_view s);
QueuePolicy parse_queue_policy(std::string_view s);
/// "a,b,c", any subset, or "none".
SkipSet parse_skip_set(std::string_view s);

}  // namespace ia
