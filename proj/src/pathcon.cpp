#include "ia/pathcon.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>

#include "ia/algebra.hpp"

namespace ia {

PCStats& PCStats::operator+=(const PCStats& o) {
  compositions += o.compositions;
  skipped_a += o.skipped_a;
  skipped_b += o.skipped_b;
  skipped_c += o.skipped_c;
  enqueues += o.enqueues;
  queue_peak = std::max(queue_peak, o.queue_peak);
  iterations += o.iterations;
  updates += o.updates;
  shadow_violations += o.shadow_violations;
  return *this;
}

namespace {

constexpr std::array<std::uint16_t, kRelCount> weight_row(bool inverted) {
  std::array<std::uint16_t, kRelCount> w{};
  for (int r = 0; r < kRelCount; ++r)
    w[r] = static_cast<std::uint16_t>(
        kRelationWeights[index(inverted ? inverse(rel_at(r)) : rel_at(r))]);
  return w;
}
constexpr auto kWeights = weight_row(false);
constexpr auto kInverseWeights = weight_row(true);

// Rule b: x . y = I whenever one of these pairs occurs.
constexpr std::uint16_t full_result_mask(Label x) {
  std::uint16_t m = 0;
  if (x.contains(Rel::b)) m |= Label::of(Rel::bi).bits();
  if (x.contains(Rel::bi)) m |= Label::of(Rel::b).bits();
  if (x.contains(Rel::d)) m |= Label::of(Rel::di).bits();
  return m;
}

simd::RowOperator row_operator(Label x, const CompositionTables& t) {
  simd::RowOperator op;
  for (int r = 0; r < kRelCount; ++r) {
    Label img;
    for (Rel a : x) img |= t.basic(a, rel_at(r));
    op.image[r] = img.bits();
  }
  op.full_result_mask = full_result_mask(x);
  return op;
}

class Propagator {
 public:
  Propagator(IANetwork& net, const PCConfig& cfg, Trail* trail)
      : net_(net), cfg_(cfg), trail_(trail), t_(tables()), queue_(net.size(), cfg.queue, cfg.isa) {}

  PCResult run_full() {
    const int n = net_.size();
    const std::uint64_t per_edge = n > 2 ? 2ull * (n - 2) : 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const Label x = net_.at(i, j);
        if (x.empty()) return fail({i, j});
        if (cfg_.skip.a && x.is_all()) {
          result_.stats.skipped_a += per_edge;
          continue;
        }
        enqueue({i, j});
      }
    return drain();
  }

  PCResult run_incremental(EdgeRef changed) {
    if (changed.i > changed.j) std::swap(changed.i, changed.j);
    if (net_.at(changed).empty()) return fail(changed);
    if (cfg_.skip.a && net_.at(changed).is_all()) {
      const int n = net_.size();
      result_.stats.skipped_a += n > 2 ? 2ull * (n - 2) : 0;
      return result_;
    }
    enqueue(changed);
    return drain();
  }

 private:
  PCResult fail(EdgeRef e) {
    result_.consistent = false;
    result_.emptied = e;
    return result_;
  }

  void enqueue(EdgeRef e) {
    if (e.i > e.j) std::swap(e.i, e.j);
    if (queue_.push(e, net_)) {
      ++result_.stats.enqueues;
      result_.stats.queue_peak = std::max<std::uint64_t>(result_.stats.queue_peak, queue_.size());
    }
  }

  void write(int i, int j, Label x) {
    if (trail_) trail_->push_back({i, j, net_.at(i, j).bits()});
    net_.set(i, j, x);
    ++result_.stats.updates;
  }

  PCResult drain() {
    if (cfg_.method == CompositionMethod::vector) {
      changed_ik_.resize(net_.size());
      changed_jk_.resize(net_.size());
      before_.resize(net_.size());
    }
    while (!queue_.empty()) {
      const EdgeRef e = queue_.pop();
      ++result_.stats.iterations;
      const bool ok = cfg_.method == CompositionMethod::vector ? relax_vector(e.i, e.j)
                                                                : relax_scalar(e.i, e.j);
      if (!ok) return result_;
    }
    return result_;
  }

  // x . y, abandoned (nullopt) under rule c once the partial result covers
  // `target` with work remaining.
  std::optional<Label> compose_bounded(Label x, Label y, Label target) const {
    const bool cut = cfg_.skip.c;
    if (cfg_.method == CompositionMethod::pairwise) {
      Label acc;
      std::uint16_t rows = x.bits();
      while (rows != 0) {
        const Rel r1 = rel_at(std::countr_zero(rows));
        rows &= static_cast<std::uint16_t>(rows - 1);
        for (Rel r2 : y) acc |= t_.basic(r1, r2);
        if (cut && rows != 0 && target.subset_of(acc)) return std::nullopt;
      }
      return acc;
    }
    const std::uint16_t xl = low_part(x), xh = high_part(x);
    const std::uint16_t yl = low_part(y), yh = high_part(y);
    Label acc = t_.split_ll(xl, yl);
    if (cut && target.subset_of(acc)) return std::nullopt;
    acc |= t_.split_lh(xl, yh);
    if (cut && target.subset_of(acc)) return std::nullopt;
    acc |= t_.split_hl(xh, yl);
    if (cut && target.subset_of(acc)) return std::nullopt;
    return acc | t_.split_hh(xh, yh);
  }

  // t <- target & left . right; returns the new label or nullopt if unchanged.
  std::optional<Label> tighten(Label left, Label right, Label target) {
    auto& st = result_.stats;
    if (cfg_.skip.b && (right.bits() & full_result_mask(left)) != 0) {
      ++st.skipped_b;
      shadow(left, right, target);
      return std::nullopt;
    }
    const auto composed = compose_bounded(left, right, target);
    if (!composed) {
      ++st.skipped_c;
      shadow(left, right, target);
      return std::nullopt;
    }
    ++st.compositions;
    const Label t = target & *composed;
    if (t == target) return std::nullopt;
    return t;
  }

  void shadow(Label left, Label right, Label target) {
    if (cfg_.shadow_check && (target & compose_split(left, right, t_)) != target)
      ++result_.stats.shadow_violations;
  }

  bool relax_scalar(int i, int j) {
    const int n = net_.size();
    for (int k = 0; k < n; ++k) {
      if (k == i || k == j) continue;
      if (auto t = tighten(net_.at(i, j), net_.at(j, k), net_.at(i, k))) {
        write(i, k, *t);
        if (t->empty()) { fail({i, k}); return false; }
        enqueue({i, k});
      }
      if (auto t = tighten(net_.at(k, i), net_.at(i, j), net_.at(k, j))) {
        write(k, j, *t);
        if (t->empty()) { fail({k, j}); return false; }
        enqueue({k, j});
      }
    }
    return true;
  }

  // Both steps over all k at once. Iterations for distinct k touch disjoint
  // cells, so batching them preserves the closure. The second step is applied
  // in inverse form, C(j,k) &= C(j,i) . C(i,k), so both read and write rows.
  bool relax_vector(int i, int j) {
    const int n = net_.size();
    const simd::RelaxOptions opts{cfg_.skip.b, cfg_.skip.c};
    simd::RelaxCounts counts;

    auto apply = [&](int pivot_row, int target_row, Label left, std::vector<std::uint16_t>& changed) {
      const simd::RowOperator op = row_operator(left, t_);
      auto operands = net_.row(pivot_row);
      auto targets = net_.mutable_row(target_row);
      std::copy(targets.begin(), targets.end(), before_.begin());
      std::fill(changed.begin(), changed.end(), 0);
      const int lo = std::min(i, j), hi = std::max(i, j);
      const std::pair<int, int> segments[] = {{0, lo}, {lo + 1, hi}, {hi + 1, n}};
      std::size_t n_changed = 0;
      for (auto [from, to] : segments) {
        if (from >= to) continue;
        const auto len = static_cast<std::size_t>(to - from);
        n_changed += simd::relax_row(cfg_.isa, op, operands.subspan(from, len),
                                     targets.subspan(from, len),
                                     std::span(changed).subspan(from, len), opts, counts);
      }
      if (cfg_.shadow_check) {
        for (int k = 0; k < n; ++k) {
          if (k == i || k == j) continue;
          const Label expect = Label(before_[k]) & compose_split(left, Label(operands[k]), t_);
          if (expect.bits() != targets[k]) ++result_.stats.shadow_violations;
        }
      }
      bool emptied = false;
      for (int k = 0; n_changed != 0 && k < n; ++k) {
        if (!changed[k]) continue;
        if (trail_) trail_->push_back({target_row, k, before_[k]});
        net_.set_cell(k, target_row, inverse_bits(targets[k]));
        ++result_.stats.updates;
        if (targets[k] == 0 && !emptied) {
          emptied = true;
          result_.emptied = {target_row, k};
        }
      }
      return !emptied;
    };

    bool ok = apply(j, i, net_.at(i, j), changed_ik_);
    if (ok) ok = apply(i, j, net_.at(j, i), changed_jk_);
    else std::fill(changed_jk_.begin(), changed_jk_.end(), 0);

    auto& st = result_.stats;
    st.compositions += counts.composed;
    st.skipped_b += counts.skipped_full;
    st.skipped_c += counts.skipped_covered;
    if (!ok) {
      result_.consistent = false;
      return false;
    }
    for (int k = 0; k < n; ++k) {
      if (changed_ik_[k]) enqueue({i, k});
      if (changed_jk_[k]) enqueue({k, j});
    }
    return true;
  }

  IANetwork& net_;
  const PCConfig& cfg_;
  Trail* trail_;
  const CompositionTables& t_;
  EdgeQueue queue_;
  PCResult result_;
  std::vector<std::uint16_t> changed_ik_, changed_jk_, before_;
};

}  // namespace

EdgeQueue::EdgeQueue(int n, QueuePolicy policy, simd::Isa isa)
    : n_(n), policy_(policy), isa_(isa), member_(static_cast<std::size_t>(n) * n, 0) {}

bool EdgeQueue::contains(EdgeRef e) const {
  if (e.i > e.j) std::swap(e.i, e.j);
  return member_[slot(e)] != 0;
}

bool EdgeQueue::push(EdgeRef e, const IANetwork& net) {
  if (e.i > e.j) std::swap(e.i, e.j);
  char& m = member_[slot(e)];
  if (m) return false;
  m = 1;
  ++size_;
  switch (policy_) {
    case QueuePolicy::fifo:
    case QueuePolicy::lifo:
      list_.push_back(e);
      break;
    case QueuePolicy::weight:
      ordered_.emplace(edge_heuristic(net, e, HeuristicKind::weight, isa_), e.i, e.j);
      break;
    case QueuePolicy::cardinality:
      ordered_.emplace(edge_heuristic(net, e, HeuristicKind::cardinality, isa_), e.i, e.j);
      break;
    case QueuePolicy::constrainedness:
      ordered_.emplace(edge_heuristic(net, e, HeuristicKind::constrainedness, isa_), e.i, e.j);
      break;
  }
  return true;
}

EdgeRef EdgeQueue::pop() {
  if (size_ == 0) throw std::logic_error("pop from empty edge queue");
  EdgeRef e;
  switch (policy_) {
    case QueuePolicy::fifo:
      e = list_.front();
      list_.pop_front();
      break;
    case QueuePolicy::lifo:
      e = list_.back();
      list_.pop_back();
      break;
    default: {
      auto it = ordered_.begin();
      e = {std::get<1>(*it), std::get<2>(*it)};
      ordered_.erase(it);
    }
  }
  member_[slot(e)] = 0;
  --size_;
  return e;
}

PCResult path_consistency(IANetwork& net, const PCConfig& cfg, Trail* trail) {
  return Propagator(net, cfg, trail).run_full();
}

PCResult incremental_path_consistency(IANetwork& net, EdgeRef changed, const PCConfig& cfg,
                                      Trail* trail) {
  return Propagator(net, cfg, trail).run_incremental(changed);
}

std::int64_t edge_heuristic(const IANetwork& net, EdgeRef e, HeuristicKind kind, simd::Isa isa) {
  switch (kind) {
    case HeuristicKind::weight:
      return weight(net.at(e));
    case HeuristicKind::cardinality:
      return net.at(e).size();
    case HeuristicKind::constrainedness: {
      // sum over k != i,j of w(C_ki) + w(C_jk); w(C_ki) = w'(C_ik) with w'
      // the inverse-permuted weights.
      const auto si = simd::weighted_bit_sum(isa, net.row(e.i), kInverseWeights);
      const auto sj = simd::weighted_bit_sum(isa, net.row(e.j), kWeights);
      const std::int64_t eq_w = kRelationWeights[index(Rel::eq)];
      return static_cast<std::int64_t>(si + sj) - 2 * eq_w - 2 * weight(net.at(e.j, e.i));
    }
  }
  return 0;
}

std::string_view name(CompositionMethod m) {
  switch (m) {
    case CompositionMethod::pairwise: return "pairwise";
    case CompositionMethod::split: return "split";
    case CompositionMethod::vector: return "vector";
  }
  return "?";
}

std::string_view name(QueuePolicy q) {
  switch (q) {
    case QueuePolicy::fifo: return "fifo";
    case QueuePolicy::lifo: return "lifo";
    case QueuePolicy::weight: return "weight";
    case QueuePolicy::cardinality: return "card";
    case QueuePolicy::constrainedness: return "constr";
  }
  return "?";
}

std::string to_string(SkipSet s) {
  std::string out;
  for (auto [on, c] : {std::pair{s.a, 'a'}, {s.b, 'b'}, {s.c, 'c'}}) {
    if (!on) continue;
    if (!out.empty()) out += ',';
    out += c;
  }
  return out.empty() ? "none" : out;
}

CompositionMethod parse_composition_method(std::string_view s) {
  if (s == "pairwise") return CompositionMethod::pairwise;
  if (s == "split") return CompositionMethod::split;
  if (s == "vector") return CompositionMethod::vector;
  throw std::invalid_argument("unknown composition method '" + std::string(s) + "'");
}

QueuePolicy parse_queue_policy(std::string_view s) {
  if (s == "fifo") return QueuePolicy::fifo;
  if (s == "lifo") return QueuePolicy::lifo;
  if (s == "weight") return QueuePolicy::weight;
  if (s == "card") return QueuePolicy::cardinality;
  if (s == "constr") return QueuePolicy::constrainedness;
  throw std::invalid_argument("unknown queue policy '" + std::string(s) + "'");
}

SkipSet parse_skip_set(std::string_view s) {
  SkipSet out;
  if (s == "none") return out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = s.find(',', pos);
    const std::string_view item = s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos);
    if (item == "a") out.a = true;
    else if (item == "b") out.b = true;
    else if (item == "c") out.c = true;
    else throw std::invalid_argument("unknown skip technique '" + std::string(item) + "'");
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace ia
