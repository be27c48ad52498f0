#include "ia/search.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ia/algebra.hpp"

namespace ia {

std::string_view name(Verdict v) {
  switch (v) {
    case Verdict::consistent: return "consistent";
    case Verdict::inconsistent: return "inconsistent";
    case Verdict::timeout: return "timeout";
  }
  return "?";
}

std::string_view name(VarKey k) {
  switch (k) {
    case VarKey::cardinality: return "card";
    case VarKey::constrainedness: return "constr";
    case VarKey::weight: return "weight";
  }
  return "?";
}

std::vector<VarKey> parse_var_order(std::string_view s) {
  std::vector<VarKey> keys;
  if (s == "none") return keys;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = s.find(',', pos);
    const auto item = s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos);
    VarKey k;
    if (item == "card") k = VarKey::cardinality;
    else if (item == "constr") k = VarKey::constrainedness;
    else if (item == "weight") k = VarKey::weight;
    else throw std::invalid_argument("unknown ordering key '" + std::string(item) + "'");
    if (std::find(keys.begin(), keys.end(), k) != keys.end())
      throw std::invalid_argument("repeated ordering key '" + std::string(item) + "'");
    keys.push_back(k);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return keys;
}

std::string to_string(const std::vector<VarKey>& keys) {
  if (keys.empty()) return "none";
  std::string out;
  for (VarKey k : keys) {
    if (!out.empty()) out += ',';
    out += name(k);
  }
  return out;
}

FrequencyTable FrequencyTable::standard() {
  FrequencyTable t;
  auto put = [&](Rel a, std::uint64_t v) {
    t.score[index(a)] = v;
    t.score[index(inverse(a))] = v;
  };
  put(Rel::b, 1900);
  put(Rel::d, 240);
  put(Rel::o, 220);
  put(Rel::eq, 53);
  put(Rel::m, 20);
  put(Rel::f, 15);
  put(Rel::s, 14);
  return t;
}

std::uint64_t FrequencyTable::block_score(Label x) const {
  std::uint64_t s = 0;
  for (Rel r : x) s += score[index(r)];
  return s;
}

FrequencyTable FrequencyTable::parse(std::istream& in) {
  FrequencyTable t;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string rel;
    if (!(ls >> rel) || rel.starts_with("#")) continue;
    long long v = -1;
    std::string extra;
    if (!(ls >> v) || v < 0 || (ls >> extra))
      throw ParseError(line, "expected '<relation> <non-negative score>'");
    const auto r = parse_rel(rel);
    if (!r) throw ParseError(line, "unknown relation '" + rel + "'");
    t.score[index(*r)] = static_cast<std::uint64_t>(v);
  }
  return t;
}

FrequencyTable FrequencyTable::read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse(in);
}

void FrequencyTable::write(std::ostream& out) const {
  for (Rel r : kAllRels) out << name(r) << ' ' << score[index(r)] << '\n';
}

std::vector<EdgeRef> order_variables(const IANetwork& net, const SearchConfig& cfg) {
  const int n = net.size();
  struct Keyed {
    EdgeRef e;
    std::array<std::int64_t, 3> key;
  };
  std::vector<Keyed> edges;
  edges.reserve(net.edge_count());
  const auto& cat = catalog();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Keyed k{{i, j}, {0, 0, 0}};
      for (std::size_t p = 0; p < cfg.var_order.size() && p < 3; ++p) {
        const Label x = net.at(i, j);
        switch (cfg.var_order[p]) {
          case VarKey::cardinality:
            k.key[p] = x.empty() ? 0 : cat.block_count(x, cfg.method);
            break;
          case VarKey::constrainedness:
            k.key[p] = edge_heuristic(net, {i, j}, HeuristicKind::constrainedness, cfg.pc.isa);
            break;
          case VarKey::weight:
            k.key[p] = weight(x);
            break;
        }
      }
      edges.push_back(k);
    }
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Keyed& a, const Keyed& b) { return a.key < b.key; });
  std::vector<EdgeRef> out;
  out.reserve(edges.size());
  for (const auto& k : edges) out.push_back(k.e);
  return out;
}

std::vector<Label> order_values(std::vector<Label> blocks, const SearchConfig& cfg) {
  if (cfg.value_ordering)
    std::stable_sort(blocks.begin(), blocks.end(), [&](Label a, Label b) {
      return cfg.frequencies.block_score(a) > cfg.frequencies.block_score(b);
    });
  return blocks;
}

namespace {

using Clock = std::chrono::steady_clock;

void undo_to(IANetwork& net, Trail& trail, std::size_t mark) {
  while (trail.size() > mark) {
    const TrailEntry& t = trail.back();
    net.set(t.i, t.j, Label(t.previous));
    trail.pop_back();
  }
}

}  // namespace

SearchResult backtrack_solve(IANetwork net, const SearchConfig& cfg) {
  if (!(cfg.timeout_seconds > 0)) throw std::invalid_argument("timeout must be positive");
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(cfg.timeout_seconds));
  SearchResult res;
  auto& st = res.stats;
  auto finish = [&](Verdict v) {
    res.verdict = v;
    st.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    res.solution = std::move(net);
    return std::move(res);
  };

  const PCResult pre = path_consistency(net, cfg.pc);
  st.pc += pre.stats;
  if (!pre.consistent) {
    st.decided_by_preprocessing = true;
    return finish(Verdict::inconsistent);
  }

  const std::vector<EdgeRef> order = order_variables(net, cfg);
  const auto& cat = catalog();

  struct Frame {
    std::vector<Label> values;
    std::size_t next = 0;
    std::size_t mark = 0;
    bool decided = false;
  };
  std::vector<Frame> frames(order.size());
  Trail trail;
  std::size_t depth = 0;
  bool descending = true;

  auto retreat = [&]() -> bool {
    std::size_t d = depth;
    while (d > 0) {
      --d;
      if (frames[d].decided) {
        depth = d;
        undo_to(net, trail, frames[d].mark);
        ++st.backtracks;
        if (cfg.observer) cfg.observer->after_undo(net, d);
        return true;
      }
    }
    return false;
  };

  for (;;) {
    if (Clock::now() > deadline) return finish(Verdict::timeout);
    if (depth == order.size()) return finish(Verdict::consistent);
    Frame& f = frames[depth];
    const EdgeRef e = order[depth];

    if (descending) {
      const auto blocks = cat.blocks(net.at(e), cfg.method);
      if (blocks.size() == 1) {
        f.decided = false;
        ++depth;
        continue;
      }
      f.values = order_values({blocks.begin(), blocks.end()}, cfg);
      f.next = 0;
      f.decided = true;
      ++st.branching_edges;
    }

    if (f.next == f.values.size()) {
      if (!retreat()) return finish(Verdict::inconsistent);
      descending = false;
      continue;
    }

    const Label value = f.values[f.next++];
    if (cfg.observer) cfg.observer->before_decision(net, depth);
    f.mark = trail.size();
    ++st.nodes;
    trail.push_back({e.i, e.j, net.at(e).bits()});
    net.set(e, value);
    const PCResult fc = incremental_path_consistency(net, e, cfg.pc, &trail);
    st.pc += fc.stats;
    st.trail_peak = std::max<std::uint64_t>(st.trail_peak, trail.size());
    if (!fc.consistent) {
      undo_to(net, trail, f.mark);
      ++st.backtracks;
      if (cfg.observer) cfg.observer->after_undo(net, depth);
      descending = false;
      continue;
    }
    ++depth;
    descending = true;
  }
}

BigInt search_space_size(const IANetwork& net, Decomposition method) {
  BigInt product = 1;
  const auto& cat = catalog();
  for (int i = 0; i < net.size(); ++i)
    for (int j = i + 1; j < net.size(); ++j) {
      const Label x = net.at(i, j);
      product *= x.empty() ? 0 : cat.block_count(x, method);
    }
  return product;
}

Scenario::Scenario(IANetwork net) : net_(std::move(net)) {
  for (int i = 0; i < net_.size(); ++i)
    for (int j = i + 1; j < net_.size(); ++j)
      if (!net_.at(i, j).is_singleton())
        throw std::invalid_argument("scenario edge (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") is not a single relation");
}

Scenario extract_scenario(const IANetwork& solved, Decomposition method) {
  (void)method;
  const auto& cat = catalog();
  bool pointizable = true;
  for (int i = 0; i < solved.size() && pointizable; ++i)
    for (int j = i + 1; j < solved.size(); ++j)
      if (!cat.sa_member(solved.at(i, j))) {
        pointizable = false;
        break;
      }

  auto refine = [&] {
    SearchConfig cfg;
    cfg.method = Decomposition::si;
    cfg.timeout_seconds = 1e9;
    SearchResult r = backtrack_solve(solved, cfg);
    if (r.verdict != Verdict::consistent)
      throw std::logic_error("solved network has no scenario");
    return Scenario(std::move(r.solution));
  };
  if (!pointizable) return refine();

  IntervalAssignment a;
  try {
    a = realize(solved);
  } catch (const std::logic_error&) {
    return refine();
  }
  IANetwork out(solved.size());
  for (std::size_t v = 0; v < solved.names().size(); ++v)
    out.set_name(static_cast<int>(v), solved.names()[v]);
  for (int i = 0; i < solved.size(); ++i)
    for (int j = i + 1; j < solved.size(); ++j) {
      const Interval& x = a.intervals[i];
      const Interval& y = a.intervals[j];
      out.set(i, j, Label::of(relation_between(x.start, x.end, y.start, y.end)));
    }
  return Scenario(std::move(out));
}

bool verify_assignment(const IANetwork& net, const IntervalAssignment& a) {
  const int n = net.size();
  if (a.intervals.size() != static_cast<std::size_t>(n)) return false;
  for (const Interval& x : a.intervals)
    if (!(x.start < x.end)) return false;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Interval& x = a.intervals[i];
      const Interval& y = a.intervals[j];
      if (!net.at(i, j).contains(relation_between(x.start, x.end, y.start, y.end))) return false;
    }
  return true;
}

void write_intervals(const IntervalAssignment& a, std::ostream& out) {
  for (std::size_t v = 0; v < a.intervals.size(); ++v) {
    const Interval& x = a.intervals[v];
    out << v << ' ' << x.start.numerator() << '/' << x.start.denominator() << ' '
        << x.end.numerator() << '/' << x.end.denominator() << '\n';
  }
}

namespace {

Rational parse_rational(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const auto slash = s.find('/');
    const long long num = std::stoll(s.substr(0, slash), &used);
    if (used != (slash == std::string::npos ? s.size() : slash)) throw std::invalid_argument(s);
    long long den = 1;
    if (slash != std::string::npos) {
      den = std::stoll(s.substr(slash + 1), &used);
      if (used != s.size() - slash - 1 || den == 0) throw std::invalid_argument(s);
    }
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw ParseError(line, "malformed rational '" + s + "'");
  }
}

}  // namespace

IntervalAssignment read_intervals(std::istream& in) {
  IntervalAssignment a;
  std::string raw;
  std::size_t line = 0;
  std::vector<bool> seen;
  while (std::getline(in, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string first;
    if (!(ls >> first) || first.starts_with("#")) continue;
    std::string s, e, extra;
    if (!(ls >> s >> e) || (ls >> extra)) throw ParseError(line, "expected '<index> <start> <end>'");
    long long v = -1;
    try {
      std::size_t used = 0;
      v = std::stoll(first, &used);
      if (used != first.size() || v < 0) throw std::invalid_argument(first);
    } catch (const std::logic_error&) {
      throw ParseError(line, "malformed vertex index '" + first + "'");
    }
    if (a.intervals.size() <= static_cast<std::size_t>(v)) {
      a.intervals.resize(v + 1);
      seen.resize(v + 1);
    }
    if (seen[v]) throw ParseError(line, "duplicate interval for vertex " + first);
    seen[v] = true;
    a.intervals[v] = {parse_rational(s, line), parse_rational(e, line)};
  }
  for (std::size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) throw ParseError(0, "missing interval for vertex " + std::to_string(v));
  return a;
}

}  // namespace ia
