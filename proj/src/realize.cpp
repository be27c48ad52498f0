#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "ia/search.hpp"

namespace ia {

namespace {

using PointGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;

struct PointConstraints {
  std::vector<std::pair<int, int>> le;      // a <= b
  std::vector<std::pair<int, int>> lt;      // a < b
  std::vector<std::pair<int, int>> differ;  // a != b
};

constexpr int start_of(int v) { return 2 * v; }
constexpr int end_of(int v) { return 2 * v + 1; }

PointConstraints translate(const IANetwork& net) {
  const auto& cat = catalog();
  PointConstraints pc;
  for (int v = 0; v < net.size(); ++v) pc.lt.emplace_back(start_of(v), end_of(v));
  for (int i = 0; i < net.size(); ++i)
    for (int j = i + 1; j < net.size(); ++j) {
      const Label x = net.at(i, j);
      if (x.empty()) throw std::invalid_argument("empty label on edge " + std::to_string(i) +
                                                 "," + std::to_string(j));
      if (!x.is_singleton() && !cat.sa_member(x))
        throw std::invalid_argument("label {" + to_string(x) + "} on edge " + std::to_string(i) +
                                    "," + std::to_string(j) + " is not pointizable");
      const auto form = endpoint_form(x);
      const int a[4] = {start_of(i), start_of(i), end_of(i), end_of(i)};
      const int b[4] = {start_of(j), end_of(j), start_of(j), end_of(j)};
      for (int p = 0; p < 4; ++p) {
        switch (form.allowed[p]) {
          case 1: pc.lt.emplace_back(a[p], b[p]); break;
          case 4: pc.lt.emplace_back(b[p], a[p]); break;
          case 2:
            pc.le.emplace_back(a[p], b[p]);
            pc.le.emplace_back(b[p], a[p]);
            break;
          case 3: pc.le.emplace_back(a[p], b[p]); break;
          case 6: pc.le.emplace_back(b[p], a[p]); break;
          case 5: pc.differ.emplace_back(a[p], b[p]); break;
          default: break;
        }
      }
    }
  return pc;
}

}  // namespace

IntervalAssignment realize(const IANetwork& net) {
  const PointConstraints pc = translate(net);
  const int points = 2 * net.size();
  PointGraph g(points);
  for (auto [a, b] : pc.le) boost::add_edge(a, b, g);
  for (auto [a, b] : pc.lt) boost::add_edge(a, b, g);

  std::vector<int> comp(points);
  const int ncomp = points ? boost::strong_components(g, comp.data()) : 0;
  for (auto [a, b] : pc.lt)
    if (comp[a] == comp[b]) throw std::logic_error("strict endpoint cycle");
  for (auto [a, b] : pc.differ)
    if (comp[a] == comp[b]) throw std::logic_error("endpoints forced equal and distinct");

  // Topological order of the condensation. Among ready components, those
  // holding an end point go first so intervals close as early as allowed;
  // remaining ties by smallest member point.
  std::vector<int> rep(ncomp, 2 * points);
  for (int p = 0; p < points; ++p) rep[comp[p]] = std::min(rep[comp[p]], p);
  for (int p = 1; p < points; p += 2) rep[comp[p]] = std::min(rep[comp[p]], p - points);
  std::vector<std::vector<int>> succ(ncomp);
  std::vector<int> indeg(ncomp, 0);
  auto link = [&](int a, int b) {
    if (comp[a] == comp[b]) return;
    succ[comp[a]].push_back(comp[b]);
    ++indeg[comp[b]];
  };
  for (auto [a, b] : pc.le) link(a, b);
  for (auto [a, b] : pc.lt) link(a, b);

  using Item = std::pair<int, int>;  // (representative, component)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> ready;
  for (int c = 0; c < ncomp; ++c)
    if (indeg[c] == 0) ready.emplace(rep[c], c);
  std::vector<std::int64_t> rank(ncomp, -1);
  std::int64_t next = 0;
  while (!ready.empty()) {
    const int c = ready.top().second;
    ready.pop();
    rank[c] = next++;
    for (int d : succ[c])
      if (--indeg[d] == 0) ready.emplace(rep[d], d);
  }

  IntervalAssignment out;
  out.intervals.resize(net.size());
  for (int v = 0; v < net.size(); ++v)
    out.intervals[v] = {Rational(rank[comp[start_of(v)]]), Rational(rank[comp[end_of(v)]])};
  return out;
}

}  // namespace ia
