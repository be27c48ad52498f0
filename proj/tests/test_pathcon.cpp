#include <doctest.h>

#include <random>

#include "ia/generate.hpp"
#include "ia/pathcon.hpp"
#include "oracles.hpp"

using namespace ia;

namespace {

// Naive fixpoint over all triples with the oracle table.
bool reference_closure(IANetwork& net) {
  static const auto table = [] {
    std::array<std::array<Label, kRelCount>, kRelCount> t{};
    for (Rel a : kAllRels)
      for (Rel b : kAllRels) t[index(a)][index(b)] = oracle::compose(a, b);
    return t;
  }();
  auto comp = [&](Label x, Label y) {
    Label out;
    for (Rel a : x)
      for (Rel b : y) out |= table[index(a)][index(b)];
    return out;
  };
  const int n = net.size();
  for (bool changed = true; changed;) {
    changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          if (i == j || j == k || i == k) continue;
          const Label t = net.at(i, j) & comp(net.at(i, k), net.at(k, j));
          if (t != net.at(i, j)) {
            if (t.empty()) return false;
            net.set(i, j, t);
            changed = true;
          }
        }
  }
  return true;
}

std::vector<PCConfig> all_configs() {
  std::vector<PCConfig> out;
  for (auto m : {CompositionMethod::pairwise, CompositionMethod::split, CompositionMethod::vector})
    for (int s = 0; s < 8; ++s)
      for (auto q : {QueuePolicy::fifo, QueuePolicy::lifo, QueuePolicy::weight,
                     QueuePolicy::cardinality, QueuePolicy::constrainedness}) {
        PCConfig c;
        c.method = m;
        c.skip = {(s & 1) != 0, (s & 2) != 0, (s & 4) != 0};
        c.queue = q;
        c.shadow_check = true;
        out.push_back(c);
      }
  return out;
}

IANetwork small_instance(std::uint64_t seed, int n) {
  GeneratorConfig g;
  g.model = Model::S;
  g.n = n;
  g.p = {1, 2};
  g.seed = seed;
  g.embed = seed % 3 != 0;
  return gen_s(g);
}

}  // namespace

TEST_CASE("blocks world closure") {
  IANetwork net = blocks_world();
  const PCResult r = path_consistency(net, {});
  CHECK(r.consistent);
  CHECK(net.at(net.find("Stack(A,B)"), net.find("Goal")) == Label{Rel::b});
  IANetwork bad = blocks_world_inconsistent();
  CHECK_FALSE(path_consistency(bad, {}).consistent);
}

TEST_CASE("every configuration reaches the reference closure") {
  const auto configs = all_configs();
  CHECK(configs.size() == 120);
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const IANetwork input = small_instance(seed, 8);
    IANetwork ref = input;
    const bool ref_ok = reference_closure(ref);
    for (const PCConfig& c : configs) {
      IANetwork net = input;
      const PCResult r = path_consistency(net, c);
      CAPTURE(seed);
      CAPTURE(name(c.method));
      CAPTURE(to_string(c.skip));
      CAPTURE(name(c.queue));
      REQUIRE(r.consistent == ref_ok);
      if (ref_ok) REQUIRE(net == ref);
      CHECK(r.stats.shadow_violations == 0);
      CHECK(validate(net).size() == (ref_ok ? 0u : validate(net).size()));
    }
  }
}

TEST_CASE("scalar and avx2 propagation agree, counters included") {
  if (!simd::supported(simd::Isa::avx2)) return;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const IANetwork input = small_instance(seed, 40);
    for (int s = 0; s < 8; ++s) {
      PCConfig a;
      a.method = CompositionMethod::vector;
      a.skip = {(s & 1) != 0, (s & 2) != 0, (s & 4) != 0};
      a.isa = simd::Isa::scalar;
      PCConfig b = a;
      b.isa = simd::Isa::avx2;
      IANetwork x = input, y = input;
      const PCResult rx = path_consistency(x, a);
      const PCResult ry = path_consistency(y, b);
      REQUIRE(rx.consistent == ry.consistent);
      REQUIRE(x == y);
      REQUIRE(rx.stats == ry.stats);
    }
  }
}

TEST_CASE("skip counters partition the work") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const IANetwork input = small_instance(seed * 7, 15);
    for (auto m : {CompositionMethod::pairwise, CompositionMethod::split, CompositionMethod::vector}) {
      PCConfig none;
      none.method = m;
      PCConfig bc = none;
      bc.skip = {false, true, true};
      IANetwork x = input, y = input;
      const PCResult rx = path_consistency(x, none);
      const PCResult ry = path_consistency(y, bc);
      CHECK(x == y);
      CHECK(rx.stats.skipped_b + rx.stats.skipped_c == 0);
      // Same queue trajectory: skipped compositions never tighten anything.
      CHECK(rx.stats.iterations == ry.stats.iterations);
      CHECK(rx.stats.compositions ==
            ry.stats.compositions + ry.stats.skipped_b + ry.stats.skipped_c);
    }
  }
}

TEST_CASE("skip a accounts for unseeded edges") {
  IANetwork net(6);
  PCConfig c;
  c.skip = {true, false, false};
  const PCResult r = path_consistency(net, c);
  CHECK(r.consistent);
  CHECK(r.stats.compositions == 0);
  CHECK(r.stats.enqueues == 0);
  CHECK(r.stats.skipped_a == 15 * 2 * 4);
  IANetwork net2(6);
  const PCResult r2 = path_consistency(net2, {});
  CHECK(r2.stats.compositions == 15 * 2 * 4);
}

TEST_CASE("incremental propagation matches a full rerun and the trail undoes it") {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    IANetwork net = small_instance(seed, 12);
    if (!path_consistency(net, {}).consistent) continue;
    const IANetwork before = net;
    const int i = static_cast<int>(rng() % 11);
    const int j = i + 1 + static_cast<int>(rng() % (11 - i));
    const Label cur = net.at(i, j);
    const Label narrowed = Label::of(*cur.begin());
    for (auto m : {CompositionMethod::pairwise, CompositionMethod::split, CompositionMethod::vector}) {
      PCConfig c;
      c.method = m;
      c.skip = SkipSet::all();
      IANetwork inc = before, full = before;
      Trail trail;
      trail.push_back({i, j, inc.at(i, j).bits()});
      inc.set(i, j, narrowed);
      full.set(i, j, narrowed);
      const PCResult ri = incremental_path_consistency(inc, {i, j}, c, &trail);
      const PCResult rf = path_consistency(full, c);
      REQUIRE(ri.consistent == rf.consistent);
      if (ri.consistent) CHECK(inc == full);
      while (!trail.empty()) {
        inc.set(trail.back().i, trail.back().j, Label(trail.back().previous));
        trail.pop_back();
      }
      CHECK(inc == before);
    }
  }
}

TEST_CASE("queue keeps edges unique and ordered") {
  IANetwork net(5);
  net.set(0, 1, {Rel::b});
  net.set(2, 3, {Rel::b, Rel::m, Rel::o});
  EdgeQueue q(5, QueuePolicy::cardinality);
  CHECK(q.push({2, 3}, net));
  CHECK(q.push({0, 1}, net));
  CHECK(q.push({1, 4}, net));
  CHECK_FALSE(q.push({0, 1}, net));
  CHECK(q.size() == 3);
  CHECK(q.pop() == EdgeRef{0, 1});
  CHECK(q.pop() == EdgeRef{2, 3});
  CHECK(q.pop() == EdgeRef{1, 4});
  CHECK(q.empty());

  EdgeQueue f(5, QueuePolicy::fifo), l(5, QueuePolicy::lifo);
  for (EdgeRef e : {EdgeRef{0, 2}, EdgeRef{1, 3}}) {
    f.push(e, net);
    l.push(e, net);
  }
  CHECK(f.pop() == EdgeRef{0, 2});
  CHECK(l.pop() == EdgeRef{1, 3});
}

TEST_CASE("heuristic values") {
  IANetwork net(3);
  CHECK(edge_heuristic(net, {0, 1}, HeuristicKind::constrainedness) == 68);
  CHECK(edge_heuristic(net, {0, 1}, HeuristicKind::weight) == 34);
  CHECK(edge_heuristic(net, {0, 1}, HeuristicKind::cardinality) == 13);
  if (simd::supported(simd::Isa::avx2))
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const IANetwork s = small_instance(seed, 30);
      for (int i = 0; i < 30; ++i)
        for (int j = i + 1; j < 30; j += 3)
          CHECK(edge_heuristic(s, {i, j}, HeuristicKind::constrainedness, simd::Isa::scalar) ==
                edge_heuristic(s, {i, j}, HeuristicKind::constrainedness, simd::Isa::avx2));
    }
}

TEST_CASE("option parsing") {
  CHECK(parse_skip_set("none") == SkipSet::none());
  CHECK(parse_skip_set("a,c") == SkipSet{true, false, true});
  CHECK(to_string(SkipSet::all()) == "a,b,c");
  CHECK(to_string(SkipSet::none()) == "none");
  CHECK(parse_queue_policy("constr") == QueuePolicy::constrainedness);
  CHECK(parse_queue_policy("card") == QueuePolicy::cardinality);
  CHECK(parse_composition_method("pairwise") == CompositionMethod::pairwise);
  CHECK_THROWS(parse_skip_set("d"));
  CHECK_THROWS(parse_queue_policy("heap"));
  CHECK_THROWS(parse_composition_method("fast"));
}
