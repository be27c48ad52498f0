#include "ia/generate.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace ia {

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("empty range");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

Probability Probability::parse(std::string_view s) {
  auto number = [&](std::string_view t) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
      throw std::invalid_argument("malformed probability '" + std::string(s) + "'");
    return v;
  };
  Probability p;
  const auto slash = s.find('/');
  if (slash == std::string_view::npos) {
    p.num = number(s);
  } else {
    p.num = number(s.substr(0, slash));
    p.den = number(s.substr(slash + 1));
  }
  if (p.den == 0 || p.num > p.den)
    throw std::invalid_argument("probability '" + std::string(s) + "' outside [0,1]");
  return p;
}

std::string Probability::to_string() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

std::string_view name(Model m) { return m == Model::B ? "B" : "S"; }

std::vector<Interval> random_intervals(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("need at least one interval");
  const std::uint64_t range = 4 * static_cast<std::uint64_t>(n) + 1;
  std::vector<Interval> out;
  out.reserve(n);
  for (int v = 0; v < n; ++v) {
    std::int64_t a, b;
    do {
      a = static_cast<std::int64_t>(rng.uniform_below(range));
      b = static_cast<std::int64_t>(rng.uniform_below(range));
    } while (a == b);
    if (b < a) std::swap(a, b);
    out.push_back({Rational(a), Rational(b)});
  }
  return out;
}

std::vector<Interval> random_intervals(int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_intervals(n, rng);
}

namespace {

void check(const GeneratorConfig& cfg, Model expected) {
  if (cfg.model != expected) throw std::invalid_argument("generator model mismatch");
  if (cfg.n < 2) throw std::invalid_argument("n must be at least 2");
}

Rel witness(const Interval& x, const Interval& y) {
  return relation_between(x.start, x.end, y.start, y.end);
}

// Draws every random choice of gen_s in its fixed order.
struct SDraw {
  IANetwork net;
  std::vector<Interval> intervals;
};

SDraw draw_s(const GeneratorConfig& cfg) {
  check(cfg, Model::S);
  if (cfg.p.den == 0 || cfg.p.num > cfg.p.den) throw std::invalid_argument("p outside [0,1]");
  Rng rng(cfg.seed);
  const int n = cfg.n;
  std::vector<EdgeRef> present;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform_below(cfg.p.den) < cfg.p.num) present.push_back({i, j});
  SDraw d{IANetwork(n), {}};
  for (EdgeRef e : present)
    d.net.set(e, Label(static_cast<std::uint16_t>(1 + rng.uniform_below(kAllBits))));
  d.intervals = random_intervals(n, rng);
  return d;
}

}  // namespace

IANetwork gen_s(const GeneratorConfig& cfg) {
  SDraw d = draw_s(cfg);
  if (cfg.embed)
    for (int i = 0; i < cfg.n; ++i)
      for (int j = i + 1; j < cfg.n; ++j)
        d.net.set(i, j, d.net.at(i, j) | Label::of(witness(d.intervals[i], d.intervals[j])));
  return std::move(d.net);
}

std::vector<Interval> gen_s_witness(const GeneratorConfig& cfg) {
  return draw_s(cfg).intervals;
}

IANetwork gen_b(const GeneratorConfig& cfg) {
  check(cfg, Model::B);
  if (cfg.intersects < 0 || cfg.disjoint < 0 || cfg.intersects + cfg.disjoint > 1)
    throw std::invalid_argument("fractions must lie in [0,1] and sum to at most 1");
  Rng rng(cfg.seed);
  const int n = cfg.n;
  const auto intervals = random_intervals(n, rng);
  std::vector<EdgeRef> meet, apart;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Rel r = witness(intervals[i], intervals[j]);
      (r == Rel::b || r == Rel::bi ? apart : meet).push_back({i, j});
    }
  const double pairs = static_cast<double>(n) * (n - 1) / 2;
  IANetwork net(n);
  auto retain = [&](std::vector<EdgeRef>& pool, double fraction, Label label, const char* kind) {
    const auto want = static_cast<std::size_t>(std::llround(fraction * pairs));
    if (want > pool.size())
      throw std::invalid_argument(std::string("need ") + std::to_string(want) + " " + kind +
                                  " pairs but only " + std::to_string(pool.size()) +
                                  " exist (short by " + std::to_string(want - pool.size()) + ")");
    for (std::size_t k = 0; k < want; ++k) {
      const std::size_t pick = k + rng.uniform_below(pool.size() - k);
      std::swap(pool[k], pool[pick]);
      net.set(pool[k], label);
    }
  };
  retain(meet, cfg.intersects, kIntersects, "intersects");
  retain(apart, cfg.disjoint, kDisjoint, "disjoint");
  return net;
}

IANetwork generate(const GeneratorConfig& cfg) {
  return cfg.model == Model::B ? gen_b(cfg) : gen_s(cfg);
}

}  // namespace ia
