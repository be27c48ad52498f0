#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "ia/network.hpp"
#include "ia/search.hpp"

namespace ia {

/// std::mt19937_64 seeded with the 64-bit seed. Bounded draws use rejection:
/// values below (2^64 - bound) mod bound are discarded, the rest reduced mod
/// bound, so streams are identical on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, bound); bound > 0.
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// Edge probability as an exact fraction num/den.
struct Probability {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  /// "NUM/DEN" or a bare integer (0 or 1).
  static Probability parse(std::string_view s);
  std::string to_string() const;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Probability&) const = default;
};

enum class Model { B, S };
std::string_view name(Model m);

struct GeneratorConfig {
  Model model = Model::S;
  int n = 2;
  Probability p{1, 4};
  std::uint64_t seed = 0;
  double intersects = 0.06;
  double disjoint = 0.17;
  bool embed = true;  // S only: union the witness relation into each label
};

std::vector<Interval> random_intervals(int n, Rng& rng);
std::vector<Interval> random_intervals(int n, std::uint64_t seed);

IANetwork gen_b(const GeneratorConfig& cfg);
IANetwork gen_s(const GeneratorConfig& cfg);
/// Dispatches on cfg.model.
IANetwork generate(const GeneratorConfig& cfg);

/// The intervals gen_s embeds for this config (drawn after the labels).
std::vector<Interval> gen_s_witness(const GeneratorConfig& cfg);

}  // namespace ia
