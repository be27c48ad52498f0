#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "ia/relation.hpp"

namespace ia {

/// How a label is split into backtracking values: singletons (SI), maximal
/// pointizable blocks (SA) or maximal ORD-Horn blocks (NB).
enum class Decomposition { si, sa, nb };

std::string_view name(Decomposition d);
Decomposition parse_decomposition(std::string_view s);

/// Projection of a label onto the four endpoint pairs (A-,B-), (A-,B+),
/// (A+,B-), (A+,B+). Each entry is a mask over {lt=1, eq=2, gt=4}.
struct EndpointConstraintForm {
  std::array<std::uint8_t, 4> allowed{};
  bool operator==(const EndpointConstraintForm&) const = default;
};

EndpointConstraintForm endpoint_form(Label x);
/// All basic relations whose endpoint signature fits the form.
Label labels_satisfying(const EndpointConstraintForm& form);

using LabelSet = std::bitset<kLabelCount>;

/// Labels expressible as a conjunction of point relations between endpoints.
LabelSet build_sa_table();
/// Labels expressible as a conjunction of ORD-Horn clauses over endpoints,
/// i.e. clauses x1!=y1 v ... v xk!=yk v (x0 R y0) with R in {<=, =} and at
/// most one positive literal.
LabelSet build_nb_table();

/// Precomputed decompositions and class membership for all 8192 labels.
class DecompositionCatalog {
 public:
  static DecompositionCatalog build();

  bool sa_member(Label x) const { return sa_[x.bits()]; }
  bool nb_member(Label x) const { return nb_[x.bits()]; }
  bool member(Label x, Decomposition d) const;

  std::span<const Label> blocks(Label x, Decomposition d) const;
  int block_count(Label x, Decomposition d) const {
    return static_cast<int>(blocks(x, d).size());
  }

  const LabelSet& sa_table() const { return sa_; }
  const LabelSet& nb_table() const { return nb_; }

  /// One line per nonempty label: flags and the three decompositions.
  void dump(std::ostream& out) const;

 private:
  struct Blocks {
    std::vector<std::uint32_t> offset;  // kLabelCount + 1
    std::vector<Label> flat;
  };
  const Blocks& storage(Decomposition d) const;

  LabelSet sa_, nb_;
  Blocks si_, sa_blocks_, nb_blocks_;
};

const DecompositionCatalog& catalog();

/// Throws std::invalid_argument for the empty label.
bool is_pointizable(Label x);
bool is_ord_horn(Label x);

/// Partition of x into blocks of the chosen class: repeatedly remove a
/// largest member subset of what remains, preferring the subset holding the
/// lowest-indexed relation among equal sizes. Throws on the empty label.
std::vector<Label> decompose(Label x, Decomposition d,
                             const DecompositionCatalog& cat = catalog());

}  // namespace ia
