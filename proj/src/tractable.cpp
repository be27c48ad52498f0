#include "ia/tractable.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>
#include <string>

namespace ia {

std::string_view name(Decomposition d) {
  switch (d) {
    case Decomposition::si: return "si";
    case Decomposition::sa: return "sa";
    case Decomposition::nb: return "nb";
  }
  return "?";
}

Decomposition parse_decomposition(std::string_view s) {
  if (s == "si") return Decomposition::si;
  if (s == "sa") return Decomposition::sa;
  if (s == "nb") return Decomposition::nb;
  throw std::invalid_argument("unknown decomposition method '" + std::string(s) + "'");
}

namespace {

constexpr std::uint8_t point_bit(PointRel p) {
  return static_cast<std::uint8_t>(1u << static_cast<int>(p));
}

void require_nonempty(Label x) {
  if (x.empty()) throw std::invalid_argument("empty label");
}

// Among equal-size candidates prefer the one holding the lowest relation
// where they differ.
bool preferred(std::uint16_t a, std::uint16_t b) {
  const auto diff = static_cast<std::uint16_t>(a ^ b);
  return (a & diff & (~diff + 1u)) != 0;
}

std::vector<Label> greedy_partition(std::uint16_t x, const LabelSet& members) {
  std::vector<Label> out;
  std::uint16_t rest = x;
  while (rest != 0) {
    std::uint16_t best = 0;
    int best_size = 0;
    for (std::uint16_t s = rest; s != 0; s = static_cast<std::uint16_t>((s - 1) & rest)) {
      if (!members[s]) continue;
      const int size = std::popcount(s);
      if (size > best_size || (size == best_size && preferred(s, best))) {
        best = s;
        best_size = size;
      }
    }
    // Singletons are always members, so best is nonzero.
    out.emplace_back(best);
    rest &= static_cast<std::uint16_t>(~best);
  }
  return out;
}

}  // namespace

EndpointConstraintForm endpoint_form(Label x) {
  EndpointConstraintForm form;
  for (Rel r : x) {
    const auto sig = endpoint_signature(r);
    for (int p = 0; p < 4; ++p) form.allowed[p] |= point_bit(sig[p]);
  }
  return form;
}

Label labels_satisfying(const EndpointConstraintForm& form) {
  Label out;
  for (Rel r : kAllRels) {
    const auto sig = endpoint_signature(r);
    bool fits = true;
    for (int p = 0; p < 4; ++p) fits = fits && (form.allowed[p] & point_bit(sig[p])) != 0;
    if (fits) out |= Label::of(r);
  }
  return out;
}

LabelSet build_sa_table() {
  LabelSet sa;
  for (int x = 1; x < kLabelCount; ++x) {
    const Label l(static_cast<std::uint16_t>(x));
    if (labels_satisfying(endpoint_form(l)) == l) sa.set(x);
  }
  return sa;
}

LabelSet build_nb_table() {
  // Every ORD-Horn clause over the four endpoint pairs, as the set of basic
  // relations satisfying it. Pairs within one interval are fixed by A- < A+
  // and contribute only trivially true or false literals.
  enum class Positive { le, ge, eq };
  auto holds = [](PointRel p, Positive lit) {
    switch (lit) {
      case Positive::le: return p != PointRel::gt;
      case Positive::ge: return p != PointRel::lt;
      case Positive::eq: return p == PointRel::eq;
    }
    return false;
  };
  std::vector<std::uint16_t> clauses;
  for (int neq = 0; neq < 16; ++neq)
    for (int pos = -1; pos < 12; ++pos) {
      std::uint16_t sat = 0;
      for (Rel r : kAllRels) {
        const auto sig = endpoint_signature(r);
        bool ok = false;
        for (int p = 0; p < 4; ++p)
          if ((neq >> p & 1) && sig[p] != PointRel::eq) ok = true;
        if (pos >= 0 && holds(sig[pos / 3], static_cast<Positive>(pos % 3))) ok = true;
        if (ok) sat |= Label::of(r).bits();
      }
      clauses.push_back(sat);
    }
  std::sort(clauses.begin(), clauses.end());
  clauses.erase(std::unique(clauses.begin(), clauses.end()), clauses.end());

  // Close {I} under intersection with clauses.
  LabelSet nb;
  nb.set(kAllBits);
  std::vector<std::uint16_t> frontier{kAllBits};
  while (!frontier.empty()) {
    std::vector<std::uint16_t> next;
    for (std::uint16_t h : frontier)
      for (std::uint16_t c : clauses) {
        const auto y = static_cast<std::uint16_t>(h & c);
        if (y != 0 && !nb[y]) {
          nb.set(y);
          next.push_back(y);
        }
      }
    frontier = std::move(next);
  }
  return nb;
}

DecompositionCatalog DecompositionCatalog::build() {
  DecompositionCatalog cat;
  cat.sa_ = build_sa_table();
  cat.nb_ = build_nb_table();
  LabelSet singletons;
  for (int r = 0; r < kRelCount; ++r) singletons.set(1u << r);

  auto fill = [](Blocks& b, const LabelSet& members) {
    b.offset.assign(kLabelCount + 1, 0);
    b.flat.clear();
    for (int x = 0; x < kLabelCount; ++x) {
      b.offset[x] = static_cast<std::uint32_t>(b.flat.size());
      if (x == 0) continue;
      for (Label l : greedy_partition(static_cast<std::uint16_t>(x), members))
        b.flat.push_back(l);
    }
    b.offset[kLabelCount] = static_cast<std::uint32_t>(b.flat.size());
  };
  fill(cat.si_, singletons);
  fill(cat.sa_blocks_, cat.sa_);
  fill(cat.nb_blocks_, cat.nb_);
  return cat;
}

const DecompositionCatalog::Blocks& DecompositionCatalog::storage(Decomposition d) const {
  switch (d) {
    case Decomposition::si: return si_;
    case Decomposition::sa: return sa_blocks_;
    case Decomposition::nb: return nb_blocks_;
  }
  return si_;
}

bool DecompositionCatalog::member(Label x, Decomposition d) const {
  switch (d) {
    case Decomposition::si: return x.is_singleton();
    case Decomposition::sa: return sa_member(x);
    case Decomposition::nb: return nb_member(x);
  }
  return false;
}

std::span<const Label> DecompositionCatalog::blocks(Label x, Decomposition d) const {
  const Blocks& b = storage(d);
  const auto from = b.offset[x.bits()], to = b.offset[x.bits() + 1u];
  return {b.flat.data() + from, to - from};
}

void DecompositionCatalog::dump(std::ostream& out) const {
  out << "# label sa nb | si blocks | sa blocks | nb blocks\n";
  auto write_blocks = [&](Label x, Decomposition d) {
    bool first = true;
    for (Label b : blocks(x, d)) {
      out << (first ? "" : " ") << '{' << to_string(b) << '}';
      first = false;
    }
  };
  for (int x = 1; x < kLabelCount; ++x) {
    const Label l(static_cast<std::uint16_t>(x));
    out << to_string(l) << ' ' << sa_member(l) << ' ' << nb_member(l) << " | ";
    write_blocks(l, Decomposition::si);
    out << " | ";
    write_blocks(l, Decomposition::sa);
    out << " | ";
    write_blocks(l, Decomposition::nb);
    out << '\n';
  }
}

const DecompositionCatalog& catalog() {
  static const DecompositionCatalog instance = DecompositionCatalog::build();
  return instance;
}

bool is_pointizable(Label x) {
  require_nonempty(x);
  return catalog().sa_member(x);
}

bool is_ord_horn(Label x) {
  require_nonempty(x);
  return catalog().nb_member(x);
}

std::vector<Label> decompose(Label x, Decomposition d, const DecompositionCatalog& cat) {
  require_nonempty(x);
  const auto b = cat.blocks(x, d);
  return {b.begin(), b.end()};
}

}  // namespace ia
