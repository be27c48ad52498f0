#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>

namespace ia {

/// The thirteen basic relations between two intervals. The enumerator value
/// is the bit index used by Label and by every file format.
enum class Rel : std::uint8_t { b, bi, m, mi, o, oi, s, si, d, di, f, fi, eq };

inline constexpr int kRelCount = 13;
inline constexpr std::uint16_t kAllBits = (1u << kRelCount) - 1;
inline constexpr int kLabelCount = 1 << kRelCount;

inline constexpr std::array<Rel, kRelCount> kAllRels = {
    Rel::b, Rel::bi, Rel::m, Rel::mi, Rel::o,  Rel::oi, Rel::s,
    Rel::si, Rel::d, Rel::di, Rel::f, Rel::fi, Rel::eq};

constexpr int index(Rel r) { return static_cast<int>(r); }
constexpr Rel rel_at(int i) { return static_cast<Rel>(i); }

// Relations come in (r, r^-1) pairs at bit positions (2k, 2k+1); eq is its
// own inverse.
constexpr Rel inverse(Rel r) {
  return r == Rel::eq ? r : rel_at(index(r) ^ 1);
}

std::string_view name(Rel r);
std::optional<Rel> parse_rel(std::string_view token);

/// Relation between two endpoints.
enum class PointRel : std::uint8_t { lt, eq, gt };

template <typename T>
constexpr PointRel compare_points(const T& x, const T& y) {
  return x < y ? PointRel::lt : (y < x ? PointRel::gt : PointRel::eq);
}

/// Endpoint semantics of a basic relation "A r B" as the four point
/// relations (A-,B-), (A-,B+), (A+,B-), (A+,B+).
using EndpointSignature = std::array<PointRel, 4>;
EndpointSignature endpoint_signature(Rel r);

/// Basic relation realised by intervals [a0,a1] and [b0,b1] (a0<a1, b0<b1).
template <typename T>
constexpr Rel relation_between(const T& a0, const T& a1, const T& b0,
                               const T& b1) {
  if (a1 < b0) return Rel::b;
  if (b1 < a0) return Rel::bi;
  if (a1 == b0) return Rel::m;
  if (b1 == a0) return Rel::mi;
  const PointRel s = compare_points(a0, b0);
  const PointRel e = compare_points(a1, b1);
  switch (s) {
    case PointRel::eq:
      return e == PointRel::eq ? Rel::eq : (e == PointRel::lt ? Rel::s : Rel::si);
    case PointRel::lt:
      return e == PointRel::eq ? Rel::fi : (e == PointRel::lt ? Rel::o : Rel::di);
    case PointRel::gt:
      return e == PointRel::eq ? Rel::f : (e == PointRel::lt ? Rel::d : Rel::oi);
  }
  return Rel::eq;
}

/// A set of basic relations, stored as a 13-bit mask.
class Label {
 public:
  class iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = Rel;
    using difference_type = std::ptrdiff_t;
    using pointer = void;
    using reference = Rel;

    constexpr iterator() = default;
    constexpr explicit iterator(std::uint16_t rest) : rest_(rest) {}
    constexpr Rel operator*() const { return rel_at(std::countr_zero(rest_)); }
    constexpr iterator& operator++() {
      rest_ &= static_cast<std::uint16_t>(rest_ - 1);
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    std::uint16_t rest_ = 0;
  };

  constexpr Label() = default;
  constexpr explicit Label(std::uint16_t bits) : bits_(bits & kAllBits) {}
  constexpr Label(std::initializer_list<Rel> rels) {
    for (Rel r : rels) bits_ |= bit(r);
  }

  static constexpr Label all() { return Label(kAllBits); }
  static constexpr Label none() { return Label(); }
  static constexpr Label of(Rel r) { return Label(bit(r)); }

  constexpr std::uint16_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool is_all() const { return bits_ == kAllBits; }
  constexpr bool is_singleton() const { return std::has_single_bit(bits_); }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(Rel r) const { return (bits_ & bit(r)) != 0; }
  constexpr bool subset_of(Label other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  /// Lowest-indexed member; label must be nonempty.
  constexpr Rel first() const { return rel_at(std::countr_zero(bits_)); }

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  constexpr Label operator&(Label o) const { return Label(bits_ & o.bits_); }
  constexpr Label operator|(Label o) const { return Label(bits_ | o.bits_); }
  constexpr Label operator-(Label o) const { return Label(bits_ & ~o.bits_); }
  constexpr Label& operator&=(Label o) { bits_ &= o.bits_; return *this; }
  constexpr Label& operator|=(Label o) { bits_ |= o.bits_; return *this; }
  constexpr bool operator==(const Label&) const = default;
  constexpr auto operator<=>(const Label&) const = default;

 private:
  static constexpr std::uint16_t bit(Rel r) {
    return static_cast<std::uint16_t>(1u << index(r));
  }
  std::uint16_t bits_ = 0;
};

constexpr std::uint16_t inverse_bits(std::uint16_t x) {
  return static_cast<std::uint16_t>(((x & 0x0555u) << 1) | ((x & 0x0AAAu) >> 1) |
                                    (x & 0x1000u));
}
constexpr Label inverse(Label x) { return Label(inverse_bits(x.bits())); }
constexpr Label intersect(Label x, Label y) { return x & y; }
constexpr int cardinality(Label x) { return x.size(); }

/// "b,m,o"; the full set prints as "I" and the empty set as "{}".
std::string to_string(Label x);
/// Inverse of to_string; also accepts the literal "I". Returns nullopt on an
/// unknown token or an empty list.
std::optional<Label> parse_label(std::string_view text);

/// Labels of the intersects/disjoint vocabulary.
inline constexpr Label kDisjoint{Rel::b, Rel::bi};
inline constexpr Label kIntersects = Label::all() - kDisjoint;

}  // namespace ia
