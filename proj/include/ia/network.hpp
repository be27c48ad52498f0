#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ia/relation.hpp"

namespace ia {

struct EdgeRef {
  int i = 0;
  int j = 0;
  bool operator==(const EdgeRef&) const = default;
  auto operator<=>(const EdgeRef&) const = default;
};

/// Input error carrying the 1-based line it was detected on (0 when the
/// problem is not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Complete IA network over n vertices stored as a row-major n x n label
/// matrix. Every mutation writes both (i,j) and its inverse (j,i).
class IANetwork {
 public:
  IANetwork() = default;
  explicit IANetwork(int n);

  int size() const { return n_; }

  Label at(int i, int j) const { return Label(bits_[idx(i, j)]); }
  Label at(EdgeRef e) const { return at(e.i, e.j); }
  /// Sets (i,j) to x and (j,i) to inverse(x). Requires i != j.
  void set(int i, int j, Label x);
  void set(EdgeRef e, Label x) { set(e.i, e.j, x); }

  /// Row i of the raw matrix: bits of C(i,0..n-1).
  std::span<const std::uint16_t> row(int i) const {
    return {bits_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }
  std::span<std::uint16_t> mutable_row(int i) {
    return {bits_.data() + static_cast<std::size_t>(i) * n_, static_cast<std::size_t>(n_)};
  }
  /// Writes a single cell without mirroring; callers restore symmetry.
  void set_cell(int i, int j, std::uint16_t bits) { bits_[idx(i, j)] = bits; }

  /// Number of unordered edges i<j.
  std::size_t edge_count() const {
    return static_cast<std::size_t>(n_) * (n_ - 1) / 2;
  }

  /// Optional vertex names; empty when unnamed.
  const std::vector<std::string>& names() const { return names_; }
  void set_name(int v, std::string name);
  std::string display_name(int v) const;
  /// Index of the vertex with this name, or -1.
  int find(std::string_view name) const;

  /// 64-bit FNV-1a over the label matrix.
  std::uint64_t checksum() const;

  bool operator==(const IANetwork& o) const {
    return n_ == o.n_ && bits_ == o.bits_;
  }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * n_ + j;
  }
  int n_ = 0;
  std::vector<std::uint16_t> bits_;
  std::vector<std::string> names_;
};

/// Edge-list format: '#' comments, header "n <count>", then lines
/// "<i> <j> <rel>[,<rel>]*" with i<j. Lines "#@name <v> <token>" attach
/// vertex names and are plain comments to other readers.
IANetwork parse_network(std::istream& in);
IANetwork parse_network(std::string_view text);
/// Matrix format: header "matrix <count>", then count rows of 1/0/?
/// (intersects / disjoint / unknown).
IANetwork parse_matrix(std::istream& in);
IANetwork parse_matrix(std::string_view text);
/// Dispatches on the header keyword.
IANetwork parse_any(std::istream& in);
IANetwork read_network_file(const std::string& path);

void serialize_network(const IANetwork& net, std::ostream& out);
std::string serialize_network(const IANetwork& net);
void write_network_file(const IANetwork& net, const std::string& path);

struct Violation {
  enum class Kind { diagonal, asymmetric, empty } kind;
  EdgeRef edge;
  std::string message;
};

std::vector<Violation> validate(const IANetwork& net);

/// The three-block stacking plan: nine named events and the initial-state,
/// goal and stacking constraints.
IANetwork blocks_world();
/// blocks_world() with On(A,B) {b} On(B,C) added.
IANetwork blocks_world_inconsistent();

}  // namespace ia
