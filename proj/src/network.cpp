#include "ia/network.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace ia {

IANetwork::IANetwork(int n) : n_(n) {
  if (n < 0) throw std::invalid_argument("negative vertex count");
  bits_.assign(static_cast<std::size_t>(n) * n, kAllBits);
  for (int i = 0; i < n; ++i) bits_[idx(i, i)] = Label::of(Rel::eq).bits();
}

void IANetwork::set(int i, int j, Label x) {
  bits_[idx(i, j)] = x.bits();
  bits_[idx(j, i)] = inverse(x).bits();
}

void IANetwork::set_name(int v, std::string name) {
  if (names_.size() < static_cast<std::size_t>(n_)) names_.resize(n_);
  names_.at(v) = std::move(name);
}

std::string IANetwork::display_name(int v) const {
  if (static_cast<std::size_t>(v) < names_.size() && !names_[v].empty())
    return names_[v];
  return std::to_string(v);
}

int IANetwork::find(std::string_view name) const {
  for (std::size_t v = 0; v < names_.size(); ++v)
    if (names_[v] == name) return static_cast<int>(v);
  return -1;
}

std::uint64_t IANetwork::checksum() const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint16_t b : bits_) {
    h = (h ^ (b & 0xFF)) * 1099511628211ull;
    h = (h ^ (b >> 8)) * 1099511628211ull;
  }
  return h;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
      ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r')
      ++end;
    out.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return out;
}

bool parse_int(std::string_view s, long long& out) {
  const auto* first = s.data();
  const auto* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

int parse_count(std::string_view tok, std::size_t line) {
  long long n = 0;
  if (!parse_int(tok, n) || n < 1 || n > 1'000'000)
    throw ParseError(line, "invalid vertex count '" + std::string(tok) + "'");
  return static_cast<int>(n);
}

int parse_vertex(std::string_view tok, int n, std::size_t line) {
  long long v = 0;
  if (!parse_int(tok, v)) throw ParseError(line, "malformed vertex index '" + std::string(tok) + "'");
  if (v < 0 || v >= n)
    throw ParseError(line, "vertex index " + std::string(tok) + " out of range [0," +
                               std::to_string(n) + ")");
  return static_cast<int>(v);
}

Label parse_edge_label(std::string_view tok, std::size_t line) {
  if (tok == "{}" || tok.empty()) throw ParseError(line, "empty label");
  if (tok == "I") return Label::all();
  Label out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t comma = tok.find(',', pos);
    const std::string_view item =
        tok.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (item.empty()) throw ParseError(line, "empty relation in label '" + std::string(tok) + "'");
    const auto r = parse_rel(item);
    if (!r) throw ParseError(line, "unknown relation '" + std::string(item) + "'");
    out |= Label::of(*r);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

IANetwork parse_network(std::istream& in) {
  IANetwork net;
  bool have_header = false;
  std::vector<char> seen;  // explicit edge flags, i*n+j
  std::vector<std::pair<int, std::string>> pending_names;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (text.starts_with("#@name")) {
      const auto tok = split_ws(text);
      long long v = 0;
      if (tok.size() != 3 || !parse_int(tok[1], v) || v < 0)
        throw ParseError(line, "malformed name line");
      pending_names.emplace_back(static_cast<int>(v), std::string(tok[2]));
      continue;
    }
    if (text.starts_with("#")) continue;
    const auto tok = split_ws(text);
    if (tok.empty()) continue;
    if (tok[0] == "n") {
      if (have_header) throw ParseError(line, "duplicate header");
      if (tok.size() != 2) throw ParseError(line, "malformed header, expected 'n <count>'");
      net = IANetwork(parse_count(tok[1], line));
      seen.assign(static_cast<std::size_t>(net.size()) * net.size(), 0);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line, "edge before header 'n <count>'");
    if (tok.size() != 3) throw ParseError(line, "malformed edge line, expected '<i> <j> <label>'");
    const int n = net.size();
    const int i = parse_vertex(tok[0], n, line);
    const int j = parse_vertex(tok[1], n, line);
    if (i >= j) throw ParseError(line, "edge requires i < j");
    const Label x = parse_edge_label(tok[2], line);
    const std::size_t key = static_cast<std::size_t>(i) * n + j;
    if (seen[key] && net.at(i, j) != x)
      throw ParseError(line, "conflicting duplicate edge " + std::to_string(i) + " " +
                                 std::to_string(j));
    seen[key] = 1;
    net.set(i, j, x);
  }
  if (!have_header) throw ParseError(line, "missing header 'n <count>'");
  for (auto& [v, name] : pending_names) {
    if (v >= net.size()) throw ParseError(0, "name for out-of-range vertex " + std::to_string(v));
    net.set_name(v, std::move(name));
  }
  return net;
}

IANetwork parse_network(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_network(in);
}

IANetwork parse_matrix(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  int n = 0;
  std::vector<std::vector<char>> rows;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text(raw);
    if (text.starts_with("#")) continue;
    const auto tok = split_ws(text);
    if (tok.empty()) continue;
    if (n == 0) {
      if (tok.size() != 2 || tok[0] != "matrix")
        throw ParseError(line, "malformed header, expected 'matrix <count>'");
      n = parse_count(tok[1], line);
      continue;
    }
    if (static_cast<int>(rows.size()) == n) throw ParseError(line, "matrix has more than " + std::to_string(n) + " rows");
    if (static_cast<int>(tok.size()) != n)
      throw ParseError(line, "matrix is not square: row has " + std::to_string(tok.size()) +
                                 " entries, expected " + std::to_string(n));
    std::vector<char> row;
    for (std::string_view s : tok) {
      if (s != "1" && s != "0" && s != "?")
        throw ParseError(line, "unknown matrix symbol '" + std::string(s) + "'");
      row.push_back(s[0]);
    }
    rows.push_back(std::move(row));
  }
  if (n == 0) throw ParseError(line, "missing header 'matrix <count>'");
  if (static_cast<int>(rows.size()) != n)
    throw ParseError(0, "matrix is not square: " + std::to_string(rows.size()) + " rows, expected " +
                            std::to_string(n));
  IANetwork net(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (rows[i][j] != rows[j][i])
        throw ParseError(0, "asymmetric entries at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
      const char c = rows[i][j];
      net.set(i, j, c == '1' ? kIntersects : (c == '0' ? kDisjoint : Label::all()));
    }
  return net;
}

IANetwork parse_matrix(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_matrix(in);
}

IANetwork parse_any(std::istream& in) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  std::istringstream scan(text);
  std::string raw;
  while (std::getline(scan, raw)) {
    const auto tok = split_ws(raw);
    if (tok.empty() || tok[0].starts_with("#")) continue;
    if (tok[0] == "matrix") return parse_matrix(std::string_view(text));
    break;
  }
  return parse_network(std::string_view(text));
}

IANetwork read_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return parse_any(in);
}

void serialize_network(const IANetwork& net, std::ostream& out) {
  out << "n " << net.size() << '\n';
  const auto& names = net.names();
  for (std::size_t v = 0; v < names.size(); ++v)
    if (!names[v].empty()) out << "#@name " << v << ' ' << names[v] << '\n';
  for (int i = 0; i < net.size(); ++i)
    for (int j = i + 1; j < net.size(); ++j) {
      const Label x = net.at(i, j);
      if (!x.is_all()) out << i << ' ' << j << ' ' << to_string(x) << '\n';
    }
}

std::string serialize_network(const IANetwork& net) {
  std::ostringstream out;
  serialize_network(net, out);
  return out.str();
}

void write_network_file(const IANetwork& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  serialize_network(net, out);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::vector<Violation> validate(const IANetwork& net) {
  std::vector<Violation> out;
  const int n = net.size();
  for (int i = 0; i < n; ++i) {
    if (net.at(i, i) != Label::of(Rel::eq))
      out.push_back({Violation::Kind::diagonal, {i, i},
                     "diagonal (" + std::to_string(i) + "," + std::to_string(i) + ") is not {eq}"});
    for (int j = i + 1; j < n; ++j) {
      const Label x = net.at(i, j);
      if (x.empty())
        out.push_back({Violation::Kind::empty, {i, j},
                       "empty label on (" + std::to_string(i) + "," + std::to_string(j) + ")"});
      if (net.at(j, i) != inverse(x))
        out.push_back({Violation::Kind::asymmetric, {i, j},
                       "(" + std::to_string(j) + "," + std::to_string(i) +
                           ") is not the inverse of (" + std::to_string(i) + "," +
                           std::to_string(j) + ")"});
    }
  }
  return out;
}

namespace {

void constrain(IANetwork& net, std::string_view a, Label x, std::string_view b) {
  net.set(net.find(a), net.find(b), x);
}

}  // namespace

IANetwork blocks_world() {
  static constexpr std::string_view kEvents[] = {
      "Initial", "Clear(A)", "Clear(B)",  "Clear(C)", "Goal",
      "On(A,B)", "On(B,C)",  "Stack(A,B)", "Stack(B,C)"};
  IANetwork net(9);
  for (int v = 0; v < 9; ++v) net.set_name(v, std::string(kEvents[v]));
  const Label d{Rel::d};
  constrain(net, "Initial", d, "Clear(A)");
  constrain(net, "Initial", d, "Clear(B)");
  constrain(net, "Initial", d, "Clear(C)");
  constrain(net, "Goal", d, "On(A,B)");
  constrain(net, "Goal", d, "On(B,C)");
  constrain(net, "Stack(A,B)", {Rel::bi, Rel::mi}, "Initial");
  constrain(net, "Stack(A,B)", d, "Clear(A)");
  constrain(net, "Stack(A,B)", {Rel::f}, "Clear(B)");
  constrain(net, "Stack(A,B)", {Rel::m}, "On(A,B)");
  constrain(net, "Stack(B,C)", {Rel::bi, Rel::mi}, "Initial");
  constrain(net, "Stack(B,C)", d, "Clear(B)");
  constrain(net, "Stack(B,C)", {Rel::f}, "Clear(C)");
  constrain(net, "Stack(B,C)", {Rel::m}, "On(B,C)");
  return net;
}

IANetwork blocks_world_inconsistent() {
  IANetwork net = blocks_world();
  constrain(net, "On(A,B)", {Rel::b}, "On(B,C)");
  return net;
}

}  // namespace ia
