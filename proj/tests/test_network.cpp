#include <doctest.h>

#include <sstream>

#include "ia/network.hpp"

using namespace ia;

TEST_CASE("new network is all-I with eq diagonal") {
  IANetwork net(4);
  CHECK(net.size() == 4);
  CHECK(net.edge_count() == 6);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(net.at(i, j) == (i == j ? Label{Rel::eq} : Label::all()));
  CHECK(validate(net).empty());
}

TEST_CASE("set mirrors the inverse") {
  IANetwork net(3);
  net.set(0, 2, {Rel::b, Rel::o});
  CHECK(net.at(2, 0) == (Label{Rel::bi, Rel::oi}));
  net.set(2, 1, {Rel::d});
  CHECK(net.at(1, 2) == Label{Rel::di});
  CHECK(validate(net).empty());
}

TEST_CASE("edge-list round trip") {
  const std::string text =
      "# comment\n"
      "n 4\n"
      "#@name 0 Alpha\n"
      "0 1 b,m\n"
      "1 3 eq\n"
      "0 3 I\n"
      "2 3 di,o\n";
  const IANetwork net = parse_network(text);
  CHECK(net.at(0, 1) == (Label{Rel::b, Rel::m}));
  CHECK(net.at(3, 1) == Label{Rel::eq});
  CHECK(net.at(3, 2) == (Label{Rel::d, Rel::oi}));
  CHECK(net.display_name(0) == "Alpha");
  CHECK(net.display_name(1) == "1");
  CHECK(net.find("Alpha") == 0);
  const std::string out = serialize_network(net);
  const IANetwork again = parse_network(out);
  CHECK(again == net);
  CHECK(again.names() == net.names());
  CHECK(serialize_network(again) == out);
}

TEST_CASE("edge-list errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_network(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::size_t(999);
  };
  CHECK(line_of("n 3\n0 1 b\n1 0 b\n") == 3);      // i<j required
  CHECK(line_of("n 3\n0 5 b\n") == 2);             // out of range
  CHECK(line_of("n 3\n0 1 zz\n") == 2);            // unknown relation
  CHECK(line_of("n 3\n0 1\n") == 2);               // missing label
  CHECK(line_of("0 1 b\n") == 1);                  // missing header
  CHECK(line_of("n 3\n0 1 b\n0 1 m\n") == 3);      // duplicate edge
  CHECK(line_of("n 3\n0 1 b\n") == 999);
}

TEST_CASE("matrix format") {
  const IANetwork net = parse_matrix(
      "matrix 3\n"
      "1 0 ?\n"
      "0 1 1\n"
      "? 1 1\n");
  CHECK(net.at(0, 1) == kDisjoint);
  CHECK(net.at(1, 2) == kIntersects);
  CHECK(net.at(0, 2).is_all());
  CHECK_THROWS_AS(parse_matrix("matrix 2\n1 0\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("matrix 2\n1 0\n1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_matrix("matrix 2\n1 x\nx 1\n"), ParseError);
  std::istringstream in("# header follows\nmatrix 2\n1 1\n1 1\n");
  CHECK(parse_any(in).at(0, 1) == kIntersects);
}

TEST_CASE("validate reports broken networks") {
  IANetwork net(3);
  net.set_cell(0, 1, Label{Rel::b}.bits());
  net.set_cell(2, 2, Label::all().bits());
  net.set(1, 2, Label());
  const auto v = validate(net);
  int diag = 0, asym = 0, empty = 0;
  for (const auto& x : v) {
    diag += x.kind == Violation::Kind::diagonal;
    asym += x.kind == Violation::Kind::asymmetric;
    empty += x.kind == Violation::Kind::empty;
  }
  CHECK(diag == 1);
  CHECK(asym == 1);
  CHECK(empty == 1);
}

TEST_CASE("checksum tracks content") {
  IANetwork a(5), b(5);
  CHECK(a.checksum() == b.checksum());
  b.set(1, 3, {Rel::m});
  CHECK(a.checksum() != b.checksum());
}

TEST_CASE("blocks world fixture") {
  const IANetwork bw = blocks_world();
  CHECK(bw.size() == 9);
  CHECK(bw.at(bw.find("Stack(A,B)"), bw.find("On(A,B)")) == Label{Rel::m});
  CHECK(bw.at(bw.find("Goal"), bw.find("On(B,C)")) == Label{Rel::d});
  CHECK(bw.at(bw.find("Stack(B,C)"), bw.find("Initial")) == (Label{Rel::bi, Rel::mi}));
  int constrained = 0;
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j) constrained += !bw.at(i, j).is_all();
  CHECK(constrained == 13);
  const IANetwork bad = blocks_world_inconsistent();
  CHECK(bad.at(bad.find("On(A,B)"), bad.find("On(B,C)")) == Label{Rel::b});
}
