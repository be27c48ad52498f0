#include "ia/relation.hpp"

namespace ia {
namespace {

constexpr std::array<std::string_view, kRelCount> kNames = {
    "b", "bi", "m", "mi", "o", "oi", "s", "si", "d", "di", "f", "fi", "eq"};

using P = PointRel;
// (A-,B-), (A-,B+), (A+,B-), (A+,B+)
constexpr std::array<EndpointSignature, kRelCount> kSignatures = {{
    {P::lt, P::lt, P::lt, P::lt},  // b
    {P::gt, P::gt, P::gt, P::gt},  // bi
    {P::lt, P::lt, P::eq, P::lt},  // m
    {P::gt, P::eq, P::gt, P::gt},  // mi
    {P::lt, P::lt, P::gt, P::lt},  // o
    {P::gt, P::lt, P::gt, P::gt},  // oi
    {P::eq, P::lt, P::gt, P::lt},  // s
    {P::eq, P::lt, P::gt, P::gt},  // si
    {P::gt, P::lt, P::gt, P::lt},  // d
    {P::lt, P::lt, P::gt, P::gt},  // di
    {P::gt, P::lt, P::gt, P::eq},  // f
    {P::lt, P::lt, P::gt, P::eq},  // fi
    {P::eq, P::lt, P::gt, P::eq},  // eq
}};

}  // namespace

std::string_view name(Rel r) { return kNames[index(r)]; }

std::optional<Rel> parse_rel(std::string_view token) {
  for (int i = 0; i < kRelCount; ++i)
    if (kNames[i] == token) return rel_at(i);
  return std::nullopt;
}

EndpointSignature endpoint_signature(Rel r) { return kSignatures[index(r)]; }

std::string to_string(Label x) {
  if (x.is_all()) return "I";
  if (x.empty()) return "{}";
  std::string out;
  for (Rel r : x) {
    if (!out.empty()) out += ',';
    out += name(r);
  }
  return out;
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "I") return Label::all();
  Label out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::size_t stop = comma == std::string_view::npos ? text.size() : comma;
    const auto rel = parse_rel(text.substr(pos, stop - pos));
    if (!rel) return std::nullopt;
    out |= Label::of(*rel);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace ia
