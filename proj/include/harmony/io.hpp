#pragma once

// Text and JSON forms of groups, families, fields, liftings, tuples and
// spaces, plus certificates: every file carries a `format: 1` header.
//
// family text:            space text:
//   format: 1               format: 1
//   kind: family            kind: space
//   group: 2,17             group: 34
//   {(0,0),(0,0)}^2         P0 = {{0,17}, {2,32}, ...}
//   {(0,0),(0,1),(0,1)}     P1 = ...
//
// Cyclic groups print elements as plain integers, products as tuples.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include <json.hpp>

#include "harmony/lifting.hpp"
#include "harmony/search.hpp"
#include "harmony/spaces.hpp"

namespace harmony {

using json = nlohmann::json;

inline constexpr int format_version = 1;
std::string tool_version();

std::string group_text(const AbelianGroup& g);
/// "2,17", "2x17" or "Z2xZ17"; "1" is the trivial group.
AbelianGroup parse_group(std::string_view text);

std::string element_text(const AbelianGroup& g, Index x);
Index parse_element(const AbelianGroup& g, std::string_view text);
/// Comma separated elements, optionally wrapped in braces: "{(0,0),(1,0)}".
std::vector<Index> parse_elements(const AbelianGroup& g, std::string_view text);

std::string family_to_text(const BlockFamily& f);
BlockFamily family_from_text(std::string_view text);
json family_to_json(const BlockFamily& f);
BlockFamily family_from_json(const json& j);

std::string space_to_text(const ResolvedSpace& s);
ResolvedSpace space_from_text(std::string_view text);
json space_to_json(const ResolvedSpace& s);
ResolvedSpace space_from_json(const json& j);

json field_to_json(const FiniteField& f);
FiniteField field_from_json(const json& j);
/// Prime fields: the integer; otherwise the coefficient list, low degree first.
json element_to_json(const FiniteField& f, FieldElement x);
FieldElement element_from_json(const FiniteField& f, const json& j);
/// An integer, a coefficient list "[1,0,2]", or a polynomial in the
/// generator g such as "g^3+g+1" or "3g+3".
FieldElement parse_field_element(const FiniteField& f, std::string_view text);
std::string field_element_text(const FiniteField& f, FieldElement x);
/// "1,0,0,1,2" (low degree first).
std::vector<std::uint32_t> parse_modulus(std::string_view text);

json lifting_to_json(const Lifting& l);
Lifting lifting_from_json(const json& j);

struct TupleWitness {
  std::string shape;
  FiniteField field;
  std::vector<FieldElement> tuple;
};
json tuple_to_json(const TupleWitness& t);
TupleWitness tuple_from_json(const json& j);

/// A space plus the acting group; the subgroup H is optional context.
using Object = std::variant<BlockFamily, ResolvedSpace, Lifting, TupleWitness>;

std::string object_kind(const Object& o);
/// Canonical JSON of the object; the digest is taken over its dump().
json object_to_json(const Object& o);
/// Reads a text or JSON file of any kind. A certificate file yields the
/// object embedded in it.
Object load_object(const std::filesystem::path& path);
Object parse_object(std::string_view content);

std::uint64_t fnv1a(std::string_view bytes);
std::string digest(const json& object);

json to_json(const FamilyVerdict& v);
json to_json(const LiftingCertificate& c);
json to_json(const SpaceCertificate& c);
json to_json(const HarmonyCertificate& c);

/// Verdicts recomputed from scratch for any object. Families get an
/// optional subgroup for the relative test.
json verdicts(const Object& o, const std::optional<Subgroup>& h = std::nullopt);
bool verdicts_pass(const std::string& kind, const json& verdicts);

/// {format, kind: certificate, object_kind, digest, verdicts, object, tool_version}
json make_certificate(const Object& o, const json& verdicts, const json& extra = json::object());

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace harmony
