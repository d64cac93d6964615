#include "harmony/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "harmony/errors.hpp"

namespace harmony {

std::string tool_version() { return "0.1.0"; }

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits at `sep` outside (), {} and [].
std::vector<std::string_view> split_top(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (c == '(' || c == '{' || c == '[') ++depth;
    if (c == ')' || c == '}' || c == ']') --depth;
    if (depth < 0) throw ParseError("unbalanced brackets in '" + std::string(s) + "'");
    if (c == sep && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw ParseError("unbalanced brackets in '" + std::string(s) + "'");
  const auto last = trim(s.substr(start));
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

std::int64_t parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) throw ParseError("expected an integer");
  std::size_t pos = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(std::string(s), &pos);
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + std::string(s) + "'");
  }
  if (pos != s.size()) throw ParseError("expected an integer, got '" + std::string(s) + "'");
  return v;
}

// The content between a leading `open` and its matching close, and the rest.
std::pair<std::string_view, std::string_view> bracketed(std::string_view s, char open, char close) {
  s = trim(s);
  if (s.empty() || s.front() != open) throw ParseError(std::string("expected '") + open + "' in '" + std::string(s) + "'");
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == open) ++depth;
    if (s[i] == close && --depth == 0) return {s.substr(1, i - 1), s.substr(i + 1)};
  }
  throw ParseError(std::string("missing '") + close + "' in '" + std::string(s) + "'");
}

struct Header {
  std::map<std::string, std::string> fields;
  std::vector<std::string_view> body;
};

Header read_header(std::string_view text) {
  Header h;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    if (line.empty() || line.front() == '#') continue;
    const auto colon = line.find(':');
    if (h.body.empty() && colon != std::string_view::npos && line.front() != '{' && line.front() != 'P') {
      h.fields[std::string(trim(line.substr(0, colon)))] = std::string(trim(line.substr(colon + 1)));
    } else {
      h.body.push_back(line);
    }
  }
  const auto f = h.fields.find("format");
  if (f == h.fields.end()) throw ParseError("missing 'format:' header");
  if (f->second != std::to_string(format_version)) throw ParseError("unsupported format " + f->second);
  return h;
}

const std::string& header_field(const Header& h, const std::string& key) {
  const auto it = h.fields.find(key);
  if (it == h.fields.end()) throw ParseError("missing '" + key + ":' header");
  return it->second;
}

json element_json(const AbelianGroup& g, Index x) {
  if (g.rank() == 1) return x;
  return g.element(x).coords;
}

Index element_from_json_value(const AbelianGroup& g, const json& j) {
  std::vector<std::int64_t> coords;
  if (j.is_number_integer()) {
    if (g.rank() != 1) throw ParseError("bare integer element in a product group");
    coords = {j.get<std::int64_t>()};
  } else {
    coords = j.get<std::vector<std::int64_t>>();
  }
  if (coords.size() != g.rank()) throw ParseError("element has the wrong number of coordinates");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 0 || static_cast<std::uint64_t>(coords[i]) >= g.factors()[i]) {
      throw ParseError("coordinate out of range");
    }
  }
  return g.index_of({coords});
}

std::vector<Index> parse_element_list(const AbelianGroup& g, std::string_view inner) {
  std::vector<Index> out;
  for (auto tok : split_top(inner, ',')) {
    if (tok.empty()) throw ParseError("empty element");
    out.push_back(parse_element(g, tok));
  }
  return out;
}

std::string block_text(const AbelianGroup& g, std::span<const std::uint32_t> pts) {
  std::string s = "{";
  for (std::size_t i = 0; i < pts.size(); ++i) s += (i ? "," : "") + element_text(g, pts[i]);
  return s + "}";
}

}  // namespace

// ---------------------------------------------------------------------------

std::string group_text(const AbelianGroup& g) {
  if (g.rank() == 0) return "1";
  std::string s;
  for (std::size_t i = 0; i < g.rank(); ++i) s += (i ? "," : "") + std::to_string(g.factors()[i]);
  return s;
}

AbelianGroup parse_group(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (c == 'Z' || std::isspace(static_cast<unsigned char>(c))) continue;
    s += (c == 'x' || c == 'X' || c == '*') ? ',' : c;
  }
  if (s.empty()) throw ParseError("empty group description");
  std::vector<std::uint64_t> factors;
  for (auto tok : split_top(s, ',')) {
    const auto n = parse_int(tok);
    if (n < 1) throw ParseError("group factors must be positive");
    if (n > 1) factors.push_back(static_cast<std::uint64_t>(n));
  }
  return AbelianGroup(factors);
}

std::string element_text(const AbelianGroup& g, Index x) {
  if (g.rank() == 1) return std::to_string(x);
  const auto c = g.element(x).coords;
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + ")";
}

Index parse_element(const AbelianGroup& g, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '(') {
    const auto [inner, rest] = bracketed(text, '(', ')');
    if (!trim(rest).empty()) throw ParseError("trailing text after element");
    json coords = json::array();
    for (auto tok : split_top(inner, ',')) coords.push_back(parse_int(tok));
    if (g.rank() == 1 && coords.size() == 1) return element_from_json_value(g, coords[0]);
    return element_from_json_value(g, coords);
  }
  return element_from_json_value(g, json(parse_int(text)));
}

std::vector<Index> parse_elements(const AbelianGroup& g, std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '{') {
    const auto [inner, rest] = bracketed(text, '{', '}');
    if (!trim(rest).empty()) throw ParseError("trailing text after element list");
    text = inner;
  }
  return parse_element_list(g, text);
}

// ---------------------------------------------------------------------------

std::string family_to_text(const BlockFamily& f) {
  std::string s = "format: 1\nkind: family\ngroup: " + group_text(f.group) + "\n";
  for (const auto& e : f.entries) {
    s += "{";
    bool first = true;
    for (auto x : e.block.elements()) {
      s += (first ? "" : ",") + element_text(f.group, x);
      first = false;
    }
    s += "}";
    if (e.repeat != 1) s += "^" + std::to_string(e.repeat);
    s += "\n";
  }
  return s;
}

BlockFamily family_from_text(std::string_view text) {
  const auto h = read_header(text);
  if (header_field(h, "kind") != "family") throw ParseError("not a family file");
  BlockFamily f{parse_group(header_field(h, "group")), {}};
  for (auto line : h.body) {
    const auto [inner, rest] = bracketed(line, '{', '}');
    std::uint64_t repeat = 1;
    const auto r = trim(rest);
    if (!r.empty()) {
      if (r.front() != '^') throw ParseError("unexpected text after block: '" + std::string(r) + "'");
      const auto n = parse_int(r.substr(1));
      if (n < 1) throw ParseError("block multiplicity must be positive");
      repeat = static_cast<std::uint64_t>(n);
    }
    const auto elems = parse_element_list(f.group, inner);
    if (elems.empty()) throw ParseError("empty block");
    f.entries.push_back({Block::of(elems), repeat});
  }
  if (f.entries.empty()) throw ParseError("family has no blocks");
  return f;
}

json family_to_json(const BlockFamily& f) {
  json blocks = json::array();
  for (const auto& e : f.entries) {
    json elems = json::array();
    for (auto x : e.block.elements()) elems.push_back(element_json(f.group, x));
    blocks.push_back({{"elements", elems}, {"repeat", e.repeat}});
  }
  return {{"format", format_version}, {"kind", "family"}, {"group", f.group.factors()}, {"blocks", blocks}};
}

BlockFamily family_from_json(const json& j) {
  if (j.value("kind", "") != "family") throw ParseError("not a family object");
  BlockFamily f{AbelianGroup(j.at("group").get<std::vector<std::uint64_t>>()), {}};
  for (const auto& b : j.at("blocks")) {
    std::vector<Index> elems;
    for (const auto& x : b.at("elements")) elems.push_back(element_from_json_value(f.group, x));
    if (elems.empty()) throw ParseError("empty block");
    f.entries.push_back({Block::of(elems), b.value("repeat", std::uint64_t{1})});
  }
  if (f.entries.empty()) throw ParseError("family has no blocks");
  return f;
}

// ---------------------------------------------------------------------------

std::string space_to_text(const ResolvedSpace& s) {
  std::string out = "format: 1\nkind: space\ngroup: " + group_text(s.group()) + "\n";
  for (std::size_t c = 0; c < s.class_count(); ++c) {
    out += "P" + std::to_string(c) + " = {";
    const auto [first, last] = s.class_blocks(c);
    for (auto b = first; b < last; ++b) out += (b == first ? "" : ", ") + block_text(s.group(), s.block(b));
    out += "}\n";
  }
  return out;
}

ResolvedSpace space_from_text(std::string_view text) {
  const auto h = read_header(text);
  if (header_field(h, "kind") != "space") throw ParseError("not a space file");
  const auto g = parse_group(header_field(h, "group"));
  std::vector<std::vector<std::vector<Index>>> classes;
  for (auto line : h.body) {
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'P<i> = {...}'");
    const auto [inner, rest] = bracketed(line.substr(eq + 1), '{', '}');
    if (!trim(rest).empty()) throw ParseError("trailing text after class");
    auto& cls = classes.emplace_back();
    for (auto tok : split_top(inner, ',')) {
      const auto [b, r] = bracketed(tok, '{', '}');
      if (!trim(r).empty()) throw ParseError("trailing text after block");
      cls.push_back(parse_element_list(g, b));
    }
  }
  return ResolvedSpace(g, classes);
}

json space_to_json(const ResolvedSpace& s) {
  json classes = json::array();
  for (std::size_t c = 0; c < s.class_count(); ++c) {
    json cls = json::array();
    const auto [first, last] = s.class_blocks(c);
    for (auto b = first; b < last; ++b) {
      json blk = json::array();
      for (auto x : s.block(b)) blk.push_back(element_json(s.group(), x));
      cls.push_back(std::move(blk));
    }
    classes.push_back(std::move(cls));
  }
  std::vector<std::uint64_t> sizes;
  for (const auto& [k, n] : count_blocks(s)) sizes.push_back(k);
  return {{"format", format_version}, {"kind", "space"}, {"group", s.group().factors()},
          {"v", s.v()},               {"K", sizes},       {"classes", classes}};
}

ResolvedSpace space_from_json(const json& j) {
  if (j.value("kind", "") != "space") throw ParseError("not a space object");
  const AbelianGroup g(j.at("group").get<std::vector<std::uint64_t>>());
  std::vector<std::vector<std::vector<Index>>> classes;
  for (const auto& c : j.at("classes")) {
    auto& cls = classes.emplace_back();
    for (const auto& b : c) {
      auto& blk = cls.emplace_back();
      for (const auto& x : b) blk.push_back(element_from_json_value(g, x));
    }
  }
  return ResolvedSpace(g, classes);
}

// ---------------------------------------------------------------------------

json field_to_json(const FiniteField& f) {
  return {{"p", f.characteristic()}, {"m", f.degree()}, {"modulus", f.modulus()}};
}

FiniteField field_from_json(const json& j) {
  std::optional<std::vector<std::uint32_t>> modulus;
  if (j.contains("modulus")) modulus = j.at("modulus").get<std::vector<std::uint32_t>>();
  return FiniteField(j.at("p").get<std::uint32_t>(), j.at("m").get<std::uint32_t>(), modulus);
}

json element_to_json(const FiniteField& f, FieldElement x) {
  if (f.degree() == 1) return x.value;
  return f.coefficients(x);
}

FieldElement element_from_json(const FiniteField& f, const json& j) {
  if (j.is_number_integer()) return f.from_integer(j.get<std::int64_t>());
  if (j.is_string()) return parse_field_element(f, j.get<std::string>());
  const auto c = j.get<std::vector<std::int64_t>>();
  if (c.size() > f.degree()) throw ParseError("too many coefficients for the field");
  return f.from_coefficients(c);
}

FieldElement parse_field_element(const FiniteField& f, std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ParseError("empty field element");
  if (text.front() == '[') return element_from_json(f, json::parse(text));
  if (text.find_first_of("gx") == std::string_view::npos) return f.from_integer(parse_int(text));
  // polynomial in the generator
  auto x = f.zero();
  std::size_t i = 0;
  const std::string s(text);
  while (i < s.size()) {
    std::int64_t sign = 1;
    while (i < s.size() && (s[i] == '+' || s[i] == '-' || std::isspace(static_cast<unsigned char>(s[i])))) {
      if (s[i] == '-') sign = -sign;
      ++i;
    }
    std::size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    auto term = trim(std::string_view(s).substr(i, j - i));
    i = j;
    if (term.empty()) throw ParseError("malformed polynomial '" + s + "'");
    const auto var = term.find_first_of("gx");
    std::int64_t coef = 1;
    std::int64_t power = 0;
    if (var == std::string_view::npos) {
      coef = parse_int(term);
    } else {
      auto c = trim(term.substr(0, var));
      if (!c.empty() && c.back() == '*') c = trim(c.substr(0, c.size() - 1));
      if (!c.empty()) coef = parse_int(c);
      auto rest = trim(term.substr(var + 1));
      power = 1;
      if (!rest.empty()) {
        if (rest.front() != '^') throw ParseError("malformed term '" + std::string(term) + "'");
        power = parse_int(rest.substr(1));
      }
    }
    if (power < 0) throw ParseError("negative power in '" + s + "'");
    x = f.add(x, f.mul(f.from_integer(sign * coef), f.pow(f.generator(), power)));
  }
  return x;
}

std::string field_element_text(const FiniteField& f, FieldElement x) {
  if (f.degree() == 1) return std::to_string(x.value);
  const auto c = f.coefficients(x);
  std::string s;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] == 0) continue;
    if (!s.empty()) s += "+";
    if (i == 0 || c[i] != 1) s += std::to_string(c[i]);
    if (i >= 1) s += "g";
    if (i >= 2) s += "^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

std::vector<std::uint32_t> parse_modulus(std::string_view text) {
  std::vector<std::uint32_t> out;
  for (auto tok : split_top(text, ',')) {
    const auto n = parse_int(tok);
    if (n < 0) throw ParseError("modulus coefficients must be non-negative");
    out.push_back(static_cast<std::uint32_t>(n));
  }
  return out;
}

// ---------------------------------------------------------------------------

json lifting_to_json(const Lifting& l) {
  json blocks = json::array();
  for (const auto& b : l.blocks) {
    json pts = json::array();
    for (const auto& pt : b) pts.push_back({element_json(l.base.group, pt.g), element_to_json(l.field, pt.c)});
    blocks.push_back(std::move(pts));
  }
  json companion = json::array();
  for (auto s : l.companion) companion.push_back(element_to_json(l.field, s));
  return {{"format", format_version},   {"kind", "lifting"}, {"base", family_to_json(l.base)},
          {"field", field_to_json(l.field)}, {"blocks", blocks}, {"companion", companion}};
}

Lifting lifting_from_json(const json& j) {
  if (j.value("kind", "") != "lifting") throw ParseError("not a lifting object");
  Lifting l{family_from_json(j.at("base")), field_from_json(j.at("field")), {}, {}};
  for (const auto& b : j.at("blocks")) {
    auto& blk = l.blocks.emplace_back();
    for (const auto& pt : b) {
      blk.push_back({element_from_json_value(l.base.group, pt.at(0)), element_from_json(l.field, pt.at(1))});
    }
  }
  for (const auto& s : j.at("companion")) l.companion.push_back(element_from_json(l.field, s));
  return l;
}

json tuple_to_json(const TupleWitness& t) {
  json w = json::array();
  for (auto x : t.tuple) w.push_back(element_to_json(t.field, x));
  return {{"format", format_version}, {"kind", "tuple"}, {"shape", t.shape}, {"field", field_to_json(t.field)}, {"witness", w}};
}

TupleWitness tuple_from_json(const json& j) {
  if (j.value("kind", "") != "tuple") throw ParseError("not a tuple object");
  TupleWitness t{j.at("shape").get<std::string>(), field_from_json(j.at("field")), {}};
  for (const auto& x : j.at("witness")) t.tuple.push_back(element_from_json(t.field, x));
  return t;
}

// ---------------------------------------------------------------------------

std::string object_kind(const Object& o) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BlockFamily>) return "family";
        if constexpr (std::is_same_v<T, ResolvedSpace>) return "space";
        if constexpr (std::is_same_v<T, Lifting>) return "lifting";
        return "tuple";
      },
      o);
}

json object_to_json(const Object& o) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BlockFamily>) return family_to_json(x);
        if constexpr (std::is_same_v<T, ResolvedSpace>) return space_to_json(x);
        if constexpr (std::is_same_v<T, Lifting>) return lifting_to_json(x);
        if constexpr (std::is_same_v<T, TupleWitness>) return tuple_to_json(x);
      },
      o);
}

Object parse_object(std::string_view content) {
  const auto t = trim(content);
  if (!t.empty() && t.front() == '{') {
    json j;
    try {
      j = json::parse(t);
    } catch (const json::exception& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (j.value("format", 0) != format_version) throw ParseError("unsupported or missing format");
    const auto kind = j.value("kind", "");
    try {
      if (kind == "certificate") return parse_object(j.at("object").dump());
      if (kind == "family") return family_from_json(j);
      if (kind == "space") return space_from_json(j);
      if (kind == "lifting") return lifting_from_json(j);
      if (kind == "tuple") return tuple_from_json(j);
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed ") + kind + ": " + e.what());
    }
    throw ParseError("unknown object kind '" + kind + "'");
  }
  const auto h = read_header(content);
  const auto& kind = header_field(h, "kind");
  if (kind == "family") return family_from_text(content);
  if (kind == "space") return space_from_text(content);
  throw ParseError("text files hold families or spaces, not '" + kind + "'");
}

Object load_object(const std::filesystem::path& path) { return parse_object(read_file(path)); }

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest(const json& object) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(fnv1a(object.dump())));
  return buf;
}

// ---------------------------------------------------------------------------

json to_json(const FamilyVerdict& v) {
  json sizes = json::object();
  for (const auto& [k, n] : v.sizes) sizes[std::to_string(k)] = n;
  json j{{"kind", to_string(v.kind)}, {"lambda", v.lambda}, {"sizes", sizes}};
  if (v.kind == FamilyKind::strong) j["harmonious"] = v.harmonious;
  if (v.kind == FamilyKind::relative) {
    j["resolvable"] = v.resolvable;
    j["subgroup"] = v.subgroup.elements();
  }
  if (v.kind == FamilyKind::none) j["reason"] = v.reason;
  return j;
}

json to_json(const LiftingCertificate& c) {
  return {{"well_formed", c.well_formed}, {"lambda", c.lambda}, {"good", c.good}, {"perfect", c.perfect}, {"defect", c.defect}};
}

json to_json(const SpaceCertificate& c) {
  json counts = json::object();
  for (const auto& [k, n] : c.counts) counts[std::to_string(k)] = n;
  return {{"v", c.v},
          {"classes", c.classes},
          {"counts", counts},
          {"K", c.sizes()},
          {"linear", c.linear},
          {"resolved", c.resolved},
          {"exhaustive", c.exhaustive},
          {"pairs_checked", c.pairs_checked},
          {"defect", c.defect}};
}

json to_json(const HarmonyCertificate& c) {
  return {{"acting_order", c.acting_order},
          {"point_regular", c.point_regular},
          {"preserves_resolution", c.preserves_resolution},
          {"class_transitive", c.class_transitive},
          {"stabilizer", c.stabilizer},
          {"harmonious", c.harmonious()},
          {"defect", c.defect}};
}

json verdicts(const Object& o, const std::optional<Subgroup>& h) {
  if (const auto* f = std::get_if<BlockFamily>(&o)) return to_json(classify(*f, h));
  if (const auto* s = std::get_if<ResolvedSpace>(&o)) {
    return {{"space", to_json(verify_space(*s))}, {"action", to_json(verify_harmonious(*s, s->group()))}};
  }
  if (const auto* l = std::get_if<Lifting>(&o)) return to_json(verify_lifting(*l));
  const auto& t = std::get<TupleWitness>(o);
  const auto shape = make_shape(t.shape, t.field);
  const bool good = tuple_is_good(shape, t.tuple);
  json classes = json::array();
  for (const auto& list : shape.lists) {
    json cls = json::array();
    for (const auto& form : list) {
      const auto v = evaluate(shape, form, t.tuple);
      cls.push_back(v == t.field.zero() ? json(nullptr) : json(cyclotomic_index(t.field, shape.e, v)));
    }
    classes.push_back(std::move(cls));
  }
  json j{{"good", good}, {"classes", classes}, {"list_names", shape.list_names}};
  j["lifting"] = good ? to_json(verify_lifting(lifting_from_tuple(shape, t.tuple))) : json(nullptr);
  return j;
}

bool verdicts_pass(const std::string& kind, const json& v) {
  if (kind == "family") return v.at("kind") != "none";
  if (kind == "space") {
    return v.at("space").at("linear").get<bool>() && v.at("space").at("resolved").get<bool>() &&
           v.at("action").at("harmonious").get<bool>();
  }
  if (kind == "lifting") return v.at("good").get<bool>();
  if (kind == "tuple") return v.at("good").get<bool>();
  return false;
}

json make_certificate(const Object& o, const json& v, const json& extra) {
  const auto obj = object_to_json(o);
  json c{{"format", format_version},
         {"kind", "certificate"},
         {"object_kind", object_kind(o)},
         {"digest", digest(obj)},
         {"verdicts", v},
         {"object", obj},
         {"tool_version", tool_version()}};
  for (const auto& [k, x] : extra.items()) c[k] = x;
  return c;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out << content;
}

}  // namespace harmony
