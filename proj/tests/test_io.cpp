#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harmony/constructors.hpp"
#include "harmony/errors.hpp"
#include "harmony/io.hpp"
#include "harmony/reproduce.hpp"

using namespace harmony;

namespace {

const char* z34_text = R"(format: 1
kind: family
group: 34
# a comment
{2,32}
{20,6}
{14,4,11,13}
{8,26}
{12,24}
{22,16,27,1}
)";

const char* z8_text = R"(format: 1
kind: space
group: 8
P0 = {{0,4}, {1,6,7}, {5,2,3}}
P1 = {{1,5}, {2,7,0}, {6,3,4}}
P2 = {{2,6}, {3,0,1}, {7,4,5}}
P3 = {{3,7}, {4,1,2}, {0,5,6}}
)";

bool same(const BlockFamily& a, const BlockFamily& b) {
  if (!(a.group == b.group) || a.entries.size() != b.entries.size()) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    if (!(a.entries[i].block == b.entries[i].block) || a.entries[i].repeat != b.entries[i].repeat) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("groups and elements") {
  CHECK(parse_group("2,17").factors() == std::vector<std::uint64_t>{2, 17});
  CHECK(parse_group("2x17") == parse_group("Z2xZ17"));
  CHECK(parse_group("1").order() == 1);
  CHECK(group_text(parse_group("Z4 x Z2")) == "4,2");
  CHECK_THROWS_AS(parse_group(""), ParseError);
  CHECK_THROWS_AS(parse_group("2,,3"), ParseError);

  const auto g = parse_group("2,17");
  CHECK(parse_element(g, "(1,3)") == 20);
  CHECK(element_text(g, 20) == "(1,3)");
  CHECK_THROWS_AS(parse_element(g, "(1,17)"), ParseError);
  CHECK_THROWS_AS(parse_element(g, "5"), ParseError);
  CHECK_THROWS_AS(parse_element(g, "(1,2,3)"), ParseError);
  CHECK(parse_element(AbelianGroup::cyclic(34), "33") == 33);
  CHECK(parse_elements(g, "{(0,0),(1,0)}") == std::vector<Index>{0, 17});
  CHECK(parse_elements(AbelianGroup::cyclic(57), "0,19,38") == std::vector<Index>{0, 19, 38});
}

TEST_CASE("family text and JSON round trips") {
  const auto f = family_from_text(z34_text);
  CHECK(f.group == AbelianGroup::cyclic(34));
  CHECK(f.entries.size() == 6);
  CHECK(f.entries[2].block == Block::of({4, 11, 13, 14}));
  CHECK(same(family_from_text(family_to_text(f)), f));
  CHECK(same(family_from_json(family_to_json(f)), f));

  for (const auto& r : sdf_catalog()) {
    CAPTURE(r.name);
    const auto sdf = r.build();
    CHECK(same(family_from_text(family_to_text(sdf)), sdf));
    CHECK(same(family_from_json(json::parse(family_to_json(sdf).dump())), sdf));
  }
  // repeats and product groups in text
  const auto z2 = fixture("z2_pairs");
  const auto text = family_to_text(z2);
  CHECK(text.find("^2") != std::string::npos);
  const auto prod = classic_sdf(parse_group("2,2"));
  CHECK(family_to_text(prod).find("(1,1)") != std::string::npos);

  SUBCASE("malformed input") {
    CHECK_THROWS_AS(family_from_text("kind: family\ngroup: 3\n{0,1}\n"), ParseError);
    CHECK_THROWS_AS(family_from_text("format: 2\nkind: family\ngroup: 3\n{0,1}\n"), ParseError);
    CHECK_THROWS_AS(family_from_text("format: 1\nkind: family\ngroup: 3\n{0,1\n"), ParseError);
    CHECK_THROWS_AS(family_from_text("format: 1\nkind: family\ngroup: 3\n{0,1}^0\n"), ParseError);
    CHECK_THROWS_AS(family_from_text("format: 1\nkind: family\ngroup: 3\n{0,3}\n"), ParseError);
    CHECK_THROWS_AS(family_from_text("format: 1\nkind: family\ngroup: 3\n"), ParseError);
    CHECK_THROWS_AS(family_from_text("format: 1\nkind: space\ngroup: 3\n{0,1}\n"), ParseError);
  }
}

TEST_CASE("space text and JSON round trips") {
  const auto s = space_from_text(z8_text);
  CHECK(s.class_count() == 4);
  CHECK(verify_space(s).ok());
  CHECK(space_from_text(space_to_text(s)).classes() == s.classes());
  const auto j = space_to_json(s);
  CHECK(j.at("v") == 8);
  CHECK(j.at("K") == json::array({2, 3}));
  CHECK(space_from_json(json::parse(j.dump())).classes() == s.classes());
  CHECK_THROWS_AS(space_from_text("format: 1\nkind: space\ngroup: 8\nP0 = {{0,4}, {1,6,7}\n"), ParseError);
}

TEST_CASE("field elements") {
  const FiniteField f81(3, 4, std::vector<std::uint32_t>{1, 0, 0, 1, 2});
  const auto g = f81.generator();
  const auto x = parse_field_element(f81, "g^3+g+1");
  CHECK(x == f81.add(f81.add(f81.pow(g, 3), g), f81.one()));
  CHECK(parse_field_element(f81, "2g^2+2") == f81.from_coefficients(std::vector<std::int64_t>{2, 0, 2}));
  CHECK(parse_field_element(f81, "[1,1,0,1]") == x);
  CHECK(parse_field_element(f81, "-g") == f81.neg(g));
  CHECK(parse_field_element(f81, "2*g") == f81.add(g, g));
  CHECK(field_element_text(f81, x) == "g^3+g+1");
  CHECK(parse_field_element(f81, field_element_text(f81, x)) == x);
  for (std::uint64_t v = 0; v < 81; ++v) {
    const auto y = f81.element(v);
    CHECK(parse_field_element(f81, field_element_text(f81, y)) == y);
    CHECK(element_from_json(f81, element_to_json(f81, y)) == y);
  }
  const auto f41 = FiniteField::of_order(41);
  CHECK(parse_field_element(f41, "-1") == f41.element(40));
  CHECK(element_to_json(f41, f41.element(12)) == 12);
  CHECK(field_from_json(field_to_json(f81)) == f81);
  CHECK(parse_modulus("1,0,0,1,2") == std::vector<std::uint32_t>{1, 0, 0, 1, 2});
  CHECK_THROWS_AS(parse_field_element(f81, "g^x"), ParseError);
  CHECK_THROWS_AS(parse_field_element(f81, "[1,0,0,0,1]"), ParseError);
}

TEST_CASE("liftings, tuples and certificates") {
  const auto f = FiniteField::of_order(17);
  const auto shape = make_shape("quad17", f);
  std::vector<FieldElement> t{f.element(2), f.element(3), f.element(6), f.element(4)};
  const auto l = lifting_from_tuple(shape, t);
  const auto back = lifting_from_json(json::parse(lifting_to_json(l).dump()));
  CHECK(back.blocks == l.blocks);
  CHECK(back.companion == l.companion);
  CHECK(same(back.base, l.base));

  const TupleWitness w{"quad17", f, t};
  const auto tw = tuple_from_json(tuple_to_json(w));
  CHECK(tw.tuple == t);
  CHECK(tw.shape == "quad17");

  const Object obj = w;
  const auto v = verdicts(obj);
  CHECK(v.at("good") == true);
  CHECK(v.at("lifting").at("perfect") == true);
  const auto cert = make_certificate(obj, v);
  CHECK(cert.at("kind") == "certificate");
  CHECK(cert.at("object_kind") == "tuple");
  CHECK(cert.at("digest") == digest(tuple_to_json(w)));
  const auto again = parse_object(cert.dump());
  CHECK(object_kind(again) == "tuple");
  CHECK(verdicts(again) == v);
  CHECK(verdicts_pass("tuple", v));

  const Object sp = space_from_text(z8_text);
  const auto sv = verdicts(sp);
  CHECK(verdicts_pass("space", sv));
  CHECK(verdicts(parse_object(make_certificate(sp, sv).dump())) == sv);
  CHECK(object_kind(parse_object(z34_text)) == "family");
  CHECK_THROWS_AS(parse_object("{\"format\":1,\"kind\":\"bogus\"}"), ParseError);
  CHECK_THROWS_AS(parse_object("{not json"), ParseError);
}

TEST_CASE("digests") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  const auto a = family_to_json(family_from_text(z34_text));
  auto b = a;
  b["blocks"][0]["elements"][0] = 3;
  CHECK(digest(a) == digest(json::parse(a.dump())));
  CHECK(digest(a) != digest(b));
}

TEST_CASE("data files parse") {
  const auto dir = default_data_dir();
  const auto quads = parse_tuple_table(read_file(dir / "quadruples.txt"));
  CHECK(quads.shape == "quad");
  CHECK(quads.rows.size() == 7);
  const auto septs = parse_tuple_table(read_file(dir / "septuples.txt"));
  CHECK(septs.rows.size() == 14);
  CHECK(septs.none == std::vector<std::uint64_t>{29, 43});
  // the q = 81 modulus is not monic and gets normalized
  const auto& r81 = quads.rows[4];
  REQUIRE(r81.q == 81);
  const auto f81 = row_field(r81);
  CHECK(f81.modulus() == std::vector<std::uint32_t>{2, 0, 0, 2, 1});
  CHECK(row_tuple(f81, r81).size() == 4);
  CHECK(family_from_text(read_file(dir / "z57_pdf.txt")).block_count() == 16);
}
