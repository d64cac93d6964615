#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harmony/constructors.hpp"
#include "harmony/errors.hpp"
#include "oracle.hpp"

using namespace harmony;

namespace {

using Sizes = std::map<std::uint64_t, std::uint64_t>;

void check_harmonious(const BlockFamily& f, std::uint64_t lambda, const Sizes& sizes) {
  const auto v = classify(f);
  CHECK(v.kind == FamilyKind::strong);
  CHECK(v.lambda == lambda);
  CHECK(v.harmonious);
  CHECK(v.sizes == sizes);
  CHECK(oracle::strong_index(f.group, oracle::position_lists(f)) == lambda);
}

}  // namespace

TEST_CASE("classic_sdf") {
  const auto z2 = classic_sdf(AbelianGroup::cyclic(2));
  REQUIRE(z2.entries.size() == 2);
  CHECK(z2.entries[0].block == Block::constant(0, 3));
  CHECK(z2.entries[1].block == Block::of({0, 0, 1}));
  CHECK(z2.entries[1].repeat == 3);
  check_harmonious(z2, 12, {{3, 4}});
  check_harmonious(classic_sdf(AbelianGroup::trivial()), 6, {{2, 3}});
  const auto z8 = classic_sdf(AbelianGroup::cyclic(8));
  check_harmonious(z8, 90, {{9, 10}});
  CHECK(z8.flatten_size() == 90);
}

TEST_CASE("fixtures") {
  const auto d = fixture("doubled", AbelianGroup::cyclic(3));
  const auto listed = d.blocks();
  REQUIRE(listed.size() == 5);
  CHECK(listed[0] == Block::of({0, 0, 0}));
  CHECK(listed[1] == Block::of({0, 0, 0}));
  CHECK(listed[2] == Block::of({0, 1, 2}));
  CHECK(listed[3] == Block::of({0, 1, 2}));
  CHECK(listed[4] == Block::of({0, 0, 1, 1, 2, 2}));
  check_harmonious(d, 18, {{3, 4}, {6, 1}});
  check_harmonious(fixture("z9_a"), 16, {{4, 1}, {12, 1}});
  check_harmonious(fixture("z9_b"), 18, {{6, 1}, {12, 1}});
  check_harmonious(fixture("z2_pairs"), 8, {{2, 2}, {4, 1}});
  for (const auto& g : {AbelianGroup({4}), AbelianGroup({2, 2})}) {
    check_harmonious(fixture("order4_a", g), 14, {{3, 1}, {5, 1}, {6, 1}});
    check_harmonious(fixture("order4_b", g), 18, {{3, 2}, {6, 2}});
  }
  CHECK_THROWS_AS(fixture("order4_a", AbelianGroup::cyclic(5)), PreconditionError);
  CHECK_THROWS_AS(fixture("z9_a", AbelianGroup({3, 3})), PreconditionError);
  CHECK_THROWS_AS(fixture("doubled", AbelianGroup::cyclic(2)), PreconditionError);
  CHECK_THROWS_AS(fixture("nope"), PreconditionError);
}

TEST_CASE("catalog signatures") {
  const auto catalog = sdf_catalog();
  CHECK(catalog.size() > 20);
  for (const auto& r : catalog) {
    CAPTURE(r.name);
    CAPTURE(r.group.describe());
    check_harmonious(r.build(), r.lambda, r.sizes);
  }
  // uniform SDFs are harmonious exactly when |G| = k - 1
  for (const auto& r : catalog) {
    const auto f = r.build();
    if (f.size_profile().size() == 1) CHECK(f.size_profile().begin()->first == f.group.order() + 1);
  }
}

TEST_CASE("fund_sdf") {
  check_harmonious(fund_sdf(AbelianGroup::cyclic(2), 4), 16, {{2, 4}, {4, 2}});
  check_harmonious(fund_sdf(AbelianGroup::cyclic(3), 5), 30, {{3, 5}, {5, 3}});
  CHECK_THROWS_AS(fund_sdf(AbelianGroup::cyclic(2), 3), PreconditionError);
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (const auto& g : abelian_groups_of_order(n)) {
      for (std::uint64_t h = n + 2; h <= 10; ++h) {
        const auto f = fund_sdf(g, h);
        CHECK(f.flatten_size() == h * n * (h - n));
        CHECK(classify(f).lambda == h * n * (h - n));
      }
    }
  }
}

TEST_CASE("union_sdfs") {
  const auto c = classic_sdf(AbelianGroup::cyclic(2));
  const auto u1 = union_sdfs({c});
  CHECK(u1.blocks() == c.blocks());
  const auto z2 = AbelianGroup::cyclic(2);
  check_harmonious(union_sdfs({fund_sdf(z2, 4), fund_sdf(z2, 5)}), 46, {{2, 4 + 10}, {4, 2}, {5, 2}});
  CHECK(classify(union_sdfs({fixture("z9_a"), fixture("z9_b")})).lambda == 34);
  // associativity up to reordering
  const auto a = fund_sdf(z2, 4), b = fund_sdf(z2, 5), d = fund_sdf(z2, 6);
  const auto left = union_sdfs({union_sdfs({a, b}), d});
  const auto right = union_sdfs({a, union_sdfs({b, d})});
  CHECK(left.blocks() == right.blocks());
  CHECK_THROWS_AS(union_sdfs({c, fixture("z9_a")}), PreconditionError);
  BlockFamily not_sdf{z2, {{Block::of({0, 1}), 1}}};
  CHECK_THROWS_AS(union_sdfs({not_sdf}), PreconditionError);
}

TEST_CASE("assemble_for_k") {
  const auto a = assemble_for_k({2, 4});
  CHECK(a.lambda == 16);
  CHECK(a.family.blocks() == fund_sdf(AbelianGroup::cyclic(2), 4).blocks());
  const auto b = assemble_for_k({2, 3});
  CHECK(b.lambda == 12);
  CHECK(b.family.blocks() == classic_sdf(AbelianGroup::cyclic(2)).blocks());
  const auto c = assemble_for_k({3, 5, 6});
  CHECK(c.lambda == 84);
  CHECK(classify(c.family).lambda == 84);
  for (const std::set<std::uint64_t> k :
       {std::set<std::uint64_t>{2, 3}, {2, 4}, {3, 4, 7}, {1, 2}, {1, 5, 6}, {4, 5, 6, 8}, {3, 6}}) {
    const auto x = assemble_for_k(k);
    const auto v = classify(x.family);
    CHECK(v.kind == FamilyKind::strong);
    CHECK(v.harmonious);
    std::set<std::uint64_t> got{*k.begin()};
    for (const auto& [size, m] : v.sizes) got.insert(size);
    CHECK(got == k);
  }
  CHECK(assemble_for_k({2, 4}, AbelianGroup::cyclic(2)).group == AbelianGroup::cyclic(2));
  CHECK_THROWS_AS(assemble_for_k({3}), PreconditionError);
  CHECK_THROWS_AS(assemble_for_k({0, 3}), PreconditionError);
  CHECK_THROWS_AS(assemble_for_k({4, 6}, AbelianGroup::cyclic(3)), PreconditionError);
}

TEST_CASE("abelian_groups_of_order") {
  CHECK(abelian_groups_of_order(1).size() == 1);
  CHECK(abelian_groups_of_order(4).size() == 2);
  CHECK(abelian_groups_of_order(8).size() == 3);
  CHECK(abelian_groups_of_order(12).size() == 2);
  for (const auto& g : abelian_groups_of_order(36)) CHECK(g.order() == 36);
}
