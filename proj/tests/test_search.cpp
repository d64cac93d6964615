#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "harmony/errors.hpp"
#include "harmony/search.hpp"

using namespace harmony;

namespace {

std::vector<FieldElement> tuple(const FiniteField& f, const std::vector<std::uint64_t>& xs) {
  std::vector<FieldElement> out;
  for (auto x : xs) out.push_back(f.element(x));
  return out;
}

// Brute force: classes of order e by repeated multiplication with the generator.
std::vector<int> class_table(const FiniteField& f, std::uint64_t e) {
  std::vector<int> cls(f.order(), -1);
  auto x = f.one();
  for (std::uint64_t k = 0; k + 1 < f.order(); ++k) {
    cls[x.value] = static_cast<int>(k % e);
    x = f.mul(x, f.generator());
  }
  return cls;
}

bool oracle_good(const TupleShape& s, const std::vector<int>& cls, const std::vector<FieldElement>& t) {
  for (const auto& list : s.lists) {
    std::vector<int> seen(s.e, 0);
    for (const auto& form : list) {
      auto v = form.constant;
      for (const auto& [var, coef] : form.terms) v = s.field.add(v, s.field.mul(coef, t[var]));
      if (cls[v.value] < 0 || seen[cls[v.value]]++) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("shape preconditions") {
  CHECK_THROWS_AS(make_shape("quad", FiniteField::of_order(13)), PreconditionError);
  CHECK_THROWS_AS(make_shape("quad", FiniteField::of_order(9)), PreconditionError);
  CHECK_NOTHROW(make_shape("quad17", FiniteField::of_order(9)));
  CHECK_THROWS_AS(make_shape("quint", FiniteField::of_order(37)), PreconditionError);
  CHECK_THROWS_AS(make_shape("sept", FiniteField::of_order(31)), PreconditionError);
  CHECK_THROWS_AS(make_shape("hex", FiniteField::of_order(41)), PreconditionError);
  CHECK_THROWS_AS(tuple_is_good(make_shape("quad", FiniteField::of_order(41)), {}), PreconditionError);
}

TEST_CASE("quadruples") {
  SUBCASE("prime rows of the table") {
    for (auto [q, t] : std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>>{
             {41, {1, 12, 17, 32}}, {73, {1, 3, 20, 62}}, {89, {1, 3, 15, 55}}, {97, {1, 2, 20, 46}}}) {
      const auto f = FiniteField::of_order(q);
      const auto s = make_shape("quad", f);
      CAPTURE(q);
      CHECK(tuple_is_good(s, tuple(f, t)));
      CHECK(oracle_good(s, class_table(f, 4), tuple(f, t)));
      CHECK(verify_lifting(lifting_from_tuple(s, tuple(f, t))).perfect);
    }
  }
  SUBCASE("q = 49 with x^2 + x + 3") {
    const FiniteField f(7, 2, std::vector<std::uint32_t>{3, 1, 1});
    const auto s = make_shape("quad", f);
    // 1, g, 3g+3, 5g+4
    CHECK(tuple_is_good(s, tuple(f, {1, 7, 24, 39})));
  }
  SUBCASE("q = 81 with 2x^4 + x^3 + 1") {
    const FiniteField f(3, 4, std::vector<std::uint32_t>{1, 0, 0, 1, 2});
    const auto s = make_shape("quad", f);
    // g^3+1, g^3+g+1, 2g^2+2, g^3+g+2
    CHECK(tuple_is_good(s, tuple(f, {28, 31, 20, 32})));
  }
  SUBCASE("the q = 25 row is not good under x^2 + x + 2") {
    const FiniteField f(5, 2, std::vector<std::uint32_t>{2, 1, 1});
    const auto s = make_shape("quad", f);
    // 1, g, g+1, 4g+1
    CHECK_FALSE(tuple_is_good(s, tuple(f, {1, 5, 6, 21})));
    CHECK_FALSE(oracle_good(s, class_table(f, 4), tuple(f, {1, 5, 6, 21})));
    // a good quadruple does exist
    const auto r = search_tuple(s);
    REQUIRE(r.witness);
    CHECK(tuple_is_good(s, *r.witness));
  }
  SUBCASE("none over F17, the alternative shape works") {
    const auto f = FiniteField::of_order(17);
    const auto quad = make_shape("quad", f);
    CHECK_FALSE(search_tuple(quad).witness);
    CHECK(search_tuple(quad, {Strategy::lex, 0, 1, true, true}).count == 0);
    const auto alt = make_shape("quad17", f);
    const auto t = tuple(f, {2, 3, 6, 4});
    CHECK(tuple_is_good(alt, t));
    const auto l = lifting_from_tuple(alt, t);
    CHECK(l.companion == tuple(f, {1, 4}));
    CHECK(l.blocks[2][0].c == f.element(14));
    CHECK(l.blocks[2][2].c == f.element(11));
    CHECK(verify_lifting(l).perfect);
  }
}

TEST_CASE("search agrees with brute force") {
  for (auto [name, q] : std::vector<std::pair<std::string, std::uint64_t>>{{"quad17", 17}, {"quad", 41}, {"quad17", 41}}) {
    const auto f = FiniteField::of_order(q);
    const auto s = make_shape(name, f);
    const auto cls = class_table(f, 4);
    CAPTURE(name);
    CAPTURE(q);
    // brute force with a = 1, scaled back up
    std::uint64_t brute = 0;
    for (std::uint64_t b = 1; b < q; ++b) {
      for (std::uint64_t c = 1; c < q; ++c) {
        for (std::uint64_t d = 1; d < q; ++d) brute += oracle_good(s, cls, tuple(f, {1, b, c, d}));
      }
    }
    brute *= q - 1;
    CHECK(search_tuple(s, {Strategy::lex, 0, 1, true, true}).count == brute);
    CHECK(search_tuple(s, {Strategy::lex, 0, 3, true, true}).count == brute);
    if (q == 17) CHECK(search_tuple(s, {Strategy::lex, 0, 2, false, true}).count == brute);
    const auto r = search_tuple(s);
    CHECK(r.witness.has_value() == (brute > 0));
    if (r.witness) CHECK(oracle_good(s, cls, *r.witness));
  }
}

TEST_CASE("quintuples") {
  const auto f = FiniteField::of_order(19);
  const auto s = make_shape("quint", f);
  REQUIRE(s.epsilon);
  CHECK(*s.epsilon == f.element(7));
  const auto t = tuple(f, {2, 4, 5, 8, 10});
  CHECK(tuple_is_good(s, t));
  CHECK(oracle_good(s, class_table(f, 6), t));
  CHECK(shape_companion(s) == tuple(f, {1}));
  const auto l = lifting_from_tuple(s, t);
  const std::vector<std::vector<LiftedPoint>> expected{
      {{0, f.element(2)}, {0, f.element(14)}, {0, f.element(3)}},
      {{0, f.element(4)}, {0, f.element(9)}, {0, f.element(6)}},
      {{0, f.element(5)}, {1, f.element(16)}, {2, f.element(17)}},
      {{0, f.element(8)}, {1, f.element(18)}, {2, f.element(12)}},
      {{0, f.element(1)}, {0, f.element(10)}, {1, f.element(7)}, {1, f.element(13)}, {2, f.element(11)}, {2, f.element(15)}}};
  CHECK(l.blocks == expected);
  CHECK(verify_lifting(l).perfect);

  const auto r = search_tuple(s);
  REQUIRE(r.witness);
  CHECK(tuple_is_good(s, *r.witness));

  const auto f127 = FiniteField::of_order(127);
  const auto s127 = make_shape("quint", f127);
  const auto r127 = search_tuple(s127);
  REQUIRE(r127.witness);
  CHECK(oracle_good(s127, class_table(f127, 6), *r127.witness));
  CHECK(verify_lifting(lifting_from_tuple(s127, *r127.witness)).perfect);
}

TEST_CASE("septuples") {
  SUBCASE("table rows") {
    for (auto [q, t] : std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>>{
             {71, {1, 15, 44, 50, 63, 53, 9}},
             {113, {1, 2, 90, 8, 12, 104, 63}},
             {127, {1, 8, 54, 112, 67, 5, 48}},
             {421, {1, 2, 7, 41, 55, 57, 105}},
             {449, {1, 2, 4, 258, 270, 149, 413}}}) {
      const auto f = FiniteField::of_order(q);
      const auto s = make_shape("sept", f);
      CAPTURE(q);
      CHECK(tuple_is_good(s, tuple(f, t)));
      CHECK(oracle_good(s, class_table(f, 7), tuple(f, t)));
      const auto l = lifting_from_tuple(s, tuple(f, t));
      CHECK(l.blocks.size() == 3);
      CHECK(verify_lifting(l).perfect);
    }
  }
  SUBCASE("none for 29 and 43") {
    for (std::uint64_t q : {29, 43}) {
      const auto s = make_shape("sept", FiniteField::of_order(q));
      CAPTURE(q);
      CHECK_FALSE(search_tuple(s, {Strategy::lex, 0, 4}).witness);
    }
  }
  SUBCASE("found for 71") {
    const auto f = FiniteField::of_order(71);
    const auto s = make_shape("sept", f);
    const auto r = search_tuple(s, {Strategy::lex, 0, 4});
    REQUIRE(r.witness);
    CHECK(oracle_good(s, class_table(f, 7), *r.witness));
  }
}

TEST_CASE("search results do not depend on the number of jobs") {
  for (auto [name, q] : std::vector<std::pair<std::string, std::uint64_t>>{
           {"quad", 41}, {"quad", 113}, {"quint", 127}, {"sept", 71}, {"sept", 127}}) {
    const auto s = make_shape(name, FiniteField::of_order(q));
    for (auto strategy : {Strategy::lex, Strategy::random}) {
      CAPTURE(name);
      CAPTURE(q);
      const auto one = search_tuple(s, {strategy, 11, 1});
      const auto four = search_tuple(s, {strategy, 11, 4});
      REQUIRE(one.witness);
      CHECK(one.witness == four.witness);
    }
  }
}
