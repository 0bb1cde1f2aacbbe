#include <map>

#include "doctest.h"
#include "spbw/ring.hpp"

using namespace spbw;

namespace {

Elem gen(const RingPtr& r, const std::string& name) {
  for (auto& [nm, el] : r->generators())
    if (nm == name) return el;
  FAIL("no generator named ", name);
  return r->zero();
}

// independent GF(4) oracle: pairs (c0, c1) over Z/2 with a^2 = a + 1
struct F4 {
  int c0, c1;
  bool operator<(const F4& o) const { return std::tie(c0, c1) < std::tie(o.c0, o.c1); }
  bool operator==(const F4& o) const { return c0 == o.c0 && c1 == o.c1; }
};
F4 f4add(F4 x, F4 y) { return {(x.c0 + y.c0) % 2, (x.c1 + y.c1) % 2}; }
F4 f4mul(F4 x, F4 y) {
  int d0 = x.c0 * y.c0, d1 = x.c0 * y.c1 + x.c1 * y.c0, d2 = x.c1 * y.c1;
  return {(d0 + d2) % 2, (d1 + d2) % 2};  // a^2 -> a + 1
}

}  // namespace

TEST_CASE("GF(4) arithmetic matches the pair oracle") {
  RingPtr r = make_gf(4);
  REQUIRE(r->cardinality() == 4);
  // code layout: c0 + 2*c1
  auto to_code = [](F4 x) { return Code(x.c0 + 2 * x.c1); };
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      F4 x{i % 2, i / 2}, y{j % 2, j / 2};
      CHECK(r->addc(to_code(x), to_code(y)) == to_code(f4add(x, y)));
      CHECK(r->mulc(to_code(x), to_code(y)) == to_code(f4mul(x, y)));
    }
  CHECK(r->commutative());
  for (Code c = 1; c < 4; ++c) CHECK(r->is_unit(c));
}

TEST_CASE("GF(4)[z]/(z^2): structure and nil data") {
  RingPtr f4 = make_gf(4);
  RingPtr r = make_quotient(f4, "z", {f4->zero(), f4->zero(), f4->one()});
  REQUIRE(r->cardinality() == 16);
  Elem z = gen(r, "z"), a = gen(r, "a");
  CHECK(r->is_zero(r->mul(z, z)));
  CHECK_FALSE(r->is_zero(r->mul(a, a)));

  // mixed-radix codes: u + v*z has code 4*code(v) + code(u)
  CHECK(r->encode(z) == 4);
  CHECK(r->encode(a) == 2);
  CHECK(r->encode(r->add(a, z)) == 6);

  NilData nd = nil_data(r);
  CHECK(nd.nilpotents.size() == 4);  // zR
  for (Code c : nd.nilpotents) CHECK(r->mulc(c, c) == 0);
  CHECK(nd.is_ni);
  CHECK(nd.nilindex == 2);
  CHECK(nd.is_2primal);
  CHECK(nd.prime_radical == nd.nilpotents);
}

TEST_CASE("Zmod nil data") {
  NilData n4 = nil_data(make_zmod(4));
  CHECK(n4.nilpotents == std::vector<Code>{0, 2});
  CHECK(n4.is_ni);
  CHECK(n4.nilindex == 2);
  CHECK(n4.is_2primal);

  NilData n12 = nil_data(make_zmod(12));
  CHECK(n12.nilpotents == std::vector<Code>{0, 6});
  CHECK(n12.prime_radical == std::vector<Code>{0, 6});
  CHECK(n12.is_ni);
}

TEST_CASE("trivial extension of Zmod(4)") {
  RingPtr r = make_trivial_ext(make_zmod(4));
  REQUIRE(r->cardinality() == 16);
  Elem e = gen(r, "e");
  CHECK(r->is_zero(r->mul(e, e)));
  CHECK(r->mul(e, r->from_int(3)) == r->mul(r->from_int(3), e));

  NilData nd = nil_data(r);
  // (r, m) nilpotent iff r in {0, 2}: 8 of 16
  CHECK(nd.nilpotents.size() == 8);
  CHECK(nd.is_ni);
  CHECK(nd.is_2primal);
}

TEST_CASE("2x2 matrices over GF(2) are not NI") {
  RingPtr r = make_full_matrix(make_gf(2), 2);
  REQUIRE(r->cardinality() == 16);
  CHECK_FALSE(r->commutative());
  NilData nd = nil_data(r);
  CHECK(nd.nilpotents.size() == 4);
  CHECK_FALSE(nd.is_ni);
  // witness: e12 and e21 are nilpotent, e12 + e21 is a unit
  Elem w = r->add(gen(r, "e12"), gen(r, "e21"));
  CHECK_FALSE(is_nilpotent(r, w));
  CHECK(r->is_unit(r->encode(w)));
}

TEST_CASE("upper triangular 2x2 over Zmod(4)") {
  RingPtr r = make_triangular(make_zmod(4), 2);
  REQUIRE(r->cardinality() == 64);
  Elem e12 = gen(r, "e12");
  CHECK(r->is_zero(r->mul(e12, e12)));
  NilData nd = nil_data(r);
  CHECK(nd.nilpotents.size() == 16);  // both diagonal entries in {0, 2}
  CHECK(nd.is_ni);
}

TEST_CASE("product ring Zmod(2) x Zmod(3)") {
  RingPtr r = make_product({make_zmod(2), make_zmod(3)});
  REQUIRE(r->cardinality() == 6);
  NilData nd = nil_data(r);
  CHECK(nd.nilpotents == std::vector<Code>{0});
  CHECK(nd.is_2primal);
}

TEST_CASE("symbolic Int") {
  RingPtr z = make_int();
  CHECK(z->symbolic());
  CHECK(z->from_int(-3).v[0] == -3);
  CHECK(z->nilpotent_structural(z->zero()));
  CHECK_FALSE(z->nilpotent_structural(z->from_int(2)));
  CHECK_THROWS_AS((void)nil_data(z), Error);
}

TEST_CASE("symbolic triangular over Int") {
  RingPtr r = make_triangular(make_int(), 2);
  CHECK(r->symbolic());
  Elem e12 = gen(r, "e12");
  CHECK(r->nilpotent_structural(e12));
  CHECK(r->is_zero(r->mul(e12, e12)));
  CHECK_FALSE(r->nilpotent_structural(r->one()));
  Elem two_i = r->from_int(2);
  CHECK_FALSE(r->nilpotent_structural(two_i));
}

TEST_CASE("symbolic polynomials over GF(3)") {
  RingPtr r = make_poly(make_zmod(3), "t");
  Elem t = gen(r, "t");
  Elem p = r->mul(r->add(t, r->one()), r->add(t, r->from_int(2)));
  // (t+1)(t+2) = t^2 + 2
  Elem expect = r->add(r->mul(t, t), r->from_int(2));
  CHECK(p == expect);
  CHECK(r->print(p) == "t^2+2");
  CHECK(r->nilpotent_structural(r->zero()));
  CHECK_FALSE(r->nilpotent_structural(t));
}

TEST_CASE("coset quotient by the nilradical") {
  RingPtr f4 = make_gf(4);
  RingPtr r = make_quotient(f4, "z", {f4->zero(), f4->zero(), f4->one()});
  NilData nd = nil_data(r);
  RingPtr q = make_coset_quotient(r, nd.nilpotent);
  CHECK(q->cardinality() == 4);
  NilData qd = nil_data(q);
  CHECK(qd.nilpotents == std::vector<Code>{0});
}

TEST_CASE("construction errors") {
  CHECK_THROWS_WITH_AS((void)make_zmod(1), doctest::Contains("MalformedPreset"), Error);
  CHECK_THROWS_WITH_AS((void)make_gf_explicit(2, {0, 1, 1}),
                       doctest::Contains("NonIrreducibleModulus"), Error);
  RingPtr f4 = make_gf(4);
  std::vector<Elem> m(6, f4->zero());
  m[5] = f4->one();
  CHECK_THROWS_WITH_AS((void)make_quotient(f4, "z", m),
                       doctest::Contains("CardinalityOverCap"), Error);
}

TEST_CASE("encode/decode round trip") {
  for (RingPtr r : {make_trivial_ext(make_zmod(4)), make_triangular(make_zmod(4), 2),
                    make_gf(9), make_product({make_zmod(2), make_zmod(3)})}) {
    for (Code c = 0; c < r->cardinality(); ++c) CHECK(r->encode(r->decode(c)) == c);
  }
}
