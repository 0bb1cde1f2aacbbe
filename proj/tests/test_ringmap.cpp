#include "doctest.h"
#include "spbw/ringmap.hpp"

using namespace spbw;

namespace {

Elem gen(const RingPtr& r, const std::string& name) {
  for (auto& [nm, el] : r->generators())
    if (nm == name) return el;
  FAIL("no generator named ", name);
  return r->zero();
}

RingPtr f4z2() {
  RingPtr f4 = make_gf(4);
  return make_quotient(f4, "z", {f4->zero(), f4->zero(), f4->one()});
}

// sigma_{i,j}: a -> a^i, z -> a^j z
RingMap sigma_ij(const RingPtr& r, int i, int j) {
  Elem a = gen(r, "a"), z = gen(r, "z");
  Elem ai = i == 1 ? a : r->mul(a, a);
  Elem ajz = z;
  for (int k = 0; k < j; ++k) ajz = r->mul(a, ajz);
  return build_map(r, "s" + std::to_string(i) + std::to_string(j), {{"a", ai}, {"z", ajz}});
}

}  // namespace

TEST_CASE("endomorphism family of GF(4)[z]/(z^2)") {
  RingPtr r = f4z2();
  Elem a = gen(r, "a"), z = gen(r, "z");
  for (int i = 1; i <= 2; ++i)
    for (int j = 0; j <= 2; ++j) {
      RingMap s = sigma_ij(r, i, j);
      CHECK(s.injective);
      // x a^r z = a^(ri+j) z x
      Elem arz = r->mul(r->mul(a, a), z);  // r = 2
      Elem expect = z;
      for (int k = 0; k < (2 * i + j) % 3; ++k) expect = r->mul(a, expect);
      CHECK(s.apply(arz) == expect);
    }
  CHECK(sigma_ij(r, 1, 0).is_identity());

  CompatReport rep = check_compatibility(r, {sigma_ij(r, 1, 1), sigma_ij(r, 1, 2)}, {});
  CHECK(rep.sigma_strict);
  CHECK(rep.sigma_weak);
  CHECK(rep.exhaustive);
  CHECK(rep.pairs_checked == 256);
}

TEST_CASE("bad generator images are rejected") {
  RingPtr r = f4z2();
  Elem a = gen(r, "a"), z = gen(r, "z");
  CHECK_THROWS_WITH_AS((void)build_map(r, "bad", {{"a", z}, {"z", z}}),
                       doctest::Contains("NotAHomomorphism"), Error);
  CHECK_THROWS_WITH_AS((void)build_map(r, "partial", {{"a", a}}),
                       doctest::Contains("GeneratorImageMissing"), Error);
}

TEST_CASE("trivial(Zmod(4)): sigma_3 is weak but not strict compatible") {
  RingPtr r = make_trivial_ext(make_zmod(4));
  Elem e = gen(r, "e");
  RingMap s1 = build_map(r, "s1", {{"e", e}});
  RingMap s2 = build_map(r, "s2", {{"e", r->neg(e)}});
  RingMap s3 = build_map(r, "s3", {{"e", r->zero()}});
  CHECK(s1.is_identity());
  CHECK(s2.injective);
  CHECK_FALSE(s3.injective);

  CompatReport rep = check_compatibility(r, {s1, s2, s3}, {});
  CHECK_FALSE(rep.sigma_strict);
  CHECK(rep.sigma_weak);
  // witness with the upper-triangular pattern: C*sigma3(D) = 0 but C*D != 0
  bool pattern = false;
  for (auto& w : rep.witnesses)
    if (w.map == "s3" && r->is_zero(r->mul(w.a, s3.apply(w.b))) &&
        !r->is_zero(r->mul(w.a, w.b)))
      pattern = true;
  CHECK(pattern);
}

TEST_CASE("entrywise d/dt on trivial(GF(2)[t]/(t^2)) is a derivation, not compatible") {
  RingPtr f2 = make_zmod(2);
  RingPtr kt = make_quotient(f2, "t", {f2->zero(), f2->zero(), f2->one()});
  RingPtr r = make_trivial_ext(kt);
  RingMap id = identity_map(r);
  Elem t = gen(r, "t");
  Derivation d = build_derivation(r, "d", id, {{"t", r->one()}, {"e", r->zero()}});
  CHECK(d.apply(r->mul(t, t)) == r->zero());  // d(t^2) = 2t = 0 in char 2

  CompatReport rep = check_compatibility(r, {id}, {d});
  CHECK(rep.sigma_strict);
  CHECK_FALSE(rep.delta_strict);  // t*t = 0 but t*d(t) = t != 0
  CHECK_FALSE(rep.delta_weak);    // 1*t in N but 1*d(t) = 1 not in N
}

TEST_CASE("symbolic maps on trivial(Int)") {
  RingPtr r = make_trivial_ext(make_int());
  Elem e = gen(r, "e");
  RingMap s2 = build_map(r, "s2", {{"e", r->neg(e)}});
  RingMap s3 = build_map(r, "s3", {{"e", r->zero()}});
  CHECK(s2.injective);
  CHECK_FALSE(s3.injective);
  Elem x{r.get(), {2, 5}};
  CHECK(s2.apply(x) == Elem{r.get(), {2, -5}});
  CHECK(s3.apply(x) == Elem{r.get(), {2, 0}});

  CHECK_THROWS_WITH_AS((void)check_compatibility(r, {s3}, {}),
                       doctest::Contains("SymbolicNeedsSampledMode"), Error);
  CompatReport rep = check_compatibility(r, {identity_map(r), s2, s3}, {}, true, 7, 4096);
  CHECK_FALSE(rep.exhaustive);
  CHECK_FALSE(rep.sigma_strict);
  CHECK(rep.sigma_weak);
}

TEST_CASE("N(R) is a compatible ideal for the GF(4)[z]/(z^2) family") {
  RingPtr r = f4z2();
  NilData nd = nil_data(r);
  std::vector<RingMap> Sigma{sigma_ij(r, 1, 1), sigma_ij(r, 2, 2)};
  CompatReport rep = check_compatible_ideal(r, nd.nilpotent, Sigma, {});
  CHECK(rep.sigma_strict);
  CHECK(rep.delta_strict);

  std::vector<bool> not_ideal(16, false);
  not_ideal[0] = true;
  not_ideal[r->encode(gen(r, "a"))] = true;
  CHECK_THROWS_WITH_AS((void)check_compatible_ideal(r, not_ideal, Sigma, {}),
                       doctest::Contains("NotAnIdeal"), Error);
}

TEST_CASE("derived law suite") {
  RingPtr r = f4z2();
  std::vector<RingMap> Sigma{sigma_ij(r, 1, 1), sigma_ij(r, 1, 2)};
  std::vector<Derivation> Delta{zero_derivation(r, Sigma[0])};
  LawSuiteReport rep = derived_law_suite(r, Sigma, Delta);
  CHECK(rep.strict_ok);
  CHECK(rep.weak_ok);
  CHECK(rep.checks > 0);

  RingPtr s = make_trivial_ext(make_zmod(4));
  RingMap s3 = build_map(s, "s3", {{"e", s->zero()}});
  LawSuiteReport rep2 = derived_law_suite(s, {s3}, {});
  CHECK_FALSE(rep2.strict_ok);
  CHECK(rep2.weak_ok);
  CHECK_FALSE(rep2.witnesses.empty());
}
