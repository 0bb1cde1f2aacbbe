#include <optional>
#include <set>

#include "doctest.h"
#include "spbw/assocprimes.hpp"
#include "spbw/nilweak.hpp"
#include "spbw/report.hpp"
#include "spbw/shell.hpp"

using namespace spbw;

TEST_CASE("every shipped preset parses") {
  std::set<std::string> names;
  for (auto& [nm, text] : preset_catalog()) {
    CAPTURE(nm);
    Workspace ws = load_preset(nm);
    CHECK(!ws.ring_decls.empty());
    names.insert(nm);
  }
  CHECK(names.count("f4z2-ext"));
  CHECK(names.count("qplane5"));
  CHECK(names.count("bq3-gf7-bad"));
  CHECK(names.size() == preset_catalog().size());
}

TEST_CASE("canonical print round trips") {
  for (auto& [nm, text] : preset_catalog()) {
    CAPTURE(nm);
    std::string once = canonical_print(parse_presentation(text));
    std::string twice = canonical_print(parse_presentation(once));
    CHECK(once == twice);
  }
}

TEST_CASE("parsed extensions match hand-built behavior") {
  Workspace ws = load_preset("qplane5");
  REQUIRE(ws.ext);
  CHECK(ws.ext->nvars() == 2);
  SkewPoly x = sp_var(*ws.ext, 0), y = sp_var(*ws.ext, 1);
  CHECK(sp_print(nf_mul(y, x)) == "(2)*x*y");

  ws = load_preset("f4z2-ext");
  REQUIRE(ws.ext);
  RingPtr r = ws.ext->ring;
  CHECK(r->cardinality() == 16);
  // x1 twists z by a, so x1*z lands on (a*z)*x1
  Elem z = parse_elem(r, "z");
  SkewPoly lhs = nf_mul(sp_var(*ws.ext, 0), sp_const(*ws.ext, z));
  CHECK(lhs.terms.size() == 1);
  CHECK(lhs.terms.begin()->second == parse_elem(r, "a*z"));
}

TEST_CASE("element and polynomial literals") {
  Workspace ws = load_preset("f4z2-ext");
  RingPtr r = ws.ext->ring;
  CHECK(r->print(parse_elem(r, "a*z+1")) == "a*z+1");
  CHECK(r->print(parse_elem(r, "(a+1)^2")) == r->print(parse_elem(r, "a")));
  SkewPoly f = parse_poly(ws, "(z)*x1*x2 + (a)*x1 + 1");
  CHECK(f.terms.size() == 3);
  CHECK(sp_print(parse_poly(ws, "x1^2")) == "(1)*x1^2");
  CHECK(sp_print(parse_poly(ws, "0")) == "0");

  // tuple literals need a ring with components
  Workspace tw = load_preset("s2z4");
  RingPtr tr = tw.find_ring("R");
  CHECK(tr->print(parse_elem(tr, "[2,3]")) == "[2,3]");
  CHECK_THROWS_WITH_AS(parse_elem(r, "[1,2]"),
                       doctest::Contains("pair or product"), Error);
}

TEST_CASE("parser rejects malformed input with positions") {
  auto kind_of = [](const std::string& text) -> std::optional<Err> {
    try {
      parse_presentation(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return std::nullopt;
  };
  CHECK(kind_of("ring R = Zmod(0);") == Err::MalformedPreset);
  CHECK(kind_of("ring R = Nope(3);") == Err::UnresolvedName);
  CHECK(kind_of("ring R = Zmod(4); ring R = Zmod(4);") == Err::DuplicateDeclaration);
  CHECK(kind_of("endo f on Q { }") == Err::UnresolvedName);

  // lower triangular means the larger variable comes first
  std::string bad =
      "ring R = Zmod(5);\nendo id on R { }\n"
      "extension A over R { vars x, y; x: sigma id; y: sigma id;\n"
      "x*y = (2)*x*y; }";
  CHECK(kind_of(bad) == Err::RelationNotLowerTriangular);

  try {
    parse_presentation("ring R = Zmod(4)\nendo id on R { }");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == Err::SyntaxError);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("preset splicing") {
  Workspace ws = parse_presentation("preset f4z2;\nendo frob2 on R { a -> a^2, z -> z }");
  CHECK(ws.presets_used == std::vector<std::string>{"f4z2"});
  CHECK(ws.find_ring("R")->cardinality() == 16);
  CHECK_NOTHROW(ws.find_endo("frob2"));
  CHECK_THROWS_AS(load_preset("no-such-preset"), Error);
}

TEST_CASE("compat verdicts reproduce through the loader") {
  Workspace ws = load_preset("s2z4");
  std::vector<RingMap> Sigma;
  for (auto& d : ws.map_decls)
    if (!d.is_deriv) Sigma.push_back(ws.find_endo(d.name));
  REQUIRE(Sigma.size() == 3);
  CompatReport rep = check_compatibility(ws.find_ring("R"), Sigma, {});
  CHECK(!rep.sigma_strict);
  CHECK(rep.sigma_weak);
  CHECK(rep.exhaustive);
}

TEST_CASE("confluence of shipped presentations, empirically") {
  for (const char* nm : {"qplane5", "usoq3-gf9", "conformal-sl2-gf5", "bq3-gf7"}) {
    CAPTURE(nm);
    Workspace ws = load_preset(nm);
    ConfluenceReport rep = check_pbw_confluence(*ws.ext);
    CHECK(rep.ok);
    CHECK(rep.exhaustive);
  }
  ConfluenceReport bad = check_pbw_confluence(*load_preset("bq3-gf7-bad").ext);
  CHECK(!bad.ok);
  CHECK(!bad.witness.empty());
}

TEST_CASE("reports are deterministic") {
  auto one = make_report("nass", preset_text("zmod4"), 42, "both");
  one["results"].push_back({{"size", 2}});
  auto two = make_report("nass", preset_text("zmod4"), 42, "both");
  two["results"].push_back({{"size", 2}});
  CHECK(render_report(one) == render_report(two));
  CHECK(one["input_digest"] != make_report("nass", preset_text("f4z2"), 42, "both")["input_digest"]);
  CHECK_THROWS_AS(emit_report(one, "/nonexistent-dir/r.json"), Error);
}
