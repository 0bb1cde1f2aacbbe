#include "spbw/shell.hpp"

#include <algorithm>
#include <cctype>

namespace spbw {

// --------------------------------------------------------------------- lexer

namespace {

struct Tok {
  enum Kind { Ident, Int, Sym, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void err(const std::string& msg, int l, int c) const {
    fail(Err::SyntaxError, msg + " at line " + std::to_string(l) + ", column " +
                               std::to_string(c));
  }

  void bump() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  Tok next() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
    Tok t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) return t;
    char c = src[pos];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.kind = Tok::Ident;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
        t.text += src[pos];
        bump();
      }
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      t.kind = Tok::Int;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        t.text += src[pos];
        bump();
      }
      return t;
    }
    t.kind = Tok::Sym;
    if (c == '-' && pos + 1 < src.size() && src[pos + 1] == '>') {
      t.text = "->";
      bump();
      bump();
      return t;
    }
    if (std::string("={}()[],;:*+-^").find(c) == std::string::npos)
      err(std::string("unexpected character '") + c + "'", line, col);
    t.text = std::string(1, c);
    bump();
    return t;
  }
};

// values of the commutative literal evaluator: exponent vector -> coefficient
using CPoly = std::map<std::vector<int>, Elem>;

struct LitCtx {
  RingPtr ring;                                     // coefficient ring
  std::vector<std::string> vars;                    // polynomial indeterminates
  std::map<std::string, Elem> env;                  // named constants
};

void cacc(CPoly& p, const std::vector<int>& m, const Elem& c) {
  if (c.ring->is_zero(c)) return;
  auto [it, fresh] = p.emplace(m, c);
  if (!fresh) {
    it->second = c.ring->add(it->second, c);
    if (c.ring->is_zero(it->second)) p.erase(it);
  }
}

CPoly cmul(const LitCtx& cx, const CPoly& a, const CPoly& b) {
  CPoly out;
  for (auto& [ma, ca] : a)
    for (auto& [mb, cb] : b) {
      std::vector<int> m(cx.vars.size(), 0);
      for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
      cacc(out, m, cx.ring->mul(ca, cb));
    }
  return out;
}

// shared recursive-descent over a token stream
struct Parser {
  Lexer lex;
  Tok cur;

  explicit Parser(const std::string& s) : lex(s) { cur = lex.next(); }

  [[noreturn]] void err(const std::string& msg) const { lex.err(msg, cur.line, cur.col); }

  Tok eat() {
    Tok t = cur;
    cur = lex.next();
    return t;
  }
  bool at(Tok::Kind k, const std::string& text = "") const {
    return cur.kind == k && (text.empty() || cur.text == text);
  }
  Tok expect(Tok::Kind k, const std::string& text = "") {
    if (!at(k, text))
      err("expected " + (text.empty() ? std::string(k == Tok::Ident ? "identifier" : "number")
                                      : "'" + text + "'") +
          ", found '" + (cur.kind == Tok::End ? "end of input" : cur.text) + "'");
    return eat();
  }
  int64_t expect_int() {
    Tok t = expect(Tok::Int);
    return std::stoll(t.text);
  }

  // ---- commutative polynomial literals

  CPoly lit_expr(const LitCtx& cx) {
    bool negate = false;
    if (at(Tok::Sym, "-")) {
      eat();
      negate = true;
    }
    CPoly v = lit_term(cx);
    if (negate) v = lit_neg(v);
    while (at(Tok::Sym, "+") || at(Tok::Sym, "-")) {
      bool sub = eat().text == "-";
      CPoly w = lit_term(cx);
      if (sub) w = lit_neg(w);
      for (auto& [m, c] : w) cacc(v, m, c);
    }
    return v;
  }
  CPoly lit_neg(const CPoly& v) {
    CPoly out;
    for (auto& [m, c] : v) out.emplace(m, c.ring->neg(c));
    return out;
  }
  CPoly lit_term(const LitCtx& cx) {
    CPoly v = lit_factor(cx);
    while (at(Tok::Sym, "*")) {
      eat();
      v = cmul(cx, v, lit_factor(cx));
    }
    return v;
  }
  CPoly lit_factor(const LitCtx& cx) {
    CPoly v = lit_base(cx);
    if (at(Tok::Sym, "^")) {
      eat();
      int64_t e = expect_int();
      CPoly out;
      cacc(out, std::vector<int>(cx.vars.size(), 0), cx.ring->one());
      for (int64_t i = 0; i < e; ++i) out = cmul(cx, out, v);
      v = out;
    }
    return v;
  }
  CPoly lit_base(const LitCtx& cx) {
    CPoly v;
    std::vector<int> unit(cx.vars.size(), 0);
    if (at(Tok::Int)) {
      cacc(v, unit, cx.ring->from_int(expect_int()));
      return v;
    }
    if (at(Tok::Sym, "(")) {
      eat();
      v = lit_expr(cx);
      expect(Tok::Sym, ")");
      return v;
    }
    if (at(Tok::Sym, "[")) {
      Tok open = cur;
      eat();
      auto comps = cx.ring->components();
      if (comps.empty()) err("'[' literal needs a pair or product ring");
      std::vector<int64_t> coords;
      for (size_t i = 0; i < comps.size(); ++i) {
        if (i) expect(Tok::Sym, ",");
        LitCtx sub{comps[i], {}, {}};
        for (auto& [nm, el] : comps[i]->generators()) sub.env.emplace(nm, el);
        Elem e = lit_const(sub);
        coords.insert(coords.end(), e.v.begin(), e.v.end());
      }
      expect(Tok::Sym, "]");
      cacc(v, unit, Elem{cx.ring.get(), coords});
      return v;
    }
    if (at(Tok::Sym, "-")) {
      eat();
      return lit_neg(lit_factor(cx));
    }
    if (at(Tok::Ident)) {
      Tok t = eat();
      for (size_t i = 0; i < cx.vars.size(); ++i)
        if (cx.vars[i] == t.text) {
          std::vector<int> m(cx.vars.size(), 0);
          m[i] = 1;
          cacc(v, m, cx.ring->one());
          return v;
        }
      auto it = cx.env.find(t.text);
      if (it == cx.env.end())
        fail(Err::UnresolvedName, "'" + t.text + "' at line " + std::to_string(t.line) +
                                      ", column " + std::to_string(t.col));
      cacc(v, unit, it->second);
      return v;
    }
    err("expected a polynomial literal");
  }
  Elem lit_const(const LitCtx& cx) {  // literal with no indeterminates allowed
    CPoly v = lit_expr(cx);
    for (auto& [m, c] : v)
      if (std::any_of(m.begin(), m.end(), [](int e) { return e != 0; }))
        err("indeterminates are not allowed here");
    return v.empty() ? cx.ring->zero() : v.begin()->second;
  }
};

LitCtx ring_ctx(const RingPtr& r) {
  LitCtx cx{r, {}, {}};
  for (auto& [nm, el] : r->generators()) cx.env.emplace(nm, el);
  return cx;
}

// ------------------------------------------------------- presentation parser

struct FileParser : Parser {
  Workspace& ws;
  int depth;

  FileParser(const std::string& s, Workspace& w, int d) : Parser(s), ws(w), depth(d) {}

  void run() {
    while (!at(Tok::End)) {
      Tok kw = expect(Tok::Ident);
      if (kw.text == "ring")
        ringdef();
      else if (kw.text == "endo")
        mapdef(false);
      else if (kw.text == "deriv")
        mapdef(true);
      else if (kw.text == "extension")
        extdef();
      else if (kw.text == "preset")
        presetdef();
      else
        lex.err("unknown statement '" + kw.text + "'", kw.line, kw.col);
    }
  }

  void no_dup(const std::string& name) {
    for (auto& d : ws.ring_decls)
      if (d.name == name) fail(Err::DuplicateDeclaration, "'" + name + "'");
    for (auto& d : ws.map_decls)
      if (d.name == name) fail(Err::DuplicateDeclaration, "'" + name + "'");
    if (name == ws.ext_name && !ws.ext_name.empty())
      fail(Err::DuplicateDeclaration, "'" + name + "'");
  }

  void ringdef() {
    std::string name = expect(Tok::Ident).text;
    no_dup(name);
    expect(Tok::Sym, "=");
    RingPtr r = ringexpr();
    expect(Tok::Sym, ";");
    ws.ring_decls.push_back({name, std::move(r)});
  }

  RingPtr ringexpr() {
    Tok head = expect(Tok::Ident);
    auto intarg = [&] {
      expect(Tok::Sym, "(");
      int64_t n = expect_int();
      expect(Tok::Sym, ")");
      return n;
    };
    if (head.text == "Int") return make_int();
    if (head.text == "Zmod") return make_zmod(uint64_t(intarg()));
    if (head.text == "GF") {
      expect(Tok::Sym, "(");
      int64_t q = expect_int();
      RingPtr r;
      if (at(Tok::Sym, ",")) {
        eat();
        // explicit modulus over the prime field, in the stock variable a
        int64_t p = q;
        LitCtx cx{make_zmod(uint64_t(p)), {"a"}, {}};
        CPoly m = lit_expr(cx);
        size_t deg = 0;
        for (auto& [e, c] : m) deg = std::max(deg, size_t(e[0]));
        std::vector<int64_t> coeffs(deg + 1, 0);
        for (auto& [e, c] : m) coeffs[size_t(e[0])] = cx.ring->encode(c);
        r = make_gf_explicit(uint64_t(p), coeffs);
      } else {
        r = make_gf(uint64_t(q));
      }
      expect(Tok::Sym, ")");
      return r;
    }
    if (head.text == "quotient") {
      expect(Tok::Sym, "(");
      RingPtr base = ringexpr();
      expect(Tok::Sym, ",");
      std::string var = expect(Tok::Ident).text;
      expect(Tok::Sym, ",");
      LitCtx cx = ring_ctx(base);
      cx.vars = {var};
      CPoly m = lit_expr(cx);
      expect(Tok::Sym, ")");
      size_t deg = 0;
      for (auto& [e, c] : m) deg = std::max(deg, size_t(e[0]));
      std::vector<Elem> coeffs(deg + 1, base->zero());
      for (auto& [e, c] : m) coeffs[size_t(e[0])] = c;
      return make_quotient(base, var, std::move(coeffs));
    }
    if (head.text == "triangular" || head.text == "matrices") {
      expect(Tok::Sym, "(");
      RingPtr base = ringexpr();
      expect(Tok::Sym, ",");
      int64_t n = expect_int();
      expect(Tok::Sym, ")");
      return head.text == "triangular" ? make_triangular(base, int(n))
                                       : make_full_matrix(base, int(n));
    }
    if (head.text == "trivial") {
      expect(Tok::Sym, "(");
      RingPtr base = ringexpr();
      expect(Tok::Sym, ")");
      return make_trivial_ext(base);
    }
    if (head.text == "polyring") {
      expect(Tok::Sym, "(");
      RingPtr base = ringexpr();
      expect(Tok::Sym, ",");
      std::string var = expect(Tok::Ident).text;
      expect(Tok::Sym, ")");
      return make_poly(base, var);
    }
    // a reference to an earlier declaration
    return ws.find_ring(head.text);
  }

  Images imagelist(const RingPtr& r) {
    Images images;
    LitCtx cx = ring_ctx(r);
    while (!at(Tok::Sym, "}")) {
      if (!images.empty()) expect(Tok::Sym, ",");
      std::string gen = expect(Tok::Ident).text;
      expect(Tok::Sym, "->");
      images.emplace_back(gen, lit_const(cx));
    }
    return images;
  }

  void mapdef(bool is_deriv) {
    std::string name = expect(Tok::Ident).text;
    no_dup(name);
    expect(Tok::Ident, "on");
    std::string rname = expect(Tok::Ident).text;
    RingPtr r = ws.find_ring(rname);
    std::string sname;
    if (is_deriv) {
      expect(Tok::Ident, "sigma");
      sname = expect(Tok::Ident).text;
    }
    expect(Tok::Sym, "{");
    Images images = imagelist(r);
    expect(Tok::Sym, "}");
    if (is_deriv)
      ws.derivs.emplace(name, build_derivation(r, name, ws.find_endo(sname), images));
    else
      ws.endos.emplace(name, build_map(r, name, images));
    ws.map_decls.push_back({name, rname, is_deriv, sname});
  }

  void extdef() {
    std::string name = expect(Tok::Ident).text;
    if (ws.ext) fail(Err::DuplicateDeclaration, "a file holds one extension, got a second");
    no_dup(name);
    expect(Tok::Ident, "over");
    std::string rname = expect(Tok::Ident).text;
    RingPtr r = ws.find_ring(rname);
    expect(Tok::Sym, "{");
    expect(Tok::Ident, "vars");
    std::vector<std::string> vars;
    vars.push_back(expect(Tok::Ident).text);
    while (at(Tok::Sym, ",")) {
      eat();
      vars.push_back(expect(Tok::Ident).text);
    }
    expect(Tok::Sym, ";");

    auto var_index = [&](const Tok& t) {
      for (size_t i = 0; i < vars.size(); ++i)
        if (vars[i] == t.text) return int(i);
      lex.err("'" + t.text + "' is not an extension variable", t.line, t.col);
    };

    std::vector<RingMap> sigma(vars.size());
    std::vector<Derivation> delta(vars.size());
    std::vector<bool> ruled(vars.size(), false);
    std::vector<Workspace::VarRule> rules(vars.size());
    std::map<std::pair<int, int>, QuadRelation> quad;

    while (!at(Tok::Sym, "}")) {
      Tok first = expect(Tok::Ident);
      if (at(Tok::Sym, ":")) {  // varrule
        int vi = var_index(first);
        if (ruled[vi]) fail(Err::DuplicateDeclaration, "rule for '" + first.text + "'");
        eat();
        expect(Tok::Ident, "sigma");
        std::string sn = expect(Tok::Ident).text;
        sigma[vi] = ws.find_endo(sn);
        rules[vi] = {first.text, sn, ""};
        if (at(Tok::Sym, ",")) {
          eat();
          expect(Tok::Ident, "delta");
          std::string dn = expect(Tok::Ident).text;
          delta[vi] = ws.find_deriv(dn);
          if (delta[vi].sigma.table != sigma[vi].table)
            fail(Err::MalformedPreset,
                 "derivation '" + dn + "' twists against a different sigma");
          rules[vi].delta = dn;
        } else {
          delta[vi] = zero_derivation(r, sigma[vi]);
        }
        ruled[vi] = true;
        expect(Tok::Sym, ";");
      } else {  // quadrule: xj * xi = polyliteral
        expect(Tok::Sym, "*");
        Tok second = expect(Tok::Ident);
        int j = var_index(first), i = var_index(second);
        if (j <= i)
          fail(Err::RelationNotLowerTriangular,
               "relation must define " + first.text + "*" + second.text +
                   " with the larger variable first; declare the product of the two "
                   "in descending order");
        if (quad.count({i, j}))
          fail(Err::DuplicateDeclaration, "relation for " + first.text + "*" + second.text);
        expect(Tok::Sym, "=");
        LitCtx cx = ring_ctx(r);
        cx.vars = vars;
        CPoly rhs = lit_expr(cx);
        expect(Tok::Sym, ";");
        QuadRelation q{r->zero(), r->zero(), std::vector<Elem>(vars.size(), r->zero())};
        for (auto& [m, c] : rhs) {
          int deg = 0, hi = -1;
          for (size_t k = 0; k < m.size(); ++k)
            if (m[k]) {
              deg += m[k];
              hi = int(k);
            }
          if (deg == 0)
            q.r0 = c;
          else if (deg == 1)
            q.rk[size_t(hi)] = c;
          else if (deg == 2 && m[size_t(i)] == 1 && m[size_t(j)] == 1)
            q.d = c;
          else
            fail(Err::MalformedPreset, "relation " + first.text + "*" + second.text +
                                           " must be d*" + second.text + "*" + first.text +
                                           " plus lower order terms");
        }
        quad.emplace(std::make_pair(i, j), std::move(q));
      }
    }
    expect(Tok::Sym, "}");
    for (size_t v = 0; v < vars.size(); ++v)
      if (!ruled[v]) fail(Err::MalformedPreset, "no sigma declared for '" + vars[v] + "'");

    ws.ext = std::make_shared<ExtensionSpec>(
        make_extension(r, vars, std::move(sigma), std::move(delta), std::move(quad)));
    ws.ext_name = name;
    ws.ext_ring = rname;
    ws.var_rules = std::move(rules);
  }

  void presetdef() {
    Tok name = expect(Tok::Ident);
    expect(Tok::Sym, ";");
    if (depth > 4) lex.err("preset inclusion too deep", name.line, name.col);
    FileParser inner(preset_text(name.text), ws, depth + 1);
    inner.run();
    ws.presets_used.push_back(name.text);
  }
};

}  // namespace

RingPtr Workspace::find_ring(const std::string& name) const {
  for (auto& d : ring_decls)
    if (d.name == name) return d.ring;
  fail(Err::UnresolvedName, "no ring named '" + name + "'");
}

const RingMap& Workspace::find_endo(const std::string& name) const {
  auto it = endos.find(name);
  if (it == endos.end()) fail(Err::UnresolvedName, "no endomorphism named '" + name + "'");
  return it->second;
}

const Derivation& Workspace::find_deriv(const std::string& name) const {
  auto it = derivs.find(name);
  if (it == derivs.end()) fail(Err::UnresolvedName, "no derivation named '" + name + "'");
  return it->second;
}

Workspace parse_presentation(const std::string& text) {
  Workspace ws;
  FileParser p(text, ws, 0);
  p.run();
  return ws;
}

// ---------------------------------------------------------- canonical print

std::string canonical_print(const Workspace& ws) {
  std::string out;
  for (auto& d : ws.ring_decls) out += "ring " + d.name + " = " + d.ring->describe() + ";\n";
  for (auto& d : ws.map_decls) {
    RingPtr r = ws.find_ring(d.ring);
    out += (d.is_deriv ? "deriv " : "endo ") + d.name + " on " + d.ring;
    if (d.is_deriv) out += " sigma " + d.sigma;
    out += " {";
    bool first = true;
    for (auto& [nm, el] : r->generators()) {
      Elem img = d.is_deriv ? ws.find_deriv(d.name).apply(el) : ws.find_endo(d.name).apply(el);
      out += std::string(first ? "" : ",") + " " + nm + " -> (" + r->print(img) + ")";
      first = false;
    }
    out += " }\n";
  }
  if (ws.ext) {
    const ExtensionSpec& e = *ws.ext;
    out += "extension " + ws.ext_name + " over " + ws.ext_ring + " {\n  vars";
    for (size_t i = 0; i < e.vars.size(); ++i)
      out += std::string(i ? "," : "") + " " + e.vars[i];
    out += ";\n";
    for (auto& r : ws.var_rules) {
      out += "  " + r.var + ": sigma " + r.sigma;
      if (!r.delta.empty()) out += ", delta " + r.delta;
      out += ";\n";
    }
    const RingPtr& R = e.ring;
    for (auto& [key, q] : e.quad) {
      auto [i, j] = key;
      out += "  " + e.vars[size_t(j)] + "*" + e.vars[size_t(i)] + " = (" + R->print(q.d) +
             ")*" + e.vars[size_t(i)] + "*" + e.vars[size_t(j)];
      if (!R->is_zero(q.r0)) out += " + (" + R->print(q.r0) + ")";
      for (size_t m = 0; m < q.rk.size(); ++m)
        if (!R->is_zero(q.rk[m])) out += " + (" + R->print(q.rk[m]) + ")*" + e.vars[m];
      out += ";\n";
    }
    out += "}\n";
  }
  return out;
}

// --------------------------------------------------------- literal frontends

Elem parse_elem(const RingPtr& ring, const std::string& text) {
  Parser p(text);
  Elem e = p.lit_const(ring_ctx(ring));
  if (!p.at(Tok::End)) p.err("trailing input after the element literal");
  return e;
}

SkewPoly parse_poly(const Workspace& ws, const std::string& text) {
  if (!ws.ext) fail(Err::EmptyTarget, "no extension is declared in this workspace");
  const ExtensionSpec& e = *ws.ext;
  LitCtx cx = ring_ctx(e.ring);
  cx.vars = e.vars;
  Parser p(text);
  CPoly v = p.lit_expr(cx);
  if (!p.at(Tok::End)) p.err("trailing input after the polynomial literal");
  // literals are written in normal form, so the commutative reading is exact
  SkewPoly f = sp_zero(e);
  for (auto& [m, c] : v) {
    Monomial mono(e.vars.size(), 0);
    for (size_t i = 0; i < m.size(); ++i) mono[i] = uint16_t(m[i]);
    f = nf_add(f, sp_term(e, c, mono));
  }
  return f;
}

// --------------------------------------------------------------- the catalog

const std::string& preset_text(const std::string& name) {
  for (auto& [nm, text] : preset_catalog())
    if (nm == name) return text;
  fail(Err::UnresolvedName, "no preset named '" + name + "'");
}

Workspace load_preset(const std::string& name) {
  Workspace ws = parse_presentation(preset_text(name));
  ws.presets_used.push_back(name);
  return ws;
}

}  // namespace spbw
