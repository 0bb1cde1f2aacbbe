#include "spbw/extension.hpp"

#include <algorithm>

#include "spbw/rng.hpp"

namespace spbw {

int mono_deg(const Monomial& m) {
  int d = 0;
  for (auto e : m) d += e;
  return d;
}

int deglex_cmp(const Monomial& a, const Monomial& b) {
  int da = mono_deg(a), db = mono_deg(b);
  if (da != db) return da < db ? -1 : 1;
  for (size_t i = std::max(a.size(), b.size()); i-- > 0;) {
    int ea = i < a.size() ? a[i] : 0, eb = i < b.size() ? b[i] : 0;
    if (ea != eb) return ea < eb ? -1 : 1;
  }
  return 0;
}

Monomial mono_add(const Monomial& a, const Monomial& b) {
  Monomial r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

const QuadRelation& ExtensionSpec::quad_at(int i, int j) const {
  auto it = quad.find({i, j});
  if (it == quad.end())
    fail(Err::MalformedPreset, "no relation declared for " + vars[j] + "*" + vars[i]);
  return it->second;
}

bool ExtensionSpec::zero_delta() const {
  return std::all_of(delta.begin(), delta.end(), [](auto& d) { return d.is_zero; });
}

ExtensionSpec make_extension(RingPtr ring, std::vector<std::string> vars,
                             std::vector<RingMap> sigma, std::vector<Derivation> delta,
                             std::map<std::pair<int, int>, QuadRelation> quad) {
  ExtensionSpec e;
  e.ring = std::move(ring);
  e.vars = std::move(vars);
  size_t n = e.vars.size();
  if (n == 0) fail(Err::MalformedPreset, "extension needs at least one variable");
  if (sigma.size() != n || delta.size() != n)
    fail(Err::MalformedPreset, "need one endomorphism and one derivation per variable");
  for (size_t i = 0; i < n; ++i) {
    if (sigma[i].ring != e.ring || delta[i].ring != e.ring)
      fail(Err::MixedRings, "maps bound to a different ring");
    if (!sigma[i].injective)
      fail(Err::MalformedPreset,
           "sigma for " + e.vars[i] + " is not injective; the x_i r = sigma_i(r) x_i + "
           "delta_i(r) rule would lose the nonzero leading coefficient");
  }
  for (size_t j = 0; j < n; ++j)
    for (size_t i = 0; i < j; ++i) {
      auto it = quad.find({int(i), int(j)});
      if (it == quad.end())
        fail(Err::MalformedPreset,
             "missing relation for " + e.vars[j] + "*" + e.vars[i]);
      QuadRelation& q = it->second;
      if (q.d.ring != e.ring.get() || q.r0.ring != e.ring.get() || q.rk.size() != n)
        fail(Err::MalformedPreset, "malformed relation data");
      if (e.ring->is_zero(q.d))
        fail(Err::MalformedPreset, "relation " + e.vars[j] + "*" + e.vars[i] +
                                       " has zero coefficient on " + e.vars[i] + "*" + e.vars[j]);
    }
  e.sigma = std::move(sigma);
  e.delta = std::move(delta);
  e.quad = std::move(quad);
  return e;
}

// ------------------------------------------------------------- constructors

SkewPoly sp_zero(const ExtensionSpec& ext) { return SkewPoly{&ext, {}}; }

SkewPoly sp_term(const ExtensionSpec& ext, const Elem& r, const Monomial& m) {
  SkewPoly p{&ext, {}};
  if (!ext.ring->is_zero(r)) p.terms.emplace(m, r);
  return p;
}

SkewPoly sp_const(const ExtensionSpec& ext, const Elem& r) {
  return sp_term(ext, r, Monomial(ext.vars.size(), 0));
}

SkewPoly sp_var(const ExtensionSpec& ext, int i) {
  Monomial m(ext.vars.size(), 0);
  m[i] = 1;
  return sp_term(ext, ext.ring->one(), m);
}

static void require_same(const SkewPoly& f, const SkewPoly& g) {
  if (f.ext != g.ext) fail(Err::MixedExtensions, "operands from different extensions");
}

static void acc(SkewPoly& p, const Monomial& m, const Elem& c) {
  if (c.ring->is_zero(c)) return;
  auto [it, fresh] = p.terms.emplace(m, c);
  if (!fresh) {
    it->second = c.ring->add(it->second, c);
    if (c.ring->is_zero(it->second)) p.terms.erase(it);
  }
}

SkewPoly nf_add(const SkewPoly& f, const SkewPoly& g) {
  require_same(f, g);
  SkewPoly r = f;
  for (auto& [m, c] : g.terms) acc(r, m, c);
  return r;
}

SkewPoly nf_neg(const SkewPoly& f) {
  SkewPoly r{f.ext, {}};
  for (auto& [m, c] : f.terms) r.terms.emplace(m, f.ext->ring->neg(c));
  return r;
}

SkewPoly nf_sub(const SkewPoly& f, const SkewPoly& g) { return nf_add(f, nf_neg(g)); }

SkewPoly nf_scale(const Elem& r, const SkewPoly& f) {
  SkewPoly out{f.ext, {}};
  for (auto& [m, c] : f.terms) acc(out, m, f.ext->ring->mul(r, c));
  return out;
}

// --------------------------------------------------------- rewriting engine

namespace {

struct MulCtx {
  long long steps = 0;
  long long cap = 0;
  void bump() {
    if (++steps > cap)
      fail(Err::NonTerminatingRewrite,
           "rewrite step cap " + std::to_string(cap) + " exceeded");
  }
};

int max_var(const Monomial& m) {
  for (size_t i = m.size(); i-- > 0;)
    if (m[i]) return int(i);
  return -1;
}

int min_var(const Monomial& m) {
  for (size_t i = 0; i < m.size(); ++i)
    if (m[i]) return int(i);
  return -1;
}

SkewPoly mono_times_const(const ExtensionSpec& ext, const Monomial& alpha, const Elem& r,
                          MulCtx& ctx);
SkewPoly mono_times_mono(const ExtensionSpec& ext, const Monomial& alpha, const Monomial& beta,
                         MulCtx& ctx);

// x^alpha * (c * x^gamma)
SkewPoly mono_times_term(const ExtensionSpec& ext, const Monomial& alpha, const Elem& c,
                         const Monomial& gamma, MulCtx& ctx) {
  SkewPoly out = sp_zero(ext);
  if (ext.ring->is_zero(c)) return out;
  SkewPoly p = mono_times_const(ext, alpha, c, ctx);
  for (auto& [tau, e] : p.terms) {
    SkewPoly q = mono_times_mono(ext, tau, gamma, ctx);
    for (auto& [m, w] : q.terms) acc(out, m, ext.ring->mul(e, w));
  }
  return out;
}

SkewPoly mono_times_const(const ExtensionSpec& ext, const Monomial& alpha, const Elem& r,
                          MulCtx& ctx) {
  ctx.bump();
  if (ext.ring->is_zero(r)) return sp_zero(ext);
  int i = max_var(alpha);
  if (i < 0) return sp_const(ext, r);
  Monomial rest = alpha;
  --rest[i];
  // x^alpha r = x^rest (sigma_i(r) x_i + delta_i(r))
  SkewPoly out = sp_zero(ext);
  SkewPoly p = mono_times_const(ext, rest, ext.sigma[i].apply(r), ctx);
  for (auto& [m, c] : p.terms) {
    Monomial m2 = m;
    if (int(m2.size()) <= i) m2.resize(i + 1, 0);
    ++m2[i];  // every variable in m is <= i, appending x_i keeps normal order
    acc(out, m2, c);
  }
  if (!ext.delta[i].is_zero) {
    Elem dr = ext.delta[i].apply(r);
    if (!ext.ring->is_zero(dr)) out = nf_add(out, mono_times_const(ext, rest, dr, ctx));
  }
  return out;
}

// x^alpha * x_i
SkewPoly mono_times_var(const ExtensionSpec& ext, const Monomial& alpha, int i, MulCtx& ctx) {
  ctx.bump();
  int k = max_var(alpha);
  if (k <= i) {
    Monomial m = alpha;
    if (int(m.size()) <= i) m.resize(i + 1, 0);
    ++m[i];
    return sp_term(ext, ext.ring->one(), m);
  }
  Monomial rest = alpha;
  --rest[k];
  const QuadRelation& q = ext.quad_at(i, k);
  Monomial mik(ext.vars.size(), 0);
  mik[i] = mik[k] = 1;
  SkewPoly out = mono_times_term(ext, rest, q.d, mik, ctx);
  out = nf_add(out, mono_times_term(ext, rest, q.r0, Monomial(ext.vars.size(), 0), ctx));
  for (int m = 0; m < ext.nvars(); ++m) {
    Monomial em(ext.vars.size(), 0);
    em[m] = 1;
    out = nf_add(out, mono_times_term(ext, rest, q.rk[m], em, ctx));
  }
  return out;
}

SkewPoly mono_times_mono(const ExtensionSpec& ext, const Monomial& alpha, const Monomial& beta,
                         MulCtx& ctx) {
  ctx.bump();
  int i = min_var(beta);
  if (i < 0) return sp_term(ext, ext.ring->one(), alpha);
  SkewPoly q = mono_times_var(ext, alpha, i, ctx);
  Monomial rest = beta;
  --rest[i];
  if (min_var(rest) < 0) return q;
  SkewPoly out = sp_zero(ext);
  for (auto& [m, c] : q.terms) {
    SkewPoly p = mono_times_mono(ext, m, rest, ctx);
    for (auto& [m2, w] : p.terms) acc(out, m2, ext.ring->mul(c, w));
  }
  return out;
}

}  // namespace

SkewPoly nf_mul(const SkewPoly& f, const SkewPoly& g) {
  require_same(f, g);
  const ExtensionSpec& ext = *f.ext;
  MulCtx ctx;
  long long deg = sp_deg(f) + sp_deg(g) + 2;
  long long terms = (long long)(f.terms.size() * g.terms.size()) + 1;
  ctx.cap = ext.step_factor * terms;
  for (int i = 0; i <= ext.nvars(); ++i) ctx.cap *= deg;
  SkewPoly out = sp_zero(ext);
  for (auto& [alpha, a] : f.terms)
    for (auto& [beta, b] : g.terms) {
      SkewPoly p = mono_times_const(ext, alpha, b, ctx);
      for (auto& [tau, c] : p.terms) {
        SkewPoly q = mono_times_mono(ext, tau, beta, ctx);
        for (auto& [m, w] : q.terms) acc(out, m, ext.ring->mul(ext.ring->mul(a, c), w));
      }
    }
  return out;
}

SkewPoly pow_alpha_times_r(const ExtensionSpec& ext, const Monomial& alpha, const Elem& r) {
  int n = ext.nvars();
  Monomial a = alpha;
  a.resize(n, 0);
  if (ext.ring->is_zero(r)) return sp_zero(ext);

  // sigma^alpha(r) x^alpha plus, for each variable from the right, the
  // delta spill x^(prefix) x_i^(a_i - j) delta_i(sigma_i^(j-1)(s)) x_i^(j-1) x^(suffix)
  SkewPoly out = sp_zero(ext);
  Elem s = r;  // sigma_{i+1}^{a_{i+1}} ... sigma_n^{a_n}(r), updated right to left
  for (int i = n - 1; i >= 0; --i) {
    Monomial suffix(n, 0);
    for (int l = i + 1; l < n; ++l) suffix[l] = a[l];
    if (!ext.delta[i].is_zero) {
      Elem sj = s;  // sigma_i^(j-1)(s)
      for (int j = 1; j <= int(a[i]); ++j) {
        Elem c = ext.delta[i].apply(sj);
        if (!ext.ring->is_zero(c)) {
          Monomial prefix(n, 0);
          for (int l = 0; l < i; ++l) prefix[l] = a[l];
          prefix[i] = uint16_t(a[i] - j);
          SkewPoly inner = pow_alpha_times_r(ext, prefix, c);
          Monomial tail = suffix;
          tail[i] += uint16_t(j - 1);
          for (auto& [m, w] : inner.terms) acc(out, mono_add(m, tail), w);
        }
        sj = ext.sigma[i].apply(sj);
      }
    }
    for (int j = 0; j < int(a[i]); ++j) s = ext.sigma[i].apply(s);
  }
  acc(out, a, s);
  return out;
}

LeadData leading_data(const SkewPoly& f) {
  if (f.is_zero()) fail(Err::EmptyTarget, "leading data of the zero polynomial");
  auto& [m, c] = *f.terms.begin();
  return LeadData{m, c, mono_deg(m)};
}

int sp_deg(const SkewPoly& f) { return f.is_zero() ? -1 : mono_deg(f.terms.begin()->first); }

std::string sp_print(const SkewPoly& f) {
  if (f.is_zero()) return "0";
  std::string out;
  for (auto& [m, c] : f.terms) {
    if (!out.empty()) out += " + ";
    out += "(" + f.ext->ring->print(c) + ")";
    for (size_t i = 0; i < m.size(); ++i) {
      if (!m[i]) continue;
      out += "*" + f.ext->vars[i];
      if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
  }
  return out;
}

std::vector<Monomial> monomials_upto(int nvars, int d) {
  std::vector<Monomial> out{Monomial(nvars, 0)};
  size_t lo = 0;
  for (int deg = 1; deg <= d; ++deg) {
    size_t hi = out.size();
    // extend each monomial of the previous degree by its largest variable or
    // any larger one; yields each monomial exactly once
    for (size_t w = lo; w < hi; ++w)
      for (int i = std::max(max_var(out[w]), 0); i < nvars; ++i) {
        Monomial m = out[w];
        ++m[i];
        out.push_back(m);
      }
    lo = hi;
  }
  std::sort(out.begin(), out.end(),
            [](const Monomial& a, const Monomial& b) { return deglex_cmp(a, b) < 0; });
  return out;
}

SkewPoly random_poly(const ExtensionSpec& ext, int maxdeg, Rng& rng) {
  SkewPoly f = sp_zero(ext);
  for (auto& m : monomials_upto(ext.nvars(), maxdeg))
    acc(f, m, rng.elem(ext.ring));
  return f;
}

ConfluenceReport check_pbw_confluence(const ExtensionSpec& ext, int sample_trials,
                                      uint64_t seed) {
  ConfluenceReport rep;
  const RingPtr& R = ext.ring;
  int n = ext.nvars();

  std::vector<Elem> coeffs;
  if (!R->symbolic()) {
    coeffs = enumerate_elements(R);
  } else {
    rep.exhaustive = false;
    Rng rng(seed);
    for (int t = 0; t < sample_trials; ++t) coeffs.push_back(rng.elem(R));
  }

  auto mismatch = [&](const std::string& what, const SkewPoly& p1, const SkewPoly& p2) {
    rep.ok = false;
    if (rep.witness.empty())
      rep.witness = what + ": " + sp_print(p1) + "  vs  " + sp_print(p2);
  };

  for (int j = 1; j < n && rep.ok; ++j)
    for (int i = 0; i < j && rep.ok; ++i) {
      SkewPoly xj = sp_var(ext, j), xi = sp_var(ext, i);
      SkewPoly xji = nf_mul(xj, xi);
      for (const Elem& r : coeffs) {
        SkewPoly c = sp_const(ext, r);
        SkewPoly p1 = nf_mul(xji, c);
        SkewPoly p2 = nf_mul(xj, nf_mul(xi, c));
        ++rep.cases;
        if (p1 != p2) {
          mismatch("(" + ext.vars[j] + " " + ext.vars[i] + ") " + R->print(r), p1, p2);
          break;
        }
      }
    }

  for (int k = 2; k < n && rep.ok; ++k)
    for (int j = 1; j < k && rep.ok; ++j)
      for (int i = 0; i < j && rep.ok; ++i) {
        SkewPoly xk = sp_var(ext, k), xj = sp_var(ext, j), xi = sp_var(ext, i);
        SkewPoly p1 = nf_mul(nf_mul(xk, xj), xi);
        SkewPoly p2 = nf_mul(xk, nf_mul(xj, xi));
        ++rep.cases;
        if (p1 != p2)
          mismatch("(" + ext.vars[k] + " " + ext.vars[j] + ") " + ext.vars[i] + " vs " +
                       ext.vars[k] + " (" + ext.vars[j] + " " + ext.vars[i] + ")",
                   p1, p2);
      }
  return rep;
}

}  // namespace spbw
