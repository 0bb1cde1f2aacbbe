#include "spbw/nilweak.hpp"

#include <algorithm>
#include <set>

#include "spbw/rng.hpp"

namespace spbw {

ExtCert certify_extension(const ExtensionSpec& ext) {
  ExtCert c;
  if (ext.ring->symbolic()) {
    c.exhaustive = false;
    return c;  // no certificate: the criterion stays unavailable
  }
  NilData nd = nil_data(ext.ring);
  c.ni = nd.is_ni;
  c.nilindex = std::max(1, nd.nilindex);
  CompatReport rep = check_compatibility(ext.ring, ext.sigma, ext.delta);
  c.strict_compatible = rep.strict();
  c.weak_compatible = rep.weak();
  c.exhaustive = rep.exhaustive;
  return c;
}

// ----------------------------------------------------------- reduction mod N

Elem ReducedExt::project(const Elem& r) const {
  Elem t{qring.get(), r.v};
  return qring->decode(qring->encode(t));
}

SkewPoly ReducedExt::project(const SkewPoly& f) const {
  SkewPoly out{&ext, {}};
  for (auto& [m, c] : f.terms) {
    Elem q = project(c);
    if (!qring->is_zero(q)) out.terms.emplace(m, q);
  }
  return out;
}

std::shared_ptr<const ReducedExt> reduce_mod_nil(const ExtensionSpec& ext) {
  const RingPtr& R = ext.ring;
  if (R->symbolic()) return nullptr;
  NilData nd = nil_data(R);
  if (!nd.is_ni) return nullptr;

  RingPtr q;
  try {
    q = make_coset_quotient(R, nd.nilpotent);
  } catch (const Error&) {
    return nullptr;
  }

  auto project_code = [&](Code base) {
    return q->encode(Elem{q.get(), R->decode(base).v});
  };
  auto base_of = [&](Code qc) { return R->encode(Elem{R.get(), q->decode(qc).v}); };
  uint64_t qn = q->cardinality();

  // a table map descends when it carries N(R) into N(R)
  auto descend = [&](const std::vector<Code>& table,
                     std::vector<Code>& out) {
    for (Code i : nd.nilpotents)
      if (!nd.nilpotent[table[i]]) return false;
    out.resize(qn);
    for (Code c = 0; c < qn; ++c) out[c] = project_code(table[base_of(c)]);
    return true;
  };

  std::vector<RingMap> sig;
  std::vector<Derivation> del;
  for (int i = 0; i < ext.nvars(); ++i) {
    std::vector<Code> st, dt;
    if (!descend(ext.sigma[i].table, st) || !descend(ext.delta[i].table, dt))
      return nullptr;
    std::set<Code> img(st.begin(), st.end());
    if (img.size() != qn) return nullptr;  // reduced twist no longer injective
    RingMap sm{q, ext.sigma[i].name + " mod N", st, {}, true, true};
    bool dz = std::all_of(dt.begin(), dt.end(), [](Code c) { return c == 0; });
    del.push_back(Derivation{q, ext.delta[i].name + " mod N", sm, dt, {}, dz, true});
    sig.push_back(std::move(sm));

    // guard the construction: homomorphism and Leibniz laws on the quotient
    for (Code a = 0; a < qn; ++a)
      for (Code b = 0; b < qn; ++b) {
        if (st[q->addc(a, b)] != q->addc(st[a], st[b]) ||
            st[q->mulc(a, b)] != q->mulc(st[a], st[b]))
          return nullptr;
        if (dt[q->mulc(a, b)] != q->addc(q->mulc(st[a], dt[b]), q->mulc(dt[a], b)))
          return nullptr;
      }
  }

  auto red = std::make_shared<ReducedExt>();
  red->qring = q;
  auto proj_elem = [&](const Elem& e) {
    return q->decode(q->encode(Elem{q.get(), e.v}));
  };
  std::map<std::pair<int, int>, QuadRelation> quad;
  for (auto& [key, rel] : ext.quad) {
    QuadRelation qr{proj_elem(rel.d), proj_elem(rel.r0), {}};
    if (q->is_zero(qr.d)) return nullptr;
    for (auto& rk : rel.rk) qr.rk.push_back(proj_elem(rk));
    quad.emplace(key, std::move(qr));
  }
  try {
    red->ext = make_extension(q, ext.vars, std::move(sig), std::move(del), std::move(quad));
  } catch (const Error&) {
    return nullptr;
  }
  red->field = true;
  for (Code c = 1; c < qn; ++c)
    if (!q->is_unit(c)) red->field = false;
  return red;
}

NilContext make_nil_context(const ExtensionSpec& ext) {
  NilContext c;
  c.ext = &ext;
  c.cert = certify_extension(ext);
  if (!ext.ring->symbolic()) c.nil = nil_data(ext.ring);
  c.red = reduce_mod_nil(ext);
  return c;
}

// ---------------------------------------------------------------- nilpotency

static bool criterion_nilpotent(const ExtensionSpec& ext, const SkewPoly& f) {
  for (auto& [m, c] : f.terms)
    if (!is_nilpotent(ext.ring, c)) return false;
  return true;
}

static bool oracle_nilpotent(const ExtensionSpec& ext, const SkewPoly& f,
                             const NilContext& ctx) {
  if (ext.ring->symbolic())
    fail(Err::SymbolicRingUnsupported, "power oracle needs a finite coefficient ring");
  if (f.is_zero()) return true;

  // sound early exit: over a field quotient R/N(R) with injective twists and
  // nonzero relation coefficients, leading terms of powers never cancel, so
  // a nonzero image certifies non-nilpotence without powering
  if (ctx.red && ctx.red->field && !ctx.red->project(f).is_zero()) return false;

  long long t = std::max(1, ctx.cert.nilindex);
  long long K = 2 * t * (sp_deg(f) + 1) * ext.nvars() * (long long)f.terms.size();
  K = std::max(K, 2LL);
  SkewPoly p = f;
  for (long long m = 1; m <= K; ++m) {
    if (p.is_zero()) return true;
    if (m == K || p.terms.size() > 20000) break;
    try {
      p = nf_mul(p, f);
    } catch (const Error&) {
      break;
    }
  }
  if (ctx.cert.ok() && criterion_nilpotent(ext, f))
    fail(Err::OracleBudgetExceeded,
         "power oracle exhausted its budget on a polynomial the coefficient "
         "criterion calls nilpotent; flagged for review");
  return false;
}

bool is_nilpotent_poly(const ExtensionSpec& ext, const SkewPoly& f, NilMode mode,
                       const NilContext* ctx) {
  NilContext local;
  if (!ctx) {
    local = make_nil_context(ext);
    ctx = &local;
  }
  if (mode == NilMode::criterion || mode == NilMode::both) {
    if (!ctx->cert.ok())
      fail(Err::HypothesisNotCertified,
           "coefficient criterion needs the NI + weak compatibility certificate");
  }
  switch (mode) {
    case NilMode::criterion:
      return criterion_nilpotent(ext, f);
    case NilMode::oracle:
      return oracle_nilpotent(ext, f, *ctx);
    case NilMode::both: {
      bool a = criterion_nilpotent(ext, f);
      bool b = oracle_nilpotent(ext, f, *ctx);
      if (a != b)
        fail(Err::LawViolation, "criterion and power oracle disagree on " + sp_print(f) +
                                    ": criterion=" + (a ? "true" : "false"));
      return a;
    }
  }
  return false;
}

// ----------------------------------------------------------- ring-side N_R

bool weak_ann_member(const RingPtr& ring, const std::vector<Elem>& X, const Elem& a) {
  if (X.empty()) fail(Err::EmptyTarget, "weak annihilator of the empty set");
  for (auto& x : X)
    if (!is_nilpotent(ring, ring->mul(x, a))) return false;
  return true;
}

static std::vector<Code> right_multiples(const RingPtr& ring, Code c) {
  std::set<Code> s;
  for (Code r = 0; r < ring->cardinality(); ++r) s.insert(ring->mulc(c, r));
  return {s.begin(), s.end()};
}

std::optional<Elem> principal_nilpotent_generator(const RingPtr& ring,
                                                  const std::vector<Code>& N) {
  if (ring->symbolic()) fail(Err::SymbolicRingUnsupported, "needs a finite ring");
  std::vector<Code> target = N;
  std::sort(target.begin(), target.end());
  for (Code c = 0; c < ring->cardinality(); ++c) {
    if (!is_nilpotent_code(ring, c)) continue;
    if (right_multiples(ring, c) == target) return ring->decode(c);
  }
  return std::nullopt;
}

AnnReport weak_annihilator_ring(const RingPtr& ring, const std::vector<Elem>& X) {
  if (X.empty()) fail(Err::EmptyTarget, "weak annihilator of the empty set");
  if (ring->symbolic())
    fail(Err::SymbolicRingUnsupported,
         "symbolic rings only answer membership queries; use weak_ann_member");
  AnnReport rep;
  rep.method = AnnMethod::brute_force;
  uint64_t n = ring->cardinality();
  std::vector<Code> xc;
  for (auto& x : X) xc.push_back(ring->encode(x));
  for (Code a = 0; a < n; ++a) {
    bool in = true;
    for (Code x : xc)
      if (!is_nilpotent_code(ring, ring->mulc(x, a))) {
        in = false;
        break;
      }
    if (in) rep.annihilator.push_back(a);
  }
  rep.principal_nilpotent_generator = principal_nilpotent_generator(ring, rep.annihilator);
  if (rep.principal_nilpotent_generator) {
    // two-sided reading: additive closure of R c R, compared against c R
    Code c = ring->encode(*rep.principal_nilpotent_generator);
    std::set<Code> two;
    for (Code l = 0; l < n; ++l)
      for (Code r = 0; r < n; ++r) two.insert(ring->mulc(ring->mulc(l, c), r));
    bool grew = true;
    while (grew) {
      grew = false;
      std::vector<Code> cur(two.begin(), two.end());
      for (Code a : cur)
        for (Code b : cur)
          if (two.insert(ring->addc(a, b)).second) grew = true;
    }
    rep.two_sided_mismatch =
        std::vector<Code>(two.begin(), two.end()) != right_multiples(ring, c);
  }
  return rep;
}

// ------------------------------------------------------- extension-side N_A

namespace {

// all polynomials with support inside monos, coefficients running through R
struct PolyOdometer {
  const ExtensionSpec& ext;
  std::vector<Monomial> monos;
  std::vector<Code> coef;
  bool done = false;

  PolyOdometer(const ExtensionSpec& e, int D) : ext(e) {
    monos = monomials_upto(e.nvars(), D);
    coef.assign(monos.size(), 0);
  }
  uint64_t count(uint64_t budget) const {
    uint64_t n = ext.ring->cardinality(), total = 1;
    for (size_t i = 0; i < monos.size(); ++i) {
      if (total > budget / n)
        fail(Err::EnumerationOverCap,
             "candidate space exceeds the enumeration budget " + std::to_string(budget));
      total *= n;
    }
    return total;
  }
  SkewPoly current() const {
    SkewPoly g = sp_zero(ext);
    for (size_t i = 0; i < monos.size(); ++i)
      if (coef[i]) g.terms.emplace(monos[i], ext.ring->decode(coef[i]));
    return g;
  }
  void advance() {
    for (size_t i = 0; i < coef.size(); ++i) {
      if (++coef[i] < ext.ring->cardinality()) return;
      coef[i] = 0;
    }
    done = true;
  }
};

std::vector<Elem> coefficients_of(const std::vector<SkewPoly>& U) {
  std::vector<Elem> out;
  for (auto& u : U)
    for (auto& [m, c] : u.terms)
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  return out;
}

}  // namespace

AnnReport weak_annihilator_ext(const ExtensionSpec& ext, const std::vector<SkewPoly>& U,
                               int D, AnnMethod mode, const NilContext* ctx,
                               uint64_t enum_budget) {
  if (U.empty()) fail(Err::EmptyTarget, "weak annihilator of the empty set");
  for (auto& u : U)
    if (u.ext != &ext) fail(Err::MixedExtensions, "target outside the extension");
  NilContext local;
  if (!ctx) {
    local = make_nil_context(ext);
    ctx = &local;
  }

  AnnReport rep;
  rep.method = mode;
  rep.degree_bound = D;

  std::vector<bool> fast_set;
  if (mode != AnnMethod::brute_force) {
    if (!ctx->cert.ok())
      fail(Err::HypothesisNotCertified,
           "constant-coefficient description needs the NI + compatibility certificate");
    AnnReport ringside = weak_annihilator_ring(ext.ring, coefficients_of(U));
    rep.annihilator = ringside.annihilator;
    rep.principal_nilpotent_generator = ringside.principal_nilpotent_generator;
    rep.two_sided_mismatch = ringside.two_sided_mismatch;
    fast_set.assign(ext.ring->cardinality(), false);
    for (Code c : rep.annihilator) fast_set[c] = true;
  }
  if (mode == AnnMethod::theorem_fastpath) return rep;

  PolyOdometer odo(ext, D);
  odo.count(enum_budget);
  for (; !odo.done; odo.advance()) {
    SkewPoly g = odo.current();
    bool in = true;
    for (auto& u : U)
      if (!is_nilpotent_poly(ext, nf_mul(u, g), NilMode::oracle, ctx)) {
        in = false;
        break;
      }
    if (mode == AnnMethod::both_agree) {
      bool fast = true;
      for (auto& [m, c] : g.terms)
        if (!fast_set[ext.ring->encode(c)]) {
          fast = false;
          break;
        }
      if (fast != in && rep.agree) {
        rep.agree = false;
        rep.witness = sp_print(g) + (in ? " annihilates but escapes the coefficient ideal"
                                        : " lies in the coefficient ideal but fails");
      }
    }
    if (in) rep.members.push_back(std::move(g));
  }
  return rep;
}

// -------------------------------------------------------- theorem harnesses

Verdict verify_ann_theorem(const ExtensionSpec& ext, AnnTargetKind which, int trials,
                           uint64_t seed, int D, uint64_t enum_budget) {
  NilContext ctx = make_nil_context(ext);
  if (!ctx.cert.ok())
    fail(Err::HypothesisNotCertified, "extension lacks the NI + compatibility certificate");
  const RingPtr& R = ext.ring;
  uint64_t n = R->cardinality();
  Verdict v;
  v.trials = trials;
  v.seed = seed;

  auto require_principal = [&](const std::vector<Elem>& X, const std::string& label) {
    AnnReport rep = weak_annihilator_ring(R, X);
    if (!rep.principal_nilpotent_generator)
      fail(Err::HypothesisFailedRingSide,
           "weak annihilator of " + label + " is not generated by a nilpotent element");
  };

  // ring side, singletons exhaustively
  for (Code c = 0; c < n; ++c)
    if (!is_nilpotent_code(R, c)) require_principal({R->decode(c)}, R->print(R->decode(c)));
  if (which == AnnTargetKind::principal_ideals)
    for (Code c = 0; c < n; ++c) {
      if (is_nilpotent_code(R, c)) continue;
      std::vector<Elem> ideal;
      for (Code m : right_multiples(R, c)) ideal.push_back(R->decode(m));
      require_principal(ideal, R->print(R->decode(c)) + "R");
    }
  Rng rng(seed);
  if (which == AnnTargetKind::subsets)
    for (int t = 0; t < std::max(trials, 25); ++t) {
      std::vector<Elem> X;
      int sz = 1 + int(rng.next(3));
      bool outside = false;
      for (int k = 0; k < sz; ++k) {
        X.push_back(rng.elem(R));
        outside = outside || !is_nilpotent(R, X.back());
      }
      if (!outside) continue;  // hypothesis only covers X not inside N(R)
      require_principal(X, "a sampled subset");
    }

  // extension side
  for (int t = 0; t < trials; ++t) {
    SkewPoly f = sp_zero(ext);
    bool found = false;
    for (int k = 0; k < 200 && !found; ++k) {
      f = random_poly(ext, D, rng);
      found = !criterion_nilpotent(ext, f);
    }
    if (!found) continue;

    std::vector<SkewPoly> U{f};
    if (which == AnnTargetKind::subsets) {
      int extra = int(rng.next(2));
      for (int k = 0; k < extra; ++k) U.push_back(random_poly(ext, D, rng));
    } else if (which == AnnTargetKind::principal_ideals) {
      // bounded slice of the right ideal fA: multipliers r x^beta, |beta| <= 1
      U.clear();
      for (Code c = 1; c < n; ++c) {
        Elem r = R->decode(c);
        U.push_back(nf_mul(f, sp_const(ext, r)));
        for (int i = 0; i < ext.nvars(); ++i)
          U.push_back(nf_mul(f, nf_scale(r, sp_var(ext, i))));
      }
      U.push_back(f);
    }

    AnnReport rep;
    try {
      rep = weak_annihilator_ext(ext, U, D, AnnMethod::both_agree, &ctx, enum_budget);
    } catch (const Error& e) {
      if (e.kind() == Err::EnumerationOverCap) throw;
      v.ok = false;
      v.failures.push_back(std::string("trial ") + std::to_string(t) + ": " + e.what());
      continue;
    }
    if (!rep.agree) {
      v.ok = false;
      v.failures.push_back("trial " + std::to_string(t) + ": " + rep.witness);
    }
    if (!rep.principal_nilpotent_generator) {
      v.ok = false;
      v.failures.push_back("trial " + std::to_string(t) +
                           ": no nilpotent generator for the coefficient ideal");
      continue;
    }
    // the lifted constant c must reproduce the truncated annihilator
    Code c = R->encode(*rep.principal_nilpotent_generator);
    std::vector<bool> cr(n, false);
    for (Code m : right_multiples(R, c)) cr[m] = true;
    for (auto& g : rep.members)
      for (auto& [m, w] : g.terms)
        if (!cr[R->encode(w)]) {
          v.ok = false;
          v.failures.push_back("trial " + std::to_string(t) + ": member " + sp_print(g) +
                               " escapes cA for c = " + R->print(R->decode(c)));
        }
  }
  return v;
}

Verdict armendariz_check(const ExtensionSpec& ext, int trials, uint64_t seed) {
  NilContext ctx = make_nil_context(ext);
  if (!ctx.cert.ok())
    fail(Err::HypothesisNotCertified, "extension lacks the NI + compatibility certificate");
  if (ext.ring->symbolic()) fail(Err::SymbolicRingUnsupported, "needs a finite ring");
  Verdict v;
  v.trials = trials;
  v.seed = seed;
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    SkewPoly f = random_poly(ext, 2, rng), g = random_poly(ext, 2, rng);
    bool lhs = is_nilpotent_poly(ext, nf_mul(f, g), NilMode::both, &ctx);
    bool rhs = true;
    for (auto& [mf, a] : f.terms)
      for (auto& [mg, b] : g.terms)
        if (!is_nilpotent(ext.ring, ext.ring->mul(a, b))) rhs = false;
    if (lhs != rhs) {
      v.ok = false;
      v.failures.push_back("f = " + sp_print(f) + ", g = " + sp_print(g) + ": product " +
                           (lhs ? "nilpotent" : "not nilpotent") +
                           " but coefficient products say otherwise");
    }
  }
  return v;
}

}  // namespace spbw
