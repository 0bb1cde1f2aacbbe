#include "spbw/assocprimes.hpp"

#include <algorithm>
#include <set>

#include "spbw/rng.hpp"

namespace spbw {

namespace {

using Mask = uint64_t;

Mask closure(const RingPtr& R, Mask m) {
  uint64_t n = R->cardinality();
  m |= 1;  // zero
  bool grew = true;
  while (grew) {
    grew = false;
    for (Code a = 0; a < n; ++a) {
      if (!(m >> a & 1)) continue;
      for (Code b = 0; b < n; ++b) {
        if ((m >> b & 1) && !(m >> R->addc(a, b) & 1)) {
          m |= Mask(1) << R->addc(a, b);
          grew = true;
        }
        if (!(m >> R->mulc(a, b) & 1)) {
          m |= Mask(1) << R->mulc(a, b);
          grew = true;
        }
      }
    }
  }
  return m;
}

std::vector<Code> mask_codes(Mask m, uint64_t n) {
  std::vector<Code> out;
  for (Code c = 0; c < n; ++c)
    if (m >> c & 1) out.push_back(c);
  return out;
}

std::vector<Code> prune_generators(const RingPtr& R, Mask ideal) {
  uint64_t n = R->cardinality();
  std::vector<Code> gens;
  Mask have = closure(R, 1);
  for (Code c = 0; c < n; ++c)
    if ((ideal >> c & 1) && !(have >> c & 1)) {
      gens.push_back(c);
      have = closure(R, have | Mask(1) << c);
    }
  for (size_t i = gens.size(); i-- > 0;) {
    Mask m = 1;
    for (size_t j = 0; j < gens.size(); ++j)
      if (j != i) m |= Mask(1) << gens[j];
    if (closure(R, m) == ideal) gens.erase(gens.begin() + i);
  }
  return gens;
}

}  // namespace

std::vector<RightIdeal> enumerate_right_ideals(const RingPtr& ring, uint64_t cap) {
  if (ring->symbolic()) fail(Err::SymbolicRingUnsupported, "lattice needs a finite ring");
  uint64_t n = ring->cardinality();
  if (n > cap || n > 64)
    fail(Err::CardinalityOverCap, "right ideal lattice capped at " +
                                      std::to_string(std::min<uint64_t>(cap, 64)) +
                                      " elements, ring has " + std::to_string(n));
  std::set<Mask> seen{closure(ring, 1)};
  std::vector<Mask> work(seen.begin(), seen.end());
  while (!work.empty()) {
    Mask m = work.back();
    work.pop_back();
    for (Code c = 0; c < n; ++c) {
      if (m >> c & 1) continue;
      Mask grown = closure(ring, m | Mask(1) << c);
      if (seen.insert(grown).second) work.push_back(grown);
    }
  }
  std::vector<RightIdeal> out;
  for (Mask m : seen)
    out.push_back(RightIdeal{ring, mask_codes(m, n), prune_generators(ring, m)});
  std::sort(out.begin(), out.end(), [](const RightIdeal& a, const RightIdeal& b) {
    return a.elements.size() != b.elements.size() ? a.elements.size() < b.elements.size()
                                                  : a.elements < b.elements;
  });
  return out;
}

QuasiPrimeCert quasi_prime_check(const RingPtr& ring, const std::vector<RightIdeal>& lattice,
                                 const RightIdeal& ideal) {
  QuasiPrimeCert cert;
  cert.ideal = ideal;
  auto ann_of = [&](const RightIdeal& I) {
    std::vector<Elem> X;
    for (Code c : I.elements) X.push_back(ring->decode(c));
    return weak_annihilator_ring(ring, X).annihilator;
  };
  cert.ann = ann_of(ideal);
  auto inside_nil = [&](const RightIdeal& I) {
    return std::all_of(I.elements.begin(), I.elements.end(),
                       [&](Code c) { return is_nilpotent_code(ring, c); });
  };
  if (inside_nil(ideal)) return cert;  // definition requires I outside N(R)
  for (const RightIdeal& sub : lattice) {
    if (!std::includes(ideal.elements.begin(), ideal.elements.end(), sub.elements.begin(),
                       sub.elements.end()))
      continue;
    if (inside_nil(sub)) continue;
    if (ann_of(sub) != cert.ann) {
      cert.witness = sub;
      return cert;
    }
  }
  cert.is_quasi_prime = true;
  return cert;
}

NassData nass_ring(const RingPtr& ring, uint64_t cap) {
  if (!nil_data(ring).is_ni)
    fail(Err::NotNI, "nilpotent associated primes need N(R) to be an ideal");
  NassData d;
  d.lattice = enumerate_right_ideals(ring, cap);
  for (auto& I : d.lattice) {
    d.certs.push_back(quasi_prime_check(ring, d.lattice, I));
    if (d.certs.back().is_quasi_prime) {
      auto& p = d.certs.back().ann;
      if (std::find(d.nass.begin(), d.nass.end(), p) == d.nass.end()) d.nass.push_back(p);
    }
  }
  return d;
}

// --------------------------------------------------------- nilpotent degree

NdegData ndeg(const ExtensionSpec& ext, const SkewPoly& f) {
  NdegData d;
  std::vector<std::pair<Monomial, Elem>> sup(f.terms.rbegin(), f.terms.rend());  // ascending
  int k = -1;
  for (int i = int(sup.size()) - 1; i >= 0; --i)
    if (!is_nilpotent(ext.ring, sup[i].second)) {
      k = i;
      break;
    }
  d.ndeg = k;
  if (k < 0) return d;
  d.ndeg_monomial = sup[k].first;
  if (ext.ring->symbolic()) return d;  // goodness needs annihilator sets
  auto annk = weak_annihilator_ring(ext.ring, {sup[k].second}).annihilator;
  d.is_good = true;
  for (int i = 0; i < k && d.is_good; ++i) {
    auto anni = weak_annihilator_ring(ext.ring, {sup[i].second}).annihilator;
    d.is_good = std::includes(anni.begin(), anni.end(), annk.begin(), annk.end());
  }
  return d;
}

bool is_nilpotent_good(const ExtensionSpec& ext, const SkewPoly& f) {
  return ndeg(ext, f).is_good;
}

GoodResult make_nilpotent_good(const ExtensionSpec& ext, const SkewPoly& f,
                               const NilContext* ctx) {
  NilContext local;
  if (!ctx) {
    local = make_nil_context(ext);
    ctx = &local;
  }
  if (!ctx->cert.ok())
    fail(Err::HypothesisNotCertified, "descent needs the NI + compatibility certificate");
  const RingPtr& R = ext.ring;
  if (R->symbolic()) fail(Err::SymbolicRingUnsupported, "descent needs a finite ring");

  GoodResult out{R->one(), f, 0};
  NdegData d = ndeg(ext, out.fr);
  if (d.ndeg < 0) fail(Err::PreconditionNilpotent, "every coefficient is already nilpotent");
  int cap = int(f.terms.size()) + 1;
  while (!d.is_good) {
    if (out.steps >= cap)
      fail(Err::DescentStuck, "descent did not terminate within the support size");
    std::vector<std::pair<Monomial, Elem>> sup(out.fr.terms.rbegin(), out.fr.terms.rend());
    auto annk = weak_annihilator_ring(R, {sup[d.ndeg].second}).annihilator;
    std::optional<Elem> b;
    for (int i = 0; i < d.ndeg && !b; ++i) {
      auto anni = weak_annihilator_ring(R, {sup[i].second}).annihilator;
      if (std::includes(anni.begin(), anni.end(), annk.begin(), annk.end())) continue;
      for (Code c : annk)
        if (!std::binary_search(anni.begin(), anni.end(), c)) {
          b = R->decode(c);
          break;
        }
    }
    if (!b) fail(Err::DescentStuck, "no multiplier separates the annihilators");
    SkewPoly next = nf_mul(out.fr, sp_const(ext, *b));
    NdegData nd = ndeg(ext, next);
    if (nd.ndeg < 0)
      fail(Err::DescentStuck, "multiplier killed every non-nilpotent coefficient");
    if (deglex_cmp(nd.ndeg_monomial, d.ndeg_monomial) >= 0)
      fail(Err::DescentStuck, "multiplier did not lower the nilpotent degree");
    out.fr = std::move(next);
    out.r = R->mul(out.r, *b);
    ++out.steps;
    d = nd;
  }
  return out;
}

// ------------------------------------------------- extension-side NAss check

Verdict verify_nass_extension(const ExtensionSpec& ext, int D, int trials, uint64_t seed,
                              uint64_t enum_budget, uint64_t ideal_cap) {
  NilContext ctx = make_nil_context(ext);
  if (!ctx.cert.ok())
    fail(Err::HypothesisNotCertified, "extension lacks the NI + compatibility certificate");
  const RingPtr& R = ext.ring;
  NassData nd = nass_ring(R, ideal_cap);
  Verdict v;
  v.trials = trials;
  v.seed = seed;

  // forward: the degree-truncated annihilator of each quasi-prime ideal's
  // constants must be exactly the polynomials with coefficients in P
  for (auto& cert : nd.certs) {
    if (!cert.is_quasi_prime) continue;
    std::vector<bool> in_p(R->cardinality(), false);
    for (Code c : cert.ann) in_p[c] = true;

    std::vector<Monomial> monos = monomials_upto(ext.nvars(), D);
    uint64_t total = 1;
    for (size_t i = 0; i < monos.size(); ++i) {
      if (total > enum_budget / R->cardinality())
        fail(Err::EnumerationOverCap, "candidate space exceeds the enumeration budget");
      total *= R->cardinality();
    }
    std::vector<Code> coef(monos.size(), 0);
    for (uint64_t it = 0; it < total; ++it) {
      SkewPoly g = sp_zero(ext);
      for (size_t i = 0; i < monos.size(); ++i)
        if (coef[i]) g.terms.emplace(monos[i], R->decode(coef[i]));
      bool lhs = true;
      for (Code ic : cert.ideal.elements) {
        SkewPoly ig = nf_mul(sp_const(ext, R->decode(ic)), g);
        for (auto& [m, c] : ig.terms)
          if (!is_nilpotent(R, c)) lhs = false;
        if (!lhs) break;
      }
      bool rhs = true;
      for (auto& [m, c] : g.terms)
        if (!in_p[R->encode(c)]) rhs = false;
      if (lhs != rhs) {
        v.ok = false;
        v.failures.push_back("forward mismatch at g = " + sp_print(g));
        break;
      }
      for (size_t i = 0; i < coef.size(); ++i) {
        if (++coef[i] < R->cardinality()) break;
        coef[i] = 0;
      }
    }
  }

  // backward: annihilators built through good polynomials land in NAss(R)
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    SkewPoly f = sp_zero(ext);
    bool found = false;
    for (int k = 0; k < 200 && !found; ++k) {
      f = random_poly(ext, D, rng);
      found = ndeg(ext, f).ndeg >= 0;
    }
    if (!found) continue;
    GoodResult good;
    try {
      good = make_nilpotent_good(ext, f, &ctx);
    } catch (const Error& e) {
      v.ok = false;
      v.failures.push_back(std::string("trial ") + std::to_string(t) + ": " + e.what());
      continue;
    }
    std::vector<std::pair<Monomial, Elem>> sup(good.fr.terms.rbegin(), good.fr.terms.rend());
    Elem mk = sup[size_t(ndeg(ext, good.fr).ndeg)].second;
    std::vector<Elem> mkR;
    for (Code c = 0; c < R->cardinality(); ++c)
      mkR.push_back(R->mul(mk, R->decode(c)));
    auto U = weak_annihilator_ring(R, mkR).annihilator;
    if (std::find(nd.nass.begin(), nd.nass.end(), U) == nd.nass.end()) {
      v.ok = false;
      v.failures.push_back("trial " + std::to_string(t) + ": annihilator of " +
                           R->print(mk) + "R is not a ring-side associated prime");
    }
  }
  return v;
}

}  // namespace spbw
