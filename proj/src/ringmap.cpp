#include "spbw/ringmap.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "spbw/rng.hpp"

namespace spbw {

namespace {

// provenance of each ring element under closure of {0, 1, generators}
struct Prov {
  int op;  // 0 seed, 1 sum, 2 product
  Code x = 0, y = 0;
};

struct Closure {
  std::vector<Code> order;     // discovery order
  std::vector<Prov> how;       // indexed by code
  std::vector<bool> known;
};

Closure close_over_generators(const RingPtr& ring, const std::vector<Code>& seeds) {
  size_t n = size_t(ring->cardinality());
  Closure c;
  c.how.assign(n, Prov{});
  c.known.assign(n, false);
  auto push = [&](Code v, Prov p) {
    if (c.known[v]) return;
    c.known[v] = true;
    c.how[v] = p;
    c.order.push_back(v);
  };
  for (Code s : seeds) push(s, Prov{0});
  for (size_t i = 0; i < c.order.size(); ++i)
    for (size_t j = 0; j <= i; ++j) {
      Code a = c.order[i], b = c.order[j];
      push(ring->addc(a, b), Prov{1, a, b});
      push(ring->mulc(a, b), Prov{2, a, b});
      push(ring->mulc(b, a), Prov{2, b, a});
    }
  return c;
}

// solve u = sum c_i * basis_i over Z; elimination in floating point, the
// candidate integer combination is then verified exactly
std::optional<std::vector<int64_t>> int_solve(const std::vector<std::vector<int64_t>>& basis,
                                              const std::vector<int64_t>& u) {
  size_t w = u.size(), k = basis.size();
  std::vector<std::vector<double>> m(w, std::vector<double>(k + 1, 0.0));
  for (size_t r = 0; r < w; ++r) {
    for (size_t c = 0; c < k; ++c) m[r][c] = double(basis[c][r]);
    m[r][k] = double(u[r]);
  }
  size_t row = 0;
  std::vector<int> pivot_col(w, -1);
  for (size_t col = 0; col < k && row < w; ++col) {
    size_t best = row;
    for (size_t r = row; r < w; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[best][col])) best = r;
    if (std::fabs(m[best][col]) < 1e-9) continue;
    std::swap(m[row], m[best]);
    for (size_t r = 0; r < w; ++r) {
      if (r == row) continue;
      double f = m[r][col] / m[row][col];
      for (size_t c2 = col; c2 <= k; ++c2) m[r][c2] -= f * m[row][c2];
    }
    pivot_col[row] = int(col);
    ++row;
  }
  std::vector<int64_t> sol(k, 0);
  for (size_t r = 0; r < row; ++r) {
    double v = m[r][k] / m[r][pivot_col[r]];
    sol[size_t(pivot_col[r])] = int64_t(std::llround(v));
  }
  // exact verification
  for (size_t r = 0; r < w; ++r) {
    int64_t acc = 0;
    for (size_t c = 0; c < k; ++c) acc += sol[c] * basis[c][r];
    if (acc != u[r]) return std::nullopt;
  }
  return sol;
}

// images of the coordinate units, induced from images of {1} + generators
std::vector<Elem> unit_images_from(const RingPtr& ring, const Images& images,
                                   const std::vector<Elem>& law_images_of_one) {
  if (!ring->int_leaves())
    fail(Err::SymbolicRingUnsupported,
         "symbolic maps need integer coordinates: " + ring->describe());
  std::vector<std::vector<int64_t>> basis;
  std::vector<Elem> vals;
  basis.push_back(ring->one().v);
  vals.push_back(law_images_of_one[0]);
  auto gens = ring->generators();
  for (auto& [nm, el] : gens) {
    auto it = std::find_if(images.begin(), images.end(),
                           [&](auto& p) { return p.first == nm; });
    if (it == images.end())
      fail(Err::GeneratorImageMissing, "no image given for generator " + nm);
    basis.push_back(el.v);
    vals.push_back(it->second);
  }
  size_t w = ring->width();
  std::vector<Elem> out;
  for (size_t i = 0; i < w; ++i) {
    std::vector<int64_t> unit(w, 0);
    unit[i] = 1;
    auto sol = int_solve(basis, unit);
    if (!sol)
      fail(Err::GeneratorImageMissing,
           "generators do not span the coordinate units of " + ring->describe());
    Elem img = ring->zero();
    for (size_t c = 0; c < sol->size(); ++c)
      for (size_t k = 0; k < w; ++k) img.v[k] += (*sol)[c] * vals[c].v[k];
    out.push_back(img);
  }
  return out;
}

Elem linear_apply(const RingPtr& ring, const std::vector<Elem>& unit_images, const Elem& a) {
  Elem r = ring->zero();
  for (size_t i = 0; i < a.v.size(); ++i)
    for (size_t k = 0; k < r.v.size(); ++k) r.v[k] += a.v[i] * unit_images[i].v[k];
  return r;
}

bool linear_injective(const RingPtr& ring, const std::vector<Elem>& unit_images) {
  // rank over Q of the w x w integer matrix
  size_t w = ring->width();
  std::vector<std::vector<double>> m(w, std::vector<double>(w));
  for (size_t i = 0; i < w; ++i)
    for (size_t k = 0; k < w; ++k) m[i][k] = double(unit_images[i].v[k]);
  size_t rank = 0;
  for (size_t col = 0; col < w && rank < w; ++col) {
    size_t best = rank;
    for (size_t r = rank; r < w; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[best][col])) best = r;
    if (std::fabs(m[best][col]) < 1e-9) continue;
    std::swap(m[rank], m[best]);
    for (size_t r = rank + 1; r < w; ++r) {
      double f = m[r][col] / m[rank][col];
      for (size_t c = col; c < w; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank == w;
}

std::vector<Code> seed_codes(const RingPtr& ring, const Images& images,
                             std::vector<Code>& gen_codes, std::vector<Code>& img_codes) {
  auto gens = ring->generators();
  for (auto& [nm, el] : gens) {
    auto it = std::find_if(images.begin(), images.end(),
                           [&](auto& p) { return p.first == nm; });
    if (it == images.end())
      fail(Err::GeneratorImageMissing, "no image given for generator " + nm);
    gen_codes.push_back(ring->encode(el));
    img_codes.push_back(ring->encode(it->second));
  }
  std::vector<Code> seeds{0, ring->onec()};
  seeds.insert(seeds.end(), gen_codes.begin(), gen_codes.end());
  return seeds;
}

}  // namespace

Elem RingMap::apply(const Elem& a) const {
  if (a.ring != ring.get()) fail(Err::MixedRings, "map applied to foreign element");
  if (!table.empty()) return ring->decode(table[ring->encode(a)]);
  if (!unit_images.empty()) return linear_apply(ring, unit_images, a);
  return a;  // identity on a symbolic ring
}

bool RingMap::is_identity() const {
  if (!table.empty()) {
    for (Code c = 0; c < table.size(); ++c)
      if (table[c] != c) return false;
    return true;
  }
  if (unit_images.empty()) return true;
  for (size_t i = 0; i < unit_images.size(); ++i)
    for (size_t k = 0; k < unit_images[i].v.size(); ++k)
      if (unit_images[i].v[k] != (i == k ? 1 : 0)) return false;
  return true;
}

Elem Derivation::apply(const Elem& a) const {
  if (a.ring != ring.get()) fail(Err::MixedRings, "derivation applied to foreign element");
  if (is_zero) return ring->zero();
  if (!table.empty()) return ring->decode(table[ring->encode(a)]);
  return linear_apply(ring, unit_images, a);
}

RingMap identity_map(RingPtr ring) {
  RingMap m;
  m.ring = std::move(ring);
  m.name = "id";
  if (!m.ring->symbolic()) {
    m.table.resize(size_t(m.ring->cardinality()));
    for (Code c = 0; c < m.table.size(); ++c) m.table[c] = c;
  }
  return m;
}

Derivation zero_derivation(RingPtr ring, RingMap sigma) {
  Derivation d;
  d.ring = std::move(ring);
  d.name = "0";
  d.sigma = std::move(sigma);
  d.is_zero = true;
  if (!d.ring->symbolic()) d.table.assign(size_t(d.ring->cardinality()), 0);
  return d;
}

RingMap build_map(RingPtr ring, const std::string& name, const Images& images,
                  uint64_t sample_seed, int sample_trials) {
  RingMap m;
  m.ring = ring;
  m.name = name;

  if (ring->symbolic()) {
    m.unit_images = unit_images_from(ring, images, {ring->one()});
    m.verified_exhaustively = false;
    m.injective = linear_injective(ring, m.unit_images);
    Rng rng(sample_seed);
    for (int t = 0; t < sample_trials; ++t) {
      Elem a = rng.elem(ring), b = rng.elem(ring);
      if (m.apply(ring->mul(a, b)) != ring->mul(m.apply(a), m.apply(b)))
        fail(Err::NotAHomomorphism, name + " breaks phi(ab)=phi(a)phi(b) at a=" +
                                        ring->print(a) + ", b=" + ring->print(b));
    }
    if (m.apply(ring->one()) != ring->one())
      fail(Err::NotAHomomorphism, name + " does not fix 1");
    return m;
  }

  std::vector<Code> gen_codes, img_codes;
  std::vector<Code> seeds = seed_codes(ring, images, gen_codes, img_codes);
  Closure cl = close_over_generators(ring, seeds);
  size_t n = size_t(ring->cardinality());
  if (cl.order.size() != n)
    fail(Err::GeneratorImageMissing,
         "generators only reach " + std::to_string(cl.order.size()) + " of " +
             std::to_string(n) + " elements of " + ring->describe());

  m.table.assign(n, 0);
  std::vector<bool> setp(n, false);
  auto assign = [&](Code v, Code img) {
    if (setp[v] && m.table[v] != img)
      fail(Err::NotAHomomorphism, name + ": conflicting images for " + ring->print(ring->decode(v)));
    m.table[v] = img;
    setp[v] = true;
  };
  assign(0, 0);
  assign(ring->onec(), ring->onec());
  for (size_t i = 0; i < gen_codes.size(); ++i) assign(gen_codes[i], img_codes[i]);
  for (Code v : cl.order) {
    const Prov& p = cl.how[v];
    if (p.op == 1) assign(v, ring->addc(m.table[p.x], m.table[p.y]));
    else if (p.op == 2) assign(v, ring->mulc(m.table[p.x], m.table[p.y]));
  }

  for (Code a = 0; a < n; ++a)
    for (Code b = 0; b < n; ++b) {
      if (m.table[ring->addc(a, b)] != ring->addc(m.table[a], m.table[b]))
        fail(Err::NotAHomomorphism, name + " breaks additivity at a=" +
                                        ring->print(ring->decode(a)) + ", b=" +
                                        ring->print(ring->decode(b)));
      if (m.table[ring->mulc(a, b)] != ring->mulc(m.table[a], m.table[b]))
        fail(Err::NotAHomomorphism, name + " breaks phi(ab)=phi(a)phi(b) at a=" +
                                        ring->print(ring->decode(a)) + ", b=" +
                                        ring->print(ring->decode(b)));
    }

  std::set<Code> image_set(m.table.begin(), m.table.end());
  m.injective = image_set.size() == n;
  return m;
}

Derivation build_derivation(RingPtr ring, const std::string& name, RingMap sigma,
                            const Images& images, uint64_t sample_seed, int sample_trials) {
  Derivation d;
  d.ring = ring;
  d.name = name;
  d.sigma = sigma;

  if (ring->symbolic()) {
    // delta(1) = 0 is forced by the Leibniz rule
    d.unit_images = unit_images_from(ring, images, {ring->zero()});
    d.verified_exhaustively = false;
    Rng rng(sample_seed);
    for (int t = 0; t < sample_trials; ++t) {
      Elem a = rng.elem(ring), b = rng.elem(ring);
      Elem lhs = d.apply(ring->mul(a, b));
      Elem rhs = ring->add(ring->mul(sigma.apply(a), d.apply(b)), ring->mul(d.apply(a), b));
      if (lhs != rhs)
        fail(Err::NotADerivation, name + " breaks the Leibniz rule at a=" + ring->print(a) +
                                      ", b=" + ring->print(b));
    }
    return d;
  }

  std::vector<Code> gen_codes, img_codes;
  std::vector<Code> seeds = seed_codes(ring, images, gen_codes, img_codes);
  Closure cl = close_over_generators(ring, seeds);
  size_t n = size_t(ring->cardinality());
  if (cl.order.size() != n)
    fail(Err::GeneratorImageMissing, "generators do not reach all of " + ring->describe());

  d.table.assign(n, 0);
  std::vector<bool> setp(n, false);
  auto assign = [&](Code v, Code img) {
    if (setp[v] && d.table[v] != img)
      fail(Err::NotADerivation, name + ": conflicting values at " + ring->print(ring->decode(v)));
    d.table[v] = img;
    setp[v] = true;
  };
  assign(0, 0);
  assign(ring->onec(), 0);
  for (size_t i = 0; i < gen_codes.size(); ++i) assign(gen_codes[i], img_codes[i]);
  for (Code v : cl.order) {
    const Prov& p = cl.how[v];
    if (p.op == 1) assign(v, ring->addc(d.table[p.x], d.table[p.y]));
    else if (p.op == 2)
      assign(v, ring->addc(ring->mulc(sigma.applyc(p.x), d.table[p.y]),
                           ring->mulc(d.table[p.x], p.y)));
  }

  for (Code a = 0; a < n; ++a)
    for (Code b = 0; b < n; ++b) {
      if (d.table[ring->addc(a, b)] != ring->addc(d.table[a], d.table[b]))
        fail(Err::NotADerivation, name + " breaks additivity at a=" +
                                      ring->print(ring->decode(a)) + ", b=" +
                                      ring->print(ring->decode(b)));
      Code lhs = d.table[ring->mulc(a, b)];
      Code rhs = ring->addc(ring->mulc(sigma.applyc(a), d.table[b]),
                            ring->mulc(d.table[a], b));
      if (lhs != rhs)
        fail(Err::NotADerivation, name + " breaks the Leibniz rule at a=" +
                                      ring->print(ring->decode(a)) + ", b=" +
                                      ring->print(ring->decode(b)));
    }
  bool zero = true;
  for (Code c = 0; c < n; ++c)
    if (d.table[c] != 0) zero = false;
  d.is_zero = zero;
  return d;
}

// --------------------------------------------------------------- compatibility

CompatReport check_compatibility(const RingPtr& ring, const std::vector<RingMap>& Sigma,
                                 const std::vector<Derivation>& Delta, bool sampled,
                                 uint64_t seed, int trials) {
  CompatReport rep;
  if (ring->symbolic() && !sampled)
    fail(Err::SymbolicNeedsSampledMode,
         "exhaustive compatibility check impossible over " + ring->describe());

  auto record = [&](bool& flag, const std::string& law, const std::string& map, const Elem& a,
                    const Elem& b) {
    if (flag) rep.witnesses.push_back({law, map, a, b});
    flag = false;
  };

  if (!ring->symbolic() && !sampled) {
    size_t n = size_t(ring->cardinality());
    NilData nd = nil_data(ring);
    // per-(map,law) first-witness bookkeeping happens through the flags:
    // once a law is false we stop adding witnesses for it
    for (Code a = 0; a < n; ++a)
      for (Code b = 0; b < n; ++b) {
        Code ab = ring->mulc(a, b);
        ++rep.pairs_checked;
        for (auto& s : Sigma) {
          Code asb = ring->mulc(a, s.applyc(b));
          if (rep.sigma_strict && (ab == 0) != (asb == 0))
            record(rep.sigma_strict, "sigma strict", s.name, ring->decode(a), ring->decode(b));
          if (rep.sigma_weak && nd.nilpotent[ab] != nd.nilpotent[asb])
            record(rep.sigma_weak, "sigma weak", s.name, ring->decode(a), ring->decode(b));
        }
        for (auto& dd : Delta) {
          Code adb = ring->mulc(a, dd.applyc(b));
          if (rep.delta_strict && ab == 0 && adb != 0)
            record(rep.delta_strict, "delta strict", dd.name, ring->decode(a), ring->decode(b));
          if (rep.delta_weak && nd.nilpotent[ab] && !nd.nilpotent[adb])
            record(rep.delta_weak, "delta weak", dd.name, ring->decode(a), ring->decode(b));
        }
      }
    return rep;
  }

  rep.exhaustive = false;
  Rng rng(seed);
  auto nil = [&](const Elem& x) { return is_nilpotent(ring, x); };
  for (int t = 0; t < trials; ++t) {
    Elem a = rng.elem(ring), b = rng.elem(ring);
    Elem ab = ring->mul(a, b);
    ++rep.pairs_checked;
    bool ab0 = ring->is_zero(ab), abn = nil(ab);
    for (auto& s : Sigma) {
      Elem asb = ring->mul(a, s.apply(b));
      if (rep.sigma_strict && ab0 != ring->is_zero(asb))
        record(rep.sigma_strict, "sigma strict", s.name, a, b);
      if (rep.sigma_weak && abn != nil(asb)) record(rep.sigma_weak, "sigma weak", s.name, a, b);
    }
    for (auto& dd : Delta) {
      Elem adb = ring->mul(a, dd.apply(b));
      if (rep.delta_strict && ab0 && !ring->is_zero(adb))
        record(rep.delta_strict, "delta strict", dd.name, a, b);
      if (rep.delta_weak && abn && !nil(adb)) record(rep.delta_weak, "delta weak", dd.name, a, b);
    }
  }
  return rep;
}

CompatReport check_compatible_ideal(const RingPtr& ring, const std::vector<bool>& ideal,
                                    const std::vector<RingMap>& Sigma,
                                    const std::vector<Derivation>& Delta) {
  if (ring->symbolic())
    fail(Err::SymbolicRingUnsupported, "ideal compatibility needs a finite ring");
  size_t n = size_t(ring->cardinality());
  if (ideal.size() != n || !ideal[0]) fail(Err::NotAnIdeal, "bad ideal bitmap");
  for (Code i = 0; i < n; ++i) {
    if (!ideal[i]) continue;
    for (Code j = 0; j < n; ++j) {
      if (ideal[j] && !ideal[ring->addc(i, j)]) fail(Err::NotAnIdeal, "not closed under +");
      if (!ideal[ring->mulc(i, j)] || !ideal[ring->mulc(j, i)])
        fail(Err::NotAnIdeal, "not closed under multiplication");
    }
  }

  CompatReport rep;
  auto record = [&](bool& flag, const std::string& law, const std::string& map, Code a, Code b) {
    if (flag) rep.witnesses.push_back({law, map, ring->decode(a), ring->decode(b)});
    flag = false;
  };
  for (Code a = 0; a < n; ++a)
    for (Code b = 0; b < n; ++b) {
      bool abI = ideal[ring->mulc(a, b)];
      ++rep.pairs_checked;
      for (auto& s : Sigma)
        if (rep.sigma_strict && abI != ideal[ring->mulc(a, s.applyc(b))])
          record(rep.sigma_strict, "ideal sigma", s.name, a, b);
      for (auto& dd : Delta)
        if (rep.delta_strict && abI && !ideal[ring->mulc(a, dd.applyc(b))])
          record(rep.delta_strict, "ideal delta", dd.name, a, b);
    }
  rep.sigma_weak = rep.sigma_strict;
  rep.delta_weak = rep.delta_strict;
  return rep;
}

LawSuiteReport derived_law_suite(const RingPtr& ring, const std::vector<RingMap>& Sigma,
                                 const std::vector<Derivation>& Delta, int max_word) {
  if (ring->symbolic())
    fail(Err::SymbolicNeedsSampledMode, "law suite runs over finite rings only");
  size_t n = size_t(ring->cardinality());
  NilData nd = nil_data(ring);

  // all composed tables sigma^theta (resp. delta^beta) with word length <= max_word
  auto words_of = [&](const std::vector<std::vector<Code>>& base) {
    std::vector<std::pair<std::string, std::vector<Code>>> out;
    std::vector<Code> id(n);
    for (Code c = 0; c < n; ++c) id[c] = c;
    out.emplace_back("id", id);
    size_t lo = 0;
    for (int len = 1; len <= max_word; ++len) {
      size_t hi = out.size();
      for (size_t w = lo; w < hi; ++w)
        for (size_t i = 0; i < base.size(); ++i) {
          std::vector<Code> t(n);
          for (Code c = 0; c < n; ++c) t[c] = base[i][out[w].second[c]];
          out.emplace_back(out[w].first + "*" + std::to_string(i + 1), std::move(t));
        }
      lo = hi;
    }
    return out;
  };
  std::vector<std::vector<Code>> sig, del;
  for (auto& s : Sigma) sig.push_back(s.table);
  for (auto& d : Delta) del.push_back(d.table);
  auto sig_words = words_of(sig);
  auto del_words = words_of(del);

  LawSuiteReport rep;
  auto wit = [&](bool& flag, const std::string& law, const std::string& map, Code a, Code b) {
    if (flag) rep.witnesses.push_back({law, map, ring->decode(a), ring->decode(b)});
    flag = false;
  };

  for (Code a = 0; a < n; ++a)
    for (Code b = 0; b < n; ++b) {
      Code ab = ring->mulc(a, b);
      bool ab0 = ab == 0, abn = nd.nilpotent[ab];
      for (auto& [wn, wt] : sig_words) {
        Code awb = ring->mulc(a, wt[b]), wab = ring->mulc(wt[a], b);
        ++rep.checks;
        if (ab0 && (awb != 0 || wab != 0)) wit(rep.strict_ok, "ab=0 => twisted products 0", wn, a, b);
        if (!ab0 && (awb == 0 || wab == 0)) wit(rep.strict_ok, "twisted product 0 => ab=0", wn, a, b);
        if (abn != nd.nilpotent[awb] || abn != nd.nilpotent[wab])
          wit(rep.weak_ok, "ab in N <=> twisted products in N", wn, a, b);
        if (ab0 || abn)
          for (auto& [dn, dt] : del_words) {
            Code wdb = ring->mulc(wt[a], dt[b]), dwb = ring->mulc(dt[a], wt[b]);
            ++rep.checks;
            if (ab0 && (wdb != 0 || dwb != 0))
              wit(rep.strict_ok, "ab=0 => sigma/delta mixed products 0", wn + "," + dn, a, b);
            if (abn && (!nd.nilpotent[wdb] || !nd.nilpotent[dwb]))
              wit(rep.weak_ok, "ab in N => mixed products in N", wn + "," + dn, a, b);
          }
      }
    }
  return rep;
}

}  // namespace spbw
