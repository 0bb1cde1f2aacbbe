#pragma once

#include <map>
#include <string>
#include <vector>

#include "spbw/ringmap.hpp"

namespace spbw {

struct Rng;

// exponent vector; variables are x1 < x2 < ... < xn
using Monomial = std::vector<uint16_t>;

int mono_deg(const Monomial& m);
// deglex: total degree first, ties by the exponent of the largest variable
// (so x2^2 > x1*x2 > x1^2 when x1 < x2); returns <0, 0, >0
int deglex_cmp(const Monomial& a, const Monomial& b);
Monomial mono_add(const Monomial& a, const Monomial& b);

struct DeglexDesc {
  bool operator()(const Monomial& a, const Monomial& b) const { return deglex_cmp(a, b) > 0; }
};

// x_j x_i = d * x_i x_j + r0 + sum_m rk[m] x_m   (for j > i)
struct QuadRelation {
  Elem d;
  Elem r0;
  std::vector<Elem> rk;
};

struct ExtensionSpec {
  RingPtr ring;
  std::vector<std::string> vars;
  std::vector<RingMap> sigma;
  std::vector<Derivation> delta;
  std::map<std::pair<int, int>, QuadRelation> quad;  // keyed by (i, j), i < j
  long long step_factor = 64;  // C in the rewrite step cap C*(deg+1)^(n+1)*terms

  int nvars() const { return int(vars.size()); }
  const QuadRelation& quad_at(int i, int j) const;
  bool zero_delta() const;
};

// validates shapes, nonzero d, injective sigma
ExtensionSpec make_extension(RingPtr ring, std::vector<std::string> vars,
                             std::vector<RingMap> sigma, std::vector<Derivation> delta,
                             std::map<std::pair<int, int>, QuadRelation> quad);

// left R-module presentation: monomial -> coefficient, descending deglex,
// no zero coefficients stored
struct SkewPoly {
  const ExtensionSpec* ext = nullptr;
  std::map<Monomial, Elem, DeglexDesc> terms;

  bool is_zero() const { return terms.empty(); }
  bool operator==(const SkewPoly& o) const { return ext == o.ext && terms == o.terms; }
  bool operator!=(const SkewPoly& o) const { return !(*this == o); }
};

SkewPoly sp_zero(const ExtensionSpec& ext);
SkewPoly sp_const(const ExtensionSpec& ext, const Elem& r);
SkewPoly sp_term(const ExtensionSpec& ext, const Elem& r, const Monomial& m);
SkewPoly sp_var(const ExtensionSpec& ext, int i);

SkewPoly nf_add(const SkewPoly& f, const SkewPoly& g);
SkewPoly nf_neg(const SkewPoly& f);
SkewPoly nf_scale(const Elem& r, const SkewPoly& f);  // left scale, coefficientwise
SkewPoly nf_sub(const SkewPoly& f, const SkewPoly& g);
// full product through the rewriting rules; throws NonTerminatingRewrite if
// the step cap is exceeded
SkewPoly nf_mul(const SkewPoly& f, const SkewPoly& g);

// x^alpha * r through the closed-form expansion (iterated sigma/delta sums);
// an independent route that must agree with nf_mul
SkewPoly pow_alpha_times_r(const ExtensionSpec& ext, const Monomial& alpha, const Elem& r);

struct LeadData {
  Monomial lm;
  Elem lc;
  int deg;
};
LeadData leading_data(const SkewPoly& f);  // EmptyTarget on the zero polynomial
int sp_deg(const SkewPoly& f);             // -1 for zero

std::string sp_print(const SkewPoly& f);

// ascending deglex list of all monomials in n variables of degree <= d
std::vector<Monomial> monomials_upto(int nvars, int d);

SkewPoly random_poly(const ExtensionSpec& ext, int maxdeg, Rng& rng);

struct ConfluenceReport {
  bool ok = true;
  uint64_t cases = 0;
  bool exhaustive = true;
  std::string witness;  // empty when ok
};

// overlap check: (x_j x_i) r vs x_j (x_i r) for every ring element (sampled
// when symbolic), and both association orders of x_k x_j x_i for k > j > i
ConfluenceReport check_pbw_confluence(const ExtensionSpec& ext, int sample_trials = 256,
                                      uint64_t seed = 5);

}  // namespace spbw
