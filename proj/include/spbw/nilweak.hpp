#pragma once

#include <memory>
#include <optional>

#include "spbw/extension.hpp"

namespace spbw {

// hypothesis certificate for the nilpotency criterion: the coefficient ring
// is NI and the twist family is at least weakly compatible
struct ExtCert {
  bool ni = false;
  bool strict_compatible = false;
  bool weak_compatible = false;
  int nilindex = 1;
  bool exhaustive = true;
  bool ok() const { return ni && weak_compatible; }
};
ExtCert certify_extension(const ExtensionSpec& ext);

// the whole presentation reduced modulo N(R), when that makes sense: finite
// NI ring, sigma and delta both preserve N(R), the reduced sigmas stay
// injective and the reduced d coefficients stay nonzero
struct ReducedExt {
  RingPtr qring;
  ExtensionSpec ext;
  bool field = false;  // every nonzero element of qring is a unit

  Elem project(const Elem& r) const;
  SkewPoly project(const SkewPoly& f) const;
};
std::shared_ptr<const ReducedExt> reduce_mod_nil(const ExtensionSpec& ext);

// everything the nilpotency routines want precomputed for one extension
struct NilContext {
  const ExtensionSpec* ext = nullptr;
  ExtCert cert;
  NilData nil;
  std::shared_ptr<const ReducedExt> red;
};
NilContext make_nil_context(const ExtensionSpec& ext);

enum class NilMode { criterion, oracle, both };

// criterion: every coefficient nilpotent (requires the certificate).
// oracle: direct power computation, with a sound early non-nilpotence exit
// through the reduction mod N(R) when the quotient is a field.
bool is_nilpotent_poly(const ExtensionSpec& ext, const SkewPoly& f, NilMode mode,
                       const NilContext* ctx = nullptr);

enum class AnnMethod { theorem_fastpath, brute_force, both_agree };

struct AnnReport {
  std::vector<Code> annihilator;  // element codes, ring side or coefficient ideal
  std::optional<Elem> principal_nilpotent_generator;
  bool two_sided_mismatch = false;  // cR = annihilator held but RcR differs
  AnnMethod method = AnnMethod::brute_force;
  int degree_bound = -1;            // extension-side truncation, -1 for ring side
  std::vector<SkewPoly> members;    // extension side, brute enumeration
  bool agree = true;                // both-mode comparison
  std::string witness;              // first disagreement, printed
};

// {a : x a nilpotent for every x in X}, exhaustive over a finite ring
AnnReport weak_annihilator_ring(const RingPtr& ring, const std::vector<Elem>& X);
// membership predicate; the only interface offered for symbolic rings
bool weak_ann_member(const RingPtr& ring, const std::vector<Elem>& X, const Elem& a);

// least-code nilpotent c with cR = N, if one exists
std::optional<Elem> principal_nilpotent_generator(const RingPtr& ring,
                                                  const std::vector<Code>& N);

// extension-side weak annihilator, degree-truncated. fastpath reports the
// coefficient ideal of the constant description; brute enumerates degree <= D
AnnReport weak_annihilator_ext(const ExtensionSpec& ext, const std::vector<SkewPoly>& U,
                               int D, AnnMethod mode, const NilContext* ctx = nullptr,
                               uint64_t enum_budget = uint64_t(1) << 20);

enum class AnnTargetKind { subsets, principal_ideals, single_elements };

struct Verdict {
  bool ok = true;
  int trials = 0;
  uint64_t seed = 0;
  std::vector<std::string> failures;
};

// ring-side hypothesis first (throws HypothesisFailedRingSide with a witness
// when some weak annihilator is not principal-by-nilpotent), then seeded
// extension-side targets: both annihilator routes plus the lifted constant
// generator c must describe the same degree-truncated set
Verdict verify_ann_theorem(const ExtensionSpec& ext, AnnTargetKind which, int trials,
                           uint64_t seed, int D, uint64_t enum_budget = uint64_t(1) << 20);

// seeded (f, g) pairs: f g nilpotent iff every coefficient product is
Verdict armendariz_check(const ExtensionSpec& ext, int trials, uint64_t seed);

}  // namespace spbw
