#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spbw/ring.hpp"

namespace spbw {

struct Rng;

// Endomorphism of a ring. Finite rings carry a full table; symbolic rings
// (all leaf coordinates in Z) carry images of the coordinate units and
// evaluate additively. Additive maps of such rings are exactly the
// coordinate-linear ones, so nothing is lost; multiplicativity is verified
// by sampling at build time.
struct RingMap {
  RingPtr ring;
  std::string name;
  std::vector<Code> table;
  std::vector<Elem> unit_images;
  bool injective = true;
  bool verified_exhaustively = true;

  Elem apply(const Elem& a) const;
  Code applyc(Code a) const { return table[a]; }
  bool is_identity() const;
};

struct Derivation {
  RingPtr ring;
  std::string name;
  RingMap sigma;  // the twist the Leibniz rule is taken against
  std::vector<Code> table;
  std::vector<Elem> unit_images;
  bool is_zero = false;
  bool verified_exhaustively = true;

  Elem apply(const Elem& a) const;
  Code applyc(Code a) const { return table[a]; }
};

RingMap identity_map(RingPtr ring);
Derivation zero_derivation(RingPtr ring, RingMap sigma);

using Images = std::vector<std::pair<std::string, Elem>>;

// builds the endomorphism determined by generator images; finite rings get
// the full table via closure of {0, 1, generators} under + and *, symbolic
// ones the coordinate-linear extension
RingMap build_map(RingPtr ring, const std::string& name, const Images& images,
                  uint64_t sample_seed = 1, int sample_trials = 200);
Derivation build_derivation(RingPtr ring, const std::string& name, RingMap sigma,
                            const Images& images, uint64_t sample_seed = 1,
                            int sample_trials = 200);

struct CompatWitness {
  std::string law;   // e.g. "sigma strict", "delta weak"
  std::string map;   // name of the offending map
  Elem a, b;
};

struct CompatReport {
  bool sigma_strict = true, delta_strict = true;
  bool sigma_weak = true, delta_weak = true;
  bool exhaustive = true;
  uint64_t pairs_checked = 0;
  std::vector<CompatWitness> witnesses;  // first failure per (map, law)

  bool strict() const { return sigma_strict && delta_strict; }
  bool weak() const { return sigma_weak && delta_weak; }
};

// single-map laws, quantified over element pairs: exhaustive for finite
// rings, seeded sampling for symbolic ones (sampled must be requested)
CompatReport check_compatibility(const RingPtr& ring, const std::vector<RingMap>& Sigma,
                                 const std::vector<Derivation>& Delta, bool sampled = false,
                                 uint64_t seed = 1, int trials = 4096);

// same laws relative to a two-sided ideal (given as a code bitmap)
CompatReport check_compatible_ideal(const RingPtr& ring, const std::vector<bool>& ideal,
                                    const std::vector<RingMap>& Sigma,
                                    const std::vector<Derivation>& Delta);

// composed laws for words sigma^theta, delta^beta with |theta|, |beta| <= 2:
//   ab = 0    => a sigma^theta(b) = sigma^theta(a) b = 0
//   sigma^theta(a) b = 0 or a sigma^theta(b) = 0  =>  ab = 0
//   ab = 0    => sigma^theta(a) delta^beta(b) = delta^beta(a) sigma^theta(b) = 0
// plus the same statements with "= 0" replaced by "in N(R)"
struct LawSuiteReport {
  bool strict_ok = true, weak_ok = true;
  uint64_t checks = 0;
  std::vector<CompatWitness> witnesses;
};

LawSuiteReport derived_law_suite(const RingPtr& ring, const std::vector<RingMap>& Sigma,
                                 const std::vector<Derivation>& Delta, int max_word = 2);

}  // namespace spbw
