#pragma once

#include "spbw/nilweak.hpp"

namespace spbw {

struct RightIdeal {
  RingPtr ring;
  std::vector<Code> elements;    // sorted, closed under + and right multiplication
  std::vector<Code> generators;  // a recorded generating set, pruned greedily
};

// the complete lattice by closure saturation; every right ideal is the
// closure of its own elements, so adjoining one element at a time reaches all
std::vector<RightIdeal> enumerate_right_ideals(const RingPtr& ring, uint64_t cap = 64);

struct QuasiPrimeCert {
  RightIdeal ideal;
  bool is_quasi_prime = false;
  std::vector<Code> ann;                // N_R(I)
  std::optional<RightIdeal> witness;    // sub-ideal outside N(R) with a different annihilator
};
QuasiPrimeCert quasi_prime_check(const RingPtr& ring, const std::vector<RightIdeal>& lattice,
                                 const RightIdeal& ideal);

struct NassData {
  std::vector<RightIdeal> lattice;
  std::vector<QuasiPrimeCert> certs;
  std::vector<std::vector<Code>> nass;  // deduplicated quasi-prime annihilators
};
NassData nass_ring(const RingPtr& ring, uint64_t cap = 64);  // NotNI when N(R) is no ideal

struct NdegData {
  int ndeg = -1;  // position in the ascending-deglex support of the largest
                  // monomial whose coefficient is not nilpotent
  Monomial ndeg_monomial;
  bool is_good = false;  // ndeg >= 0 and N_R(r_k) inside every N_R(r_i), i <= k
};
NdegData ndeg(const ExtensionSpec& ext, const SkewPoly& f);
bool is_nilpotent_good(const ExtensionSpec& ext, const SkewPoly& f);

struct GoodResult {
  Elem r;
  SkewPoly fr;
  int steps = 0;
};
// right-multiplier descent: while f r is not good, pick the first b in
// N_R(r_k) (code order) outside N_R(r_i) for the smallest offending i; each
// step must lower the ndeg monomial in deglex
GoodResult make_nilpotent_good(const ExtensionSpec& ext, const SkewPoly& f,
                               const NilContext* ctx = nullptr);

// bounded two-way check that the extension's nilpotent associated primes are
// exactly the lifted ring-side ones: (forward) degree <= D membership test of
// the annihilator of each quasi-prime ideal's constants, (backward) seeded
// good polynomials must reproduce some ring-side annihilator
Verdict verify_nass_extension(const ExtensionSpec& ext, int D, int trials, uint64_t seed,
                              uint64_t enum_budget = uint64_t(1) << 20,
                              uint64_t ideal_cap = 64);

}  // namespace spbw
