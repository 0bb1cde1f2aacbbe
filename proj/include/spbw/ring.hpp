#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spbw/error.hpp"

namespace spbw {

class Ring;
using RingPtr = std::shared_ptr<const Ring>;
using Code = uint32_t;

// Flat coordinate vector; the interpretation belongs to the owning ring.
// Finite rings additionally expose a mixed-radix code for every element,
// strictly below the cardinality, so enumeration loops can stay integer-only.
struct Elem {
  const Ring* ring = nullptr;
  std::vector<int64_t> v;

  bool operator==(const Elem& o) const { return ring == o.ring && v == o.v; }
  bool operator!=(const Elem& o) const { return !(*this == o); }
};

enum class RingKind {
  Zmod,
  Quotient,   // base[v]/(monic modulus); GF(p^k) is Quotient over Zmod(p)
  Triangular, // upper triangular matrices, diagonal included
  FullMatrix,
  TrivialExt, // T(R,R): pairs (r,m), (r1,m1)(r2,m2) = (r1 r2, r1 m2 + m1 r2)
  Product,
  Int,        // symbolic Z
  Poly,       // symbolic base[v], base finite
};

uint64_t cardinality_cap();  // default 256, SPBW_CAP env overrides

class Ring {
 public:
  virtual ~Ring() = default;

  RingKind kind() const { return kind_; }
  bool symbolic() const { return card_ == 0; }
  uint64_t cardinality() const { return card_; }  // 0 when symbolic
  // number of flat coordinates per element; 0 means variable length (Poly)
  size_t width() const { return width_; }

  Elem zero() const;
  Elem one() const;
  virtual Elem add(const Elem& a, const Elem& b) const = 0;
  virtual Elem mul(const Elem& a, const Elem& b) const = 0;
  virtual Elem neg(const Elem& a) const = 0;
  Elem sub(const Elem& a, const Elem& b) const { return add(a, neg(b)); }
  Elem from_int(int64_t k) const;  // k * 1

  bool is_zero(const Elem& a) const { return a == zero(); }

  virtual Elem decode(Code c) const = 0;
  virtual Code encode(const Elem& a) const = 0;

  // named elements that, together with 1, generate the ring under + and *
  virtual std::vector<std::pair<std::string, Elem>> generators() const { return {}; }

  virtual std::string print(const Elem& a) const = 0;
  virtual std::string describe() const = 0;

  // nilpotency decided structurally; only for symbolic rings (finite rings
  // go through nil_data / power iteration instead)
  virtual bool nilpotent_structural(const Elem& a) const;

  // all leaf coordinates live in Z; additive maps are then coordinate-linear
  virtual bool int_leaves() const { return false; }

  // component rings of tuple-shaped elements (pairs, products); empty for
  // everything else. Coordinates of an element are the concatenation of the
  // component coordinates, in order.
  virtual std::vector<RingPtr> components() const { return {}; }

  // table-backed fast path, built for finite rings within the cap
  bool has_tables() const { return !mul_t_.empty(); }
  Code addc(Code a, Code b) const { return add_t_[size_t(a) * card_ + b]; }
  Code mulc(Code a, Code b) const { return mul_t_[size_t(a) * card_ + b]; }
  Code negc(Code a) const { return neg_t_[a]; }
  Code onec() const { return one_c_; }
  bool is_unit(Code a) const { return unit_[a]; }
  bool commutative() const { return commutative_; }

 protected:
  Ring(RingKind k, uint64_t card, size_t width) : kind_(k), card_(card), width_(width) {}
  virtual Elem zero_impl() const = 0;
  virtual Elem one_impl() const = 0;
  // materializes tables and checks the ring axioms exhaustively
  void finalize_tables();

  RingKind kind_;
  uint64_t card_;
  size_t width_;
  std::vector<Code> add_t_, mul_t_;
  std::vector<Code> neg_t_;
  std::vector<bool> unit_;
  Code one_c_ = 0;
  bool commutative_ = false;

 private:
  mutable std::optional<Elem> zero_cache_, one_cache_;
};

RingPtr make_zmod(uint64_t n);
RingPtr make_int();
// base[var]/(modulus); modulus given by its coefficient list over base,
// constant term first, leading coefficient must be 1 (degree = coeffs-1)
RingPtr make_quotient(RingPtr base, const std::string& var, std::vector<Elem> modulus);
RingPtr make_gf(uint64_t p, uint64_t k);  // stock irreducible modulus, generator "a"
RingPtr make_gf(uint64_t q);              // q = p^k
// GF(p^k) with a caller-supplied modulus (coefficients over Zmod(p), constant
// term first); rejected with NonIrreducibleModulus unless monic irreducible
RingPtr make_gf_explicit(uint64_t p, const std::vector<int64_t>& modulus);
bool poly_irreducible_mod_p(uint64_t p, const std::vector<int64_t>& f);
RingPtr make_triangular(RingPtr base, int n);
RingPtr make_full_matrix(RingPtr base, int n);
RingPtr make_trivial_ext(RingPtr base);
RingPtr make_product(std::vector<RingPtr> factors);
RingPtr make_poly(RingPtr base, const std::string& var);

// quotient of a finite ring by a two-sided ideal, elements are the
// minimal-code coset representatives
RingPtr make_coset_quotient(RingPtr base, const std::vector<bool>& ideal);

struct NilData {
  RingPtr ring;
  std::vector<bool> nilpotent;        // indexed by code
  std::vector<Code> nilpotents;       // N(R) as a sorted code list
  bool is_ni = false;                 // N(R) closed under addition (then an ideal)
  int nilindex = -1;                  // least t with N(R)^t = 0; -1 if N not an ideal
  std::vector<Code> prime_radical;    // = Jacobson radical (finite ring)
  bool is_2primal = false;
};

NilData nil_data(const RingPtr& ring);

bool is_nilpotent(const RingPtr& ring, const Elem& a);
bool is_nilpotent_code(const RingPtr& ring, Code a);

std::vector<Elem> enumerate_elements(const RingPtr& ring);

}  // namespace spbw
