#include "spbw/ring.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>

namespace spbw {

const char* err_name(Err e) {
  switch (e) {
    case Err::MalformedPreset: return "MalformedPreset";
    case Err::NonIrreducibleModulus: return "NonIrreducibleModulus";
    case Err::CardinalityOverCap: return "CardinalityOverCap";
    case Err::MixedRings: return "MixedRings";
    case Err::SymbolicRingUnsupported: return "SymbolicRingUnsupported";
    case Err::SymbolicNeedsSampledMode: return "SymbolicNeedsSampledMode";
    case Err::NotAHomomorphism: return "NotAHomomorphism";
    case Err::NotADerivation: return "NotADerivation";
    case Err::GeneratorImageMissing: return "GeneratorImageMissing";
    case Err::NotAnIdeal: return "NotAnIdeal";
    case Err::NonTerminatingRewrite: return "NonTerminatingRewrite";
    case Err::MixedExtensions: return "MixedExtensions";
    case Err::HypothesisNotCertified: return "HypothesisNotCertified";
    case Err::HypothesisFailedRingSide: return "HypothesisFailedRingSide";
    case Err::OracleBudgetExceeded: return "OracleBudgetExceeded";
    case Err::EnumerationOverCap: return "EnumerationOverCap";
    case Err::EmptyTarget: return "EmptyTarget";
    case Err::PreconditionNilpotent: return "PreconditionNilpotent";
    case Err::DescentStuck: return "DescentStuck";
    case Err::LawViolation: return "LawViolation";
    case Err::NotNI: return "NotNI";
    case Err::SyntaxError: return "SyntaxError";
    case Err::UnresolvedName: return "UnresolvedName";
    case Err::DuplicateDeclaration: return "DuplicateDeclaration";
    case Err::RelationNotLowerTriangular: return "RelationNotLowerTriangular";
    case Err::IoError: return "IoError";
  }
  return "Error";
}

uint64_t cardinality_cap() {
  if (const char* s = std::getenv("SPBW_CAP")) {
    char* end = nullptr;
    unsigned long long x = std::strtoull(s, &end, 10);
    if (end && *end == '\0' && x >= 2) return x;
  }
  return 256;
}

static void chk(const Ring* r, const Elem& a) {
  if (a.ring != r) fail(Err::MixedRings, "element does not belong to " + r->describe());
}

Elem Ring::zero() const {
  if (!zero_cache_) zero_cache_ = zero_impl();
  return *zero_cache_;
}

Elem Ring::one() const {
  if (!one_cache_) one_cache_ = one_impl();
  return *one_cache_;
}

Elem Ring::from_int(int64_t k) const {
  bool flip = k < 0;
  uint64_t m = flip ? uint64_t(-(k + 1)) + 1 : uint64_t(k);
  Elem acc = zero(), pw = one();
  while (m) {
    if (m & 1) acc = add(acc, pw);
    pw = add(pw, pw);
    m >>= 1;
  }
  return flip ? neg(acc) : acc;
}

bool Ring::nilpotent_structural(const Elem&) const {
  fail(Err::SymbolicRingUnsupported, "no structural nilpotency rule for " + describe());
}

void Ring::finalize_tables() {
  if (symbolic()) return;
  if (card_ > cardinality_cap())
    fail(Err::CardinalityOverCap, describe() + " has cardinality " + std::to_string(card_) +
                                      " > cap " + std::to_string(cardinality_cap()));
  size_t n = size_t(card_);
  std::vector<Elem> el(n);
  for (size_t c = 0; c < n; ++c) {
    el[c] = decode(Code(c));
    if (encode(el[c]) != c)
      fail(Err::MalformedPreset, describe() + ": encode/decode mismatch at code " + std::to_string(c));
  }
  if (encode(zero()) != 0) fail(Err::MalformedPreset, describe() + ": zero is not code 0");
  one_c_ = encode(one());

  add_t_.assign(n * n, 0);
  mul_t_.assign(n * n, 0);
  neg_t_.assign(n, 0);
  for (size_t a = 0; a < n; ++a) {
    neg_t_[a] = encode(neg(el[a]));
    for (size_t b = 0; b < n; ++b) {
      add_t_[a * n + b] = encode(add(el[a], el[b]));
      mul_t_[a * n + b] = encode(mul(el[a], el[b]));
    }
  }

  auto ax = [&](bool ok, const char* law) {
    if (!ok) fail(Err::LawViolation, describe() + ": ring axiom failed (" + law + ")");
  };
  commutative_ = true;
  for (size_t a = 0; a < n; ++a) {
    ax(add_t_[a * n] == a, "a+0=a");
    ax(mul_t_[a * n + one_c_] == a, "a*1=a");
    ax(mul_t_[one_c_ * n + a] == a, "1*a=a");
    ax(add_t_[a * n + neg_t_[a]] == 0, "a+(-a)=0");
    for (size_t b = 0; b < n; ++b) {
      ax(add_t_[a * n + b] == add_t_[b * n + a], "a+b=b+a");
      if (mul_t_[a * n + b] != mul_t_[b * n + a]) commutative_ = false;
      for (size_t c = 0; c < n; ++c) {
        ax(add_t_[add_t_[a * n + b] * n + c] == add_t_[a * n + add_t_[b * n + c]], "+assoc");
        ax(mul_t_[mul_t_[a * n + b] * n + c] == mul_t_[a * n + mul_t_[b * n + c]], "*assoc");
        ax(mul_t_[a * n + add_t_[b * n + c]] == add_t_[mul_t_[a * n + b] * n + mul_t_[a * n + c]],
           "left distrib");
        ax(mul_t_[add_t_[a * n + b] * n + c] == add_t_[mul_t_[a * n + c] * n + mul_t_[b * n + c]],
           "right distrib");
      }
    }
  }
  unit_.assign(n, false);
  for (size_t a = 0; a < n; ++a)
    for (size_t b = 0; b < n; ++b)
      if (mul_t_[a * n + b] == one_c_ && mul_t_[b * n + a] == one_c_) {
        unit_[a] = true;
        break;
      }
}

// ---------------------------------------------------------------- Zmod

namespace {

class ZmodRing : public Ring {
 public:
  explicit ZmodRing(uint64_t n) : Ring(RingKind::Zmod, n, 1), n_(int64_t(n)) {
    if (n < 2) fail(Err::MalformedPreset, "Zmod modulus must be >= 2");
  }
  Elem add(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    return Elem{this, {(a.v[0] + b.v[0]) % n_}};
  }
  Elem mul(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    return Elem{this, {(a.v[0] * b.v[0]) % n_}};
  }
  Elem neg(const Elem& a) const override {
    chk(this, a);
    return Elem{this, {(n_ - a.v[0]) % n_}};
  }
  Elem decode(Code c) const override {
    if (c >= card_) fail(Err::MalformedPreset, "code out of range");
    return Elem{this, {int64_t(c)}};
  }
  Code encode(const Elem& a) const override { chk(this, a); return Code(a.v[0]); }
  std::string print(const Elem& a) const override { return std::to_string(a.v[0]); }
  std::string describe() const override { return "Zmod(" + std::to_string(n_) + ")"; }

 protected:
  Elem zero_impl() const override { return Elem{this, {0}}; }
  Elem one_impl() const override { return Elem{this, {1 % n_}}; }

 private:
  int64_t n_;
};

// ---------------------------------------------------------------- Int

class IntRing : public Ring {
 public:
  IntRing() : Ring(RingKind::Int, 0, 1) {}
  Elem add(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    return Elem{this, {a.v[0] + b.v[0]}};
  }
  Elem mul(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    return Elem{this, {a.v[0] * b.v[0]}};
  }
  Elem neg(const Elem& a) const override { chk(this, a); return Elem{this, {-a.v[0]}}; }
  Elem decode(Code) const override {
    fail(Err::SymbolicRingUnsupported, "Int has no element codes");
  }
  Code encode(const Elem&) const override {
    fail(Err::SymbolicRingUnsupported, "Int has no element codes");
  }
  std::string print(const Elem& a) const override { return std::to_string(a.v[0]); }
  std::string describe() const override { return "Int"; }
  bool nilpotent_structural(const Elem& a) const override { return a.v[0] == 0; }
  bool int_leaves() const override { return true; }

 protected:
  Elem zero_impl() const override { return Elem{this, {0}}; }
  Elem one_impl() const override { return Elem{this, {1}}; }
};

// -------------------------------------------------- composite helpers

Elem slice(const RingPtr& base, const Elem& a, size_t cell) {
  size_t w = base->width();
  return Elem{base.get(),
              std::vector<int64_t>(a.v.begin() + cell * w, a.v.begin() + (cell + 1) * w)};
}

void put(Elem& dst, const RingPtr& base, size_t cell, const Elem& part) {
  size_t w = base->width();
  std::copy(part.v.begin(), part.v.end(), dst.v.begin() + cell * w);
}

uint64_t pow_checked(uint64_t b, uint64_t e, const std::string& what) {
  if (b == 0) return 0;
  uint64_t r = 1;
  for (uint64_t i = 0; i < e; ++i) {
    if (r > (uint64_t(1) << 40))
      fail(Err::CardinalityOverCap, what + ": cardinality out of range");
    r *= b;
  }
  return r;
}

std::string paren(const std::string& s) {
  return s.find('+') != std::string::npos || s.find('-') != std::string::npos ? "(" + s + ")" : s;
}

std::string print_poly_terms(const Ring* base, const std::vector<Elem>& coeffs,
                             const std::string& var) {
  std::string out;
  for (size_t i = coeffs.size(); i-- > 0;) {
    const Elem& c = coeffs[i];
    if (c.ring->is_zero(c)) continue;
    std::string cs = base->print(c);
    std::string term;
    if (i == 0) {
      term = cs;
    } else {
      std::string pw = i == 1 ? var : var + "^" + std::to_string(i);
      term = cs == "1" ? pw : paren(cs) + "*" + pw;
    }
    if (!out.empty()) out += "+";
    out += term;
  }
  return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- Quotient

class QuotientRing : public Ring {
 public:
  QuotientRing(RingPtr base, std::string var, std::vector<Elem> modulus)
      : Ring(RingKind::Quotient,
             base->symbolic() ? 0
                              : pow_checked(base->cardinality(), modulus.size() - 1, "quotient"),
             (modulus.size() - 1) * base->width()),
        base_(std::move(base)),
        var_(std::move(var)),
        mod_(std::move(modulus)),
        deg_(mod_.size() - 1) {
    if (deg_ < 1) fail(Err::MalformedPreset, "quotient modulus must have degree >= 1");
    for (auto& c : mod_) chk(base_.get(), c);
    if (mod_.back() != base_->one())
      fail(Err::MalformedPreset, "quotient modulus must be monic");
    if (base_->symbolic() && !base_->int_leaves())
      fail(Err::SymbolicRingUnsupported, "quotient over " + base_->describe());
    if (base_->width() == 0)
      fail(Err::SymbolicRingUnsupported, "quotient over variable-width base");
  }

  Elem add(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    Elem r = zero();
    for (size_t i = 0; i < deg_; ++i)
      put(r, base_, i, base_->add(slice(base_, a, i), slice(base_, b, i)));
    return r;
  }
  Elem neg(const Elem& a) const override {
    chk(this, a);
    Elem r = zero();
    for (size_t i = 0; i < deg_; ++i) put(r, base_, i, base_->neg(slice(base_, a, i)));
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    std::vector<Elem> buf(2 * deg_ - 1, base_->zero());
    for (size_t i = 0; i < deg_; ++i) {
      Elem ai = slice(base_, a, i);
      if (base_->is_zero(ai)) continue;
      for (size_t j = 0; j < deg_; ++j)
        buf[i + j] = base_->add(buf[i + j], base_->mul(ai, slice(base_, b, j)));
    }
    for (size_t i = buf.size(); i-- > deg_;) {
      Elem c = buf[i];
      if (base_->is_zero(c)) continue;
      for (size_t j = 0; j < deg_; ++j)
        buf[i - deg_ + j] = base_->sub(buf[i - deg_ + j], base_->mul(c, mod_[j]));
      buf[i] = base_->zero();
    }
    Elem r = zero();
    for (size_t i = 0; i < deg_; ++i) put(r, base_, i, buf[i]);
    return r;
  }
  Elem decode(Code c) const override {
    if (base_->symbolic()) fail(Err::SymbolicRingUnsupported, describe() + " has no codes");
    Elem r = zero();
    uint64_t rest = c, bc = base_->cardinality();
    for (size_t i = 0; i < deg_; ++i) {
      put(r, base_, i, base_->decode(Code(rest % bc)));
      rest /= bc;
    }
    return r;
  }
  Code encode(const Elem& a) const override {
    chk(this, a);
    if (base_->symbolic()) fail(Err::SymbolicRingUnsupported, describe() + " has no codes");
    uint64_t c = 0, bc = base_->cardinality();
    for (size_t i = deg_; i-- > 0;) c = c * bc + base_->encode(slice(base_, a, i));
    return Code(c);
  }
  std::vector<std::pair<std::string, Elem>> generators() const override {
    std::vector<std::pair<std::string, Elem>> g;
    for (auto& [nm, el] : base_->generators()) {
      Elem lift = zero();
      put(lift, base_, 0, el);
      g.emplace_back(nm, lift);
    }
    Elem z = zero();
    put(z, base_, 1, base_->one());
    g.emplace_back(var_, z);
    return g;
  }
  std::string print(const Elem& a) const override {
    chk(this, a);
    std::vector<Elem> cs;
    for (size_t i = 0; i < deg_; ++i) cs.push_back(slice(base_, a, i));
    return print_poly_terms(base_.get(), cs, var_);
  }
  std::string describe() const override {
    std::vector<Elem> cs = mod_;
    return "quotient(" + base_->describe() + ", " + var_ + ", " +
           print_poly_terms(base_.get(), cs, var_) + ")";
  }
  bool nilpotent_structural(const Elem& a) const override {
    // only for pure power moduli v^d, where nilpotency is decided by the
    // constant coefficient (commutative base)
    for (size_t i = 0; i < deg_; ++i)
      if (!base_->is_zero(mod_[i]))
        fail(Err::SymbolicRingUnsupported, "no structural nilpotency rule for " + describe());
    return base_->nilpotent_structural(slice(base_, a, 0));
  }
  bool int_leaves() const override { return base_->int_leaves(); }

 protected:
  Elem zero_impl() const override {
    return Elem{this, std::vector<int64_t>(width_, 0)};
  }
  Elem one_impl() const override {
    Elem r = zero();
    put(r, base_, 0, base_->one());
    return r;
  }

 private:
  RingPtr base_;
  std::string var_;
  std::vector<Elem> mod_;
  size_t deg_;
};

// ---------------------------------------------------------------- matrices

class MatrixRing : public Ring {
 public:
  MatrixRing(RingPtr base, int n, bool upper)
      : Ring(upper ? RingKind::Triangular : RingKind::FullMatrix,
             base->symbolic() ? 0
                              : pow_checked(base->cardinality(),
                                            uint64_t(upper ? n * (n + 1) / 2 : n * n), "matrix"),
             size_t(upper ? n * (n + 1) / 2 : n * n) * base->width()),
        base_(std::move(base)),
        n_(n),
        upper_(upper) {
    if (n < 2) fail(Err::MalformedPreset, "matrix size must be >= 2");
    if (base_->width() == 0)
      fail(Err::SymbolicRingUnsupported, "matrices over variable-width base");
    cells_ = upper_ ? n * (n + 1) / 2 : n * n;
  }

  // cell index for i <= j (upper) or any i, j (full), 0-based
  size_t idx(int i, int j) const {
    if (!upper_) return size_t(i) * n_ + j;
    // row-major over the upper triangle
    return size_t(i) * n_ - size_t(i) * (i - 1) / 2 + (j - i);
  }

  Elem add(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    Elem r = zero();
    for (int c = 0; c < cells_; ++c)
      put(r, base_, c, base_->add(slice(base_, a, c), slice(base_, b, c)));
    return r;
  }
  Elem neg(const Elem& a) const override {
    chk(this, a);
    Elem r = zero();
    for (int c = 0; c < cells_; ++c) put(r, base_, c, base_->neg(slice(base_, a, c)));
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    Elem r = zero();
    for (int i = 0; i < n_; ++i)
      for (int j = upper_ ? i : 0; j < n_; ++j) {
        Elem s = base_->zero();
        for (int k = upper_ ? i : 0; k <= (upper_ ? j : n_ - 1); ++k)
          s = base_->add(s, base_->mul(slice(base_, a, idx(i, k)), slice(base_, b, idx(k, j))));
        put(r, base_, idx(i, j), s);
      }
    return r;
  }
  Elem decode(Code c) const override {
    if (base_->symbolic()) fail(Err::SymbolicRingUnsupported, describe() + " has no codes");
    Elem r = zero();
    uint64_t rest = c, bc = base_->cardinality();
    for (int i = 0; i < cells_; ++i) {
      put(r, base_, i, base_->decode(Code(rest % bc)));
      rest /= bc;
    }
    return r;
  }
  Code encode(const Elem& a) const override {
    chk(this, a);
    uint64_t c = 0, bc = base_->cardinality();
    for (int i = cells_; i-- > 0;) c = c * bc + base_->encode(slice(base_, a, i));
    return Code(c);
  }
  std::vector<std::pair<std::string, Elem>> generators() const override {
    std::vector<std::pair<std::string, Elem>> g;
    for (auto& [nm, el] : base_->generators()) {
      Elem lift = zero();
      for (int i = 0; i < n_; ++i) put(lift, base_, idx(i, i), el);
      g.emplace_back(nm, lift);
    }
    auto unit = [&](int i, int j) {
      Elem e = zero();
      put(e, base_, idx(i, j), base_->one());
      g.emplace_back("e" + std::to_string(i + 1) + std::to_string(j + 1), e);
    };
    if (upper_) {
      for (int i = 0; i + 1 < n_; ++i) unit(i, i);
      for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) unit(i, j);
    } else {
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
          if (i != j) unit(i, j);
    }
    return g;
  }
  std::string print(const Elem& a) const override {
    chk(this, a);
    std::string out = "[";
    for (int c = 0; c < cells_; ++c) {
      if (c) out += ",";
      out += base_->print(slice(base_, a, c));
    }
    return out + "]";
  }
  std::string describe() const override {
    return (upper_ ? std::string("triangular(") : std::string("matrices(")) + base_->describe() +
           ", " + std::to_string(n_) + ")";
  }
  bool nilpotent_structural(const Elem& a) const override {
    if (!upper_)
      fail(Err::SymbolicRingUnsupported, "no structural nilpotency rule for " + describe());
    for (int i = 0; i < n_; ++i)
      if (!base_->nilpotent_structural(slice(base_, a, idx(i, i)))) return false;
    return true;
  }
  bool int_leaves() const override { return base_->int_leaves(); }

 protected:
  Elem zero_impl() const override {
    return Elem{this, std::vector<int64_t>(width_, 0)};
  }
  Elem one_impl() const override {
    Elem r = zero();
    for (int i = 0; i < n_; ++i) put(r, base_, idx(i, i), base_->one());
    return r;
  }

 private:
  RingPtr base_;
  int n_;
  bool upper_;
  int cells_;
};

// ---------------------------------------------------------------- trivial extension

class TrivialExtRing : public Ring {
 public:
  explicit TrivialExtRing(RingPtr base)
      : Ring(RingKind::TrivialExt,
             base->symbolic() ? 0 : pow_checked(base->cardinality(), 2, "trivial"),
             2 * base->width()),
        base_(std::move(base)) {
    if (base_->width() == 0)
      fail(Err::SymbolicRingUnsupported, "trivial extension over variable-width base");
  }

  Elem add(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    Elem r = zero();
    put(r, base_, 0, base_->add(slice(base_, a, 0), slice(base_, b, 0)));
    put(r, base_, 1, base_->add(slice(base_, a, 1), slice(base_, b, 1)));
    return r;
  }
  Elem neg(const Elem& a) const override {
    chk(this, a);
    Elem r = zero();
    put(r, base_, 0, base_->neg(slice(base_, a, 0)));
    put(r, base_, 1, base_->neg(slice(base_, a, 1)));
    return r;
  }
  Elem mul(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    Elem r1 = slice(base_, a, 0), m1 = slice(base_, a, 1);
    Elem r2 = slice(base_, b, 0), m2 = slice(base_, b, 1);
    Elem r = zero();
    put(r, base_, 0, base_->mul(r1, r2));
    put(r, base_, 1, base_->add(base_->mul(r1, m2), base_->mul(m1, r2)));
    return r;
  }
  Elem decode(Code c) const override {
    if (base_->symbolic()) fail(Err::SymbolicRingUnsupported, describe() + " has no codes");
    uint64_t bc = base_->cardinality();
    Elem r = zero();
    put(r, base_, 0, base_->decode(Code(c % bc)));
    put(r, base_, 1, base_->decode(Code(c / bc)));
    return r;
  }
  Code encode(const Elem& a) const override {
    chk(this, a);
    return Code(base_->encode(slice(base_, a, 1)) * base_->cardinality() +
                base_->encode(slice(base_, a, 0)));
  }
  std::vector<std::pair<std::string, Elem>> generators() const override {
    std::vector<std::pair<std::string, Elem>> g;
    for (auto& [nm, el] : base_->generators()) {
      Elem lift = zero();
      put(lift, base_, 0, el);
      g.emplace_back(nm, lift);
    }
    Elem e = zero();
    put(e, base_, 1, base_->one());
    g.emplace_back("e", e);
    return g;
  }
  std::string print(const Elem& a) const override {
    chk(this, a);
    return "[" + base_->print(slice(base_, a, 0)) + "," + base_->print(slice(base_, a, 1)) + "]";
  }
  std::string describe() const override { return "trivial(" + base_->describe() + ")"; }
  std::vector<RingPtr> components() const override { return {base_, base_}; }
  bool nilpotent_structural(const Elem& a) const override {
    return base_->nilpotent_structural(slice(base_, a, 0));
  }
  bool int_leaves() const override { return base_->int_leaves(); }

 protected:
  Elem zero_impl() const override {
    return Elem{this, std::vector<int64_t>(width_, 0)};
  }
  Elem one_impl() const override {
    Elem r = zero();
    put(r, base_, 0, base_->one());
    return r;
  }

 private:
  RingPtr base_;
};

// ---------------------------------------------------------------- product

class ProductRing : public Ring {
 public:
  explicit ProductRing(std::vector<RingPtr> fs)
      : Ring(RingKind::Product, product_card(fs), total_width(fs)), fs_(std::move(fs)) {
    if (fs_.size() < 2) fail(Err::MalformedPreset, "product needs at least two factors");
    size_t off = 0;
    for (auto& f : fs_) {
      offs_.push_back(off);
      off += f->width();
    }
  }

  Elem add(const Elem& a, const Elem& b) const override { return zip(a, b, 0); }
  Elem mul(const Elem& a, const Elem& b) const override { return zip(a, b, 1); }
  Elem neg(const Elem& a) const override {
    chk(this, a);
    Elem r = zero();
    for (size_t i = 0; i < fs_.size(); ++i) put_at(r, i, fs_[i]->neg(comp(a, i)));
    return r;
  }
  Elem decode(Code c) const override {
    Elem r = zero();
    uint64_t rest = c;
    for (size_t i = 0; i < fs_.size(); ++i) {
      put_at(r, i, fs_[i]->decode(Code(rest % fs_[i]->cardinality())));
      rest /= fs_[i]->cardinality();
    }
    return r;
  }
  Code encode(const Elem& a) const override {
    chk(this, a);
    uint64_t c = 0;
    for (size_t i = fs_.size(); i-- > 0;) c = c * fs_[i]->cardinality() + fs_[i]->encode(comp(a, i));
    return Code(c);
  }
  std::string print(const Elem& a) const override {
    chk(this, a);
    std::string out = "[";
    for (size_t i = 0; i < fs_.size(); ++i) {
      if (i) out += ",";
      out += fs_[i]->print(comp(a, i));
    }
    return out + "]";
  }
  std::string describe() const override {
    std::string out = "product(";
    for (size_t i = 0; i < fs_.size(); ++i) {
      if (i) out += ", ";
      out += fs_[i]->describe();
    }
    return out + ")";
  }
  std::vector<RingPtr> components() const override { return fs_; }
  bool nilpotent_structural(const Elem& a) const override {
    for (size_t i = 0; i < fs_.size(); ++i)
      if (!fs_[i]->nilpotent_structural(comp(a, i))) return false;
    return true;
  }
  bool int_leaves() const override {
    return std::all_of(fs_.begin(), fs_.end(), [](auto& f) { return f->int_leaves(); });
  }

 protected:
  Elem zero_impl() const override {
    return Elem{this, std::vector<int64_t>(width_, 0)};
  }
  Elem one_impl() const override {
    Elem r = zero();
    for (size_t i = 0; i < fs_.size(); ++i) put_at(r, i, fs_[i]->one());
    return r;
  }

 private:
  static uint64_t product_card(const std::vector<RingPtr>& fs) {
    uint64_t c = 1;
    for (auto& f : fs) {
      if (f->symbolic()) return 0;
      if (c > (uint64_t(1) << 40))
        fail(Err::CardinalityOverCap, "product cardinality out of range");
      c *= f->cardinality();
    }
    return c;
  }
  static size_t total_width(const std::vector<RingPtr>& fs) {
    size_t w = 0;
    for (auto& f : fs) {
      if (f->width() == 0) fail(Err::SymbolicRingUnsupported, "product over variable-width factor");
      w += f->width();
    }
    return w;
  }
  Elem comp(const Elem& a, size_t i) const {
    return Elem{fs_[i].get(), std::vector<int64_t>(a.v.begin() + offs_[i],
                                                   a.v.begin() + offs_[i] + fs_[i]->width())};
  }
  void put_at(Elem& dst, size_t i, const Elem& part) const {
    std::copy(part.v.begin(), part.v.end(), dst.v.begin() + offs_[i]);
  }
  Elem zip(const Elem& a, const Elem& b, int op) const {
    chk(this, a); chk(this, b);
    Elem r = zero();
    for (size_t i = 0; i < fs_.size(); ++i)
      put_at(r, i,
             op == 0 ? fs_[i]->add(comp(a, i), comp(b, i)) : fs_[i]->mul(comp(a, i), comp(b, i)));
    return r;
  }

  std::vector<RingPtr> fs_;
  std::vector<size_t> offs_;
};

// ---------------------------------------------------------------- polynomial ring

class PolyRing : public Ring {
 public:
  PolyRing(RingPtr base, std::string var)
      : Ring(RingKind::Poly, 0, 0), base_(std::move(base)), var_(std::move(var)) {
    if (base_->symbolic() || base_->width() == 0)
      fail(Err::SymbolicRingUnsupported, "polynomial ring over " + base_->describe());
    if (!base_->commutative())
      fail(Err::SymbolicRingUnsupported, "polynomial ring over noncommutative base");
  }

  size_t deg_count(const Elem& a) const { return a.v.size() / base_->width(); }

  Elem add(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    size_t na = deg_count(a), nb = deg_count(b);
    std::vector<Elem> cs(std::max(na, nb), base_->zero());
    for (size_t i = 0; i < na; ++i) cs[i] = slice(base_, a, i);
    for (size_t i = 0; i < nb; ++i) cs[i] = base_->add(cs[i], slice(base_, b, i));
    return pack(cs);
  }
  Elem mul(const Elem& a, const Elem& b) const override {
    chk(this, a); chk(this, b);
    size_t na = deg_count(a), nb = deg_count(b);
    if (na == 0 || nb == 0) return zero();
    std::vector<Elem> cs(na + nb - 1, base_->zero());
    for (size_t i = 0; i < na; ++i)
      for (size_t j = 0; j < nb; ++j)
        cs[i + j] = base_->add(cs[i + j], base_->mul(slice(base_, a, i), slice(base_, b, j)));
    return pack(cs);
  }
  Elem neg(const Elem& a) const override {
    chk(this, a);
    std::vector<Elem> cs;
    for (size_t i = 0; i < deg_count(a); ++i) cs.push_back(base_->neg(slice(base_, a, i)));
    return pack(cs);
  }
  Elem decode(Code) const override {
    fail(Err::SymbolicRingUnsupported, describe() + " has no element codes");
  }
  Code encode(const Elem&) const override {
    fail(Err::SymbolicRingUnsupported, describe() + " has no element codes");
  }
  std::vector<std::pair<std::string, Elem>> generators() const override {
    std::vector<std::pair<std::string, Elem>> g;
    for (auto& [nm, el] : base_->generators()) {
      std::vector<Elem> cs{el};
      g.emplace_back(nm, pack(cs));
    }
    std::vector<Elem> cs{base_->zero(), base_->one()};
    g.emplace_back(var_, pack(cs));
    return g;
  }
  std::string print(const Elem& a) const override {
    chk(this, a);
    std::vector<Elem> cs;
    for (size_t i = 0; i < deg_count(a); ++i) cs.push_back(slice(base_, a, i));
    return print_poly_terms(base_.get(), cs, var_);
  }
  std::string describe() const override {
    return "polyring(" + base_->describe() + ", " + var_ + ")";
  }
  bool nilpotent_structural(const Elem& a) const override {
    // sound when the base has no nonzero nilpotents; checked by nil_data at
    // preset build time for the bases we accept (finite fields)
    for (size_t i = 0; i < deg_count(a); ++i)
      if (!is_nilpotent_code(base_, base_->encode(slice(base_, a, i)))) return false;
    return true;
  }

 protected:
  Elem zero_impl() const override { return Elem{this, {}}; }
  Elem one_impl() const override {
    std::vector<Elem> cs{base_->one()};
    return pack(cs);
  }

 private:
  Elem pack(const std::vector<Elem>& cs) const {
    size_t n = cs.size();
    while (n > 0 && base_->is_zero(cs[n - 1])) --n;
    Elem r{this, std::vector<int64_t>(n * base_->width(), 0)};
    for (size_t i = 0; i < n; ++i) put(r, base_, i, cs[i]);
    return r;
  }

  RingPtr base_;
  std::string var_;
};

// ---------------------------------------------------------------- coset quotient

class CosetQuotientRing : public Ring {
 public:
  CosetQuotientRing(RingPtr base, const std::vector<bool>& ideal)
      : Ring(RingKind::Quotient, 0, base->width()), base_(std::move(base)) {
    size_t n = size_t(base_->cardinality());
    if (n == 0 || !base_->has_tables())
      fail(Err::SymbolicRingUnsupported, "coset quotient needs a table-backed base");
    if (ideal.size() != n || !ideal[0]) fail(Err::NotAnIdeal, "bad ideal bitmap");
    std::vector<Code> members;
    for (Code i = 0; i < n; ++i)
      if (ideal[i]) members.push_back(i);
    for (Code i : members) {
      for (Code j : members)
        if (!ideal[base_->addc(i, j)]) fail(Err::NotAnIdeal, "not closed under addition");
      for (Code r = 0; r < n; ++r)
        if (!ideal[base_->mulc(i, r)] || !ideal[base_->mulc(r, i)])
          fail(Err::NotAnIdeal, "not closed under multiplication");
    }
    rep_.assign(n, Code(n));
    for (Code c = 0; c < n; ++c) {
      Code best = c;
      for (Code i : members) best = std::min(best, base_->addc(c, i));
      rep_[c] = best;
    }
    index_.assign(n, Code(n));
    for (Code c = 0; c < n; ++c)
      if (rep_[c] == c) {
        index_[c] = Code(elems_.size());
        elems_.push_back(c);
      }
    card_ = elems_.size();
  }

  Code rep_of(Code base_code) const { return rep_[base_code]; }

  Elem add(const Elem& a, const Elem& b) const override { return lift(op(a, b, 0)); }
  Elem mul(const Elem& a, const Elem& b) const override { return lift(op(a, b, 1)); }
  Elem neg(const Elem& a) const override {
    chk(this, a);
    return lift(rep_[base_->negc(base_->encode(reelem(a)))]);
  }
  Elem decode(Code c) const override {
    if (c >= card_) fail(Err::MalformedPreset, "code out of range");
    return lift(elems_[c]);
  }
  Code encode(const Elem& a) const override {
    chk(this, a);
    return index_[rep_[base_->encode(reelem(a))]];
  }
  std::string print(const Elem& a) const override {
    chk(this, a);
    return base_->print(reelem(a));
  }
  std::string describe() const override { return base_->describe() + "/N"; }

 protected:
  Elem zero_impl() const override { return lift(rep_[0]); }
  Elem one_impl() const override { return lift(rep_[base_->onec()]); }

 private:
  Elem reelem(const Elem& a) const { return Elem{base_.get(), a.v}; }
  Elem lift(Code base_code) const {
    Elem e = base_->decode(base_code);
    return Elem{this, e.v};
  }
  Code op(const Elem& a, const Elem& b, int which) const {
    chk(this, a); chk(this, b);
    Code x = base_->encode(reelem(a)), y = base_->encode(reelem(b));
    return rep_[which == 0 ? base_->addc(x, y) : base_->mulc(x, y)];
  }

  RingPtr base_;
  std::vector<Code> rep_, index_, elems_;
};

}  // namespace

// Table construction happens in a second phase because it calls virtuals.
template <class T, class... A>
static RingPtr build_ring(A&&... args) {
  struct Built : T {
    using T::T;
    void run_finalize() { this->finalize_tables(); }
  };
  auto r = std::make_shared<Built>(std::forward<A>(args)...);
  r->run_finalize();
  return r;
}

RingPtr make_zmod(uint64_t n) { return build_ring<ZmodRing>(n); }
RingPtr make_int() { return std::make_shared<IntRing>(); }

RingPtr make_quotient(RingPtr base, const std::string& var, std::vector<Elem> modulus) {
  return build_ring<QuotientRing>(std::move(base), var, std::move(modulus));
}

// monic check plus trial division by every monic polynomial of degree <= k/2
bool poly_irreducible_mod_p(uint64_t p, const std::vector<int64_t>& f) {
  size_t k = f.size() - 1;
  if (k < 1 || ((f[k] % int64_t(p)) + int64_t(p)) % int64_t(p) != 1) return false;
  int64_t ip = int64_t(p);
  auto rem_zero = [&](const std::vector<int64_t>& g) {
    std::vector<int64_t> r = f;
    for (auto& c : r) c = ((c % ip) + ip) % ip;
    size_t d = g.size() - 1;
    for (size_t i = r.size(); i-- > d;) {
      int64_t c = r[i];
      if (c == 0) continue;
      for (size_t j = 0; j <= d; ++j)
        r[i - d + j] = ((r[i - d + j] - c * g[j]) % ip + ip * ip) % ip;
    }
    for (size_t j = 0; j < d; ++j)
      if (r[j] != 0) return false;
    return true;
  };
  for (size_t d = 1; d <= k / 2; ++d) {
    uint64_t count = 1;
    for (size_t i = 0; i < d; ++i) count *= p;
    for (uint64_t code = 0; code < count; ++code) {
      std::vector<int64_t> g(d + 1, 0);
      uint64_t rest = code;
      for (size_t i = 0; i < d; ++i) {
        g[i] = int64_t(rest % p);
        rest /= p;
      }
      g[d] = 1;
      if (rem_zero(g)) return false;
    }
  }
  return true;
}

RingPtr make_gf_explicit(uint64_t p, const std::vector<int64_t>& modulus) {
  if (!poly_irreducible_mod_p(p, modulus))
    fail(Err::NonIrreducibleModulus, "modulus is not irreducible over Zmod(" + std::to_string(p) + ")");
  RingPtr zp = make_zmod(p);
  std::vector<Elem> mod;
  for (int64_t c : modulus) mod.push_back(zp->from_int(c));
  return make_quotient(zp, "a", std::move(mod));
}

RingPtr make_gf(uint64_t p, uint64_t k) {
  if (k == 1) return make_zmod(p);
  // a small stock of irreducibles; fall back to search
  static const struct { uint64_t p, k; std::vector<int64_t> f; } stock[] = {
      {2, 2, {1, 1, 1}}, {2, 3, {1, 1, 0, 1}}, {2, 4, {1, 1, 0, 0, 1}},
      {3, 2, {1, 0, 1}}, {5, 2, {2, 0, 1}},    {7, 2, {1, 0, 1}},
  };
  for (auto& s : stock)
    if (s.p == p && s.k == k) return make_gf_explicit(p, s.f);
  uint64_t count = 1;
  for (uint64_t i = 0; i < k; ++i) count *= p;
  for (uint64_t code = 0; code < count; ++code) {
    std::vector<int64_t> f(k + 1, 0);
    uint64_t rest = code;
    for (uint64_t i = 0; i < k; ++i) {
      f[i] = int64_t(rest % p);
      rest /= p;
    }
    f[k] = 1;
    if (poly_irreducible_mod_p(p, f)) return make_gf_explicit(p, f);
  }
  fail(Err::NonIrreducibleModulus, "no irreducible modulus found");
}

RingPtr make_gf(uint64_t q) {
  for (uint64_t p = 2; p * p <= q; ++p)
    if (q % p == 0) {
      uint64_t k = 0, r = q;
      while (r > 1) {
        if (r % p != 0) fail(Err::MalformedPreset, "GF order must be a prime power");
        r /= p;
        ++k;
      }
      return make_gf(p, k);
    }
  return make_zmod(q);  // q prime
}

RingPtr make_triangular(RingPtr base, int n) {
  return build_ring<MatrixRing>(std::move(base), n, true);
}
RingPtr make_full_matrix(RingPtr base, int n) {
  return build_ring<MatrixRing>(std::move(base), n, false);
}
RingPtr make_trivial_ext(RingPtr base) { return build_ring<TrivialExtRing>(std::move(base)); }
RingPtr make_product(std::vector<RingPtr> factors) {
  return build_ring<ProductRing>(std::move(factors));
}
RingPtr make_poly(RingPtr base, const std::string& var) {
  return std::make_shared<PolyRing>(std::move(base), var);
}
RingPtr make_coset_quotient(RingPtr base, const std::vector<bool>& ideal) {
  return build_ring<CosetQuotientRing>(std::move(base), ideal);
}

// ---------------------------------------------------------------- nil data

bool is_nilpotent_code(const RingPtr& ring, Code a) {
  Code x = a;
  for (uint64_t m = 0; m < ring->cardinality(); ++m) {
    if (x == 0) return true;
    x = ring->mulc(x, a);
  }
  return x == 0;
}

bool is_nilpotent(const RingPtr& ring, const Elem& a) {
  if (ring->symbolic()) return ring->nilpotent_structural(a);
  return is_nilpotent_code(ring, ring->encode(a));
}

NilData nil_data(const RingPtr& ring) {
  if (ring->symbolic())
    fail(Err::SymbolicRingUnsupported, "nil_data needs a finite ring: " + ring->describe());
  size_t n = size_t(ring->cardinality());
  NilData d;
  d.ring = ring;
  d.nilpotent.assign(n, false);
  for (Code c = 0; c < n; ++c)
    if (is_nilpotent_code(ring, c)) {
      d.nilpotent[c] = true;
      d.nilpotents.push_back(c);
    }

  d.is_ni = true;
  for (Code a : d.nilpotents) {
    for (Code b : d.nilpotents)
      if (!d.nilpotent[ring->addc(a, b)]) d.is_ni = false;
    for (Code r = 0; r < n && d.is_ni; ++r)
      if (!d.nilpotent[ring->mulc(a, r)] || !d.nilpotent[ring->mulc(r, a)]) d.is_ni = false;
    if (!d.is_ni) break;
  }

  if (d.is_ni) {
    // least t with every length-t product of nilpotents equal to 0
    std::vector<bool> cur(n, false);
    for (Code c : d.nilpotents) cur[c] = true;
    auto only_zero = [&](const std::vector<bool>& s) {
      for (size_t i = 1; i < s.size(); ++i)
        if (s[i]) return false;
      return true;
    };
    int t = 1;
    while (!only_zero(cur) && t <= int(n) + 1) {
      std::vector<bool> nxt(n, false);
      for (Code a = 0; a < n; ++a)
        if (cur[a])
          for (Code b : d.nilpotents) nxt[ring->mulc(a, b)] = true;
      cur = std::move(nxt);
      ++t;
    }
    d.nilindex = t;
  }

  // prime radical of a finite ring = Jacobson radical:
  // r with 1 - s*r left invertible for every s
  for (Code r = 0; r < n; ++r) {
    bool in_j = true;
    for (Code s = 0; s < n && in_j; ++s) {
      Code x = ring->addc(ring->onec(), ring->negc(ring->mulc(s, r)));
      bool left_inv = false;
      for (Code u = 0; u < n; ++u)
        if (ring->mulc(u, x) == ring->onec()) {
          left_inv = true;
          break;
        }
      in_j = left_inv;
    }
    if (in_j) d.prime_radical.push_back(r);
  }
  d.is_2primal = d.prime_radical == d.nilpotents;
  return d;
}

std::vector<Elem> enumerate_elements(const RingPtr& ring) {
  if (ring->symbolic())
    fail(Err::SymbolicRingUnsupported, "cannot enumerate " + ring->describe());
  std::vector<Elem> out;
  out.reserve(size_t(ring->cardinality()));
  for (Code c = 0; c < ring->cardinality(); ++c) out.push_back(ring->decode(c));
  return out;
}

}  // namespace spbw
