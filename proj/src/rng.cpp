#include "spbw/rng.hpp"

namespace spbw {

Elem Rng::elem(const RingPtr& r) {
  if (!r->symbolic()) return r->decode(Code(next(r->cardinality())));
  if (r->int_leaves()) {
    Elem e = r->zero();
    for (auto& c : e.v) c = range(-4, 4);
    return e;
  }
  if (r->kind() == RingKind::Poly) {
    // random polynomial of degree <= 3 built from the generators
    auto gens = r->generators();
    Elem t = gens.back().second;
    Elem acc = r->zero(), pw = r->one();
    for (int i = 0; i <= 3; ++i) {
      acc = r->add(acc, r->mul(r->from_int(range(0, 6)), pw));
      pw = r->mul(pw, t);
    }
    return acc;
  }
  fail(Err::SymbolicRingUnsupported, "cannot sample from " + r->describe());
}

}  // namespace spbw
