#pragma once

#include <gmpxx.h>
#include <string>

namespace fanstab {

using Int = mpz_class;
using Rat = mpq_class;

inline int sign(const Int& x) { return sgn(x); }
inline int sign(const Rat& x) { return sgn(x); }

inline Rat make_rat(const Int& num, const Int& den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int floor_rat(const Rat& x) { return floor_div(x.get_num(), x.get_den()); }

inline Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

inline std::string to_string(const Int& x) { return x.get_str(); }
inline std::string to_string(const Rat& x) { return x.get_str(); }

}  // namespace fanstab
