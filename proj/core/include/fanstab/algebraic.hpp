#pragma once

#include <utility>
#include <vector>

#include "fanstab/polynomial.hpp"
#include "fanstab/rational.hpp"

namespace fanstab {

// A real algebraic number: irreducible primitive min_poly (leading > 0) plus an
// isolating interval with dyadic endpoints. Degree-1 numbers are exact
// rationals with lo == hi. Values are immutable; refinement returns a copy.
class AlgebraicNumber {
 public:
  AlgebraicNumber() : poly_({Int(0), Int(1)}), lo_(0), hi_(0) {}
  static AlgebraicNumber from_rational(const Rat& r);
  static AlgebraicNumber from_int(long v) { return from_rational(Rat(v)); }
  // internal: factor already irreducible, interval isolates one root, endpoints
  // are not roots (degree >= 2 case)
  static AlgebraicNumber from_factor(IntPolynomial irreducible, Rat lo, Rat hi);

  const IntPolynomial& min_poly() const { return poly_; }
  Rat lo() const { return lo_; }
  Rat hi() const { return hi_; }
  int degree() const { return poly_.degree(); }
  bool is_rational() const { return poly_.degree() == 1; }
  Rat rational_value() const { return lo_; }

  AlgebraicNumber refined(int steps = 1) const;
  void refine_inplace(int steps = 1);
  // refine until interval width <= eps
  void refine_to(const Rat& eps);

  int sign() const;
  double approx() const;

  friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b);
  friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b);
  friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b);
  friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b);
  AlgebraicNumber operator-() const;
  AlgebraicNumber inverse() const;
  AlgebraicNumber abs_value() const;

  // -1, 0, +1
  static int compare(const AlgebraicNumber& a, const AlgebraicNumber& b);
  bool operator==(const AlgebraicNumber& o) const { return compare(*this, o) == 0; }
  bool operator<(const AlgebraicNumber& o) const { return compare(*this, o) < 0; }
  bool operator>(const AlgebraicNumber& o) const { return compare(*this, o) > 0; }

  std::string str() const;

 private:
  IntPolynomial poly_;
  Rat lo_, hi_;
};

// All real roots of p in increasing order, each with irreducible min_poly.
std::vector<AlgebraicNumber> isolate_real_roots(const IntPolynomial& p);

// Exact total order on field expressions built from AlgebraicNumbers.
inline int alg_compare(const AlgebraicNumber& x, const AlgebraicNumber& y) {
  return AlgebraicNumber::compare(x, y);
}

}  // namespace fanstab
