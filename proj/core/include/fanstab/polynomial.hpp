#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fanstab/rational.hpp"

namespace fanstab {

// Dense integer polynomial, coefficients lowest degree first.
// Leading coefficient is nonzero unless the polynomial is zero.
class IntPolynomial {
 public:
  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }
  static IntPolynomial zero() { return IntPolynomial(); }
  static IntPolynomial constant(Int a) { return IntPolynomial({std::move(a)}); }
  // x^k
  static IntPolynomial monomial(int k, Int a = Int(1));

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
  const std::vector<Int>& coeffs() const { return c_; }
  const Int& coeff(int k) const;
  const Int& leading() const { return c_.back(); }

  IntPolynomial operator+(const IntPolynomial& o) const;
  IntPolynomial operator-(const IntPolynomial& o) const;
  IntPolynomial operator*(const IntPolynomial& o) const;
  IntPolynomial operator-() const;
  bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

  IntPolynomial scaled(const Int& a) const;
  IntPolynomial derivative() const;
  Int content() const;            // >= 0; gcd of coefficients
  IntPolynomial primitive_part() const;  // content removed, leading coeff > 0

  // Exact division; asserts divisibility.
  IntPolynomial divide_exact(const IntPolynomial& d) const;
  bool divides(const IntPolynomial& d, IntPolynomial* quotient = nullptr) const;

  Int eval_int(const Int& x) const;
  Rat eval(const Rat& x) const;
  int sign_at(const Rat& x) const;

  // p(x + a), p(a*x), x^n p(1/x) (reversal), p(-x)
  IntPolynomial taylor_shift(const Int& a) const;
  IntPolynomial scale_arg(const Int& a) const;
  IntPolynomial reverse() const;
  IntPolynomial negate_arg() const;
  // denominator-cleared p(x + r) for rational r: v^n p(x/?):
  // returns q with q(x) = den^deg * p((x + num)/den) pattern helpers below.
  IntPolynomial compose_linear_cleared(const Int& num, const Int& den) const;  // den^n p((x+num)/den)

  std::string str(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<Int> c_;
};

IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b);  // primitive, leading > 0
IntPolynomial squarefree_part(const IntPolynomial& p);

// Resultant of a and b as polynomials in their main variable.
Int resultant(const IntPolynomial& a, const IntPolynomial& b);

// Cauchy root bound as a power of two: all real roots lie in (-B, B).
Int cauchy_bound_pow2(const IntPolynomial& p);

// Number of distinct real roots of p in (a, b], by Sturm chains over Q.
int sturm_count(const IntPolynomial& p, const Rat& a, const Rat& b);
int sturm_count_all(const IntPolynomial& p);

// Descartes/bisection isolation of the real roots of a squarefree polynomial.
// Returns disjoint open intervals (lo, hi) with dyadic endpoints, each containing
// exactly one root, sorted increasingly. Rational roots are returned as
// degenerate intervals lo == hi.
std::vector<std::pair<Rat, Rat>> isolate_roots_squarefree(const IntPolynomial& p);

// Full factorization over Z: squarefree decomposition, rational roots,
// and a Zassenhaus modular/Hensel step for what remains.
// Returns primitive irreducible factors with positive leading coefficient,
// paired with multiplicities. The content is dropped.
std::vector<std::pair<IntPolynomial, int>> factor(const IntPolynomial& p);

}  // namespace fanstab
