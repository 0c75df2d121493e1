#pragma once

#include <string>
#include <vector>

#include "fanstab/rational.hpp"

namespace fanstab {

// vector in the ambient lattice N (length = ambient rank)
using Vec = std::vector<Int>;
using QVec = std::vector<Rat>;

Vec vec_add(const Vec& a, const Vec& b);
Vec vec_sub(const Vec& a, const Vec& b);
Vec vec_neg(const Vec& a);
Vec vec_scale(const Vec& a, const Int& c);
Int vec_dot(const Vec& a, const Vec& b);
bool vec_is_zero(const Vec& a);
std::string vec_str(const Vec& a);

QVec qvec_add(const QVec& a, const QVec& b);
QVec qvec_scale(const QVec& a, const Rat& c);
Rat qvec_dot(const QVec& a, const QVec& b);
bool qvec_is_zero(const QVec& a);
QVec to_qvec(const Vec& a);
// clear denominators and divide by content; zero stays zero
Vec qvec_to_primitive(const QVec& a);

// divide by gcd of coordinates, preserving direction
Vec primitive(const Vec& v);

struct IntMatrix {
  int rank = 0;
  std::vector<Vec> entries;  // rows

  IntMatrix() = default;
  IntMatrix(int m, std::vector<Vec> rows) : rank(m), entries(std::move(rows)) {}

  static IntMatrix identity(int m);
  static IntMatrix zero(int m);

  const Int& at(int i, int j) const { return entries[i][j]; }
  Int& at(int i, int j) { return entries[i][j]; }

  Vec apply(const Vec& v) const;
  QVec apply(const QVec& v) const;
  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const = default;
  IntMatrix transpose() const;
  IntMatrix pow(unsigned k) const;
  Int trace() const;
  Int det() const;
  IntMatrix adjugate() const;  // adj(A) with A*adj(A) = det(A) I
  bool is_scalar() const;
  std::string str() const;
};

// characteristic polynomial det(xI - A), lowest-degree coefficient first
class IntPolynomial;
IntPolynomial char_poly(const IntMatrix& a);

// saturated lattice basis of a rational subspace (basis of V cap N)
struct RationalSubspace {
  int rank = 0;               // ambient rank
  std::vector<Vec> basis;     // saturated lattice basis, may be empty ({0})

  int dim() const { return static_cast<int>(basis.size()); }
  bool contains(const Vec& v) const;
  bool operator==(const RationalSubspace& o) const;  // equality as subspaces
};

// integer row rank
int rank_of(const std::vector<Vec>& rows, int ambient);

// saturated basis of {v in Z^m : Av = 0} where rows of A are `rows`
std::vector<Vec> integer_kernel(const std::vector<Vec>& rows, int ambient);

RationalSubspace saturate(const std::vector<Vec>& vectors, int ambient);

enum class SubspaceOp { Sum, Intersect, Annihilator };
RationalSubspace subspace_ops(const RationalSubspace& a, const RationalSubspace& b,
                              SubspaceOp op);
RationalSubspace annihilator(const RationalSubspace& a);

// solve A x = b over Q; returns false if inconsistent. Columns of A are `cols`.
bool solve_rational(const std::vector<QVec>& rows, const QVec& rhs, QVec& out);

}  // namespace fanstab
