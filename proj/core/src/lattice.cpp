#include "fanstab/lattice.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

#include "fanstab/polynomial.hpp"

namespace fanstab {

Vec vec_add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec vec_sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec vec_neg(const Vec& a) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

Vec vec_scale(const Vec& a, const Int& c) {
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
  return r;
}

Int vec_dot(const Vec& a, const Vec& b) {
  Int s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool vec_is_zero(const Vec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

std::string vec_str(const Vec& a) {
  std::ostringstream os;
  os << "(";
  for (size_t i = 0; i < a.size(); ++i) {
    if (i) os << ",";
    os << a[i].get_str();
  }
  os << ")";
  return os.str();
}

QVec qvec_add(const QVec& a, const QVec& b) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

QVec qvec_scale(const QVec& a, const Rat& c) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
  return r;
}

Rat qvec_dot(const QVec& a, const QVec& b) {
  Rat s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool qvec_is_zero(const QVec& a) {
  for (const auto& x : a)
    if (x != 0) return false;
  return true;
}

QVec to_qvec(const Vec& a) {
  QVec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = Rat(a[i]);
  return r;
}

Vec qvec_to_primitive(const QVec& a) {
  Int lcm_den = 1;
  for (const auto& x : a) {
    Int d = x.get_den();
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), d.get_mpz_t());
  }
  Vec r(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    Rat v = a[i] * Rat(lcm_den);
    r[i] = v.get_num();
  }
  if (vec_is_zero(r)) return r;
  return primitive(r);
}

Vec primitive(const Vec& v) {
  Int g = 0;
  for (const auto& x : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  if (g == 0) throw std::invalid_argument("primitive: zero vector");
  Vec r(v.size());
  for (size_t i = 0; i < v.size(); ++i) r[i] = v[i] / g;
  return r;
}

IntMatrix IntMatrix::identity(int m) {
  IntMatrix a = zero(m);
  for (int i = 0; i < m; ++i) a.entries[i][i] = 1;
  return a;
}

IntMatrix IntMatrix::zero(int m) {
  IntMatrix a;
  a.rank = m;
  a.entries.assign(m, Vec(m, Int(0)));
  return a;
}

Vec IntMatrix::apply(const Vec& v) const {
  Vec r(rank, Int(0));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) r[i] += entries[i][j] * v[j];
  return r;
}

QVec IntMatrix::apply(const QVec& v) const {
  QVec r(rank, Rat(0));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) r[i] += Rat(entries[i][j]) * v[j];
  return r;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  IntMatrix r = zero(rank);
  for (int i = 0; i < rank; ++i)
    for (int k = 0; k < rank; ++k)
      for (int j = 0; j < rank; ++j) r.entries[i][j] += entries[i][k] * o.entries[k][j];
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  IntMatrix r = *this;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) r.entries[i][j] += o.entries[i][j];
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  IntMatrix r = *this;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) r.entries[i][j] -= o.entries[i][j];
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r = zero(rank);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) r.entries[j][i] = entries[i][j];
  return r;
}

IntMatrix IntMatrix::pow(unsigned k) const {
  IntMatrix r = identity(rank);
  IntMatrix b = *this;
  while (k) {
    if (k & 1u) r = r * b;
    b = b * b;
    k >>= 1u;
  }
  return r;
}

Int IntMatrix::trace() const {
  Int s = 0;
  for (int i = 0; i < rank; ++i) s += entries[i][i];
  return s;
}

namespace {

// fraction-free Gaussian elimination (Bareiss) determinant
Int det_bareiss(std::vector<Vec> a) {
  int n = static_cast<int>(a.size());
  if (n == 0) return Int(1);
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a[i][k] != 0) {
          p = i;
          break;
        }
      if (p < 0) return Int(0);
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int num = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        a[i][j] = num / prev;
      }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

}  // namespace

Int IntMatrix::det() const { return det_bareiss(entries); }

IntMatrix IntMatrix::adjugate() const {
  int n = rank;
  IntMatrix r = zero(n);
  if (n == 1) {
    r.entries[0][0] = 1;
    return r;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      std::vector<Vec> minor;
      minor.reserve(n - 1);
      for (int r2 = 0; r2 < n; ++r2) {
        if (r2 == i) continue;
        Vec row;
        row.reserve(n - 1);
        for (int c2 = 0; c2 < n; ++c2) {
          if (c2 == j) continue;
          row.push_back(entries[r2][c2]);
        }
        minor.push_back(std::move(row));
      }
      Int m = det_bareiss(minor);
      r.entries[j][i] = ((i + j) % 2 == 0) ? m : -m;
    }
  return r;
}

bool IntMatrix::is_scalar() const {
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      if (i == j) {
        if (entries[i][j] != entries[0][0]) return false;
      } else if (entries[i][j] != 0) {
        return false;
      }
    }
  return true;
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < rank; ++i) {
    if (i) os << "; ";
    for (int j = 0; j < rank; ++j) {
      if (j) os << " ";
      os << entries[i][j].get_str();
    }
  }
  os << "]";
  return os.str();
}

IntPolynomial char_poly(const IntMatrix& a) {
  // Faddeev-LeVerrier; all divisions exact over Z
  int n = a.rank;
  std::vector<Int> c(n + 1);
  c[n] = 1;
  IntMatrix mk = a;
  c[n - 1] = -mk.trace();
  for (int k = 2; k <= n; ++k) {
    IntMatrix t = mk;
    for (int i = 0; i < n; ++i) t.entries[i][i] += c[n - k + 1];
    mk = a * t;
    Int tr = mk.trace();
    c[n - k] = -tr / k;
  }
  return IntPolynomial(c);
}

namespace {

// bring rows to a row-echelon form over Z by unimodular row ops on [A | U],
// U starts as identity of size rows.size(); returns pivot count (rank)
int echelon_with_transform(std::vector<Vec>& a, std::vector<Vec>& u, int ambient) {
  int nrows = static_cast<int>(a.size());
  u.assign(nrows, Vec(nrows, Int(0)));
  for (int i = 0; i < nrows; ++i) u[i][i] = 1;
  int r = 0;
  for (int col = 0; col < ambient && r < nrows; ++col) {
    // gcd out the column below row r using extended Euclid-style row ops
    int piv = -1;
    for (int i = r; i < nrows; ++i)
      if (a[i][col] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[r], a[piv]);
    std::swap(u[r], u[piv]);
    for (int i = r + 1; i < nrows; ++i) {
      while (a[i][col] != 0) {
        Int q = floor_div(a[r][col], a[i][col]);
        // a[r] -= q*a[i]
        for (int j = 0; j < ambient; ++j) a[r][j] -= q * a[i][j];
        for (size_t j = 0; j < u[r].size(); ++j) u[r][j] -= q * u[i][j];
        std::swap(a[r], a[i]);
        std::swap(u[r], u[i]);
      }
    }
    if (a[r][col] < 0) {
      a[r] = vec_neg(a[r]);
      u[r] = vec_neg(u[r]);
    }
    ++r;
  }
  return r;
}

}  // namespace

int rank_of(const std::vector<Vec>& rows, int ambient) {
  std::vector<Vec> a = rows;
  std::vector<Vec> u;
  return echelon_with_transform(a, u, ambient);
}

std::vector<Vec> integer_kernel(const std::vector<Vec>& rows, int ambient) {
  // kernel of v -> (row_i . v): echelonize the transpose-style system.
  // Work with columns: put A^T rows = standard trick. Here: treat the map
  // Z^ambient -> Z^nrows, x -> A x; echelonize x-space basis rows [I | Ax].
  int nrows = static_cast<int>(rows.size());
  // build matrix whose i-th row is (A e_i) for e_i basis of Z^ambient
  std::vector<Vec> img(ambient, Vec(nrows, Int(0)));
  for (int i = 0; i < ambient; ++i)
    for (int r = 0; r < nrows; ++r) img[i][r] = rows[r][i];
  std::vector<Vec> u;
  int rk = echelon_with_transform(img, u, nrows);
  // rows of u beyond rank rk map to zero; they form a (saturated) kernel basis
  std::vector<Vec> ker;
  for (int i = rk; i < ambient; ++i) {
    if (!vec_is_zero(u[i])) ker.push_back(primitive(u[i]));
  }
  // normalize to echelon form for determinism
  std::vector<Vec> dummy;
  echelon_with_transform(ker, dummy, ambient);
  for (auto& v : ker) v = primitive(v);
  return ker;
}

RationalSubspace saturate(const std::vector<Vec>& vectors, int ambient) {
  std::vector<Vec> nz;
  for (const auto& v : vectors)
    if (!vec_is_zero(v)) nz.push_back(v);
  RationalSubspace s;
  s.rank = ambient;
  if (nz.empty()) return s;
  // V cap N = kernel(annihilator(V)), both kernels saturated
  s.basis = integer_kernel(integer_kernel(nz, ambient), ambient);
  return s;
}

bool RationalSubspace::contains(const Vec& v) const {
  if (vec_is_zero(v)) return true;
  std::vector<Vec> all = basis;
  all.push_back(v);
  return rank_of(all, rank) == static_cast<int>(basis.size());
}

bool RationalSubspace::operator==(const RationalSubspace& o) const {
  if (rank != o.rank || dim() != o.dim()) return false;
  for (const auto& v : o.basis)
    if (!contains(v)) return false;
  return true;
}

RationalSubspace annihilator(const RationalSubspace& a) {
  RationalSubspace r;
  r.rank = a.rank;
  if (a.basis.empty()) {
    // annihilator of {0} is everything
    for (int i = 0; i < a.rank; ++i) {
      Vec e(a.rank, Int(0));
      e[i] = 1;
      r.basis.push_back(e);
    }
    return r;
  }
  r.basis = integer_kernel(a.basis, a.rank);
  return r;
}

RationalSubspace subspace_ops(const RationalSubspace& a, const RationalSubspace& b,
                              SubspaceOp op) {
  switch (op) {
    case SubspaceOp::Sum: {
      std::vector<Vec> all = a.basis;
      all.insert(all.end(), b.basis.begin(), b.basis.end());
      return saturate(all, a.rank);
    }
    case SubspaceOp::Intersect: {
      // V cap W = (V deg + W deg) deg
      RationalSubspace s = subspace_ops(annihilator(a), annihilator(b), SubspaceOp::Sum);
      return annihilator(s);
    }
    case SubspaceOp::Annihilator:
      return annihilator(a);
  }
  throw std::logic_error("subspace_ops: bad op");
}

bool solve_rational(const std::vector<QVec>& rows, const QVec& rhs, QVec& out) {
  int m = static_cast<int>(rows.size());
  int n = m ? static_cast<int>(rows[0].size()) : 0;
  std::vector<QVec> a = rows;
  QVec b = rhs;
  std::vector<int> pivcol(m, -1);
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    int p = -1;
    for (int i = r; i < m; ++i)
      if (a[i][c] != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[r], a[p]);
    std::swap(b[r], b[p]);
    Rat inv = Rat(1) / a[r][c];
    for (int j = c; j < n; ++j) a[r][j] *= inv;
    b[r] *= inv;
    for (int i = 0; i < m; ++i) {
      if (i == r || a[i][c] == 0) continue;
      Rat f = a[i][c];
      for (int j = c; j < n; ++j) a[i][j] -= f * a[r][j];
      b[i] -= f * b[r];
    }
    pivcol[r] = c;
    ++r;
  }
  for (int i = r; i < m; ++i)
    if (b[i] != 0) return false;
  out.assign(n, Rat(0));
  for (int i = 0; i < r; ++i) out[pivcol[i]] = b[i];
  return true;
}

}  // namespace fanstab
