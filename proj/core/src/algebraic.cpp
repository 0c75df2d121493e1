#include "fanstab/algebraic.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fanstab {

AlgebraicNumber AlgebraicNumber::from_rational(const Rat& r) {
  AlgebraicNumber a;
  a.poly_ = IntPolynomial({Int(-r.get_num()), Int(r.get_den())});
  a.lo_ = a.hi_ = r;
  return a;
}

AlgebraicNumber AlgebraicNumber::from_factor(IntPolynomial irreducible, Rat lo, Rat hi) {
  AlgebraicNumber a;
  if (irreducible.degree() == 1) {
    Rat r = make_rat(-irreducible.coeff(0), irreducible.coeff(1));
    return from_rational(r);
  }
  a.poly_ = std::move(irreducible);
  a.lo_ = std::move(lo);
  a.hi_ = std::move(hi);
  if (a.poly_.sign_at(a.lo_) == 0 || a.poly_.sign_at(a.hi_) == 0)
    throw std::logic_error("AlgebraicNumber: endpoint is a root");
  return a;
}

void AlgebraicNumber::refine_inplace(int steps) {
  if (is_rational()) return;
  int slo = poly_.sign_at(lo_);
  for (int s = 0; s < steps; ++s) {
    Rat mid = (lo_ + hi_) / 2;
    int sm = poly_.sign_at(mid);
    // irreducible of degree >= 2 has no rational roots
    if (sm == slo) lo_ = mid;
    else hi_ = mid;
  }
}

AlgebraicNumber AlgebraicNumber::refined(int steps) const {
  AlgebraicNumber a = *this;
  a.refine_inplace(steps);
  return a;
}

void AlgebraicNumber::refine_to(const Rat& eps) {
  while (hi_ - lo_ > eps) refine_inplace();
}

int AlgebraicNumber::sign() const {
  if (is_rational()) return sgn(lo_);
  AlgebraicNumber a = *this;
  while (true) {
    if (a.lo_ > 0) return 1;
    if (a.hi_ < 0) return -1;
    // 0 in [lo, hi]; 0 is not a root of an irreducible poly of degree >= 2
    a.refine_inplace();
  }
}

double AlgebraicNumber::approx() const {
  AlgebraicNumber a = refined(40);
  return (a.lo_.get_d() + a.hi_.get_d()) / 2;
}

std::vector<AlgebraicNumber> isolate_real_roots(const IntPolynomial& p) {
  if (p.is_zero()) throw std::invalid_argument("isolate_real_roots: zero polynomial");
  std::vector<AlgebraicNumber> out;
  for (const auto& [irr, mult] : factor(p)) {
    (void)mult;
    if (irr.degree() == 1) {
      out.push_back(AlgebraicNumber::from_rational(make_rat(-irr.coeff(0), irr.coeff(1))));
      continue;
    }
    for (auto& [lo, hi] : isolate_roots_squarefree(irr)) {
      out.push_back(AlgebraicNumber::from_factor(irr, lo, hi));
    }
  }
  std::sort(out.begin(), out.end(),
            [](const AlgebraicNumber& a, const AlgebraicNumber& b) {
              return AlgebraicNumber::compare(a, b) < 0;
            });
  return out;
}

int AlgebraicNumber::compare(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational()) return sgn(Rat(a.lo_ - b.lo_));
  AlgebraicNumber x = a, y = b;
  bool same_poly = (x.poly_ == y.poly_);
  while (true) {
    if (x.hi_ < y.lo_) return -1;
    if (y.hi_ < x.lo_) return 1;
    if (same_poly) {
      Rat lo = std::min(x.lo_, y.lo_), hi = std::max(x.hi_, y.hi_);
      if (sturm_count(x.poly_, lo, hi) == 1) return 0;
    }
    // distinct irreducible polys share no root; rationals are never roots of
    // an irrational's min_poly: refinement must eventually separate them
    x.refine_inplace();
    y.refine_inplace();
  }
}

namespace {

// ----- bivariate resultants: polynomials in z with coefficients in Z[x] -----

using XPoly = IntPolynomial;
using ZPoly = std::vector<XPoly>;  // coefficient of z^k at index k

void z_trim(ZPoly* p) {
  while (!p->empty() && p->back().is_zero()) p->pop_back();
}

// Resultant_z of two ZPolys, an element of Z[x]; Sylvester + Bareiss.
XPoly resultant_z(const ZPoly& a, const ZPoly& b) {
  int n = static_cast<int>(a.size()) - 1;
  int m = static_cast<int>(b.size()) - 1;
  int N = n + m;
  std::vector<std::vector<XPoly>> s(N, std::vector<XPoly>(N));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[i][i + j] = a[n - j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[m + i][i + j] = b[m - j];
  XPoly prev = XPoly::constant(Int(1));
  int flip = 1;
  for (int k = 0; k < N - 1; ++k) {
    if (s[k][k].is_zero()) {
      int piv = -1;
      for (int i = k + 1; i < N; ++i)
        if (!s[i][k].is_zero()) {
          piv = i;
          break;
        }
      if (piv < 0) return XPoly();
      std::swap(s[k], s[piv]);
      flip = -flip;
    }
    for (int i = k + 1; i < N; ++i) {
      for (int j = k + 1; j < N; ++j) {
        XPoly num = s[i][j] * s[k][k] - s[i][k] * s[k][j];
        s[i][j] = num.divide_exact(prev);
      }
      s[i][k] = XPoly();
    }
    prev = s[k][k];
  }
  return flip > 0 ? s[N - 1][N - 1] : -s[N - 1][N - 1];
}

ZPoly embed_const(const IntPolynomial& p) {
  // p(z): constants in x
  ZPoly r;
  for (const auto& c : p.coeffs()) r.push_back(XPoly::constant(c));
  return r;
}

Int binomial(int n, int k) {
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

ZPoly sum_transform(const IntPolynomial& q) {
  // q(x - z) as polynomial in z with Z[x] coefficients
  int m = q.degree();
  ZPoly r(m + 1);
  for (int k = 0; k <= m; ++k) {
    // coeff of z^k: sum_j q_j C(j,k) (-1)^k x^{j-k}
    std::vector<Int> c(m - k + 1, Int(0));
    for (int j = k; j <= m; ++j) c[j - k] = q.coeff(j) * binomial(j, k);
    XPoly t{std::move(c)};
    r[k] = (k % 2 == 0) ? t : -t;
  }
  z_trim(&r);
  return r;
}

ZPoly prod_transform(const IntPolynomial& q) {
  // z^m q(x/z): coeff of z^i is q_{m-i} x^{m-i}
  int m = q.degree();
  ZPoly r(m + 1);
  for (int i = 0; i <= m; ++i) {
    std::vector<Int> c(m - i + 1, Int(0));
    c[m - i] = q.coeff(m - i);
    r[i] = XPoly{std::move(c)};
  }
  z_trim(&r);
  return r;
}

struct IntervalRat {
  Rat lo, hi;
};

IntervalRat iv_add(const IntervalRat& a, const IntervalRat& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}
IntervalRat iv_sub(const IntervalRat& a, const IntervalRat& b) {
  return {a.lo - b.hi, a.hi - b.lo};
}
IntervalRat iv_mul(const IntervalRat& a, const IntervalRat& b) {
  Rat p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
  return {std::min(std::min(p1, p2), std::min(p3, p4)),
          std::max(std::max(p1, p2), std::max(p3, p4))};
}

// Identify the unique root of R (nonzero) approximated by the interval-valued
// function `value` of the two operands; refines operands until resolved.
AlgebraicNumber identify_root(const IntPolynomial& R, AlgebraicNumber x, AlgebraicNumber y,
                              IntervalRat (*value)(const IntervalRat&, const IntervalRat&)) {
  struct Cand {
    AlgebraicNumber num;
  };
  std::vector<AlgebraicNumber> cands;
  for (const auto& [irr, mult] : factor(R)) {
    (void)mult;
    if (irr.degree() == 1) {
      cands.push_back(AlgebraicNumber::from_rational(make_rat(-irr.coeff(0), irr.coeff(1))));
    } else {
      for (auto& [lo, hi] : isolate_roots_squarefree(irr))
        cands.push_back(AlgebraicNumber::from_factor(irr, lo, hi));
    }
  }
  if (cands.empty()) throw std::logic_error("identify_root: no real roots");
  if (cands.size() == 1) return cands[0];
  // make candidate intervals pairwise disjoint
  for (size_t i = 0; i < cands.size(); ++i)
    for (size_t j = i + 1; j < cands.size(); ++j) {
      while (!(cands[i].hi() < cands[j].lo() || cands[j].hi() < cands[i].lo())) {
        if (AlgebraicNumber::compare(cands[i], cands[j]) == 0)
          throw std::logic_error("identify_root: duplicate candidate roots");
        cands[i].refine_inplace();
        cands[j].refine_inplace();
      }
    }
  while (true) {
    IntervalRat vx{x.lo(), x.hi()}, vy{y.lo(), y.hi()};
    IntervalRat v = value(vx, vy);
    int hits = 0, last = -1;
    for (size_t i = 0; i < cands.size(); ++i) {
      if (!(cands[i].hi() < v.lo || v.hi < cands[i].lo())) {
        ++hits;
        last = static_cast<int>(i);
      }
    }
    if (hits == 1) return cands[last];
    x.refine_inplace(2);
    y.refine_inplace(2);
    for (auto& c : cands) c.refine_inplace();
  }
}

AlgebraicNumber shift_scale_rational(const AlgebraicNumber& a, const Rat& mul, const Rat& add) {
  // mul * a + add, mul != 0, a irrational
  // p(x) root a -> q(y) with y = mul*x + add: x = (y - add)/mul
  // q(y) = den^n p((num_x ... )) cleared
  // x = (y - add)/mul = (mul.den * y - mul.den*add) / (mul.num) ... work over Q then clear
  const IntPolynomial& p = a.min_poly();
  int n = p.degree();
  // substitute x = (y*ad - an*bn_over...) do it with rationals:
  // x = (y - add) / mul. Write add = s/t, mul = u/v: x = (t*v*y - s*v) / (t*u)
  Int s = add.get_num(), t = add.get_den(), u = mul.get_num(), v = mul.get_den();
  // x = (t v y - s v) / (t u): q(y) = (t u)^n p( (t v y - s v)/(t u) )
  // Use composition: first w = t v y - s v (integer linear), then clear denominators.
  // p((w)/(t u)) * (t u)^n = sum p_i w^i (t u)^{n-i}
  IntPolynomial w({Int(-s * v), Int(t * v)});
  IntPolynomial acc;
  IntPolynomial pw = IntPolynomial::constant(Int(1));
  Int tu = t * u;
  for (int i = 0; i <= n; ++i) {
    Int fac;
    mpz_pow_ui(fac.get_mpz_t(), tu.get_mpz_t(), static_cast<unsigned long>(n - i));
    acc = acc + pw.scaled(p.coeff(i) * fac);
    if (i < n) pw = pw * w;
  }
  IntPolynomial q = acc.primitive_part();
  // interval: monotone map
  Rat lo = mul * a.lo() + add, hi = mul * a.hi() + add;
  if (mul < 0) std::swap(lo, hi);
  AlgebraicNumber r = AlgebraicNumber::from_factor(q, lo, hi);
  return r;
}

}  // namespace

AlgebraicNumber AlgebraicNumber::operator-() const {
  if (is_rational()) return from_rational(Rat(-lo_));
  return shift_scale_rational(*this, Rat(-1), Rat(0));
}

AlgebraicNumber AlgebraicNumber::inverse() const {
  if (is_rational()) {
    if (lo_ == 0) throw std::domain_error("algebraic inverse of zero");
    return from_rational(Rat(1) / lo_);
  }
  IntPolynomial q = poly_.reverse().primitive_part();
  if (q.leading() < 0) q = -q;
  AlgebraicNumber a = *this;
  while (a.lo_ <= 0 && a.hi_ >= 0) a.refine_inplace();
  Rat lo = 1 / a.hi_, hi = 1 / a.lo_;
  return from_factor(q, lo, hi);
}

AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational())
    return AlgebraicNumber::from_rational(Rat(a.lo_ + b.lo_));
  if (a.is_rational()) return shift_scale_rational(b, Rat(1), a.lo_);
  if (b.is_rational()) return shift_scale_rational(a, Rat(1), b.lo_);
  IntPolynomial R(resultant_z(embed_const(a.poly_), sum_transform(b.poly_)));
  if (R.is_zero()) throw std::logic_error("algebraic add: vanishing resultant");
  return identify_root(R, a, b, iv_add);
}

AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational())
    return AlgebraicNumber::from_rational(Rat(a.lo_ - b.lo_));
  return a + (-b);
}

AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (a.is_rational() && b.is_rational())
    return AlgebraicNumber::from_rational(Rat(a.lo_ * b.lo_));
  if (a.is_rational()) {
    if (a.lo_ == 0) return AlgebraicNumber::from_rational(Rat(0));
    return shift_scale_rational(b, a.lo_, Rat(0));
  }
  if (b.is_rational()) {
    if (b.lo_ == 0) return AlgebraicNumber::from_rational(Rat(0));
    return shift_scale_rational(a, b.lo_, Rat(0));
  }
  IntPolynomial R(resultant_z(embed_const(a.poly_), prod_transform(b.poly_)));
  if (R.is_zero()) throw std::logic_error("algebraic mul: vanishing resultant");
  return identify_root(R, a, b, iv_mul);
}

AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
  if (b.sign() == 0) throw std::domain_error("algebraic division by zero");
  return a * b.inverse();
}

AlgebraicNumber AlgebraicNumber::abs_value() const {
  return sign() < 0 ? -*this : *this;
}

std::string AlgebraicNumber::str() const {
  std::ostringstream os;
  if (is_rational()) {
    os << lo_.get_str();
  } else {
    os << "root of " << poly_.str() << " in (" << lo_.get_str() << ", " << hi_.get_str()
       << ")";
  }
  return os.str();
}

}  // namespace fanstab
