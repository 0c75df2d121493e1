#include "fanstab/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace fanstab {

void IntPolynomial::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

IntPolynomial IntPolynomial::monomial(int k, Int a) {
  std::vector<Int> c(k + 1, Int(0));
  c[k] = std::move(a);
  return IntPolynomial(std::move(c));
}

const Int& IntPolynomial::coeff(int k) const {
  static const Int kZero(0);
  if (k < 0 || k >= static_cast<int>(c_.size())) return kZero;
  return c_[k];
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
  std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const {
  std::vector<Int> r(std::max(c_.size(), o.c_.size()), Int(0));
  for (size_t i = 0; i < c_.size(); ++i) r[i] += c_[i];
  for (size_t i = 0; i < o.c_.size(); ++i) r[i] -= o.c_[i];
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
  if (is_zero() || o.is_zero()) return IntPolynomial();
  std::vector<Int> r(c_.size() + o.c_.size() - 1, Int(0));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::operator-() const {
  std::vector<Int> r(c_);
  for (auto& x : r) x = -x;
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::scaled(const Int& a) const {
  std::vector<Int> r(c_);
  for (auto& x : r) x *= a;
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::derivative() const {
  if (c_.size() <= 1) return IntPolynomial();
  std::vector<Int> r(c_.size() - 1);
  for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * Int(static_cast<long>(i));
  return IntPolynomial(std::move(r));
}

Int IntPolynomial::content() const {
  Int g(0);
  for (const auto& x : c_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    if (g == 1) break;
  }
  return g;
}

IntPolynomial IntPolynomial::primitive_part() const {
  if (is_zero()) return *this;
  Int g = content();
  if (leading() < 0) g = -g;
  std::vector<Int> r(c_);
  for (auto& x : r) x /= g;
  return IntPolynomial(std::move(r));
}

bool IntPolynomial::divides(const IntPolynomial& d, IntPolynomial* quotient) const {
  // Does d divide *this exactly over Z?
  if (d.is_zero()) return false;
  std::vector<Int> rem(c_);
  int dn = d.degree();
  std::vector<Int> q(std::max<int>(0, degree() - dn + 1), Int(0));
  for (int k = static_cast<int>(rem.size()) - 1; k >= dn; --k) {
    if (rem[k] == 0) continue;
    Int qq, rr;
    mpz_tdiv_qr(qq.get_mpz_t(), rr.get_mpz_t(), rem[k].get_mpz_t(), d.leading().get_mpz_t());
    if (rr != 0) return false;
    q[k - dn] = qq;
    for (int i = 0; i <= dn; ++i) rem[k - dn + i] -= qq * d.c_[i];
  }
  for (const auto& x : rem)
    if (x != 0) return false;
  if (quotient) *quotient = IntPolynomial(std::move(q));
  return true;
}

IntPolynomial IntPolynomial::divide_exact(const IntPolynomial& d) const {
  IntPolynomial q;
  if (!divides(d, &q)) throw std::logic_error("divide_exact: not divisible");
  return q;
}

Int IntPolynomial::eval_int(const Int& x) const {
  Int v(0);
  for (int i = degree(); i >= 0; --i) v = v * x + c_[i];
  return v;
}

Rat IntPolynomial::eval(const Rat& x) const {
  // den^n p(num/den) then divide back.
  if (is_zero()) return Rat(0);
  const Int& num = x.get_num();
  const Int& den = x.get_den();
  Int v(0), dp(1);
  for (int i = degree(); i >= 0; --i) {
    v = v * num + c_[i] * dp;
    if (i > 0) dp *= den;
  }
  return make_rat(v, dp);  // dp = den^deg
}

int IntPolynomial::sign_at(const Rat& x) const {
  if (is_zero()) return 0;
  const Int& num = x.get_num();
  const Int& den = x.get_den();
  Int v(0), dp(1);
  for (int i = degree(); i >= 0; --i) {
    v = v * num + c_[i] * dp;
    if (i > 0) dp *= den;
  }
  return sgn(v);
}

IntPolynomial IntPolynomial::taylor_shift(const Int& a) const {
  // p(x + a) by repeated synthetic division
  if (is_zero()) return *this;
  std::vector<Int> b(c_);
  int n = degree();
  for (int i = 0; i <= n; ++i)
    for (int j = n - 1; j >= i; --j) b[j] += a * b[j + 1];
  return IntPolynomial(std::move(b));
}

IntPolynomial IntPolynomial::scale_arg(const Int& a) const {
  std::vector<Int> r(c_);
  Int p(1);
  for (size_t i = 0; i < r.size(); ++i) {
    r[i] *= p;
    p *= a;
  }
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::reverse() const {
  std::vector<Int> r(c_.rbegin(), c_.rend());
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::negate_arg() const {
  std::vector<Int> r(c_);
  for (size_t i = 1; i < r.size(); i += 2) r[i] = -r[i];
  return IntPolynomial(std::move(r));
}

IntPolynomial IntPolynomial::compose_linear_cleared(const Int& num, const Int& den) const {
  // den^n p((x + num)/den) = sum c_i (x+num)^i den^(n-i)
  if (is_zero()) return *this;
  int n = degree();
  IntPolynomial acc;
  IntPolynomial shifted({num, Int(1)});  // x + num
  std::vector<IntPolynomial> pows;
  pows.push_back(IntPolynomial::constant(Int(1)));
  for (int i = 1; i <= n; ++i) pows.push_back(pows.back() * shifted);
  for (int i = 0; i <= n; ++i) {
    Int dfac(1);
    mpz_pow_ui(dfac.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(n - i));
    acc = acc + pows[i].scaled(c_[i] * dfac);
  }
  return acc;
}

std::string IntPolynomial::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (c_[i] == 0) continue;
    Int a = c_[i];
    if (!first) os << (a > 0 ? " + " : " - ");
    else if (a < 0) os << "-";
    first = false;
    Int aa = abs(a);
    if (aa != 1 || i == 0) os << aa.get_str();
    if (i > 0) {
      if (aa != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

namespace {

// Pseudo-remainder: lc(d)^(deg a - deg d + 1) * a mod d, computed over Z.
IntPolynomial pseudo_rem(IntPolynomial a, const IntPolynomial& d) {
  int dn = d.degree();
  while (!a.is_zero() && a.degree() >= dn) {
    int k = a.degree();
    IntPolynomial t = IntPolynomial::monomial(k - dn, a.leading()) * d;
    a = a.scaled(d.leading()) - t;
  }
  return a;
}

}  // namespace

IntPolynomial gcd(const IntPolynomial& a, const IntPolynomial& b) {
  IntPolynomial f = a.primitive_part(), g = b.primitive_part();
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  if (f.degree() < g.degree()) std::swap(f, g);
  while (!g.is_zero()) {
    IntPolynomial r = pseudo_rem(f, g).primitive_part();
    f = g;
    g = r;
  }
  return f.primitive_part();
}

IntPolynomial squarefree_part(const IntPolynomial& p) {
  IntPolynomial pp = p.primitive_part();
  if (pp.degree() <= 1) return pp;
  IntPolynomial g = gcd(pp, pp.derivative());
  if (g.degree() == 0) return pp;
  return pp.divide_exact(g).primitive_part();
}

Int resultant(const IntPolynomial& a, const IntPolynomial& b) {
  // Subresultant-free definition via Euclidean recursion with rational bookkeeping
  // is avoided; use the Sylvester determinant with Bareiss elimination.
  int n = a.degree(), m = b.degree();
  if (n < 0 || m < 0) return Int(0);
  if (n == 0) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), a.leading().get_mpz_t(), static_cast<unsigned long>(m));
    return r;
  }
  if (m == 0) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.leading().get_mpz_t(), static_cast<unsigned long>(n));
    return r;
  }
  int N = n + m;
  std::vector<std::vector<Int>> s(N, std::vector<Int>(N, Int(0)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) s[i][i + j] = a.coeff(n - j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) s[m + i][i + j] = b.coeff(m - j);
  // Bareiss
  Int prev(1);
  int signflip = 1;
  for (int k = 0; k < N - 1; ++k) {
    if (s[k][k] == 0) {
      int piv = -1;
      for (int i = k + 1; i < N; ++i)
        if (s[i][k] != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return Int(0);
      std::swap(s[k], s[piv]);
      signflip = -signflip;
    }
    for (int i = k + 1; i < N; ++i) {
      for (int j = k + 1; j < N; ++j) {
        Int num = s[i][j] * s[k][k] - s[i][k] * s[k][j];
        mpz_divexact(s[i][j].get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
      }
      s[i][k] = 0;
    }
    prev = s[k][k];
  }
  return signflip > 0 ? s[N - 1][N - 1] : Int(-s[N - 1][N - 1]);
}

Int cauchy_bound_pow2(const IntPolynomial& p) {
  // B = 2^ceil(log2(1 + max |c_i| / |lc|))
  Int lead = abs(p.leading());
  Int mx(0);
  for (const auto& c : p.coeffs()) {
    Int a = abs(c);
    if (a > mx) mx = a;
  }
  Int bound = mx / lead + 2;
  Int b(1);
  while (b < bound) b <<= 1;
  return b;
}

namespace {

using RatPoly = std::vector<Rat>;  // lowest degree first

void rp_trim(RatPoly* p) {
  while (!p->empty() && p->back() == 0) p->pop_back();
}

RatPoly rp_rem(RatPoly a, const RatPoly& b) {
  int dn = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= dn) {
    Rat q = a.back() / b.back();
    int off = static_cast<int>(a.size()) - 1 - dn;
    for (int i = 0; i <= dn; ++i) a[off + i] -= q * b[i];
    rp_trim(&a);
    if (a.empty()) break;
  }
  return a;
}

IntPolynomial rp_to_int(const RatPoly& p) {
  // clear denominators with a positive multiplier (sign preserving)
  Int lcm(1);
  for (const auto& c : p) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
  std::vector<Int> v;
  v.reserve(p.size());
  for (const auto& c : p) v.push_back(Int(c.get_num() * (lcm / c.get_den())));
  IntPolynomial q(std::move(v));
  return q.is_zero() ? q : q.divide_exact(IntPolynomial::constant(q.content()));
}

std::vector<IntPolynomial> sturm_chain(const IntPolynomial& p) {
  auto to_rat = [](const IntPolynomial& q) {
    RatPoly v;
    for (const auto& c : q.coeffs()) v.emplace_back(c);
    return v;
  };
  std::vector<RatPoly> rc;
  rc.push_back(to_rat(p));
  rc.push_back(to_rat(p.derivative()));
  while (!rc.back().empty()) {
    RatPoly r = rp_rem(rc[rc.size() - 2], rc.back());
    for (auto& c : r) c = -c;
    rc.push_back(std::move(r));
  }
  rc.pop_back();
  std::vector<IntPolynomial> chain;
  for (const auto& q : rc) chain.push_back(rp_to_int(q));
  return chain;
}

int sign_variations_at(const std::vector<IntPolynomial>& chain, const Rat& x) {
  int var = 0, last = 0;
  for (const auto& q : chain) {
    int s = q.sign_at(x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

int sign_variations_at_inf(const std::vector<IntPolynomial>& chain, int dir) {
  int var = 0, last = 0;
  for (const auto& q : chain) {
    if (q.is_zero()) continue;
    int s = sgn(q.leading());
    if (dir < 0 && (q.degree() % 2) == 1) s = -s;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

}  // namespace

int sturm_count(const IntPolynomial& p, const Rat& a, const Rat& b) {
  auto chain = sturm_chain(squarefree_part(p));
  return sign_variations_at(chain, a) - sign_variations_at(chain, b);
}

int sturm_count_all(const IntPolynomial& p) {
  auto chain = sturm_chain(squarefree_part(p));
  return sign_variations_at_inf(chain, -1) - sign_variations_at_inf(chain, +1);
}

namespace {

int descartes_bound_01(const IntPolynomial& p) {
  // Sign variations of (x+1)^n p(1/(x+1)): bound on roots of p in (0,1).
  IntPolynomial q = p.reverse().taylor_shift(Int(1));
  int var = 0, last = 0;
  for (const auto& c : q.coeffs()) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

// Isolate roots of p in the open interval (lo, lo + width) where the current
// polynomial q represents p restricted to (0,1) via x -> lo + width * x.
void isolate01(const IntPolynomial& q, const Rat& lo, const Rat& width,
               std::vector<std::pair<Rat, Rat>>* out) {
  int v = descartes_bound_01(q);
  if (v == 0) return;
  if (v == 1) {
    out->emplace_back(lo, lo + width);
    return;
  }
  // Split at 1/2: left q(x/2)*2^n, right shifted by 1.
  IntPolynomial left = q.compose_linear_cleared(Int(0), Int(2));   // 2^n q(x/2)
  IntPolynomial right = q.compose_linear_cleared(Int(1), Int(2));  // 2^n q((x+1)/2)
  Rat half = width / 2;
  Rat mid = lo + half;
  isolate01(left, lo, half, out);
  if (q.sign_at(Rat(1, 2)) == 0) out->emplace_back(mid, mid);
  isolate01(right, mid, half, out);
}

}  // namespace

std::vector<std::pair<Rat, Rat>> isolate_roots_squarefree(const IntPolynomial& p) {
  std::vector<std::pair<Rat, Rat>> out;
  if (p.degree() <= 0) return out;
  IntPolynomial q = p;
  if (q.coeff(0) == 0) {
    // factor out x exactly once (squarefree input)
    std::vector<Int> c(q.coeffs().begin() + 1, q.coeffs().end());
    q = IntPolynomial(std::move(c));
    out.emplace_back(Rat(0), Rat(0));
  }
  Int B = cauchy_bound_pow2(q);
  // positive roots: roots of q(B x) in (0,1)
  IntPolynomial qp = q.scale_arg(B);
  std::vector<std::pair<Rat, Rat>> pos;
  isolate01(qp, Rat(0), Rat(1), &pos);
  for (auto& [a, b] : pos) out.emplace_back(a * Rat(B), b * Rat(B));
  // negative roots
  IntPolynomial qn = q.negate_arg().scale_arg(B);
  std::vector<std::pair<Rat, Rat>> neg;
  isolate01(qn, Rat(0), Rat(1), &neg);
  for (auto& [a, b] : neg) out.emplace_back(-b * Rat(B), -a * Rat(B));
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  return out;
}

}  // namespace fanstab
