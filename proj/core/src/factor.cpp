#include <algorithm>
#include <stdexcept>
#include <vector>

#include "fanstab/polynomial.hpp"

// Factorization over Z: squarefree decomposition, then a Zassenhaus step
// (Berlekamp mod a small prime, linear Hensel lifting, subset recombination).
// The modular path also recovers linear factors, so no separate rational-root
// pass is needed.

namespace fanstab {
namespace {

// --- arithmetic in F_p[x], p a small prime, coefficients in [0, p) ---

using GFPoly = std::vector<long>;  // lowest degree first

void gf_trim(GFPoly* a) {
  while (!a->empty() && a->back() == 0) a->pop_back();
}

long gf_inv(long a, long p) {
  long t = 0, nt = 1, r = p, nr = a % p;
  while (nr != 0) {
    long q = r / nr;
    std::swap(t -= q * nt, nt);
    std::swap(r -= q * nr, nr);
  }
  return ((t % p) + p) % p;
}

GFPoly gf_mul(const GFPoly& a, const GFPoly& b, long p) {
  if (a.empty() || b.empty()) return {};
  GFPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  gf_trim(&r);
  return r;
}

GFPoly gf_rem(GFPoly a, const GFPoly& b, long p) {
  long inv = gf_inv(b.back(), p);
  int dn = static_cast<int>(b.size()) - 1;
  while (static_cast<int>(a.size()) - 1 >= dn) {
    long q = (a.back() * inv) % p;
    int off = static_cast<int>(a.size()) - 1 - dn;
    for (int i = 0; i <= dn; ++i) a[off + i] = ((a[off + i] - q * b[i]) % p + p) % p;
    gf_trim(&a);
    if (a.empty()) break;
  }
  return a;
}

GFPoly gf_monic(GFPoly a, long p) {
  if (a.empty()) return a;
  long inv = gf_inv(a.back(), p);
  for (auto& c : a) c = (c * inv) % p;
  return a;
}

GFPoly gf_gcd(GFPoly a, GFPoly b, long p) {
  while (!b.empty()) {
    GFPoly r = gf_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return gf_monic(std::move(a), p);
}

GFPoly gf_sub(GFPoly a, const GFPoly& b, long p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = ((a[i] - b[i]) % p + p) % p;
  gf_trim(&a);
  return a;
}

GFPoly gf_deriv(const GFPoly& a, long p) {
  GFPoly r;
  for (size_t i = 1; i < a.size(); ++i) r.push_back((a[i] * static_cast<long>(i % p)) % p);
  gf_trim(&r);
  return r;
}

GFPoly gf_powmod_x(long e, const GFPoly& f, long p) {
  // x^e mod f
  GFPoly base = gf_rem({0, 1}, f, p);
  GFPoly acc = {1};
  while (e > 0) {
    if (e & 1) acc = gf_rem(gf_mul(acc, base, p), f, p);
    base = gf_rem(gf_mul(base, base, p), f, p);
    e >>= 1;
  }
  return acc;
}

// Euclid: returns (g, s, t) with s*a + t*b = g (g monic).
void gf_extgcd(GFPoly a, GFPoly b, long p, GFPoly* g, GFPoly* s, GFPoly* t) {
  GFPoly s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  while (!b.empty()) {
    // division with quotient
    GFPoly q;
    GFPoly r = a;
    long inv = gf_inv(b.back(), p);
    int dn = static_cast<int>(b.size()) - 1;
    while (static_cast<int>(r.size()) - 1 >= dn) {
      long qc = (r.back() * inv) % p;
      int off = static_cast<int>(r.size()) - 1 - dn;
      if (static_cast<int>(q.size()) <= off) q.resize(off + 1, 0);
      q[off] = qc;
      for (int i = 0; i <= dn; ++i) r[off + i] = ((r[off + i] - qc * b[i]) % p + p) % p;
      gf_trim(&r);
      if (r.empty()) break;
    }
    GFPoly ns = gf_sub(s0, gf_mul(q, s1, p), p);
    GFPoly nt = gf_sub(t0, gf_mul(q, t1, p), p);
    a = std::move(b);
    b = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(ns);
    t0 = std::move(t1);
    t1 = std::move(nt);
  }
  long inv = gf_inv(a.back(), p);
  for (auto& c : a) c = (c * inv) % p;
  for (auto& c : s0) c = (c * inv) % p;
  for (auto& c : t0) c = (c * inv) % p;
  *g = std::move(a);
  *s = std::move(s0);
  *t = std::move(t0);
}

// Berlekamp factorization of a squarefree monic f over F_p.
std::vector<GFPoly> berlekamp(const GFPoly& f, long p) {
  int n = static_cast<int>(f.size()) - 1;
  if (n <= 1) return {f};
  // Q[i] = coeffs of x^{i p} mod f
  std::vector<GFPoly> Q(n);
  for (int i = 0; i < n; ++i) {
    Q[i] = gf_powmod_x(static_cast<long>(i) * p, f, p);
    Q[i].resize(n, 0);
  }
  // kernel of (Q - I) acting on row vectors c (c Q = c): transpose and eliminate.
  std::vector<std::vector<long>> M(n, std::vector<long>(n, 0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M[j][i] = ((Q[i][j] - (i == j ? 1 : 0)) % p + p) % p;
  // Gaussian elimination, find nullspace basis
  std::vector<int> pivot_col(n, -1);
  int rank = 0;
  for (int col = 0; col < n && rank < n; ++col) {
    int piv = -1;
    for (int r = rank; r < n; ++r)
      if (M[r][col] != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(M[rank], M[piv]);
    long inv = gf_inv(M[rank][col], p);
    for (int j = 0; j < n; ++j) M[rank][j] = (M[rank][j] * inv) % p;
    for (int r = 0; r < n; ++r) {
      if (r == rank || M[r][col] == 0) continue;
      long fac = M[r][col];
      for (int j = 0; j < n; ++j) M[r][j] = ((M[r][j] - fac * M[rank][j]) % p + p) % p;
    }
    pivot_col[rank] = col;
    ++rank;
  }
  std::vector<GFPoly> basis;
  std::vector<bool> is_pivot(n, false);
  for (int r = 0; r < rank; ++r) is_pivot[pivot_col[r]] = true;
  for (int col = 0; col < n; ++col) {
    if (is_pivot[col]) continue;
    GFPoly v(n, 0);
    v[col] = 1;
    for (int r = 0; r < rank; ++r) v[pivot_col[r]] = ((-M[r][col]) % p + p) % p;
    gf_trim(&v);
    basis.push_back(std::move(v));
  }
  size_t r_target = basis.size();
  std::vector<GFPoly> factors = {f};
  if (r_target <= 1) return factors;
  for (const auto& v : basis) {
    if (factors.size() >= r_target) break;
    std::vector<GFPoly> next;
    for (const auto& g : factors) {
      if (static_cast<int>(g.size()) - 1 <= 1) {
        next.push_back(g);
        continue;
      }
      GFPoly vg = gf_rem(v, g, p);
      std::vector<GFPoly> pieces;
      GFPoly rest = g;
      for (long c = 0; c < p && static_cast<int>(rest.size()) - 1 > 0; ++c) {
        GFPoly shifted = vg;
        if (shifted.empty()) shifted = {((p - c) % p)};
        else shifted[0] = ((shifted[0] - c) % p + p) % p;
        gf_trim(&shifted);
        if (shifted.empty()) continue;  // v == c identically on this branch
        GFPoly d = gf_gcd(rest, shifted, p);
        if (static_cast<int>(d.size()) - 1 >= 1 &&
            d.size() < rest.size()) {
          pieces.push_back(d);
          // rest /= d (exact division)
          GFPoly num = rest;
          GFPoly quot;
          long inv = gf_inv(d.back(), p);
          int dn = static_cast<int>(d.size()) - 1;
          while (static_cast<int>(num.size()) - 1 >= dn) {
            long qc = (num.back() * inv) % p;
            int off = static_cast<int>(num.size()) - 1 - dn;
            if (static_cast<int>(quot.size()) <= off) quot.resize(off + 1, 0);
            quot[off] = qc;
            for (int i = 0; i <= dn; ++i)
              num[off + i] = ((num[off + i] - qc * d[i]) % p + p) % p;
            gf_trim(&num);
            if (num.empty()) break;
          }
          rest = gf_monic(std::move(quot), p);
        }
      }
      if (static_cast<int>(rest.size()) - 1 >= 1) pieces.push_back(rest);
      for (auto& x : pieces) next.push_back(std::move(x));
    }
    factors = std::move(next);
  }
  return factors;
}

Int mod_pos(const Int& a, const Int& q) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), q.get_mpz_t());
  return r;
}

Int balance(const Int& a, const Int& q) {
  Int r = mod_pos(a, q);
  if (r * 2 > q) r -= q;
  return r;
}

// Factor a primitive squarefree polynomial of degree >= 1 (leading > 0).
std::vector<IntPolynomial> factor_squarefree(const IntPolynomial& f) {
  int n = f.degree();
  if (n <= 1) return {f};
  static const long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                                59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109};
  long p = 0;
  GFPoly fbar;
  for (long cand : primes) {
    if (mpz_fdiv_ui(f.leading().get_mpz_t(), cand) == 0) continue;
    GFPoly g;
    for (const auto& c : f.coeffs()) {
      long r = static_cast<long>(mpz_fdiv_ui(c.get_mpz_t(), cand));
      g.push_back(r);
    }
    gf_trim(&g);
    // squarefree mod p?
    GFPoly d = gf_deriv(g, cand);
    if (d.empty()) continue;
    GFPoly gg = gf_gcd(g, d, cand);
    if (static_cast<int>(gg.size()) - 1 == 0) {
      p = cand;
      fbar = gf_monic(std::move(g), cand);
      break;
    }
  }
  if (p == 0) throw std::runtime_error("factor: no usable prime found");

  std::vector<GFPoly> modular = berlekamp(fbar, p);
  if (modular.size() == 1) return {f};

  // coefficient bound for factors of lc * f: 2^n * ||f||_inf * |lc|
  Int bound = abs(f.leading());
  Int mx(0);
  for (const auto& c : f.coeffs()) {
    Int a = abs(c);
    if (a > mx) mx = a;
  }
  bound *= mx;
  bound <<= (n + 1);
  Int q(p);
  std::vector<IntPolynomial> lifted;
  for (const auto& g : modular) {
    std::vector<Int> c;
    for (long v : g) c.emplace_back(v);
    lifted.emplace_back(std::move(c));
  }
  // Bezout data in F_p[x]: b_i = (prod_{j != i} g_j)^{-1} mod g_i
  std::vector<GFPoly> bez(modular.size());
  for (size_t i = 0; i < modular.size(); ++i) {
    GFPoly prod = {1};
    for (size_t j = 0; j < modular.size(); ++j)
      if (j != i) prod = gf_rem(gf_mul(prod, modular[j], p), modular[i], p);
    GFPoly g, s, t;
    gf_extgcd(prod, modular[i], p, &g, &s, &t);
    bez[i] = gf_rem(s, modular[i], p);
  }
  const Int lc = f.leading();
  while (q <= bound * 2) {
    // error E = f - lc * prod(lifted)  (divisible by q)
    IntPolynomial prod = IntPolynomial::constant(lc);
    for (const auto& g : lifted) prod = prod * g;
    IntPolynomial e = f - prod;
    // u = (E/q) * lc^{-1} mod p
    GFPoly u;
    long lcp = static_cast<long>(mpz_fdiv_ui(lc.get_mpz_t(), p));
    long lcinv = gf_inv(lcp, p);
    for (const auto& c : e.coeffs()) {
      Int cq = c / q;
      long r = static_cast<long>(mpz_fdiv_ui(cq.get_mpz_t(), p));
      u.push_back((r * lcinv) % p);
    }
    gf_trim(&u);
    for (size_t i = 0; i < lifted.size(); ++i) {
      GFPoly di = gf_rem(gf_mul(u, bez[i], p), modular[i], p);
      // lifted[i] += q * di
      std::vector<Int> c = lifted[i].coeffs();
      for (size_t k = 0; k < di.size(); ++k) c[k] = mod_pos(c[k] + q * Int(di[k]), q * p);
      for (auto& x : c) x = mod_pos(x, q * p);
      lifted[i] = IntPolynomial(std::move(c));
    }
    q *= p;
  }

  // recombination
  std::vector<IntPolynomial> result;
  IntPolynomial fcur = f;
  std::vector<int> alive(lifted.size());
  for (size_t i = 0; i < lifted.size(); ++i) alive[i] = static_cast<int>(i);
  bool progressed = true;
  while (progressed && !alive.empty()) {
    progressed = false;
    size_t r = alive.size();
    for (size_t sz = 1; sz <= r && !progressed; ++sz) {
      // iterate subsets of size sz
      std::vector<size_t> idx(sz);
      for (size_t i = 0; i < sz; ++i) idx[i] = i;
      while (true) {
        IntPolynomial h = IntPolynomial::constant(fcur.leading());
        for (size_t i : idx) h = h * lifted[alive[i]];
        std::vector<Int> hc = h.coeffs();
        for (auto& c : hc) c = balance(c, q);
        IntPolynomial cand = IntPolynomial(std::move(hc)).primitive_part();
        IntPolynomial quo;
        if (cand.degree() >= 1 && fcur.divides(cand, &quo)) {
          result.push_back(cand);
          fcur = quo.primitive_part();
          std::vector<int> na;
          for (size_t i = 0, k = 0; i < alive.size(); ++i) {
            if (k < sz && idx[k] == i) {
              ++k;
              continue;
            }
            na.push_back(alive[i]);
          }
          alive = std::move(na);
          progressed = true;
          break;
        }
        // next subset
        int pos = static_cast<int>(sz) - 1;
        while (pos >= 0 && idx[pos] == r - sz + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (size_t i = pos + 1; i < sz; ++i) idx[i] = idx[i - 1] + 1;
      }
    }
  }
  if (fcur.degree() >= 1) result.push_back(fcur);
  return result;
}

}  // namespace

std::vector<std::pair<IntPolynomial, int>> factor(const IntPolynomial& p) {
  std::vector<std::pair<IntPolynomial, int>> out;
  if (p.is_zero() || p.degree() == 0) return out;
  IntPolynomial f = p.primitive_part();
  // strip powers of x
  int xmult = 0;
  while (f.coeff(0) == 0) {
    std::vector<Int> c(f.coeffs().begin() + 1, f.coeffs().end());
    f = IntPolynomial(std::move(c));
    ++xmult;
  }
  if (xmult > 0) out.emplace_back(IntPolynomial({Int(0), Int(1)}), xmult);
  if (f.degree() >= 1) {
    // squarefree decomposition
    IntPolynomial g = gcd(f, f.derivative());
    IntPolynomial w = f.divide_exact(g).primitive_part();
    int mult = 1;
    while (w.degree() >= 1) {
      IntPolynomial y = gcd(w, g);
      IntPolynomial z = w.divide_exact(y).primitive_part();
      if (z.degree() >= 1)
        for (auto& irr : factor_squarefree(z)) out.emplace_back(irr, mult);
      w = y;
      if (g.degree() >= 1 && !y.is_zero()) g = g.divide_exact(y).primitive_part();
      ++mult;
      if (mult > p.degree() + 1) break;
    }
  }
  return out;
}

}  // namespace fanstab
