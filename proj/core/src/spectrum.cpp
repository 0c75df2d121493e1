#include "fanstab/spectrum.hpp"

#include <algorithm>
#include <stdexcept>

namespace fanstab {

namespace {

// arithmetic in Q[x]/(g) with g irreducible, monic up to a rational scalar
struct FieldCtx {
  std::vector<Rat> g;  // monic modulus, lowest first, size d+1

  int deg() const { return static_cast<int>(g.size()) - 1; }

  using El = std::vector<Rat>;  // size deg()

  El zero() const { return El(deg(), Rat(0)); }
  El from_rat(const Rat& r) const {
    El e = zero();
    e[0] = r;
    return e;
  }
  El gen() const {
    El e = zero();
    if (deg() >= 2)
      e[1] = 1;
    else
      e[0] = -g[0];  // x = root itself when modulus is linear
    return e;
  }

  static bool is_zero(const El& e) {
    for (const auto& c : e)
      if (c != 0) return false;
    return true;
  }

  El add(const El& a, const El& b) const {
    El r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
  }
  El sub(const El& a, const El& b) const {
    El r = a;
    for (size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
  }
  El neg(const El& a) const {
    El r = a;
    for (auto& c : r) c = -c;
    return r;
  }

  std::vector<Rat> reduce(std::vector<Rat> p) const {
    int d = deg();
    for (int i = static_cast<int>(p.size()) - 1; i >= d; --i) {
      Rat c = p[i];
      if (c == 0) continue;
      for (int j = 0; j <= d; ++j) p[i - d + j] -= c * g[j];
    }
    p.resize(d);
    return p;
  }

  El mul(const El& a, const El& b) const {
    std::vector<Rat> p(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (size_t j = 0; j < b.size(); ++j) p[i + j] += a[i] * b[j];
    }
    return reduce(std::move(p));
  }

  El inv(const El& a) const {
    // extended Euclid on (g, a) over Q[x]
    auto trim = [](std::vector<Rat> p) {
      while (!p.empty() && p.back() == 0) p.pop_back();
      return p;
    };
    std::vector<Rat> r0 = g, r1 = trim(a);
    std::vector<Rat> s0 = {Rat(0)}, s1 = {Rat(1)};
    if (r1.empty()) throw std::domain_error("field inverse of zero");
    while (static_cast<int>(r1.size()) - 1 > 0) {
      // divide r0 by r1
      std::vector<Rat> q(r0.size() > r1.size() ? r0.size() - r1.size() + 1 : 1, Rat(0));
      std::vector<Rat> rem = r0;
      while (rem.size() >= r1.size() && !trim(rem).empty() &&
             trim(rem).size() >= r1.size()) {
        rem = trim(rem);
        size_t k = rem.size() - r1.size();
        Rat c = rem.back() / r1.back();
        q[k] += c;
        for (size_t i = 0; i < r1.size(); ++i) rem[k + i] -= c * r1[i];
        rem = trim(rem);
        if (rem.empty()) break;
      }
      // s2 = s0 - q*s1
      std::vector<Rat> qs(q.size() + s1.size() - 1, Rat(0));
      for (size_t i = 0; i < q.size(); ++i)
        for (size_t j = 0; j < s1.size(); ++j) qs[i + j] += q[i] * s1[j];
      std::vector<Rat> s2(std::max(s0.size(), qs.size()), Rat(0));
      for (size_t i = 0; i < s0.size(); ++i) s2[i] += s0[i];
      for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
      r0 = r1;
      r1 = trim(rem);
      s0 = s1;
      s1 = trim(s2);
      if (r1.empty()) throw std::domain_error("field inverse: not coprime");
    }
    // r1 is a nonzero constant; inverse = s1 / r1[0]
    El out = zero();
    for (size_t i = 0; i < s1.size() && i < out.size(); ++i) out[i] = s1[i] / r1[0];
    return out;
  }
};

std::vector<Rat> monic_of(const IntPolynomial& g) {
  std::vector<Rat> m(g.degree() + 1);
  Rat lc(g.leading());
  for (int i = 0; i <= g.degree(); ++i) m[i] = Rat(g.coeff(i)) / lc;
  return m;
}

// kernel vector of (M - mu I) over Q(mu) = Q[x]/(g); kernel is 1-dimensional
// for a simple eigenvalue
std::vector<FieldCtx::El> eigenvector_symbolic(const IntMatrix& m, const FieldCtx& F) {
  int n = m.rank;
  std::vector<std::vector<FieldCtx::El>> a(n, std::vector<FieldCtx::El>(n));
  FieldCtx::El mu = F.gen();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a[i][j] = F.from_rat(Rat(m.entries[i][j]));
      if (i == j) a[i][j] = F.sub(a[i][j], mu);
    }
  // Gauss-Jordan
  std::vector<int> pivcol;
  int r = 0;
  for (int c = 0; c < n && r < n; ++c) {
    int p = -1;
    for (int i = r; i < n; ++i)
      if (!FieldCtx::is_zero(a[i][c])) {
        p = i;
        break;
      }
    if (p < 0) continue;
    std::swap(a[r], a[p]);
    FieldCtx::El inv = F.inv(a[r][c]);
    for (int j = 0; j < n; ++j) a[r][j] = F.mul(a[r][j], inv);
    for (int i = 0; i < n; ++i) {
      if (i == r || FieldCtx::is_zero(a[i][c])) continue;
      FieldCtx::El f = a[i][c];
      for (int j = 0; j < n; ++j) a[i][j] = F.sub(a[i][j], F.mul(f, a[r][j]));
    }
    pivcol.push_back(c);
    ++r;
  }
  if (r != n - 1) throw std::logic_error("eigenvector_symbolic: kernel not 1-dimensional");
  // free column = the one not in pivcol
  std::vector<bool> is_piv(n, false);
  for (int c : pivcol) is_piv[c] = true;
  int fc = -1;
  for (int c = 0; c < n; ++c)
    if (!is_piv[c]) fc = c;
  std::vector<FieldCtx::El> x(n, F.zero());
  x[fc] = F.from_rat(Rat(1));
  for (int i = 0; i < r; ++i) x[pivcol[i]] = F.neg(a[i][fc]);
  return x;
}

}  // namespace

Spectrum eigen_structure(const IntMatrix& m) {
  Spectrum s;
  IntPolynomial cp = char_poly(m);
  auto factors = factor(cp);
  for (auto& [g, mult] : factors) {
    auto roots = isolate_real_roots(g);
    int pairs = (g.degree() - static_cast<int>(roots.size())) / 2;
    if (pairs > 0) {
      ComplexPair cx;
      cx.min_poly = g;
      cx.multiplicity = mult;
      if (g.degree() == 2) {
        Rat lc(g.leading());
        cx.pair_trace = Rat(-g.coeff(1)) / lc;
        cx.pair_det = Rat(g.coeff(0)) / lc;
        if (cx.pair_det != 0) {
          Rat ratio = cx.pair_trace * cx.pair_trace / cx.pair_det;
          cx.ratio_root_of_unity =
              (ratio == 0 || ratio == 1 || ratio == 2 || ratio == 3 || ratio == 4);
        }
      }
      s.complex_pairs.push_back(std::move(cx));
    }
    if (roots.empty()) continue;
    bool simple = (mult == 1);
    if (!simple) s.has_repeated_real = true;
    std::vector<QVec> coeffs;
    RationalSubspace span;
    span.rank = m.rank;
    if (simple) {
      FieldCtx F{monic_of(g)};
      auto x = eigenvector_symbolic(m, F);
      // verify (M - mu I) x = 0 symbolically
      FieldCtx::El mu = F.gen();
      for (int i = 0; i < m.rank; ++i) {
        FieldCtx::El acc = F.zero();
        for (int j = 0; j < m.rank; ++j)
          acc = F.add(acc, F.mul(F.from_rat(Rat(m.entries[i][j])), x[j]));
        acc = F.sub(acc, F.mul(mu, x[i]));
        if (!FieldCtx::is_zero(acc))
          throw std::logic_error("eigen_structure: symbolic verification failed");
      }
      int d = F.deg();
      coeffs.assign(d, QVec(m.rank, Rat(0)));
      for (int j = 0; j < m.rank; ++j)
        for (int i = 0; i < d; ++i) coeffs[i][j] = x[j][i];
      std::vector<Vec> ints;
      for (auto& e : coeffs) {
        Vec v = qvec_to_primitive(e);
        if (!vec_is_zero(v)) ints.push_back(v);
      }
      span = saturate(ints, m.rank);
    }
    for (auto& root : roots) {
      EigenPair ep;
      ep.value = root;
      ep.multiplicity = mult;
      ep.eigvec_coeffs = coeffs;
      ep.rational_span = span;
      s.real_eigen.push_back(std::move(ep));
    }
  }
  std::sort(s.real_eigen.begin(), s.real_eigen.end(),
            [](const EigenPair& a, const EigenPair& b) {
              return alg_compare(a.value, b.value) > 0;
            });
  return s;
}

std::vector<AlgebraicNumber> eigenvector_values(const EigenPair& ep) {
  const auto& cs = ep.eigvec_coeffs;
  int m = cs.empty() ? 0 : static_cast<int>(cs[0].size());
  std::vector<AlgebraicNumber> out;
  out.reserve(m);
  for (int j = 0; j < m; ++j) {
    // Horner in mu
    AlgebraicNumber acc = AlgebraicNumber::from_rational(cs.back()[j]);
    for (int i = static_cast<int>(cs.size()) - 2; i >= 0; --i)
      acc = acc * ep.value + AlgebraicNumber::from_rational(cs[i][j]);
    out.push_back(acc);
  }
  return out;
}

}  // namespace fanstab
