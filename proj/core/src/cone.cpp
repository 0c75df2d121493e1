#include "fanstab/cone.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "fanstab/lp.hpp"

namespace fanstab {

namespace {

// append rows expressing sum_i lambda_i g_i = rhs (as two inequalities each)
void add_equality_rows(std::vector<QVec>& a, QVec& b, const std::vector<Vec>& gens,
                       const QVec& rhs, int rank, int nvars, int offset) {
  for (int coord = 0; coord < rank; ++coord) {
    QVec row(nvars, Rat(0));
    for (size_t j = 0; j < gens.size(); ++j) row[offset + j] = Rat(gens[j][coord]);
    QVec neg = row;
    for (auto& x : neg) x = -x;
    a.push_back(row);
    b.push_back(rhs[coord]);
    a.push_back(neg);
    b.push_back(-rhs[coord]);
  }
}

std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return out;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  if (k == 0) out.assign(1, {});
  return out;
}

}  // namespace

bool Cone::operator==(const Cone& o) const {
  if (rank != o.rank || gens.size() != o.gens.size()) return false;
  auto a = gens, b = o.gens;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

Cone make_cone(int rank, std::vector<Vec> gens) {
  Cone c;
  c.rank = rank;
  std::set<Vec> seen;
  for (auto& g : gens) {
    if (vec_is_zero(g)) continue;
    Vec p = primitive(g);
    if (seen.insert(p).second) c.gens.push_back(p);
  }
  return c;
}

bool cone_contains_q(const Cone& c, const QVec& v) {
  if (qvec_is_zero(v)) return true;
  if (c.gens.empty()) return false;
  if (c.rank == 2 && v.size() == 2) {
    // planar fast path: orientation tests instead of a feasibility LP
    auto cross_qi = [](const QVec& a, const Vec& b) -> Rat {
      return a[0] * Rat(b[1]) - a[1] * Rat(b[0]);
    };
    if (c.gens.size() == 1) {
      const Vec& g = c.gens[0];
      return cross_qi(v, g) == 0 && v[0] * Rat(g[0]) + v[1] * Rat(g[1]) > 0;
    }
    if (c.gens.size() == 2) {
      const Vec& g1 = c.gens[0];
      const Vec& g2 = c.gens[1];
      Int omega = g1[0] * g2[1] - g1[1] * g2[0];
      if (omega != 0) {
        int s = sgn(omega);
        Rat s1 = -cross_qi(v, g1);  // cross(g1, v)
        Rat s2 = cross_qi(v, g2);   // cross(v, g2)
        if (s > 0) return s1 >= 0 && s2 >= 0;
        return s1 <= 0 && s2 <= 0;
      }
    }
  }
  int n = static_cast<int>(c.gens.size());
  std::vector<QVec> a;
  QVec b;
  add_equality_rows(a, b, c.gens, v, c.rank, n, 0);
  for (int j = 0; j < n; ++j) {
    QVec row(n, Rat(0));
    row[j] = -1;
    a.push_back(row);
    b.push_back(Rat(0));
  }
  return lp_feasible(a, b);
}

bool cone_contains(const Cone& c, const Vec& v) { return cone_contains_q(c, to_qvec(v)); }

bool in_relative_interior(const Cone& c, const Vec& v) {
  if (c.gens.empty()) return vec_is_zero(v);
  if (vec_is_zero(v)) return false;
  // v must be in the linear span
  std::vector<Vec> all = c.gens;
  all.push_back(v);
  if (rank_of(all, c.rank) != rank_of(c.gens, c.rank)) return false;
  // maximize t with sum lambda_i g_i = v, lambda_i >= t, t <= 1
  int n = static_cast<int>(c.gens.size());
  int nvars = n + 1;  // lambdas, t
  std::vector<QVec> a;
  QVec b;
  add_equality_rows(a, b, c.gens, to_qvec(v), c.rank, nvars, 0);
  for (int j = 0; j < n; ++j) {
    QVec row(nvars, Rat(0));
    row[j] = -1;
    row[n] = 1;  // t - lambda_j <= 0
    a.push_back(row);
    b.push_back(Rat(0));
  }
  QVec tcap(nvars, Rat(0));
  tcap[n] = 1;
  a.push_back(tcap);
  b.push_back(Rat(1));
  QVec obj(nvars, Rat(0));
  obj[n] = 1;
  auto res = lp_solve(a, b, obj);
  return res.status == LPStatus::Optimal && res.value > 0;
}

bool is_strictly_convex(const std::vector<Vec>& gens, int rank) {
  if (gens.empty()) return true;
  // strictly convex iff no nontrivial nonnegative dependence sum lambda g = 0
  int n = static_cast<int>(gens.size());
  std::vector<QVec> a;
  QVec b;
  add_equality_rows(a, b, gens, QVec(rank, Rat(0)), rank, n, 0);
  for (int j = 0; j < n; ++j) {
    QVec row(n, Rat(0));
    row[j] = -1;
    a.push_back(row);
    b.push_back(Rat(0));
  }
  QVec sum(n, Rat(-1));  // -sum lambda <= -1
  a.push_back(sum);
  b.push_back(Rat(-1));
  return !lp_feasible(a, b);
}

bool relative_interiors_meet(const Cone& a, const Cone& b) {
  if (a.gens.empty() || b.gens.empty()) return a.gens.empty() && b.gens.empty();
  int n = static_cast<int>(a.gens.size());
  int k = static_cast<int>(b.gens.size());
  int nvars = n + k;
  std::vector<QVec> rows;
  QVec rhs;
  // sum lambda g - sum mu h = 0
  for (int coord = 0; coord < a.rank; ++coord) {
    QVec row(nvars, Rat(0));
    for (int j = 0; j < n; ++j) row[j] = Rat(a.gens[j][coord]);
    for (int j = 0; j < k; ++j) row[n + j] = Rat(-b.gens[j][coord]);
    QVec neg = row;
    for (auto& x : neg) x = -x;
    rows.push_back(row);
    rhs.push_back(Rat(0));
    rows.push_back(neg);
    rhs.push_back(Rat(0));
  }
  for (int j = 0; j < nvars; ++j) {
    QVec row(nvars, Rat(0));
    row[j] = -1;  // -lambda_j <= -1
    rows.push_back(row);
    rhs.push_back(Rat(-1));
  }
  return lp_feasible(rows, rhs);
}

std::vector<Vec> irredundant_generators(std::vector<Vec> gens, int rank) {
  for (size_t i = 0; i < gens.size();) {
    std::vector<Vec> others;
    for (size_t j = 0; j < gens.size(); ++j)
      if (j != i) others.push_back(gens[j]);
    Cone c{rank, others};
    if (cone_contains(c, gens[i]))
      gens.erase(gens.begin() + static_cast<long>(i));
    else
      ++i;
  }
  return gens;
}

FacetData facets_of(const Cone& c) {
  FacetData out;
  int d = c.dim();
  if (d == 0) return out;
  int n = static_cast<int>(c.gens.size());
  std::set<std::vector<int>> seen;
  for (const auto& subset : combinations(n, d - 1)) {
    std::vector<Vec> rows;
    for (int idx : subset) rows.push_back(c.gens[idx]);
    if (rank_of(rows, c.rank) != d - 1) continue;
    auto ker = integer_kernel(rows, c.rank);
    // pick a kernel covector not vanishing on the whole cone span
    Vec u;
    for (const auto& cand : ker) {
      bool nonzero = false;
      for (const auto& g : c.gens)
        if (vec_dot(cand, g) != 0) {
          nonzero = true;
          break;
        }
      if (nonzero) {
        u = cand;
        break;
      }
    }
    if (u.empty()) continue;
    int pos = 0, neg = 0;
    std::vector<int> face;
    for (int j = 0; j < n; ++j) {
      int s = sign(vec_dot(u, c.gens[j]));
      if (s > 0) ++pos;
      if (s < 0) ++neg;
      if (s == 0) face.push_back(j);
    }
    if (pos && neg) continue;
    if (neg) u = vec_neg(u);
    std::vector<Vec> frows;
    for (int idx : face) frows.push_back(c.gens[idx]);
    if (rank_of(frows, c.rank) != d - 1) continue;
    if (seen.insert(face).second) {
      out.facet_gens.push_back(face);
      out.normals.push_back(primitive(u));
    }
  }
  return out;
}

HForm to_halfspaces(const Cone& c) {
  HForm h;
  h.rank = c.rank;
  h.eqs = integer_kernel(c.gens, c.rank);
  h.ineqs = facets_of(c).normals;
  return h;
}

Cone from_halfspaces(const HForm& h) {
  int m = h.rank;
  int span_dim = m - rank_of(h.eqs, m);
  Cone c;
  c.rank = m;
  if (span_dim == 0) return c;
  int ni = static_cast<int>(h.ineqs.size());
  std::set<Vec> rays;
  for (const auto& subset : combinations(ni, span_dim - 1)) {
    std::vector<Vec> rows = h.eqs;
    for (int idx : subset) rows.push_back(h.ineqs[idx]);
    if (rank_of(rows, m) != m - 1) continue;
    auto ker = integer_kernel(rows, m);
    if (ker.size() != 1) continue;
    Vec v = ker[0];
    bool ok_pos = true, ok_neg = true;
    for (const auto& u : h.ineqs) {
      int s = sign(vec_dot(u, v));
      if (s < 0) ok_pos = false;
      if (s > 0) ok_neg = false;
    }
    if (ok_pos)
      rays.insert(primitive(v));
    else if (ok_neg)
      rays.insert(primitive(vec_neg(v)));
  }
  std::vector<Vec> gens(rays.begin(), rays.end());
  c.gens = irredundant_generators(std::move(gens), m);
  return c;
}

Cone cone_intersect(const Cone& a, const Cone& b) {
  HForm ha = to_halfspaces(a), hb = to_halfspaces(b);
  HForm h;
  h.rank = a.rank;
  h.ineqs = ha.ineqs;
  h.ineqs.insert(h.ineqs.end(), hb.ineqs.begin(), hb.ineqs.end());
  h.eqs = ha.eqs;
  h.eqs.insert(h.eqs.end(), hb.eqs.begin(), hb.eqs.end());
  return from_halfspaces(h);
}

Cone cone_sum(const Cone& a, const Cone& b) {
  std::vector<Vec> gens = a.gens;
  gens.insert(gens.end(), b.gens.begin(), b.gens.end());
  Cone c = make_cone(a.rank, std::move(gens));
  c.gens = irredundant_generators(std::move(c.gens), a.rank);
  return c;
}

std::vector<int> minimal_face(const Cone& c, const Vec& v) {
  if (vec_is_zero(v)) return {};
  auto fd = facets_of(c);
  std::vector<int> face;
  int n = static_cast<int>(c.gens.size());
  std::vector<bool> keep(n, true);
  for (size_t f = 0; f < fd.normals.size(); ++f) {
    if (vec_dot(fd.normals[f], v) != 0) continue;
    std::vector<bool> in_facet(n, false);
    for (int idx : fd.facet_gens[f]) in_facet[idx] = true;
    for (int j = 0; j < n; ++j)
      if (!in_facet[j]) keep[j] = false;
  }
  for (int j = 0; j < n; ++j)
    if (keep[j]) face.push_back(j);
  return face;
}

namespace {

void triangulate_rec(const Cone& whole, const std::vector<int>& sub,
                     std::vector<std::vector<int>>& out) {
  std::vector<Vec> gens;
  for (int i : sub) gens.push_back(whole.gens[i]);
  Cone c{whole.rank, gens};
  if (c.is_simplicial()) {
    out.push_back(sub);
    return;
  }
  // pull at the first generator: cone over the facets missing it
  int apex = sub[0];
  auto fd = facets_of(c);
  for (const auto& fg : fd.facet_gens) {
    bool has_apex = false;
    for (int local : fg)
      if (sub[local] == apex) has_apex = true;
    if (has_apex) continue;
    std::vector<std::vector<int>> pieces;
    std::vector<int> fsub;
    for (int local : fg) fsub.push_back(sub[local]);
    triangulate_rec(whole, fsub, pieces);
    for (auto& p : pieces) {
      p.push_back(apex);
      std::sort(p.begin(), p.end());
      out.push_back(p);
    }
  }
}

}  // namespace

std::vector<std::vector<int>> triangulate(const Cone& c) {
  std::vector<int> all(c.gens.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  std::vector<std::vector<int>> out;
  triangulate_rec(c, all, out);
  return out;
}

}  // namespace fanstab
