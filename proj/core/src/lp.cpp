#include "fanstab/lp.hpp"

#include <cassert>
#include <stdexcept>

namespace fanstab {

namespace {

// Tableau simplex over exact rationals.
//
// Standard form: minimize d.z subject to T z = rhs, z >= 0, with the
// variable split x = u - v and one slack per row applied by the caller
// (lp_solve). Bland's rule prevents cycling.
struct Tableau {
  // rows: m x (n+1), last column = rhs (kept >= 0 by pivoting invariant)
  std::vector<QVec> rows;
  QVec obj;        // reduced cost row, size n+1; obj[n] = -current value
  std::vector<int> basis;  // basic variable per row
  int n = 0;

  void price_out(const QVec& cost) {
    int m = static_cast<int>(rows.size());
    obj.assign(n + 1, Rat(0));
    for (int j = 0; j < n; ++j) obj[j] = j < static_cast<int>(cost.size()) ? cost[j] : Rat(0);
    obj[n] = 0;
    for (int i = 0; i < m; ++i) {
      Rat cb = basis[i] < static_cast<int>(cost.size()) ? cost[basis[i]] : Rat(0);
      if (cb == 0) continue;
      for (int j = 0; j <= n; ++j) obj[j] -= cb * rows[i][j];
    }
  }

  void pivot(int r, int c) {
    Rat p = rows[r][c];
    Rat inv = Rat(1) / p;
    for (int j = 0; j <= n; ++j) rows[r][j] *= inv;
    int m = static_cast<int>(rows.size());
    for (int i = 0; i < m; ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Rat f = rows[i][c];
      for (int j = 0; j <= n; ++j) rows[i][j] -= f * rows[r][j];
    }
    if (obj[c] != 0) {
      Rat f = obj[c];
      for (int j = 0; j <= n; ++j) obj[j] -= f * rows[r][j];
    }
    basis[r] = c;
  }

  // returns false if unbounded; `allowed(j)` limits entering columns
  template <class Pred>
  bool run(Pred allowed) {
    int m = static_cast<int>(rows.size());
    while (true) {
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (!allowed(j)) continue;
        if (obj[j] < 0) {
          enter = j;  // Bland: smallest index with negative reduced cost
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      Rat best;
      for (int i = 0; i < m; ++i) {
        if (rows[i][enter] <= 0) continue;
        Rat ratio = rows[i][n] / rows[i][enter];
        if (leave < 0 || ratio < best ||
            (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LPResult lp_solve(const std::vector<QVec>& a, const QVec& b, const QVec& c) {
  int m = static_cast<int>(a.size());
  int nvars = static_cast<int>(c.size());
  // columns: u(nvars) v(nvars) slack(m) artificial(m)
  int nu = nvars, nv = nvars, ns = m, na = m;
  int n = nu + nv + ns + na;
  Tableau t;
  t.n = n;
  t.rows.assign(m, QVec(n + 1, Rat(0)));
  t.basis.assign(m, 0);
  std::vector<int> flip(m, 1);
  for (int i = 0; i < m; ++i) {
    int s = (b[i] < 0) ? -1 : 1;
    flip[i] = s;
    for (int j = 0; j < nvars; ++j) {
      Rat aij = Rat(s) * a[i][j];
      t.rows[i][j] = aij;
      t.rows[i][nu + j] = -aij;
    }
    t.rows[i][nu + nv + i] = Rat(s);
    t.rows[i][nu + nv + ns + i] = 1;
    t.rows[i][n] = Rat(s) * b[i];
    t.basis[i] = nu + nv + ns + i;
  }

  // phase 1: minimize sum of artificials
  QVec cost1(n, Rat(0));
  for (int i = 0; i < na; ++i) cost1[nu + nv + ns + i] = 1;
  t.price_out(cost1);
  bool ok = t.run([](int) { return true; });
  assert(ok);
  (void)ok;
  if (t.obj[n] != 0) {
    // infeasible; simplex multipliers y'_i = 1 - objrow[artificial_i]
    LPResult res;
    res.status = LPStatus::Infeasible;
    res.farkas.assign(m, Rat(0));
    for (int i = 0; i < m; ++i) {
      Rat yp = Rat(1) - t.obj[nu + nv + ns + i];
      res.farkas[i] = Rat(-flip[i]) * yp;
    }
    return res;
  }

  // drive artificials out of the basis where possible
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < nu + nv + ns) continue;
    int col = -1;
    for (int j = 0; j < nu + nv + ns; ++j)
      if (t.rows[i][j] != 0) {
        col = j;
        break;
      }
    if (col >= 0) t.pivot(i, col);
    // else: redundant row; artificial stays basic at zero and is
    // blocked from entering in phase 2
  }

  // phase 2: minimize -c.x
  QVec cost2(n, Rat(0));
  for (int j = 0; j < nvars; ++j) {
    cost2[j] = -c[j];
    cost2[nu + j] = c[j];
  }
  t.price_out(cost2);
  bool bounded = t.run([&](int j) { return j < nu + nv + ns; });

  LPResult res;
  if (!bounded) {
    res.status = LPStatus::Unbounded;
    return res;
  }
  res.status = LPStatus::Optimal;
  res.x.assign(nvars, Rat(0));
  for (int i = 0; i < m; ++i) {
    int bj = t.basis[i];
    if (bj < nu)
      res.x[bj] += t.rows[i][n];
    else if (bj < nu + nv)
      res.x[bj - nu] -= t.rows[i][n];
  }
  res.value = 0;
  for (int j = 0; j < nvars; ++j) res.value += c[j] * res.x[j];
  return res;
}

bool lp_feasible(const std::vector<QVec>& a, const QVec& b) {
  int nvars = a.empty() ? 0 : static_cast<int>(a[0].size());
  QVec c(nvars, Rat(0));
  return lp_solve(a, b, c).status != LPStatus::Infeasible;
}

}  // namespace fanstab
