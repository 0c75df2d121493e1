#include "fanstab/refine.hpp"

#include <algorithm>

#include "fanstab/lp.hpp"
#include <functional>
#include <set>
#include <stdexcept>

namespace fanstab {

namespace {

struct LiftResult {
  std::vector<std::vector<int>> delta0;  // maximal cones of Delta_0, ray indices
                                         // into the extended ray table
  std::map<Vec, Rat> used_heights;       // accepted height per new ray
};

// regular subdivision of sigma0 induced by lifting the new rays of sigma1 to
// the given heights; returns the projected upper-hull cones, or nullopt when
// the configuration is degenerate (non-simplicial face or sigma1 absent)
std::optional<std::vector<std::vector<Vec>>> lifted_subdivision(
    const Cone& sigma0, const Cone& sigma1, const std::vector<Vec>& new_rays,
    const std::vector<Rat>& heights) {
  int m = sigma0.rank;
  Cone lifted;
  lifted.rank = m + 1;
  std::set<Vec> bottom_gens;
  for (const auto& g : sigma0.gens) {
    Vec w = g;
    w.push_back(Int(0));
    lifted.gens.push_back(w);
    bottom_gens.insert(w);
  }
  for (size_t i = 0; i < new_rays.size(); ++i) {
    Vec w = vec_scale(new_rays[i], heights[i].get_den());
    w.push_back(heights[i].get_num());
    lifted.gens.push_back(primitive(w));
  }
  int d = sigma0.dim();
  auto fd = facets_of(lifted);
  std::vector<std::vector<Vec>> delta0;
  for (const auto& fg : fd.facet_gens) {
    // skip the bottom facet (sigma0 itself at height zero)
    bool bottom = true;
    std::vector<Vec> proj;
    for (int idx : fg) {
      const Vec& w = lifted.gens[idx];
      if (!bottom_gens.count(w)) bottom = false;
      Vec p(w.begin(), w.end() - 1);
      proj.push_back(primitive(p));
    }
    if (bottom && static_cast<int>(fg.size()) == d) continue;
    if (rank_of(proj, m) != static_cast<int>(proj.size()))
      return std::nullopt;  // non-simplicial after projection
    delta0.push_back(std::move(proj));
  }
  // sigma1 must appear as a face of some upper-hull cone
  std::set<Vec> s1(sigma1.gens.begin(), sigma1.gens.end());
  bool found = false;
  for (const auto& cone_gens : delta0) {
    std::set<Vec> gs(cone_gens.begin(), cone_gens.end());
    if (std::includes(gs.begin(), gs.end(), s1.begin(), s1.end())) {
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;
  return delta0;
}

struct IncorporationCore {
  Fan fan;                                 // the refined fan
  std::vector<std::vector<int>> delta0;    // Delta_0 maximal cones (new indices)
  std::map<Vec, Rat> used_heights;         // accepted heights for new rays
  std::vector<int> survivors;              // indices of unchanged input cones in fan
  bool unchanged = false;
};

void check_plan(const Fan& f, const IncorporationPlan& plan) {
  const Cone& s0 = plan.sigma0;
  const Cone& s1 = plan.sigma1;
  if (!s1.is_simplicial()) throw std::invalid_argument("incorporate_cone: sigma1 not simplicial");
  if (!s0.is_simplicial()) throw std::invalid_argument("incorporate_cone: sigma0 not simplicial");
  // sigma0 must be a cone (face) of the fan
  std::vector<int> idx0;
  for (const auto& g : s0.gens) {
    int i = f.ray_index(g);
    if (i < 0) throw std::invalid_argument("incorporate_cone: sigma0 not in fan");
    idx0.push_back(i);
  }
  bool face = false;
  for (const auto& c : f.cones) {
    std::set<int> cs(c.begin(), c.end());
    bool sub = true;
    for (int i : idx0)
      if (!cs.count(i)) sub = false;
    if (sub) face = true;
  }
  if (!face) throw std::invalid_argument("incorporate_cone: sigma0 not in fan");
  std::set<Vec> old_rays(s0.gens.begin(), s0.gens.end());
  for (const auto& g : s1.gens) {
    if (old_rays.count(g)) continue;
    if (!in_relative_interior(s0, g))
      throw std::invalid_argument(
          "incorporate_cone: new ray of sigma1 lies on the boundary of sigma0");
  }
}

IncorporationCore incorporate_core(const Fan& f, const IncorporationPlan& plan) {
  check_plan(f, plan);
  IncorporationCore out;
  const Cone& s0 = plan.sigma0;
  const Cone& s1 = plan.sigma1;

  std::set<Vec> old_rays(s0.gens.begin(), s0.gens.end());
  std::vector<Vec> new_rays;
  for (const auto& g : s1.gens)
    if (!old_rays.count(g)) new_rays.push_back(g);
  if (new_rays.empty()) {
    // sigma1 is a face of sigma0, already present
    out.fan = f;
    out.unchanged = true;
    for (size_t i = 0; i < f.cones.size(); ++i) out.survivors.push_back(static_cast<int>(i));
    return out;
  }

  std::vector<Rat> base(new_rays.size(), Rat(1));
  for (size_t i = 0; i < new_rays.size(); ++i) {
    auto it = plan.heights.find(new_rays[i]);
    if (it != plan.heights.end()) {
      if (it->second <= 0) throw std::invalid_argument("incorporate_cone: nonpositive height");
      base[i] = it->second;
    }
  }

  // deterministic perturbation: smallest denominators first
  std::optional<std::vector<std::vector<Vec>>> delta0;
  std::vector<Rat> used;
  auto search = [&](const std::vector<Rat>& b) {
    for (int attempt = 0; attempt < 80 && !delta0; ++attempt) {
      std::vector<Rat> t = b;
      if (attempt > 0)
        for (size_t i = 0; i < t.size(); ++i)
          t[i] = b[i] * (Rat(1) + make_rat(Int(i + 1), Int(attempt + 1)));
      delta0 = lifted_subdivision(s0, s1, new_rays, t);
      if (delta0) used = t;
    }
  };
  search(base);
  if (!delta0) {
    // the requested heights never put sigma1 on the roof; retry with heights
    // sampled from a functional that is strictly positive on sigma0
    std::vector<QVec> A;
    QVec b_lp, c_lp(f.rank, Rat(0));
    for (const auto& e : s0.gens) {
      QVec row = to_qvec(e);
      for (auto& x : row) x = -x;
      A.push_back(row);
      b_lp.push_back(Rat(-1));
    }
    LPResult lr = lp_solve(A, b_lp, c_lp);
    if (lr.status != LPStatus::Infeasible) {
      std::vector<Rat> base2(new_rays.size());
      for (size_t i = 0; i < new_rays.size(); ++i)
        base2[i] = qvec_dot(lr.x, to_qvec(new_rays[i]));
      search(base2);
    }
  }
  if (!delta0)
    throw std::invalid_argument("incorporate_cone: no generic heights found (plan invariant failure)");

  Fan g = f;
  for (size_t i = 0; i < new_rays.size(); ++i) {
    g.add_ray(new_rays[i]);
    out.used_heights[new_rays[i]] = used[i];
  }
  std::vector<std::vector<int>> delta0_idx;
  for (const auto& gens : *delta0) {
    std::vector<int> idx;
    for (const auto& v : gens) idx.push_back(g.add_ray(v));
    std::sort(idx.begin(), idx.end());
    delta0_idx.push_back(idx);
  }

  std::set<int> idx0;
  for (const auto& v : s0.gens) idx0.insert(g.ray_index(v));
  Fan result;
  result.rank = f.rank;
  result.rays = g.rays;
  for (const auto& c : f.cones) {
    std::set<int> cs(c.begin(), c.end());
    bool contains_s0 = true;
    for (int i : idx0)
      if (!cs.count(i)) contains_s0 = false;
    if (!contains_s0) {
      out.survivors.push_back(static_cast<int>(result.cones.size()));
      result.add_cone(c);
      continue;
    }
    std::vector<int> tau;
    for (int i : c)
      if (!idx0.count(i)) tau.push_back(i);
    for (const auto& delta : delta0_idx) {
      std::vector<int> merged = delta;
      merged.insert(merged.end(), tau.begin(), tau.end());
      result.add_cone(merged);
    }
  }
  out.delta0 = delta0_idx;
  out.fan = std::move(result);
  return out;
}

}  // namespace

Fan incorporate_cone(const Fan& f, const IncorporationPlan& plan) {
  return incorporate_core(f, plan).fan;
}

std::pair<Fan, SupportFunction> incorporate_cone_projective(
    const Fan& f, const SupportFunction& h, const IncorporationPlan& plan) {
  if (!is_strictly_convex_support(h))
    throw std::invalid_argument("incorporate_cone_projective: h not strictly convex");
  IncorporationCore core = incorporate_core(f, plan);
  if (core.unchanged) return {f, h};
  const Fan& g = core.fan;

  // h values on the old rays, and the strictness margin of h
  auto h_value = [&](const Vec& v) { return eval_support(h, v); };
  Rat margin;
  bool have_margin = false;
  for (size_t s = 0; s < f.cones.size(); ++s) {
    Cone cs = f.cone_at(static_cast<int>(s));
    for (size_t t = 0; t < f.cones.size(); ++t) {
      if (s == t) continue;
      for (int vi : f.cones[t]) {
        const Vec& v = f.rays[vi];
        if (cone_contains(cs, v)) continue;
        Rat gap = qvec_dot(h.xi[s], to_qvec(v)) - h_value(v);
        if (!have_margin || gap < margin) {
          margin = gap;
          have_margin = true;
        }
      }
    }
  }
  if (!have_margin) margin = 1;

  // h0 vanishes on the rays of sigma0 and equals -t_v on each new ray
  Rat max_h0 = 0;
  for (const auto& [v, t] : core.used_heights)
    if (t > max_h0) max_h0 = t;
  Rat eps = margin / (2 * max_h0);

  std::set<int> idx0;
  for (const auto& v : plan.sigma0.gens) idx0.insert(g.ray_index(v));

  for (int halvings = 0; halvings < 64; ++halvings) {
    SupportFunction hp;
    hp.fan = g;
    bool ok = true;
    for (const auto& c : g.cones) {
      // values of h + eps*h0_ext at the cone's generators determine xi
      std::vector<QVec> rows;
      QVec vals;
      for (int vi : c) {
        const Vec& v = g.rays[vi];
        Rat value = h_value(v);
        auto it = core.used_heights.find(v);
        if (it != core.used_heights.end()) value += eps * it->second;
        rows.push_back(to_qvec(v));
        vals.push_back(value);
      }
      QVec xi;
      if (!solve_rational(rows, vals, xi)) {
        ok = false;
        break;
      }
      hp.xi.push_back(xi);
    }
    if (ok && is_strictly_convex_support(hp)) return {g, hp};
    eps /= 2;
  }
  throw std::logic_error("incorporate_cone_projective: no valid epsilon found");
}

Fan triangulate_fan(const Fan& f) {
  Fan out;
  out.rank = f.rank;
  out.rays = f.rays;
  for (const auto& c : f.cones) {
    Cone cone = f.cone_of(c);
    if (cone.is_simplicial()) {
      out.add_cone(c);
      continue;
    }
    // pulling triangulation on globally ordered ray indices keeps shared
    // faces consistent across cones
    std::vector<int> sorted = c;
    std::sort(sorted.begin(), sorted.end());
    Cone ordered = f.cone_of(sorted);
    for (const auto& tri : triangulate(ordered)) {
      std::vector<int> idx;
      for (int local : tri) idx.push_back(sorted[local]);
      out.add_cone(idx);
    }
  }
  return out;
}

namespace {

// multiplicity (lattice index) of a simplicial cone
Int cone_multiplicity(const Cone& c) {
  int k = static_cast<int>(c.gens.size());
  if (k == 0) return Int(1);
  RationalSubspace lat = saturate(c.gens, c.rank);
  // express generators in the saturated basis; index = |det|
  std::vector<QVec> rows(c.rank, QVec(k, Rat(0)));
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < c.rank; ++i) rows[i][j] = Rat(lat.basis[j][i]);
  std::vector<Vec> coords;
  for (const auto& gvec : c.gens) {
    QVec x;
    if (!solve_rational(rows, to_qvec(gvec), x))
      throw std::logic_error("cone_multiplicity: generator outside saturation");
    Vec xi(k);
    for (int i = 0; i < k; ++i) {
      if (x[i].get_den() != 1) throw std::logic_error("cone_multiplicity: non-integral coords");
      xi[i] = x[i].get_num();
    }
    coords.push_back(xi);
  }
  Int d = IntMatrix(k, coords).det();
  return d < 0 ? -d : d;
}

// nonzero lattice point in the half-open fundamental parallelepiped of an
// irregular simplicial cone, minimizing the largest coordinate (then lex)
Vec parallelepiped_point(const Cone& c) {
  int k = static_cast<int>(c.gens.size());
  RationalSubspace lat = saturate(c.gens, c.rank);
  std::vector<QVec> rows(c.rank, QVec(k, Rat(0)));
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < c.rank; ++i) rows[i][j] = Rat(lat.basis[j][i]);
  // generator j in basis coords
  std::vector<Vec> gcoord;
  for (const auto& gvec : c.gens) {
    QVec x;
    solve_rational(rows, to_qvec(gvec), x);
    Vec xi(k);
    for (int i = 0; i < k; ++i) xi[i] = x[i].get_num();
    gcoord.push_back(xi);
  }
  // enumerate integer points x with t = A^{-1} x in [0,1)^k, where the
  // columns of A are the generator coordinates
  if (k == 2) {
    // walk the quotient group Z^2 / (Z g1 + Z g2) instead of scanning a box;
    // its order equals the multiplicity, so this stays linear even for very
    // skew cones
    const Int a = gcoord[0][0], b = gcoord[0][1];
    const Int p = gcoord[1][0], q = gcoord[1][1];
    const Int det0 = a * q - b * p;
    auto floor_rat = [](const Rat& r) {
      Int fl;
      mpz_fdiv_q(fl.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
      return fl;
    };
    auto coords_of = [&](const Int& x1, const Int& x2) {
      return std::pair<Rat, Rat>{Rat(q * x1 - p * x2) / Rat(det0),
                                 Rat(a * x2 - b * x1) / Rat(det0)};
    };
    auto normalize = [&](std::pair<Int, Int> x) {
      auto [t1, t2] = coords_of(x.first, x.second);
      Int f1 = floor_rat(t1), f2 = floor_rat(t2);
      x.first -= f1 * a + f2 * p;
      x.second -= f1 * b + f2 * q;
      return x;
    };
    Vec best2;
    Rat best_max;
    std::set<std::pair<Int, Int>> seen;
    std::vector<std::pair<Int, Int>> queue{normalize({Int(0), Int(0)})};
    seen.insert(queue[0]);
    while (!queue.empty()) {
      auto x = queue.back();
      queue.pop_back();
      if (x.first != 0 || x.second != 0) {
        auto [t1, t2] = coords_of(x.first, x.second);
        Rat maxt = t1 > t2 ? t1 : t2;
        Vec cand = vec_add(vec_scale(lat.basis[0], x.first),
                           vec_scale(lat.basis[1], x.second));
        if (best2.empty() || maxt < best_max ||
            (maxt == best_max && cand < best2)) {
          best2 = cand;
          best_max = maxt;
        }
      }
      const std::pair<Int, Int> steps[] = {{Int(1), Int(0)}, {Int(0), Int(1)}};
      for (const auto& s : steps) {
        auto nx = normalize({x.first + s.first, x.second + s.second});
        if (seen.insert(nx).second) queue.push_back(nx);
      }
    }
    if (best2.empty()) throw std::logic_error("parallelepiped_point: none found");
    return best2;
  }
  std::vector<QVec> arows(k, QVec(k, Rat(0)));
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < k; ++i) arows[i][j] = Rat(gcoord[j][i]);
  std::vector<long> lo(k, 0), hi(k, 0);
  for (int i = 0; i < k; ++i) {
    long span = 0;
    for (int j = 0; j < k; ++j) span += std::abs(gcoord[j][i].get_si());
    lo[i] = -span;
    hi[i] = span;
  }
  Vec best;
  QVec best_t;
  std::vector<long> cur(k, 0);
  auto consider = [&]() {
    QVec x(k);
    for (int i = 0; i < k; ++i) x[i] = Rat(cur[i]);
    QVec t;
    if (!solve_rational(arows, x, t)) return;
    bool zero = true;
    for (int i = 0; i < k; ++i) {
      if (t[i] < 0 || t[i] >= 1) return;
      if (t[i] != 0) zero = false;
    }
    if (zero) return;
    Rat maxt = 0;
    for (const auto& ti : t)
      if (ti > maxt) maxt = ti;
    Vec cand(c.rank, Int(0));
    for (int j = 0; j < k; ++j) {
      Vec bj = lat.basis[j];
      cand = vec_add(cand, vec_scale(bj, Int(cur[j])));
    }
    if (best.empty()) {
      best = cand;
      best_t = t;
      return;
    }
    Rat best_max = 0;
    for (const auto& ti : best_t)
      if (ti > best_max) best_max = ti;
    if (maxt < best_max || (maxt == best_max && cand < best)) {
      best = cand;
      best_t = t;
    }
  };
  std::function<void(int)> rec = [&](int i) {
    if (i == k) {
      consider();
      return;
    }
    for (long v = lo[i]; v <= hi[i]; ++v) {
      cur[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  if (best.empty()) throw std::logic_error("parallelepiped_point: none found");
  return best;
}

// smallest irregular face (by dimension, then multiplicity, then gens) over
// all cones of the simplicial fan; empty optional when the fan is regular
std::optional<Cone> minimal_irregular_face(const Fan& f, const std::vector<Cone>& keep) {
  std::optional<Cone> best;
  Int best_mult;
  std::set<std::vector<Vec>> seen;
  for (const auto& c : f.cones) {
    int n = static_cast<int>(c.size());
    for (int mask = 1; mask < (1 << n); ++mask) {
      std::vector<int> idx;
      for (int b = 0; b < n; ++b)
        if (mask >> b & 1) idx.push_back(c[b]);
      Cone face = f.cone_of(idx);
      std::vector<Vec> key = face.gens;
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      if (cone_is_regular(face)) continue;
      bool kept = false;
      for (const auto& kc : keep)
        if (face == kc) {
          kept = true;
          break;
        }
      if (kept) continue;
      Int mult = cone_multiplicity(face);
      bool better = false;
      if (!best) {
        better = true;
      } else if (face.gens.size() != best->gens.size()) {
        better = face.gens.size() < best->gens.size();
      } else if (mult != best_mult) {
        better = mult < best_mult;
      } else {
        auto bk = best->gens;
        std::sort(bk.begin(), bk.end());
        better = key < bk;
      }
      if (better) {
        best = face;
        best_mult = mult;
      }
    }
  }
  return best;
}

}  // namespace

Fan regularize(const Fan& f, const RegularizeOpts& opts) {
  Fan cur = triangulate_fan(f);
  for (int round = 0; round < 4096; ++round) {
    auto face = minimal_irregular_face(cur, opts.keep);
    if (!face) return cur;
    Vec v = parallelepiped_point(*face);
    IncorporationPlan plan;
    plan.sigma0 = *face;
    plan.sigma1 = make_cone(cur.rank, {v});
    cur = incorporate_cone(cur, plan);
    if (opts.symmetric) {
      Cone neg{cur.rank, {}};
      for (const auto& gvec : face->gens) neg.gens.push_back(vec_neg(gvec));
      IncorporationPlan nplan;
      nplan.sigma0 = neg;
      nplan.sigma1 = make_cone(cur.rank, {vec_neg(v)});
      cur = incorporate_cone(cur, nplan);
    }
  }
  throw std::logic_error("regularize: did not terminate");
}

Fan barycentric_subdivide(const Fan& f, const Cone& tau) {
  if (f.rank != 2 || tau.gens.size() != 2)
    throw std::invalid_argument("barycentric_subdivide: need a 2-dimensional cone");
  if (!cone_is_regular(tau)) throw std::invalid_argument("barycentric_subdivide: cone not regular");
  int a = f.ray_index(tau.gens[0]);
  int b = f.ray_index(tau.gens[1]);
  if (a < 0 || b < 0) throw std::invalid_argument("barycentric_subdivide: cone not in fan");
  Fan out;
  out.rank = 2;
  out.rays = f.rays;
  int mid = out.add_ray(vec_add(tau.gens[0], tau.gens[1]));
  bool found = false;
  for (const auto& c : f.cones) {
    std::set<int> cs(c.begin(), c.end());
    if (cs.count(a) && cs.count(b) && c.size() == 2) {
      out.add_cone({a, mid});
      out.add_cone({mid, b});
      found = true;
    } else {
      out.add_cone(c);
    }
  }
  if (!found) throw std::invalid_argument("barycentric_subdivide: cone not in fan");
  return out;
}

std::optional<std::vector<SubdivisionStep>> subdivision_path(const Cone& tau,
                                                             const Cone& tau0) {
  if (tau.gens.size() != 2 || tau0.gens.size() != 2)
    throw std::invalid_argument("subdivision_path: need 2-dimensional cones");
  if (!cone_is_regular(tau) || !cone_is_regular(tau0))
    throw std::invalid_argument("subdivision_path: cones must be regular");
  Cone cur = tau0;
  std::vector<SubdivisionStep> path;
  for (int step = 0; step < 4096; ++step) {
    if (cur == tau) return path;
    Vec mid = vec_add(cur.gens[0], cur.gens[1]);
    Cone left{cur.rank, {cur.gens[0], mid}};
    Cone right{cur.rank, {mid, cur.gens[1]}};
    auto inside = [&](const Cone& child) {
      return cone_contains(child, tau.gens[0]) && cone_contains(child, tau.gens[1]);
    };
    if (inside(left)) {
      path.push_back(SubdivisionStep::Left);
      cur = left;
    } else if (inside(right)) {
      path.push_back(SubdivisionStep::Right);
      cur = right;
    } else {
      return std::nullopt;
    }
  }
  throw std::logic_error("subdivision_path: did not terminate");
}

Fan common_refinement(const Fan& f, const Fan& g) {
  if (f.rank != g.rank) throw std::invalid_argument("common_refinement: rank mismatch");
  Fan out;
  out.rank = f.rank;
  for (const auto& ci : f.cones) {
    Cone a = f.cone_of(ci);
    for (const auto& cj : g.cones) {
      Cone b = g.cone_of(cj);
      Cone x = cone_intersect(a, b);
      if (x.gens.empty()) continue;
      std::vector<int> idx;
      for (const auto& v : x.gens) idx.push_back(out.add_ray(v));
      out.add_cone(idx);
    }
  }
  out.prune();
  // light support check: rays of each input must lie in the other's support
  for (const auto& v : f.rays)
    if (locate_maximal(g, v) < 0) throw std::invalid_argument("common_refinement: support mismatch");
  for (const auto& v : g.rays)
    if (locate_maximal(f, v) < 0) throw std::invalid_argument("common_refinement: support mismatch");
  return out;
}

}  // namespace fanstab
