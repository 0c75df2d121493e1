#include "fanstab/stab2d.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <utility>

namespace fanstab {

namespace {

Int cross_i(const Vec& a, const Vec& b) { return a[0] * b[1] - a[1] * b[0]; }

Vec perp(const Vec& v) { return Vec{-v[1], v[0]}; }

// direction with exact algebraic coordinates (eigenlines)
struct AlgDir {
  AlgebraicNumber x, y;
};

AlgDir neg_dir(const AlgDir& d) { return {-d.x, -d.y}; }

AlgebraicNumber alg_of(const Int& v) { return AlgebraicNumber::from_rational(Rat(v)); }

// sign of cross(g, d) = g.x d.y - g.y d.x
int cross_sign(const Vec& g, const AlgDir& d) {
  AlgebraicNumber val = alg_of(g[0]) * d.y - alg_of(g[1]) * d.x;
  return val.sign();
}

bool dir_in_cone(const Cone& c, const AlgDir& d, bool strict) {
  const Vec& g1 = c.gens[0];
  const Vec& g2 = c.gens[1];
  int omega = sign(cross_i(g1, g2));
  int s1 = omega * cross_sign(g1, d);
  int s2 = -omega * cross_sign(g2, d);
  if (strict) return s1 > 0 && s2 > 0;
  return s1 >= 0 && s2 >= 0;
}

AlgDir eig_dir(const EigenPair& ep) {
  std::vector<AlgebraicNumber> v = eigenvector_values(ep);
  return {v[0], v[1]};
}

// eigenpairs ordered by modulus: (dominant, subordinate)
std::pair<const EigenPair*, const EigenPair*> by_modulus(const Spectrum& sp) {
  if (sp.real_eigen.size() != 2)
    throw std::logic_error("by_modulus: expected two simple real eigenvalues");
  const EigenPair* a = &sp.real_eigen[0];
  const EigenPair* b = &sp.real_eigen[1];
  if (alg_compare(a->value.abs_value(), b->value.abs_value()) >= 0) return {a, b};
  return {b, a};
}

// complete fan on the given rays, cones between cyclically consecutive rays;
// requires the rays to positively span the plane (gaps < pi)
Fan cyclic_fan(std::vector<Vec> rays) {
  for (auto& r : rays) r = primitive(r);
  std::sort(rays.begin(), rays.end());
  rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
  auto half = [](const Vec& v) { return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1; };
  std::sort(rays.begin(), rays.end(), [&](const Vec& a, const Vec& b) {
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return cross_i(a, b) > 0;
  });
  Fan f;
  f.rank = 2;
  for (const auto& r : rays) f.add_ray(r);
  int n = static_cast<int>(rays.size());
  if (n < 3) throw std::invalid_argument("cyclic_fan: rays do not span the plane");
  for (int i = 0; i < n; ++i) {
    int j = (i + 1) % n;
    if (cross_i(rays[i], rays[j]) <= 0)
      throw std::invalid_argument("cyclic_fan: angular gap of at least pi");
    f.add_cone({i, j});
  }
  return f;
}

// symmetric complete fan refining every cone of f (adds the negated rays)
Fan symmetric_completion(const Fan& f) {
  std::vector<Vec> rays;
  for (const auto& r : f.rays) {
    rays.push_back(primitive(r));
    rays.push_back(primitive(vec_neg(r)));
  }
  if (rays.empty()) {
    rays = {Vec{Int(1), Int(0)}, Vec{Int(-1), Int(0)}};
  }
  bool one_line = true;
  for (const auto& r : rays)
    if (cross_i(rays[0], r) != 0) one_line = false;
  if (one_line) {
    rays.push_back(perp(rays[0]));
    rays.push_back(vec_neg(perp(rays[0])));
  }
  return cyclic_fan(rays);
}

// stellar insertion of a primitive ray (and, symmetrically, its negative)
void insert_ray(Fan& f, const Vec& v0, bool symmetric) {
  auto ins = [&](const Vec& w) {
    if (f.ray_index(w) >= 0) return;
    int ci = locate_maximal(f, w);
    if (ci < 0) throw std::logic_error("insert_ray: vector outside the fan support");
    IncorporationPlan plan;
    plan.sigma0 = f.cone_at(ci);
    plan.sigma1 = make_cone(2, {w});
    f = incorporate_cone(f, plan);
  };
  Vec v = primitive(v0);
  ins(v);
  if (symmetric) ins(vec_neg(v));
}

bool plantable(const Cone& s0, const Cone& tau) {
  for (const auto& g : tau.gens) {
    if (!cone_contains(s0, g)) return false;
    bool is_ray = false;
    for (const auto& r : s0.gens)
      if (r == g) is_ray = true;
    if (!is_ray && !in_relative_interior(s0, g)) return false;
  }
  return true;
}

// incorporate tau (nested in a single maximal cone) into f, plus its mirror
Fan plant(Fan f, const Cone& tau, bool symmetric) {
  for (size_t i = 0; i < f.cones.size(); ++i) {
    Cone s0 = f.cone_at(static_cast<int>(i));
    if (s0.gens.size() != 2 || !plantable(s0, tau)) continue;
    IncorporationPlan plan;
    plan.sigma0 = s0;
    plan.sigma1 = tau;
    f = incorporate_cone(f, plan);
    if (symmetric) {
      IncorporationPlan nplan;
      nplan.sigma0 = make_cone(2, {vec_neg(s0.gens[0]), vec_neg(s0.gens[1])});
      nplan.sigma1 = make_cone(2, {vec_neg(tau.gens[0]), vec_neg(tau.gens[1])});
      f = incorporate_cone(f, nplan);
    }
    return f;
  }
  throw std::logic_error("plant: cone is not nested in a single cone of the fan");
}

// maximal cone whose interior contains the (irrational) direction d
int cone_of_dir(const Fan& f, const AlgDir& d) {
  for (size_t i = 0; i < f.cones.size(); ++i) {
    Cone c = f.cone_at(static_cast<int>(i));
    if (c.gens.size() == 2 && dir_in_cone(c, d, false)) return static_cast<int>(i);
  }
  return -1;
}

// nested barycentric descent toward `keep` until the predicate holds
Cone descend(Cone c, const AlgDir& keep, const std::function<bool(const Cone&)>& done,
             int cap = 2048) {
  for (int it = 0; it < cap; ++it) {
    if (done(c)) return c;
    Vec mid = primitive(vec_add(c.gens[0], c.gens[1]));
    Cone left = make_cone(2, {c.gens[0], mid});
    if (dir_in_cone(left, keep, false)) {
      c = left;
    } else {
      c = make_cone(2, {mid, c.gens[1]});
    }
  }
  throw std::logic_error("stab2d: cone descent did not converge");
}

// widen an invariant cone toward the walls of its host cone: a fat absorber
// captures orbits in few steps, which keeps the insertion sweep small.  Each
// side walks mediants from the host wall inward and takes the first candidate
// that preserves invariance (images of both generators inside +-cone), keeps
// the dominant direction interior, and excludes the avoided eigenline.
Cone fatten_invariant(const IntMatrix& mat, Cone sigma, const AlgDir& keep,
                      const AlgDir& avoid, const Cone& host) {
  auto valid = [&](const Cone& c) {
    if (c.gens.size() != 2 || cross_i(c.gens[0], c.gens[1]) == 0) return false;
    if (!dir_in_cone(c, keep, true)) return false;
    if (dir_in_cone(c, avoid, false) || dir_in_cone(c, neg_dir(avoid), false)) return false;
    Vec w1 = mat.apply(c.gens[0]);
    Vec w2 = mat.apply(c.gens[1]);
    Cone nc = make_cone(2, {vec_neg(c.gens[0]), vec_neg(c.gens[1])});
    return (cone_contains(c, w1) && cone_contains(c, w2)) ||
           (cone_contains(nc, w1) && cone_contains(nc, w2));
  };
  // both walls may need to move at once, so try the whole host first
  if (valid(host)) return host;
  for (int pass = 0; pass < 3; ++pass) {
    bool widened = false;
    for (int side = 0; side < 2; ++side) {
      Vec g = sigma.gens[side];
      Vec other = sigma.gens[1 - side];
      // host wall on this side: the one spanning a cone with `other` that
      // still contains both the kept direction and the current generator
      if (host.gens[0] == g || host.gens[1] == g) continue;  // already at a wall
      Vec wall;
      bool have_wall = false;
      for (const auto& h : host.gens) {
        Cone span = make_cone(2, {h, other});
        if (span.gens.size() == 2 && dir_in_cone(span, keep, true) &&
            cone_contains(span, g)) {
          wall = h;
          have_wall = true;
        }
      }
      if (!have_wall) continue;
      Vec cand = wall;
      for (int it = 0; it < 64 && !(cand == g); ++it) {
        Cone trial = make_cone(2, {cand, other});
        if (valid(trial)) {
          sigma = trial;
          widened = true;
          break;
        }
        cand = primitive(vec_add(cand, g));
      }
    }
    if (!widened) break;
  }
  return sigma;
}

// matrix of m in the basis (v1, v2); requires det(v1 v2) = +-1
IntMatrix in_basis(const IntMatrix& m, const Vec& v1, const Vec& v2) {
  Int db = cross_i(v1, v2);
  if (db != 1 && db != -1) throw std::logic_error("in_basis: basis not unimodular");
  auto coords = [&](const Vec& w) {
    return std::pair<Int, Int>{cross_i(w, v2) / db, cross_i(v1, w) / db};
  };
  auto [a, c] = coords(m.apply(v1));
  auto [b, d] = coords(m.apply(v2));
  return IntMatrix(2, {{a, b}, {c, d}});
}

OrbitState2D state_from(const IntMatrix& m, const Vec& v1, const Vec& v2) {
  IntMatrix a = in_basis(m, v1, v2);
  OrbitState2D s;
  s.v1 = v1;
  s.v2 = v2;
  s.gamma = a.at(0, 0) + a.at(1, 1);
  s.delta = a.at(0, 0) - a.at(1, 1);
  s.b = a.at(0, 1);
  s.c = a.at(1, 0);
  if (s.b <= 0 || s.c <= 0)
    throw std::logic_error("state_from: cone does not straddle the dominant eigenline");
  return s;
}

IntMatrix negate(const IntMatrix& m) { return IntMatrix::zero(m.rank) - m; }

// verification-driven sweep: run the stability check, insert the exact
// direction where the first failing ray orbit leaves the ray set, resolve,
// and repeat; `keep` cones are never subdivided.  Only directions the
// certificate actually needs are inserted: a ray image interior to a cone
// whose forward chain closes up costs nothing.
bool absorb_orbits(Fan& f, const MonomialMap& m, const std::vector<Cone>& keep,
                   bool symmetric, int cap_rounds) {
  RegularizeOpts ropts;
  ropts.symmetric = symmetric;
  ropts.keep = keep;
  for (int round = 0; round < cap_rounds; ++round) {
    StabilityVerdict v = check_1stable(m, f, 256);
    if (v.tag == StabilityTag::Stable) return true;
    if (v.tag != StabilityTag::Unstable || v.witness_ray < 0) return false;
    Vec w = f.rays[v.witness_ray];
    for (int i = 0; i < v.witness_n; ++i) w = primitive(m.matrix.apply(w));
    if (f.ray_index(w) >= 0) return false;  // would not subdivide anything
    insert_ray(f, w, symmetric);
    f = regularize(f, ropts);
  }
  return false;
}

// Repair the stability check's failures by pulling walls backward.  A
// failed chain means the k-th image of an entered cone straddles some wall
// r of the fan; inserting the preimage of r (its image under the adjugate,
// the inverse as a map on directions) splits the offending cone so that no
// image crosses r there again.  Each repair wall maps onto an existing ray,
// so repairs never create new ray orbits to absorb, and repeated pulls of
// the same wall walk a simple backward path that ends inside the
// backward-invariant kept cone over the subdominant eigenline, where the
// check demands nothing.  Only straddles a chain actually hits are ever
// repaired, which keeps the refinement close to minimal.
bool markov_sweep(Fan& f, const MonomialMap& m, const std::vector<Cone>& keep,
                  bool symmetric, int cap_rounds) {
  IntMatrix psi = m.matrix.adjugate();
  RegularizeOpts ropts;
  ropts.symmetric = symmetric;
  ropts.keep = keep;
  auto kept = [&](const Vec& w) {
    for (const auto& c : keep)
      if (cone_contains(c, w)) return true;
    return false;
  };
  for (int round = 0; round < cap_rounds; ++round) {
    StabilityVerdict v = check_1stable(m, f, 256);
    if (v.tag == StabilityTag::Stable) return true;
    if (v.tag != StabilityTag::Unstable) return false;
    IntMatrix pw = m.matrix.pow(static_cast<unsigned>(v.witness_np));
    std::vector<Vec> dg = v.witness_cone.gens;
    for (auto& g : dg) g = primitive(pw.apply(g));
    Cone d = make_cone(2, dg);
    bool repaired = false;
    std::vector<Vec> walls = f.rays;
    for (const auto& r : walls) {
      if (!cone_contains(d, r)) continue;
      bool on_boundary = false;
      for (const auto& g : d.gens)
        if (g == r) on_boundary = true;
      if (on_boundary) continue;
      Vec u = primitive(psi.apply(r));
      if (f.ray_index(u) >= 0 || kept(u)) continue;
      insert_ray(f, u, symmetric);
      repaired = true;
      if (getenv("FANSTAB_TRACE"))
        fprintf(stderr, "  repair r=(%s,%s) -> (%s,%s)\n",
                r[0].get_str().c_str(), r[1].get_str().c_str(),
                u[0].get_str().c_str(), u[1].get_str().c_str());
    }
    if (!repaired) return false;
    f = regularize(f, ropts);
    if (getenv("FANSTAB_TRACE"))
      fprintf(stderr, "markov round=%d rays=%zu np=%d\n", round, f.rays.size(),
              v.witness_np);
  }
  return false;
}

// gens of the maximal cones of f adjacent to the ray v (and -v if symmetric)
std::vector<Cone> cones_at_ray(const Fan& f, const Vec& v, bool with_mirror) {
  std::vector<Cone> out;
  int i = f.ray_index(primitive(v));
  int j = with_mirror ? f.ray_index(primitive(vec_neg(v))) : -1;
  for (size_t k = 0; k < f.cones.size(); ++k) {
    const auto& idx = f.cones[k];
    if (idx.size() != 2) continue;
    bool hit = std::find(idx.begin(), idx.end(), i) != idx.end() ||
               (j >= 0 && std::find(idx.begin(), idx.end(), j) != idx.end());
    if (hit) out.push_back(f.cone_at(static_cast<int>(k)));
  }
  return out;
}

struct Gate {
  StabilityVerdict verdict;
  bool regular = false;
};

Gate gate_output(const MonomialMap& m, const Fan& f) {
  Gate g;
  g.verdict = check_1stable(m, f, 512);
  if (g.verdict.tag == StabilityTag::Stable &&
      !verify_certificate(m, f, *g.verdict.certificate))
    throw std::logic_error("stabilize_2d: produced certificate failed verification");
  g.regular = classify_fan(f).regular;
  return g;
}

Stab2DResult finish(const MonomialMap& m, Fan f, Stab2DResult r) {
  f.prune();
  Gate g = gate_output(m, f);
  if (g.verdict.tag != StabilityTag::Stable) {
    r.tag = Stab2DResult::Unknown;
    r.fan = f;
    if (r.reason.empty()) r.reason = "constructed fan did not certify as stable";
    return r;
  }
  r.fan = f;
  r.certificate = *g.verdict.certificate;
  r.tag = g.regular ? Stab2DResult::RegularStabilized : Stab2DResult::StabilizedIrregular;
  return r;
}

// ---- scalar ----

Stab2DResult handle_scalar(const MonomialMap& m, const Fan& f0) {
  Fan f = regularize(symmetric_completion(f0), {true, true, {}});
  return finish(m, f, {});
}

// ---- finite ray orbits (some power of phi is a scalar) ----

int scalar_power(const IntMatrix& m, int kmax) {
  IntMatrix p = IntMatrix::identity(2);
  for (int k = 1; k <= kmax; ++k) {
    p = p * m;
    if (p.is_scalar()) return k;
  }
  return -1;
}

// close the ray set under primitive forward images (orbits are finite here)
Stab2DResult handle_finite_orbits(const MonomialMap& m, const Fan& f0, int k,
                                  Stab2DResult r) {
  std::set<Vec> rays;
  Fan base = symmetric_completion(f0);
  auto close = [&](const Fan& f) {
    bool grew = false;
    for (const auto& ray : f.rays) {
      Vec w = primitive(ray);
      for (int i = 0; i <= k + 1; ++i) {
        if (rays.insert(w).second) grew = true;
        if (rays.insert(primitive(vec_neg(w))).second) grew = true;
        w = primitive(m.matrix.apply(w));
      }
    }
    return grew;
  };
  close(base);
  Fan f = cyclic_fan({rays.begin(), rays.end()});
  if (!r.impossible_regular) {
    // try for a regular invariant fan: alternate resolution and closure
    Fan g = f;
    for (int round = 0; round < 8; ++round) {
      g = regularize(g, {true, true, {}});
      if (!close(g)) break;
      g = cyclic_fan({rays.begin(), rays.end()});
    }
    if (classify_fan(g).regular && !close(g)) f = g;
  }
  return finish(m, f, std::move(r));
}

// ---- integer eigenvalues, |mu1| > |mu2| ----

Vec integer_eigenline(const IntMatrix& m, const Int& mu) {
  IntMatrix shifted = m - IntMatrix(2, {{mu, Int(0)}, {Int(0), mu}});
  std::vector<Vec> ker = integer_kernel(shifted.entries, 2);
  if (ker.size() != 1) throw std::logic_error("integer_eigenline: eigenspace not a line");
  return primitive(ker[0]);
}

// complete (p, q) to a basis: returns w with det(v w) = 1
Vec unimodular_complement(const Vec& v) {
  Int g, u, t;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), t.get_mpz_t(), v[0].get_mpz_t(),
             v[1].get_mpz_t());
  if (g != 1) throw std::logic_error("unimodular_complement: vector not primitive");
  return Vec{-t, u};
}

// barycentric pumping: raise both neighbors of the ray u1 to r*u1 +- v2,
// mirroring at -u1; returns the two pumped cones at u1
std::pair<Cone, Cone> pump_at(Fan& f, const Vec& u1, const Vec& v2, const Int& rmin) {
  auto neighbor_coeff = [&](const Vec& p) {
    // p = alpha u1 + beta v2 with beta = +-1
    Int beta = cross_i(u1, p) / cross_i(u1, v2);
    if (beta != 1 && beta != -1)
      throw std::logic_error("pump_at: fan not regular at the eigenray");
    Vec res = vec_sub(p, vec_scale(v2, beta));
    Int alpha = (u1[0] != 0) ? res[0] / u1[0] : res[1] / u1[1];
    return std::pair<Int, Int>{alpha, beta};
  };
  // both neighbors end at a common height r = max(rmin, current heights)
  Int target = rmin;
  {
    std::vector<Cone> adj = cones_at_ray(f, u1, false);
    if (adj.size() != 2) throw std::logic_error("pump_at: eigenray not on two cones");
    for (const auto& c : adj) {
      Vec p = (c.gens[0] == u1) ? c.gens[1] : c.gens[0];
      auto [alpha, beta] = neighbor_coeff(p);
      if (alpha > target) target = alpha;
    }
  }
  for (int guard = 0; guard < 4096; ++guard) {
    std::vector<Cone> adj = cones_at_ray(f, u1, false);
    bool pumped = false;
    for (const auto& c : adj) {
      Vec p = (c.gens[0] == u1) ? c.gens[1] : c.gens[0];
      auto [alpha, beta] = neighbor_coeff(p);
      if (alpha >= target) continue;
      f = barycentric_subdivide(f, c);
      Cone mirror = make_cone(2, {vec_neg(c.gens[0]), vec_neg(c.gens[1])});
      f = barycentric_subdivide(f, mirror);
      pumped = true;
      break;
    }
    if (!pumped) break;
  }
  std::vector<Cone> adj = cones_at_ray(f, u1, false);
  Cone plus, minus;
  for (const auto& c : adj) {
    Vec p = (c.gens[0] == u1) ? c.gens[1] : c.gens[0];
    auto [alpha, beta] = neighbor_coeff(p);
    if (alpha != target) throw std::logic_error("pump_at: pumping out of balance");
    if (beta == 1) {
      plus = c;
    } else {
      minus = c;
    }
  }
  return {plus, minus};
}

Stab2DResult handle_int_distinct(const MonomialMap& m, const Fan& f0) {
  IntMatrix mw = m.matrix;
  Int t = mw.trace();
  Int disc = t * t - 4 * mw.det();
  Int root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  Int mu1 = (t + root) / 2;
  Int mu2 = (t - root) / 2;
  if (abs(mu1) == abs(mu2)) {
    // mu2 = -mu1: phi^2 is scalar, ray orbits are finite
    Stab2DResult r;
    r.impossible_regular = divisor_obstruction(m);
    if (r.impossible_regular)
      r.reason = "no complete regular fan is invariant: the divisor-of-determinant "
                 "constraint on adjacent primitive images has no solution";
    return handle_finite_orbits(m, f0, 2, std::move(r));
  }
  if (abs(mu1) < abs(mu2)) std::swap(mu1, mu2);
  if (mu1 < 0) {
    // construct with -phi; the fan stays symmetric so stability transfers
    mw = negate(mw);
    mu1 = -mu1;
    mu2 = -mu2;
  }
  Vec u1 = integer_eigenline(mw, mu1);
  Vec u2 = integer_eigenline(mw, mu2);

  Fan f = regularize(symmetric_completion(f0), {true, true, {}});
  insert_ray(f, u1, true);
  insert_ray(f, u2, true);
  f = regularize(f, {true, true, {}});

  std::vector<Cone> absorbers;
  if (mu2 > 0) {
    // same sign: the cones adjacent to +-u1 contract onto the eigenline
    absorbers = cones_at_ray(f, u1, true);
  } else {
    // mixed sign: pump both neighbors of u1 to r u1 +- v2 so that phi swaps
    // the two cones, and likewise at u2 for the adjugate
    Vec v2 = unimodular_complement(u1);
    IntMatrix a = in_basis(mw, u1, v2);
    Int gamma = a.trace();
    Int rmin = floor_div(abs(a.at(0, 1)), gamma) + 1;
    IntMatrix psi = mw.adjugate();
    Vec w2 = unimodular_complement(u2);
    IntMatrix a2 = in_basis(psi, u2, w2);
    Int rmin2 = floor_div(abs(a2.at(0, 1)), a2.trace()) + 1;
    for (int attempt = 0; attempt < 64; ++attempt) {
      Fan g = f;
      auto [splus, sminus] = pump_at(g, u1, v2, rmin);
      pump_at(g, u2, w2, rmin2);
      Vec g1 = (splus.gens[0] == u1) ? splus.gens[1] : splus.gens[0];
      Vec g2 = (sminus.gens[0] == u1) ? sminus.gens[1] : sminus.gens[0];
      bool ok = cone_contains(sminus, mw.apply(g1)) && cone_contains(splus, mw.apply(g2)) &&
                cone_contains(sminus, mw.apply(u1)) && cone_contains(splus, mw.apply(u1));
      if (ok) {
        f = g;
        absorbers = {splus, sminus,
                     make_cone(2, {vec_neg(splus.gens[0]), vec_neg(splus.gens[1])}),
                     make_cone(2, {vec_neg(sminus.gens[0]), vec_neg(sminus.gens[1])})};
        break;
      }
      rmin += 1;
      rmin2 += 1;
    }
    if (absorbers.empty())
      throw std::logic_error("handle_int_distinct: pumping did not stabilize");
  }
  int cap = 10 * (static_cast<int>(f.rays.size()) + 16);
  Stab2DResult r;
  if (!absorb_orbits(f, m, {}, true, cap)) {
    r.tag = Stab2DResult::Unknown;
    r.fan = f;
    r.reason = "orbit sweep exceeded its wave budget";
    return r;
  }
  return finish(m, f, std::move(r));
}

// ---- irrational eigenvalues, same sign ----

Stab2DResult handle_irrational_same_sign(const MonomialMap& m, const Fan& f0) {
  IntMatrix mw = m.matrix;
  if (sign(mw.trace()) < 0) mw = negate(mw);
  MonomialMap work = make_map(mw);
  auto [dom, sub] = by_modulus(work.spectrum());
  AlgDir d1 = eig_dir(*dom);
  AlgDir d2 = eig_dir(*sub);

  Fan f = regularize(symmetric_completion(f0), {true, true, {}});
  int ci = cone_of_dir(f, d1);
  if (ci < 0) {
    d1 = neg_dir(d1);
    ci = cone_of_dir(f, d1);
  }
  Cone sf = f.cone_at(ci);
  auto done = [&](const Cone& c) {
    if (!dir_in_cone(c, d1, true)) return false;
    if (dir_in_cone(c, d2, false) || dir_in_cone(c, neg_dir(d2), false)) return false;
    Vec w1 = mw.apply(c.gens[0]);
    Vec w2 = mw.apply(c.gens[1]);
    Cone nc = make_cone(2, {vec_neg(c.gens[0]), vec_neg(c.gens[1])});
    return (cone_contains(c, w1) && cone_contains(c, w2)) ||
           (cone_contains(nc, w1) && cone_contains(nc, w2));
  };
  Cone sigma = descend(sf, d1, done);
  f = plant(std::move(f), sigma, true);
  int cap = 10 * (static_cast<int>(f.rays.size()) + 16);
  Stab2DResult r;
  if (!absorb_orbits(f, m, {}, true, cap)) {
    r.tag = Stab2DResult::Unknown;
    r.fan = f;
    r.reason = "orbit sweep exceeded its wave budget";
    return r;
  }
  return finish(m, f, std::move(r));
}

// ---- non-diagonalizable ----

Stab2DResult handle_non_diagonalizable(const MonomialMap& m, const Fan& f0) {
  // work with trace > 0 so the w-side cone absorbs forward orbits; the fan
  // stays symmetric, so stability transfers back to phi itself
  IntMatrix mw = sign(m.matrix.trace()) < 0 ? negate(m.matrix) : m.matrix;
  Int lam = mw.trace() / 2;
  Vec v = integer_eigenline(mw, lam);
  Vec w = unimodular_complement(v);
  // Mw w = b v + lam w; flip w so that b > 0
  Int b = cross_i(mw.apply(w), w) / cross_i(v, w);
  if (b == 0) throw std::logic_error("handle_non_diagonalizable: map is diagonalizable");
  if (b < 0) w = vec_neg(w);

  Fan f = regularize(symmetric_completion(f0), {true, true, {}});
  insert_ray(f, v, true);
  f = regularize(f, {true, true, {}});
  // the cone adjacent to the eigenray on the w side absorbs every orbit
  std::vector<Cone> adj = cones_at_ray(f, v, false);
  Cone tau;
  bool found = false;
  for (const auto& c : adj) {
    Vec p = (c.gens[0] == primitive(v)) ? c.gens[1] : c.gens[0];
    if (sign(cross_i(v, p)) == sign(cross_i(v, w))) {
      tau = c;
      found = true;
    }
  }
  if (!found) throw std::logic_error("handle_non_diagonalizable: no cone on the w side");
  int cap = 10 * (static_cast<int>(f.rays.size()) + 16);
  Stab2DResult r;
  if (!absorb_orbits(f, m, {}, true, cap)) {
    r.tag = Stab2DResult::Unknown;
    r.fan = f;
    r.reason = "orbit sweep exceeded its wave budget";
    return r;
  }
  return finish(m, f, std::move(r));
}

// ---- irrational eigenvalues, mixed sign ----

// walk the orbit one step at a time and take the first invariant state whose
// cone nests plantably in f; the shallowest choice is the fattest absorber,
// which keeps the insertion sweep short
Cone shrink_to_plantable(const Fan& f, OrbitState2D st, bool backward) {
  for (int k = 0; k < 4096; ++k) {
    if (st.nonnegative()) {
      Cone tau = backward ? make_cone(2, {st.v1, vec_neg(st.v2)})
                          : make_cone(2, {st.v1, st.v2});
      for (size_t i = 0; i < f.cones.size(); ++i) {
        Cone s0 = f.cone_at(static_cast<int>(i));
        if (s0.gens.size() == 2 && plantable(s0, tau)) return tau;
      }
    }
    st = backward ? orbit_backward(st) : orbit_forward(st);
  }
  throw std::logic_error("shrink_to_plantable: witness cone did not nest");
}

Stab2DResult handle_irrational_mixed(const MonomialMap& m, const Fan& f0) {
  Stab2DResult r;
  RegularDecision dec = decide_regular_stabilizable(m);
  IntMatrix mw = m.matrix;
  if (sign(mw.trace()) == 0) {
    // mu2 = -mu1: phi^2 is scalar, ray orbits are finite
    r.impossible_regular = divisor_obstruction(m);
    if (r.impossible_regular)
      r.reason = "no complete regular fan is invariant: the divisor-of-determinant "
                 "constraint on adjacent primitive images has no solution";
    return handle_finite_orbits(m, f0, 2, std::move(r));
  }
  if (sign(mw.trace()) < 0) mw = negate(mw);
  IntMatrix psi = mw.adjugate();
  MonomialMap work = make_map(mw);
  auto [dom, sub] = by_modulus(work.spectrum());
  AlgDir d1 = eig_dir(*dom);
  AlgDir d2 = eig_dir(*sub);

  Fan f = regularize(symmetric_completion(f0), {true, true, {}});

  if (dec.tag == RegularDecision::Yes) {
    int period = detect_period(orbit_seed(m)).period;
    Cone s1 = shrink_to_plantable(f, dec.witness, false);
    f = plant(std::move(f), s1, true);
    Cone s2 = shrink_to_plantable(f, dec.witness, true);
    f = plant(std::move(f), s2, true);
    Cone ns1y = make_cone(2, {vec_neg(s1.gens[0]), vec_neg(s1.gens[1])});
    Cone ns2y = make_cone(2, {vec_neg(s2.gens[0]), vec_neg(s2.gens[1])});
    int cap = 10 * (static_cast<int>(f.rays.size()) + period + 16);
    if (!markov_sweep(f, m, {s1, ns1y, s2, ns2y}, true, cap)) {
      r.tag = Stab2DResult::Unknown;
      r.fan = f;
      r.reason = "orbit sweep exceeded its wave budget";
      return r;
    }
    Stab2DResult out = finish(m, f, std::move(r));
    if (out.tag == Stab2DResult::StabilizedIrregular)
      throw std::logic_error("handle_irrational_mixed: YES case produced an irregular fan");
    return out;
  }

  // no regular stabilization: the full cycle is the proof; fall back to a
  // pair of irregular invariant cones straddling the eigenlines
  r.impossible_regular = true;
  for (const auto& st : dec.cycle) r.cycle_proof.push_back(st);
  r.reason = "every state in the orbit cycle has |delta| > gamma, so no complete "
             "regular fan is stable; falling back to irregular invariant cones";

  auto straddle_cone = [&](const IntMatrix& mat, const AlgDir& keep, const AlgDir& avoid,
                           const Cone& start) {
    auto done = [&](const Cone& c) {
      if (!dir_in_cone(c, keep, true)) return false;
      if (dir_in_cone(c, avoid, false) || dir_in_cone(c, neg_dir(avoid), false))
        return false;
      Vec p = c.gens[0];
      Vec q = primitive(mat.apply(p));
      if (!cone_contains(c, q)) return false;
      Cone tau = make_cone(2, {p, q});
      if (tau.gens.size() != 2) return false;
      if (!dir_in_cone(tau, keep, true)) return false;
      return cone_contains(tau, mat.apply(q));
    };
    Cone c = descend(start, keep, done);
    return make_cone(2, {c.gens[0], primitive(mat.apply(c.gens[0]))});
  };

  int c1 = cone_of_dir(f, d1);
  if (c1 < 0) {
    d1 = neg_dir(d1);
    c1 = cone_of_dir(f, d1);
  }
  Cone s1 = straddle_cone(mw, d1, d2, f.cone_at(c1));
  s1 = fatten_invariant(mw, s1, d1, d2, f.cone_at(c1));
  f = plant(std::move(f), s1, true);
  int c2 = cone_of_dir(f, d2);
  if (c2 < 0) {
    d2 = neg_dir(d2);
    c2 = cone_of_dir(f, d2);
  }
  Cone s2 = straddle_cone(psi, d2, d1, f.cone_at(c2));
  s2 = fatten_invariant(psi, s2, d2, d1, f.cone_at(c2));
  f = plant(std::move(f), s2, true);
  if (getenv("FANSTAB_TRACE"))
    fprintf(stderr, "s1=(%s,%s),(%s,%s) s2=(%s,%s),(%s,%s)\n",
            s1.gens[0][0].get_str().c_str(), s1.gens[0][1].get_str().c_str(),
            s1.gens[1][0].get_str().c_str(), s1.gens[1][1].get_str().c_str(),
            s2.gens[0][0].get_str().c_str(), s2.gens[0][1].get_str().c_str(),
            s2.gens[1][0].get_str().c_str(), s2.gens[1][1].get_str().c_str());

  Cone ns1 = make_cone(2, {vec_neg(s1.gens[0]), vec_neg(s1.gens[1])});
  Cone ns2 = make_cone(2, {vec_neg(s2.gens[0]), vec_neg(s2.gens[1])});
  std::vector<Cone> keep = {s1, ns1, s2, ns2};
  int cap = 10 * (static_cast<int>(f.rays.size()) + 16);
  if (!markov_sweep(f, m, keep, true, cap)) {
    r.tag = Stab2DResult::Unknown;
    r.fan = f;
    r.reason = "orbit sweep exceeded its wave budget";
    return r;
  }
  r.irregular_cones = keep;
  Stab2DResult out = finish(m, f, std::move(r));
  if (out.tag == Stab2DResult::RegularStabilized)
    throw std::logic_error("handle_irrational_mixed: NO case produced a regular stable fan");
  return out;
}

}  // namespace

Case2D classify2d(const MonomialMap& m) {
  if (m.matrix.rank != 2) throw std::invalid_argument("classify2d: rank must be 2");
  Int t = m.matrix.trace();
  Int dt = m.matrix.det();
  Int disc = t * t - 4 * dt;
  if (disc > 0) {
    Int root;
    mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
    if (root * root == disc) return Case2D::IntDistinct;
    return dt > 0 ? Case2D::IrrationalSameSign : Case2D::IrrationalMixedSign;
  }
  if (disc < 0) {
    for (int k = 0; k <= 4; ++k)
      if (t * t == k * dt) return Case2D::RootOfUnityRatio;
    return Case2D::ComplexNotRootOfUnity;
  }
  Int lam = t / 2;
  IntMatrix scalar(2, {{lam, Int(0)}, {Int(0), lam}});
  return m.matrix == scalar ? Case2D::Scalar : Case2D::NonDiagonalizable;
}

OrbitState2D orbit_seed(const MonomialMap& m) {
  if (classify2d(m) != Case2D::IrrationalMixedSign)
    throw std::invalid_argument("orbit_seed: needs irrational mixed-sign eigenvalues");
  IntMatrix mw = m.matrix;
  if (sign(mw.trace()) < 0) mw = negate(mw);
  if (sign(mw.trace()) == 0)
    throw std::invalid_argument("orbit_seed: |mu1| = |mu2| has no dominant eigenline");
  MonomialMap work = make_map(mw);
  auto [dom, sub] = by_modulus(work.spectrum());
  AlgDir d1 = eig_dir(*dom);
  AlgDir d2 = eig_dir(*sub);
  int sx = d1.x.sign();
  int sy = d1.y.sign();
  if (sx == 0 || sy == 0)
    throw std::logic_error("orbit_seed: irrational eigenline on a lattice axis");
  Cone c = make_cone(2, {Vec{Int(sx), Int(0)}, Vec{Int(0), Int(sy)}});
  auto done = [&](const Cone& cc) {
    return dir_in_cone(cc, d1, true) && !dir_in_cone(cc, d2, false) &&
           !dir_in_cone(cc, neg_dir(d2), false);
  };
  c = descend(c, d1, done);
  OrbitState2D s = state_from(mw, c.gens[0], c.gens[1]);
  if (s.c == s.b + s.delta || s.c == s.b - s.delta)
    throw std::logic_error("orbit_seed: rational eigenvalue slipped through");
  if (s.c < s.b - abs(s.delta)) {
    // normalize max{|z1|, |z2|} > 1 by exchanging the generators
    OrbitState2D t;
    t.v1 = s.v2;
    t.v2 = s.v1;
    t.b = s.c;
    t.delta = -s.delta;
    t.c = s.b;
    t.gamma = s.gamma;
    s = t;
  }
  return s;
}

OrbitState2D orbit_forward(const OrbitState2D& s, bool* shift_branch) {
  OrbitState2D t;
  t.gamma = s.gamma;
  if (s.c == s.b + s.delta)
    throw std::invalid_argument("orbit_forward: rational eigenvalue (tie case)");
  if (s.c > s.b + s.delta) {
    // z1 > 1: z -> z - 1
    t.v1 = vec_add(s.v1, s.v2);
    t.v2 = s.v2;
    t.b = s.b;
    t.delta = s.delta + 2 * s.b;
    t.c = s.c - s.b - s.delta;
    if (shift_branch) *shift_branch = true;
  } else {
    // z1 < 1: z -> 1/z
    t.v1 = s.v2;
    t.v2 = s.v1;
    t.b = s.c;
    t.delta = -s.delta;
    t.c = s.b;
    if (shift_branch) *shift_branch = false;
  }
  return t;
}

OrbitState2D orbit_backward(const OrbitState2D& s) {
  OrbitState2D t;
  t.gamma = s.gamma;
  if (s.c == s.b - s.delta)
    throw std::invalid_argument("orbit_backward: rational eigenvalue (tie case)");
  if (s.c > s.b - s.delta) {
    // z2 < -1: undo the shift branch
    t.v1 = vec_sub(s.v1, s.v2);
    t.v2 = s.v2;
    t.b = s.b;
    t.delta = s.delta - 2 * s.b;
    t.c = s.c - s.b + s.delta;
  } else {
    // z1 > 1 and |z2| < 1: undo the reciprocal branch
    t.v1 = s.v2;
    t.v2 = s.v1;
    t.b = s.c;
    t.delta = -s.delta;
    t.c = s.b;
  }
  return t;
}

OrbitCycle detect_period(const OrbitState2D& seed) {
  OrbitCycle cyc;
  cyc.states.push_back(seed);
  OrbitState2D cur = seed;
  for (int n = 1; n <= 1 << 20; ++n) {
    cur = orbit_forward(cur);
    if (cur.b == seed.b && cur.delta == seed.delta && cur.c == seed.c) {
      cyc.period = n;
      return cyc;
    }
    cyc.states.push_back(cur);
  }
  throw std::logic_error("detect_period: no recurrence found");
}

std::vector<Int> surd_continued_fraction(const Int& P, const Int& Q, const Int& D,
                                         int digits) {
  if (Q == 0) throw std::invalid_argument("surd_continued_fraction: zero denominator");
  Int p = P, q = Q, d = D;
  if ((d - p * p) % q != 0) {
    p *= abs(q);
    d *= q * q;
    q *= abs(q);
  }
  Int root;
  mpz_sqrt(root.get_mpz_t(), d.get_mpz_t());
  if (root * root == d)
    throw std::invalid_argument("surd_continued_fraction: discriminant is a square");
  std::vector<Int> out;
  for (int i = 0; i < digits; ++i) {
    Int a = (q > 0) ? floor_div(p + root, q) : floor_div(-p - root - 1, -q);
    out.push_back(a);
    p = a * q - p;
    q = (d - p * p) / q;
  }
  return out;
}

RegularDecision decide_regular_stabilizable(const MonomialMap& m) {
  RegularDecision dec;
  if (classify2d(m) != Case2D::IrrationalMixedSign) {
    dec.tag = RegularDecision::NotApplicable;
    dec.reason = "decision procedure applies to irrational mixed-sign eigenvalues";
    return dec;
  }
  if (sign(m.matrix.trace()) == 0) {
    dec.tag = RegularDecision::NotApplicable;
    dec.reason = "|mu1| = |mu2|: no dominant eigenline, handled by finite ray orbits";
    return dec;
  }
  dec.negated = sign(m.matrix.trace()) < 0;
  IntMatrix mw = dec.negated ? negate(m.matrix) : m.matrix;
  OrbitCycle cyc = detect_period(orbit_seed(m));
  for (const auto& st : cyc.states) {
    if (abs(st.delta) > st.gamma) continue;
    // A_n >= 0: sigma1 is phi-invariant, sigma2 is phi^{-1}-invariant
    dec.tag = RegularDecision::Yes;
    dec.witness = st;
    dec.sigma1 = make_cone(2, {st.v1, st.v2});
    dec.sigma2 = make_cone(2, {st.v1, vec_neg(st.v2)});
    for (const auto& g : dec.sigma1.gens)
      if (!cone_contains(dec.sigma1, mw.apply(g)))
        throw std::logic_error("decide_regular_stabilizable: sigma1 not invariant");
    IntMatrix psi = mw.adjugate();
    for (const auto& g : dec.sigma2.gens) {
      Vec w = psi.apply(g);
      Cone neg = make_cone(2, {vec_neg(dec.sigma2.gens[0]), vec_neg(dec.sigma2.gens[1])});
      if (!cone_contains(dec.sigma2, w) && !cone_contains(neg, w))
        throw std::logic_error("decide_regular_stabilizable: sigma2 not co-invariant");
    }
    return dec;
  }
  dec.tag = RegularDecision::No;
  dec.cycle = cyc.states;
  return dec;
}

bool divisor_obstruction(const MonomialMap& m) {
  if (m.matrix.rank != 2) throw std::invalid_argument("divisor_obstruction: rank must be 2");
  int k = scalar_power(m.matrix, 12);
  if (k < 0) return false;
  Int s = abs(m.matrix.pow(static_cast<unsigned>(k)).at(0, 0));
  Int d2 = abs(m.matrix.det());
  // on an invariant regular fan, adjacent primitive-image multipliers satisfy
  // l_i l_{i+1} = |det|, so they alternate between alpha and beta = |det|/alpha,
  // and each ray orbit multiplies to |s| over k steps
  for (Int alpha = 1; alpha * alpha <= d2; ++alpha) {
    if (d2 % alpha != 0) continue;
    Int beta = d2 / alpha;
    if (alpha == beta) {
      Int pw = 1;
      for (int i = 0; i < k; ++i) pw *= alpha;
      if (pw != s) continue;
      bool divides = true;
      for (const auto& row : m.matrix.entries)
        for (const auto& e : row)
          if (e % alpha != 0) divides = false;
      if (divides) return false;
    } else {
      for (int i = 0; i <= k; ++i) {
        Int pw = 1;
        for (int j = 0; j < i; ++j) pw *= alpha;
        for (int j = i; j < k; ++j) pw *= beta;
        if (pw == s) return false;
      }
    }
  }
  return true;
}

Stab2DResult stabilize_2d(const MonomialMap& m, const Fan& f) {
  if (m.matrix.rank != 2 || f.rank != 2)
    throw std::invalid_argument("stabilize_2d: rank must be 2");
  ValidationReport rep = validate_fan(f);
  if (!rep.ok) throw std::invalid_argument("stabilize_2d: invalid fan");
  switch (classify2d(m)) {
    case Case2D::Scalar:
      return handle_scalar(m, f);
    case Case2D::ComplexNotRootOfUnity: {
      Stab2DResult r;
      r.tag = Stab2DResult::ImpossibleAny;
      r.reason = "the eigenvalue ratio is not a root of unity: ray directions rotate "
                 "by an irrational angle, so the orbit of any ray is infinite and no "
                 "finite fan absorbs it";
      return r;
    }
    case Case2D::RootOfUnityRatio: {
      Stab2DResult r;
      int k = scalar_power(m.matrix, 12);
      if (k < 0) {
        r.tag = Stab2DResult::Unknown;
        r.reason = "no power of phi up to 12 is scalar";
        return r;
      }
      r.impossible_regular = divisor_obstruction(m);
      if (r.impossible_regular)
        r.reason = "no complete regular fan is invariant: the divisor-of-determinant "
                   "constraint on adjacent primitive images has no solution";
      return handle_finite_orbits(m, f, k, std::move(r));
    }
    case Case2D::NonDiagonalizable:
      return handle_non_diagonalizable(m, f);
    case Case2D::IntDistinct:
      return handle_int_distinct(m, f);
    case Case2D::IrrationalSameSign:
      return handle_irrational_same_sign(m, f);
    case Case2D::IrrationalMixedSign:
      return handle_irrational_mixed(m, f);
  }
  throw std::logic_error("stabilize_2d: unreachable");
}

}  // namespace fanstab
