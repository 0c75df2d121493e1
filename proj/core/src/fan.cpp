#include "fanstab/fan.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fanstab/lp.hpp"

namespace fanstab {

int Fan::ray_index(const Vec& v) const {
  for (size_t i = 0; i < rays.size(); ++i)
    if (rays[i] == v) return static_cast<int>(i);
  return -1;
}

int Fan::add_ray(const Vec& v) {
  Vec p = primitive(v);
  int i = ray_index(p);
  if (i >= 0) return i;
  rays.push_back(p);
  return static_cast<int>(rays.size()) - 1;
}

Cone Fan::cone_at(int i) const { return cone_of(cones[i]); }

Cone Fan::cone_of(const std::vector<int>& idx) const {
  Cone c;
  c.rank = rank;
  for (int i : idx) c.gens.push_back(rays[i]);
  return c;
}

void Fan::add_cone(std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  for (const auto& existing : cones)
    if (existing == idx) return;
  cones.push_back(std::move(idx));
}

void Fan::prune() {
  // drop cones contained in other cones
  std::vector<bool> drop(cones.size(), false);
  for (size_t i = 0; i < cones.size(); ++i) {
    if (drop[i]) continue;
    Cone ci = cone_at(static_cast<int>(i));
    for (size_t j = 0; j < cones.size(); ++j) {
      if (i == j || drop[j]) continue;
      Cone cj = cone_at(static_cast<int>(j));
      bool i_in_j = true;
      for (const auto& g : ci.gens)
        if (!cone_contains(cj, g)) {
          i_in_j = false;
          break;
        }
      if (!i_in_j) continue;
      if (ci == cj && i < j) continue;  // keep the first duplicate
      drop[i] = true;
      break;
    }
  }
  std::vector<std::vector<int>> kept;
  for (size_t i = 0; i < cones.size(); ++i)
    if (!drop[i]) kept.push_back(cones[i]);
  cones = std::move(kept);
  // drop unused rays, remap indices
  std::vector<bool> used(rays.size(), false);
  for (const auto& c : cones)
    for (int i : c) used[i] = true;
  std::vector<int> remap(rays.size(), -1);
  std::vector<Vec> newrays;
  for (size_t i = 0; i < rays.size(); ++i)
    if (used[i]) {
      remap[i] = static_cast<int>(newrays.size());
      newrays.push_back(rays[i]);
    }
  for (auto& c : cones)
    for (int& i : c) i = remap[i];
  rays = std::move(newrays);
}

bool Fan::operator==(const Fan& o) const {
  if (rank != o.rank) return false;
  auto key = [](const Fan& f) {
    std::set<std::vector<Vec>> s;
    for (const auto& c : f.cones) {
      std::vector<Vec> gens;
      for (int i : c) gens.push_back(f.rays[i]);
      std::sort(gens.begin(), gens.end());
      s.insert(gens);
    }
    return s;
  };
  return key(*this) == key(o);
}

Fan canonical_fan(const Fan& f) {
  Fan out;
  out.rank = f.rank;
  std::vector<int> order(f.rays.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return f.rays[a] < f.rays[b]; });
  std::vector<int> remap(f.rays.size());
  for (size_t pos = 0; pos < order.size(); ++pos) {
    remap[order[pos]] = static_cast<int>(pos);
    out.rays.push_back(f.rays[order[pos]]);
  }
  for (const auto& c : f.cones) {
    std::vector<int> idx;
    for (int i : c) idx.push_back(remap[i]);
    std::sort(idx.begin(), idx.end());
    out.cones.push_back(idx);
  }
  std::sort(out.cones.begin(), out.cones.end());
  return out;
}

ValidationReport validate_fan(const Fan& f) {
  ValidationReport rep;
  auto fail = [&](const std::string& msg) {
    rep.ok = false;
    rep.violations.push_back(msg);
  };
  std::set<Vec> seen;
  for (size_t i = 0; i < f.rays.size(); ++i) {
    const Vec& v = f.rays[i];
    if (vec_is_zero(v)) {
      fail("zero ray at index " + std::to_string(i));
      continue;
    }
    if (primitive(v) != v) fail("non-primitive ray " + vec_str(v));
    if (!seen.insert(v).second) fail("duplicate ray " + vec_str(v));
  }
  if (!rep.ok) return rep;
  for (size_t i = 0; i < f.cones.size(); ++i) {
    Cone c = f.cone_at(static_cast<int>(i));
    if (!is_strictly_convex(c.gens, f.rank))
      fail("cone " + std::to_string(i) + " is not strictly convex");
    else if (irredundant_generators(c.gens, f.rank).size() != c.gens.size())
      fail("cone " + std::to_string(i) + " has redundant generators");
  }
  if (!rep.ok) return rep;
  for (size_t i = 0; i < f.cones.size(); ++i)
    for (size_t j = i + 1; j < f.cones.size(); ++j)
      if (f.cone_at(static_cast<int>(i)) == f.cone_at(static_cast<int>(j)))
        fail("duplicate cones " + std::to_string(i) + "," + std::to_string(j));
  if (!rep.ok) return rep;
  // relative interiors of distinct members (faces included) must be disjoint
  std::vector<std::pair<size_t, Cone>> faces;
  for (size_t i = 0; i < f.cones.size(); ++i) {
    std::set<std::vector<Vec>> cone_faces;
    std::vector<Cone> stack = {f.cone_at(static_cast<int>(i))};
    while (!stack.empty()) {
      Cone c = stack.back();
      stack.pop_back();
      std::vector<Vec> key = c.gens;
      std::sort(key.begin(), key.end());
      if (!cone_faces.insert(key).second) continue;
      faces.emplace_back(i, c);
      auto fd = facets_of(c);
      for (const auto& fg : fd.facet_gens) {
        Cone face{f.rank, {}};
        for (int l : fg) face.gens.push_back(c.gens[l]);
        stack.push_back(face);
      }
    }
  }
  for (size_t a = 0; a < faces.size(); ++a)
    for (size_t b = a + 1; b < faces.size(); ++b) {
      if (faces[a].first == faces[b].first) continue;  // same-cone faces are fine
      if (faces[a].second == faces[b].second) continue;
      if (relative_interiors_meet(faces[a].second, faces[b].second))
        fail("interiors overlap: cones " + std::to_string(faces[a].first) + "," +
             std::to_string(faces[b].first));
    }
  return rep;
}

bool cone_is_regular(const Cone& c) {
  int k = static_cast<int>(c.gens.size());
  if (c.dim() != k) return false;  // regular cones are simplicial
  if (k == 0) return true;
  // gcd of all k x k minors equals the product of elementary divisors
  Int g = 0;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    std::vector<Vec> sub;
    for (int r = 0; r < k; ++r) {
      Vec row(k);
      for (int cidx = 0; cidx < k; ++cidx) row[cidx] = c.gens[r][idx[cidx]];
      sub.push_back(row);
    }
    Int d = IntMatrix(k, sub).det();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
    if (g == 1) return true;
    int i = k - 1;
    while (i >= 0 && idx[i] == c.rank - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return g == 1;
}

namespace {

std::vector<Vec> facet_key(const Cone& c, const std::vector<int>& local) {
  std::vector<Vec> key;
  for (int i : local) key.push_back(c.gens[i]);
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

FanClass classify_fan(const Fan& f) {
  FanClass cls;
  cls.simplicial = true;
  cls.regular = true;
  bool all_fulldim = !f.cones.empty();
  std::map<std::vector<Vec>, int> facet_count;
  for (size_t i = 0; i < f.cones.size(); ++i) {
    Cone c = f.cone_at(static_cast<int>(i));
    int d = c.dim();
    if (d != static_cast<int>(c.gens.size())) cls.simplicial = false;
    if (!cone_is_regular(c)) cls.regular = false;
    if (d != f.rank) all_fulldim = false;
    auto fd = facets_of(c);
    for (const auto& fg : fd.facet_gens) ++facet_count[facet_key(c, fg)];
  }
  cls.complete = all_fulldim;
  for (const auto& [key, count] : facet_count)
    if (count != 2) cls.complete = false;
  cls.symmetric = true;
  for (const auto& idx : f.cones) {
    Cone c = f.cone_of(idx);
    Cone neg{f.rank, {}};
    for (const auto& g : c.gens) neg.gens.push_back(vec_neg(g));
    bool found = false;
    for (const auto& other : f.cones)
      if (f.cone_of(other) == neg) {
        found = true;
        break;
      }
    if (!found) {
      cls.symmetric = false;
      break;
    }
  }
  return cls;
}

int locate_maximal(const Fan& f, const Vec& v) {
  for (size_t i = 0; i < f.cones.size(); ++i)
    if (cone_contains(f.cone_at(static_cast<int>(i)), v)) return static_cast<int>(i);
  return -1;
}

std::optional<std::vector<int>> locate(const Fan& f, const Vec& v) {
  if (vec_is_zero(v)) return std::vector<int>{};
  int ci = locate_maximal(f, v);
  if (ci < 0) return std::nullopt;
  Cone c = f.cone_at(ci);
  auto local = minimal_face(c, v);
  std::vector<int> out;
  for (int l : local) out.push_back(f.cones[ci][l]);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

bool cone_inside(const Cone& inner, const Cone& outer) {
  for (const auto& g : inner.gens)
    if (!cone_contains(outer, g)) return false;
  return true;
}

// does the union of `pieces` (valid-fan cones, each d-dim, inside sigma) cover
// sigma?  facet-pairing: every facet of a piece whose relative interior meets
// the relative interior of sigma must be shared by exactly two pieces.
bool pieces_cover(const std::vector<Cone>& pieces, const Cone& sigma) {
  if (pieces.empty()) return false;
  std::map<std::vector<Vec>, int> count;
  std::vector<std::pair<std::vector<Vec>, Vec>> samples;
  for (const auto& p : pieces) {
    auto fd = facets_of(p);
    for (const auto& fg : fd.facet_gens) {
      auto key = facet_key(p, fg);
      ++count[key];
      Vec w(p.rank, Int(0));
      for (int i : fg) w = vec_add(w, p.gens[i]);
      samples.emplace_back(key, w);
    }
  }
  for (const auto& [key, w] : samples) {
    if (!in_relative_interior(sigma, w)) continue;  // on the boundary of sigma
    if (count[key] != 2) return false;
  }
  return true;
}

}  // namespace

bool is_refinement(const Fan& fine, const Fan& coarse) {
  // every fine cone inside some coarse cone
  std::vector<Cone> fine_cones, coarse_cones;
  for (size_t i = 0; i < fine.cones.size(); ++i)
    fine_cones.push_back(fine.cone_at(static_cast<int>(i)));
  for (size_t i = 0; i < coarse.cones.size(); ++i)
    coarse_cones.push_back(coarse.cone_at(static_cast<int>(i)));
  for (const auto& fc : fine_cones) {
    bool inside = false;
    for (const auto& cc : coarse_cones)
      if (cone_inside(fc, cc)) {
        inside = true;
        break;
      }
    if (!inside) return false;
  }
  // every coarse cone covered by the fine cones inside it
  for (const auto& cc : coarse_cones) {
    int d = cc.dim();
    std::vector<Cone> pieces;
    for (const auto& fc : fine_cones)
      if (fc.dim() == d && cone_inside(fc, cc)) pieces.push_back(fc);
    if (!pieces_cover(pieces, cc)) return false;
  }
  return true;
}

Rat eval_support_q(const SupportFunction& h, const QVec& v) {
  // clear denominators to reuse integral cone location
  Int lcm_den = 1;
  for (const auto& x : v) {
    Int d = x.get_den();
    mpz_lcm(lcm_den.get_mpz_t(), lcm_den.get_mpz_t(), d.get_mpz_t());
  }
  Vec w(v.size());
  for (size_t i = 0; i < v.size(); ++i) w[i] = Rat(v[i] * Rat(lcm_den)).get_num();
  if (vec_is_zero(w)) return Rat(0);
  int ci = locate_maximal(h.fan, w);
  if (ci < 0) throw std::domain_error("eval_support: point outside support");
  return qvec_dot(h.xi[ci], v);
}

Rat eval_support(const SupportFunction& h, const Vec& v) {
  return eval_support_q(h, to_qvec(v));
}

std::optional<SupportFunction> projectivity_certificate(const Fan& f) {
  FanClass cls = classify_fan(f);
  if (!cls.complete || !cls.simplicial)
    throw std::invalid_argument("projectivity_certificate: fan must be complete and simplicial");
  int nrays = static_cast<int>(f.rays.size());
  int nvars = nrays + 1;  // value per ray + slack t
  std::vector<QVec> rows;
  QVec rhs;
  // membership by index set is exact here: in a valid simplicial fan a fan
  // ray inside a cone is one of its generators
  for (size_t s = 0; s < f.cones.size(); ++s) {
    const auto& idx = f.cones[s];
    std::set<int> in_cone(idx.begin(), idx.end());
    // barycentric coordinates of v in the generator basis of sigma
    std::vector<QVec> gt(f.rank, QVec(f.rank, Rat(0)));
    for (int col = 0; col < f.rank; ++col)
      for (int r = 0; r < f.rank; ++r) gt[r][col] = Rat(f.rays[idx[col]][r]);
    for (int v = 0; v < nrays; ++v) {
      if (in_cone.count(v)) continue;
      QVec coords;
      if (!solve_rational(gt, to_qvec(f.rays[v]), coords))
        throw std::logic_error("projectivity_certificate: singular cone basis");
      // a_v + t - sum coords_i a_{gen i} <= 0
      QVec row(nvars, Rat(0));
      row[v] += 1;
      row[nrays] = 1;
      for (int i = 0; i < f.rank; ++i) row[idx[i]] -= coords[i];
      rows.push_back(row);
      rhs.push_back(Rat(0));
    }
  }
  QVec cap(nvars, Rat(0));
  cap[nrays] = 1;
  rows.push_back(cap);
  rhs.push_back(Rat(1));
  QVec obj(nvars, Rat(0));
  obj[nrays] = 1;
  auto res = lp_solve(rows, rhs, obj);
  if (res.status != LPStatus::Optimal || res.value <= 0) return std::nullopt;
  SupportFunction h;
  h.fan = f;
  for (const auto& idx : f.cones) {
    std::vector<QVec> grows(f.rank, QVec(f.rank, Rat(0)));
    QVec vals(f.rank, Rat(0));
    for (int i = 0; i < f.rank; ++i) {
      for (int j = 0; j < f.rank; ++j) grows[i][j] = Rat(f.rays[idx[i]][j]);
      vals[i] = res.x[idx[i]];
    }
    QVec xi;
    if (!solve_rational(grows, vals, xi))
      throw std::logic_error("projectivity_certificate: singular cone basis");
    h.xi.push_back(xi);
  }
  if (!is_strictly_convex_support(h))
    throw std::logic_error("projectivity_certificate: witness failed verification");
  return h;
}

bool is_strictly_convex_support(const SupportFunction& h) {
  const Fan& f = h.fan;
  for (size_t s = 0; s < f.cones.size(); ++s) {
    Cone cs = f.cone_at(static_cast<int>(s));
    for (size_t t = 0; t < f.cones.size(); ++t) {
      if (s == t) continue;
      for (int v : f.cones[t]) {
        Rat lhs = qvec_dot(h.xi[s], to_qvec(f.rays[v]));
        Rat rhs = qvec_dot(h.xi[t], to_qvec(f.rays[v]));
        if (cone_contains(cs, f.rays[v])) {
          if (lhs != rhs) return false;  // consistency on shared faces
        } else if (lhs <= rhs) {
          return false;  // strictness off the cone
        }
      }
    }
  }
  return true;
}

}  // namespace fanstab
