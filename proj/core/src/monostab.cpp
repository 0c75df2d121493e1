#include "fanstab/monostab.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace fanstab {

const Spectrum& MonomialMap::spectrum() const {
  if (!spec_cache_) spec_cache_ = std::make_shared<Spectrum>(eigen_structure(matrix));
  return *spec_cache_;
}

MonomialMap make_map(IntMatrix m) {
  if (m.det() == 0) throw std::invalid_argument("make_map: matrix is singular");
  MonomialMap out;
  out.matrix = std::move(m);
  return out;
}

namespace {

// the minimal cone of f containing every vector in ws, as sorted global ray
// indices; nullopt when no cone of f contains them all.  A point in the
// relative interior of the hull is the sum: any face containing the sum
// contains each summand.
std::optional<std::vector<int>> absorbing_face(const Fan& f, const std::vector<Vec>& ws) {
  Vec s(f.rank, Int(0));
  for (const auto& w : ws) s = vec_add(s, w);
  auto loc = locate(f, s);
  if (!loc) return std::nullopt;
  Cone c = f.cone_of(*loc);
  for (const auto& w : ws)
    if (!cone_contains(c, w)) return std::nullopt;
  std::sort(loc->begin(), loc->end());
  return loc;
}

std::vector<Vec> image_of(const IntMatrix& m, const std::vector<Vec>& gens) {
  std::vector<Vec> out;
  for (const auto& g : gens) out.push_back(primitive(m.apply(g)));
  return out;
}

}  // namespace

bool is_regular_map(const MonomialMap& m, const Fan& src, const Fan& dst) {
  for (const auto& c : src.cones)
    if (!absorbing_face(dst, image_of(m.matrix, src.cone_of(c).gens))) return false;
  return true;
}

SupportFunction pullback_support(const MonomialMap& m, const Fan& src,
                                 const Fan& dst, const SupportFunction& h) {
  SupportFunction out;
  out.fan = src;
  for (const auto& c : src.cones) {
    std::vector<QVec> rows;
    QVec vals;
    for (int vi : c) {
      rows.push_back(to_qvec(src.rays[vi]));
      vals.push_back(eval_support(h, m.matrix.apply(src.rays[vi])));
    }
    QVec xi;
    if (!solve_rational(rows, vals, xi))
      throw std::logic_error("pullback_support: interpolation failed (fan not simplicial?)");
    out.xi.push_back(xi);
  }
  return out;
}

bool check_composition(const MonomialMap& m, const MonomialMap& m2,
                       const Fan& d0, const Fan& d1, const Fan& d2) {
  for (const auto& rho : d0.rays) {
    auto loc = locate(d1, m.matrix.apply(rho));
    if (!loc) throw std::invalid_argument("check_composition: ray image outside middle fan");
    Cone sp = d1.cone_of(*loc);
    if (!absorbing_face(d2, image_of(m2.matrix, sp.gens))) return false;
  }
  return true;
}

bool pullback_matches_composition(const MonomialMap& m, const MonomialMap& m2,
                                  const Fan& d0, const Fan& d1, const Fan& d2,
                                  const SupportFunction& h) {
  SupportFunction mid = pullback_support(m2, d1, d2, h);
  SupportFunction via = pullback_support(m, d0, d1, mid);
  MonomialMap comp = make_map(m2.matrix * m.matrix);
  SupportFunction direct = pullback_support(comp, d0, d2, h);
  for (const auto& rho : d0.rays)
    if (eval_support(via, rho) != eval_support(direct, rho)) return false;
  return true;
}

StabilityVerdict check_1stable(const MonomialMap& m, const Fan& f, int n_max) {
  if (n_max < 1) throw std::invalid_argument("check_1stable: n_max must be positive");
  StabilityVerdict out;
  StabilityCertificate cert;
  std::map<std::vector<int>, int> interned;  // S cone key -> index in cert
  bool unknown = false;

  auto intern = [&](const std::vector<int>& key) {
    auto it = interned.find(key);
    if (it != interned.end()) return it->second;
    int idx = static_cast<int>(cert.invariant_cones.size());
    interned[key] = idx;
    cert.invariant_cones.push_back(f.cone_of(key));
    cert.cone_map.push_back(-1);
    return idx;
  };

  int nrays = static_cast<int>(f.rays.size());
  for (int r = 0; r < nrays; ++r) {
    if (cert.ray_fates.count(r)) continue;

    // follow the orbit while it stays on rays of the fan
    std::vector<int> path{r};
    std::map<int, int> pos{{r, 0}};
    Vec w;
    int entered = -1;  // index into path of the first already-known ray, if any
    bool ray_cycle = false;
    for (;;) {
      w = primitive(m.matrix.apply(f.rays[path.back()]));
      int idx = f.ray_index(w);
      if (idx < 0) break;
      if (cert.ray_fates.count(idx) || pos.count(idx)) {
        entered = idx;
        ray_cycle = pos.count(idx) > 0;
        break;
      }
      pos[idx] = static_cast<int>(path.size());
      path.push_back(idx);
    }

    int n = static_cast<int>(path.size());
    if (entered >= 0) {
      if (ray_cycle || cert.ray_fates.at(entered).kind == RayFate::OntoRay) {
        for (int i = 0; i < n; ++i) {
          RayFate fate;
          fate.kind = RayFate::OntoRay;
          fate.target = (i + 1 < n) ? path[i + 1] : entered;
          fate.steps = 1;
          cert.ray_fates[path[i]] = fate;
        }
      } else {
        const RayFate& tail = cert.ray_fates.at(entered);
        for (int i = 0; i < n; ++i) {
          RayFate fate;
          fate.kind = RayFate::Absorbed;
          fate.cone = tail.cone;
          fate.n0 = tail.n0 + (n - i);
          cert.ray_fates[path[i]] = fate;
        }
      }
      continue;
    }

    // the orbit left the rays: phi^n(path[0]) points along w, interior to a
    // cone of dimension >= 2; certify that cone's full forward orbit.  Every
    // later cone the ray enters is a face of a certified cone, hence covered.
    auto loc0 = locate(f, w);
    if (!loc0) throw std::invalid_argument("check_1stable: orbit leaves the support of the fan");
    std::sort(loc0->begin(), loc0->end());

    if (!interned.count(*loc0)) {
      // chain sigma_{k+1} = minimal cone containing phi(sigma_k); a repeat,
      // or a merge into an already certified cone, certifies the whole chain
      std::vector<std::vector<int>> chain{*loc0};
      std::set<std::vector<int>> seen{*loc0};
      int status = 1;  // 0 certified, 1 budget exhausted / broken, 2 unstable
      int fail_np = 0;
      for (int k = 1; k <= n_max; ++k) {
        auto next = absorbing_face(f, image_of(m.matrix, f.cone_of(chain.back()).gens));
        if (!next) {
          // the chain cone straddles the fan; the entered cone itself may
          // still be fine, in which case nothing can be concluded here
          std::vector<Vec> direct = f.cone_of(*loc0).gens;
          IntMatrix pw = m.matrix.pow(static_cast<unsigned>(k));
          for (auto& g : direct) g = primitive(pw.apply(g));
          if (!absorbing_face(f, direct)) {
            status = 2;
            fail_np = k;
          }
          break;
        }
        bool closes = seen.count(*next) || interned.count(*next);
        chain.push_back(*next);
        if (closes) {
          std::vector<int> ids;
          for (const auto& key : chain) ids.push_back(intern(key));
          for (size_t i = 0; i + 1 < ids.size(); ++i)
            if (cert.cone_map[ids[i]] < 0) cert.cone_map[ids[i]] = ids[i + 1];
          status = 0;
          break;
        }
        seen.insert(*next);
      }
      if (status == 2) {
        out.tag = StabilityTag::Unstable;
        out.witness_ray = r;
        out.witness_n = n;
        out.witness_cone = f.cone_of(*loc0);
        out.witness_np = fail_np;
        return out;
      }
      if (status == 1) {
        unknown = true;
        continue;
      }
    }
    int cidx = interned.at(*loc0);
    for (int i = 0; i < n; ++i) {
      RayFate fate;
      fate.kind = RayFate::Absorbed;
      fate.cone = cidx;
      fate.n0 = n - i;
      cert.ray_fates[path[i]] = fate;
    }
  }

  if (unknown) {
    out.tag = StabilityTag::Unknown;
    out.bound = n_max;
    return out;
  }
  // close the family: a cone whose successor was never recorded belongs to a
  // chain suffix that merged into an interned cycle through intern()'s reuse
  for (size_t i = 0; i < cert.cone_map.size(); ++i)
    if (cert.cone_map[i] < 0) throw std::logic_error("check_1stable: open cone family");
  out.tag = StabilityTag::Stable;
  out.certificate = std::move(cert);
  return out;
}

bool verify_certificate(const MonomialMap& m, const Fan& f,
                        const StabilityCertificate& cert) {
  int ns = static_cast<int>(cert.invariant_cones.size());
  if (static_cast<int>(cert.cone_map.size()) != ns) return false;
  for (int i = 0; i < ns; ++i) {
    int t = cert.cone_map[i];
    if (t < 0 || t >= ns) return false;
    for (const auto& g : cert.invariant_cones[i].gens)
      if (!cone_contains(cert.invariant_cones[t], m.matrix.apply(g))) return false;
  }
  int nrays = static_cast<int>(f.rays.size());
  for (int r = 0; r < nrays; ++r) {
    auto it = cert.ray_fates.find(r);
    if (it == cert.ray_fates.end()) return false;
    const RayFate& fate = it->second;
    // intermediate orbit steps must themselves be rays or already absorbed,
    // else the family says nothing about the cones they enter
    auto step_ok = [&](const Vec& v) {
      if (f.ray_index(primitive(v)) >= 0) return true;
      for (const auto& s : cert.invariant_cones)
        if (cone_contains(s, v)) return true;
      return false;
    };
    if (fate.kind == RayFate::OntoRay) {
      if (fate.target < 0 || fate.target >= nrays || fate.steps < 1) return false;
      Vec v = f.rays[r];
      for (int j = 0; j < fate.steps; ++j) {
        v = m.matrix.apply(v);
        if (!step_ok(v)) return false;
      }
      if (primitive(v) != f.rays[fate.target]) return false;
    } else {
      if (fate.cone < 0 || fate.cone >= ns || fate.n0 < 0) return false;
      Vec v = f.rays[r];
      for (int j = 0; j < fate.n0; ++j) {
        v = m.matrix.apply(v);
        if (j + 1 < fate.n0 && !step_ok(v)) return false;
      }
      if (!cone_contains(cert.invariant_cones[fate.cone], v)) return false;
    }
  }
  return true;
}

TraceScreen trace_obstruction(const MonomialMap& m) {
  return m.matrix.trace() < 0 ? TraceScreen::Obstructed : TraceScreen::Pass;
}

}  // namespace fanstab
