#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "fanstab/fan.hpp"
#include "fanstab/spectrum.hpp"

namespace fanstab {

// equivariant monomial map, given by an integer matrix of maximal rank
struct MonomialMap {
  IntMatrix matrix;

  const Spectrum& spectrum() const;

 private:
  mutable std::shared_ptr<Spectrum> spec_cache_;
};

MonomialMap make_map(IntMatrix m);  // throws if det(m) == 0

struct RayFate {
  enum Kind { OntoRay, Absorbed } kind = OntoRay;
  // OntoRay: primitive(phi^steps(ray)) is the ray `target` of the fan
  int target = -1;
  int steps = 0;
  // Absorbed: phi^{n0}(ray) lies in invariant_cones[cone]
  int cone = -1;
  int n0 = 0;
};

struct StabilityCertificate {
  // family S of cones with phi(S[i]) contained in S[cone_map[i]]
  std::vector<Cone> invariant_cones;
  std::vector<int> cone_map;
  std::map<int, RayFate> ray_fates;  // keyed by ray index of the fan
};

enum class StabilityTag { Stable, Unstable, Unknown };

struct StabilityVerdict {
  StabilityTag tag = StabilityTag::Unknown;
  std::optional<StabilityCertificate> certificate;  // Stable
  // Unstable: phi^{witness_n}(ray) enters witness_cone, and
  // phi^{witness_np}(witness_cone) is contained in no cone of the fan
  int witness_ray = -1;
  int witness_n = 0;
  Cone witness_cone;
  int witness_np = 0;
  int bound = 0;  // Unknown: the exhausted iteration budget
};

bool is_regular_map(const MonomialMap& m, const Fan& src, const Fan& dst);

// (pullback h)(v) = h(phi(v)) on the rays of src, extended src-linearly
SupportFunction pullback_support(const MonomialMap& m, const Fan& src,
                                 const Fan& dst, const SupportFunction& h);

// per ray rho of d0: sp = cone of d1 whose relative interior meets phi(rho);
// true iff phi2(sp) is contained in some cone of d2 for every rho
bool check_composition(const MonomialMap& m, const MonomialMap& m2,
                       const Fan& d0, const Fan& d1, const Fan& d2);

// oracle for check_composition: compares the two interpolated pullbacks of h
// (through d1 versus directly) on the rays of d0
bool pullback_matches_composition(const MonomialMap& m, const MonomialMap& m2,
                                  const Fan& d0, const Fan& d1, const Fan& d2,
                                  const SupportFunction& h);

StabilityVerdict check_1stable(const MonomialMap& m, const Fan& f, int n_max);

bool verify_certificate(const MonomialMap& m, const Fan& f,
                        const StabilityCertificate& cert);

enum class TraceScreen { Pass, Obstructed };

// trace < 0 rules out any full-dimensional simplicial invariant cone
TraceScreen trace_obstruction(const MonomialMap& m);

}  // namespace fanstab
