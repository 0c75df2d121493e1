#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fanstab/cone.hpp"
#include "fanstab/lattice.hpp"

namespace fanstab {

// fan stored as a ray table plus maximal cones as sorted ray-index sets
struct Fan {
  int rank = 0;
  std::vector<Vec> rays;                // primitive
  std::vector<std::vector<int>> cones;  // maximal cones, sorted indices

  int ray_index(const Vec& v) const;  // -1 if absent
  int add_ray(const Vec& v);          // appends primitive(v) if absent
  Cone cone_at(int i) const;
  Cone cone_of(const std::vector<int>& idx) const;
  void add_cone(std::vector<int> idx);  // sorts; skips duplicates
  // drop cones that are faces of other cones, and rays used by no cone
  void prune();
  bool operator==(const Fan& o) const;  // same rays and maximal cones (as sets)
};

Fan canonical_fan(const Fan& f);  // rays sorted lex, indices remapped/sorted

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

ValidationReport validate_fan(const Fan& f);

struct FanClass {
  bool complete = false;
  bool simplicial = false;
  bool regular = false;
  bool symmetric = false;
};

FanClass classify_fan(const Fan& f);

bool cone_is_regular(const Cone& c);

// smallest cone of f containing v in its relative interior, as ray indices
// (empty vector = origin); nullopt when v is outside the support
std::optional<std::vector<int>> locate(const Fan& f, const Vec& v);
// index of some maximal cone containing v, or -1
int locate_maximal(const Fan& f, const Vec& v);

bool is_refinement(const Fan& fine, const Fan& coarse);

struct SupportFunction {
  Fan fan;
  std::vector<QVec> xi;  // linear form per maximal cone
};

Rat eval_support(const SupportFunction& h, const Vec& v);
Rat eval_support_q(const SupportFunction& h, const QVec& v);

// strictly convex support function certifying projectivity, or nullopt
std::optional<SupportFunction> projectivity_certificate(const Fan& f);

// exact check that h is a consistent, strictly convex support function
bool is_strictly_convex_support(const SupportFunction& h);

}  // namespace fanstab
