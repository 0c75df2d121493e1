#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fanstab/fan.hpp"

namespace fanstab {

// plan for incorporating a simplicial cone sigma1 into a fan at sigma0:
// sigma1 lies in sigma0 and every generator of sigma1 is either a ray of
// sigma0 or interior to sigma0 (so the common boundary is a shared face)
struct IncorporationPlan {
  Cone sigma0;
  Cone sigma1;
  std::map<Vec, Rat> heights;  // lifting height per new ray (default 1)
};

Fan incorporate_cone(const Fan& f, const IncorporationPlan& plan);

std::pair<Fan, SupportFunction> incorporate_cone_projective(
    const Fan& f, const SupportFunction& h, const IncorporationPlan& plan);

struct RegularizeOpts {
  bool keep_regular = true;
  bool symmetric = false;
  std::vector<Cone> keep;  // cones left untouched even when irregular
};

Fan regularize(const Fan& f, const RegularizeOpts& opts = {});

// replace every non-simplicial cone by a pulling triangulation (no new rays)
Fan triangulate_fan(const Fan& f);

// 2D barycentric subdivision of a regular cone tau = cone{v1,v2} in f
Fan barycentric_subdivide(const Fan& f, const Cone& tau);

enum class SubdivisionStep { Left, Right };

// the unique sequence of barycentric child choices leading from tau0 to tau,
// or nullopt when tau is not nested in tau0
std::optional<std::vector<SubdivisionStep>> subdivision_path(const Cone& tau,
                                                             const Cone& tau0);

Fan common_refinement(const Fan& f, const Fan& g);

}  // namespace fanstab
