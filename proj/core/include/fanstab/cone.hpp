#pragma once

#include <optional>
#include <vector>

#include "fanstab/lattice.hpp"

namespace fanstab {

// strictly convex rational polyhedral cone, generators primitive
struct Cone {
  int rank = 0;
  std::vector<Vec> gens;

  int dim() const { return rank_of(gens, rank); }
  bool is_simplicial() const { return dim() == static_cast<int>(gens.size()); }
  bool operator==(const Cone& o) const;  // same generator set (as rays)
};

Cone make_cone(int rank, std::vector<Vec> gens);  // primitivizes, dedupes

bool cone_contains(const Cone& c, const Vec& v);
bool cone_contains_q(const Cone& c, const QVec& v);
bool in_relative_interior(const Cone& c, const Vec& v);
bool is_strictly_convex(const std::vector<Vec>& gens, int rank);
// relint(a) cap relint(b) nonempty?
bool relative_interiors_meet(const Cone& a, const Cone& b);
// drop generators lying in the cone of the others
std::vector<Vec> irredundant_generators(std::vector<Vec> gens, int rank);

// halfspace description: { x in span : u.x >= 0 for all u in ineqs },
// span cut out by eqs (e.x = 0)
struct HForm {
  int rank = 0;
  std::vector<Vec> ineqs;
  std::vector<Vec> eqs;
};

HForm to_halfspaces(const Cone& c);
// facets as generator-index subsets, parallel to the primitive inward normals
struct FacetData {
  std::vector<std::vector<int>> facet_gens;  // indices into c.gens
  std::vector<Vec> normals;                  // inward primitive normals
};
FacetData facets_of(const Cone& c);

Cone from_halfspaces(const HForm& h);
Cone cone_intersect(const Cone& a, const Cone& b);
Cone cone_sum(const Cone& a, const Cone& b);  // cone generated by both

// smallest face of c whose relative interior contains v (v must lie in c)
std::vector<int> minimal_face(const Cone& c, const Vec& v);

// pulling triangulation into simplicial subcones (indices into c.gens)
std::vector<std::vector<int>> triangulate(const Cone& c);

}  // namespace fanstab
