#pragma once

#include <vector>

#include "fanstab/lattice.hpp"

namespace fanstab {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  QVec x;       // primal solution when Optimal (size = #vars)
  Rat value;    // objective value when Optimal
  QVec farkas;  // when Infeasible: y >= 0 with y^T A = 0 and y^T b < 0
};

// maximize c.x subject to A x <= b with x free (exact rational simplex,
// Bland's rule)
LPResult lp_solve(const std::vector<QVec>& a, const QVec& b, const QVec& c);

// convenience: feasibility of A x <= b
bool lp_feasible(const std::vector<QVec>& a, const QVec& b);

}  // namespace fanstab
