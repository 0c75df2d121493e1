#pragma once

#include <string>
#include <vector>

#include "fanstab/monostab.hpp"
#include "fanstab/refine.hpp"

namespace fanstab {

enum class Case2D {
  IntDistinct,
  IrrationalSameSign,
  IrrationalMixedSign,
  ComplexNotRootOfUnity,
  RootOfUnityRatio,
  NonDiagonalizable,
  Scalar
};

Case2D classify2d(const MonomialMap& m);

// basis pair (v1, v2) for N together with the matrix of phi in that basis,
// reduced to (b, delta, c); a = (gamma+delta)/2, d = (gamma-delta)/2.  The
// eigenvector slopes z1 > 0 > z2 are the roots of b z^2 + delta z - c.
struct OrbitState2D {
  Vec v1, v2;
  Int b, delta, c;
  Int gamma;

  Int a() const { return (gamma + delta) / 2; }
  Int d() const { return (gamma - delta) / 2; }
  Int discriminant() const { return delta * delta + 4 * b * c; }
  bool nonnegative() const { return a() >= 0 && d() >= 0 && b > 0 && c > 0; }
};

// seed from a regular cone straddling the dominant eigenline (mixed-sign
// irrational eigenvalues with trace > 0); normalized so max{|z1|,|z2|} > 1
OrbitState2D orbit_seed(const MonomialMap& m);
// true when the step used the z -> z - 1 branch (c > b + delta)
OrbitState2D orbit_forward(const OrbitState2D& s, bool* shift_branch = nullptr);
OrbitState2D orbit_backward(const OrbitState2D& s);

struct OrbitCycle {
  int period = 0;
  std::vector<OrbitState2D> states;  // states[0] == seed, size == period
};
OrbitCycle detect_period(const OrbitState2D& seed);

// exact continued-fraction digits of z1 = (-delta + sqrt(D)) / (2b) by the
// classical quadratic-surd P,Q recursion; independent oracle for the branch
// structure of orbit_forward
std::vector<Int> surd_continued_fraction(const Int& P, const Int& Q, const Int& D, int digits);

struct RegularDecision {
  enum Tag { Yes, No, NotApplicable } tag = NotApplicable;
  Cone sigma1, sigma2;               // Yes: phi(s1) in +-s1, phi^{-1}(s2) in +-s2
  OrbitState2D witness;              // Yes: the state with A_n >= 0
  std::vector<OrbitState2D> cycle;   // No: one full period as proof
  bool negated = false;              // analysis ran on -phi (trace < 0)
  std::string reason;
};
RegularDecision decide_regular_stabilizable(const MonomialMap& m);

// sufficient screen: true means no complete regular fan is phi-invariant
// (adjacent primitive images multiply to |det phi|, incompatible with
// phi^k = s id); applies when some power of phi is scalar
bool divisor_obstruction(const MonomialMap& m);

struct Stab2DResult {
  enum Tag {
    RegularStabilized,
    StabilizedIrregular,
    ImpossibleAny,
    ImpossibleRegular,
    Unknown
  } tag = Unknown;
  Fan fan;
  StabilityCertificate certificate;
  std::string reason;
  bool impossible_regular = false;       // proven, see cycle_proof / reason
  std::vector<OrbitState2D> cycle_proof;
  std::vector<Cone> irregular_cones;     // the planted invariant cones
};

Stab2DResult stabilize_2d(const MonomialMap& m, const Fan& f);

}  // namespace fanstab
