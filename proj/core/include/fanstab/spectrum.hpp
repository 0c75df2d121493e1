#pragma once

#include <vector>

#include "fanstab/algebraic.hpp"
#include "fanstab/lattice.hpp"
#include "fanstab/polynomial.hpp"

namespace fanstab {

struct EigenPair {
  AlgebraicNumber value;
  int multiplicity = 1;
  // eigenvector written as sum_i value^i * e_i with rational coefficient
  // vectors e_0..e_{d-1}; empty when multiplicity > 1 (not processed)
  std::vector<QVec> eigvec_coeffs;
  // saturate(span{e_i}): the minimal rational subspace containing the eigenline
  RationalSubspace rational_span;
};

struct ComplexPair {
  IntPolynomial min_poly;      // irreducible factor carrying the pair
  int multiplicity = 1;
  Rat pair_trace;              // for quadratic factors: mu + conj(mu)
  Rat pair_det;                // mu * conj(mu)
  bool ratio_root_of_unity = false;  // quadratic case: trace^2/det in {0..4}
};

struct Spectrum {
  std::vector<EigenPair> real_eigen;       // ordered decreasingly
  std::vector<ComplexPair> complex_pairs;  // quadratic (or higher) factors with no real root
  bool has_repeated_real = false;
};

Spectrum eigen_structure(const IntMatrix& m);

// evaluate the symbolic eigenvector sum_i mu^i e_i as algebraic numbers
std::vector<AlgebraicNumber> eigenvector_values(const EigenPair& ep);

}  // namespace fanstab
