#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fanstab/lattice.hpp"
#include "fanstab/spectrum.hpp"

using namespace fanstab;

namespace {

Vec v2(long a, long b) { return Vec{Int(a), Int(b)}; }
Vec v3(long a, long b, long c) { return Vec{Int(a), Int(b), Int(c)}; }

IntMatrix m2(long a, long b, long c, long d) {
  return IntMatrix(2, {v2(a, b), v2(c, d)});
}

// oracle for saturate: enumerate lattice points in a fundamental box of the
// rational span and check each claimed basis generates all of them
bool box_oracle_contains(const RationalSubspace& s, const Vec& v) {
  // v in lattice generated by s.basis?  solve over Q then check integrality
  std::vector<QVec> rows(s.rank, QVec(s.dim(), Rat(0)));
  for (int j = 0; j < s.dim(); ++j)
    for (int i = 0; i < s.rank; ++i) rows[i][j] = Rat(s.basis[j][i]);
  QVec x;
  if (!solve_rational(rows, to_qvec(v), x)) return false;
  for (auto& c : x)
    if (c.get_den() != 1) return false;
  return true;
}

}  // namespace

TEST_CASE("primitive") {
  CHECK(primitive(v2(4, -6)) == v2(2, -3));
  CHECK(primitive(v3(0, 0, 5)) == v3(0, 0, 1));
  CHECK(primitive(v2(-3, -3)) == v2(-1, -1));
  CHECK_THROWS(primitive(v2(0, 0)));
}

TEST_CASE("saturate") {
  auto s1 = saturate({v2(2, 0)}, 2);
  REQUIRE(s1.dim() == 1);
  CHECK(s1.basis[0] == v2(1, 0));

  auto s2 = saturate({v2(1, 1), v2(1, -1)}, 2);
  CHECK(s2.dim() == 2);
  CHECK(s2.contains(v2(1, 0)));
  CHECK(s2.contains(v2(0, 1)));

  auto s3 = saturate({v3(2, 2, 0), v3(0, 0, 3)}, 3);
  REQUIRE(s3.dim() == 2);
  CHECK(box_oracle_contains(s3, v3(1, 1, 0)));
  CHECK(box_oracle_contains(s3, v3(0, 0, 1)));
  CHECK_FALSE(s3.contains(v3(1, 0, 0)));

  // idempotent
  auto s4 = saturate(s3.basis, 3);
  CHECK(s4 == s3);
}

TEST_CASE("subspace_ops basics") {
  RationalSubspace x = saturate({v2(1, 0)}, 2);
  RationalSubspace y = saturate({v2(0, 1)}, 2);
  CHECK(subspace_ops(x, y, SubspaceOp::Sum).dim() == 2);
  CHECK(subspace_ops(x, y, SubspaceOp::Intersect).dim() == 0);
  auto ann = annihilator(saturate({v2(1, 1)}, 2));
  REQUIRE(ann.dim() == 1);
  CHECK(vec_dot(ann.basis[0], v2(1, 1)) == 0);
}

TEST_CASE("property: subspace identities on random subspaces of Z^4") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> coef(-5, 5);
  auto rand_sub = [&]() {
    int k = 1 + static_cast<int>(rng() % 3);
    std::vector<Vec> gens;
    for (int i = 0; i < k; ++i) {
      Vec v(4);
      for (auto& c : v) c = coef(rng);
      gens.push_back(v);
    }
    return saturate(gens, 4);
  };
  for (int iter = 0; iter < 60; ++iter) {
    auto a = rand_sub(), b = rand_sub();
    auto ann = annihilator(a);
    CHECK(annihilator(ann) == a);
    CHECK(a.dim() + ann.dim() == 4);
    auto c = subspace_ops(a, b, SubspaceOp::Intersect);
    for (const auto& v : c.basis) {
      CHECK(a.contains(v));
      CHECK(b.contains(v));
    }
    auto s = subspace_ops(a, b, SubspaceOp::Sum);
    for (const auto& v : a.basis) CHECK(s.contains(v));
    CHECK(s.dim() + c.dim() == a.dim() + b.dim());
  }
}

TEST_CASE("char_poly") {
  auto cp = char_poly(m2(3, 0, 0, 2));  // (x-3)(x-2) = x^2-5x+6
  CHECK(cp.coeff(0) == 6);
  CHECK(cp.coeff(1) == -5);
  CHECK(cp.coeff(2) == 1);
  IntMatrix a(3, {v3(3, 1, 0), v3(1, -2, 1), v3(0, 1, -2)});
  auto cp3 = char_poly(a);
  // trace -1, det via Bareiss
  CHECK(cp3.coeff(2) == 1);
  CHECK(cp3.coeff(3) == 1);
  CHECK(cp3.coeff(0) == -a.det());
}

TEST_CASE("matrix helpers") {
  IntMatrix a = m2(-1, -1, 3, -1);
  CHECK(a.det() == 4);
  CHECK((a * a.adjugate()).is_scalar());
  CHECK((a * a.adjugate()).at(0, 0) == 4);
  CHECK(a.pow(3).is_scalar());
  CHECK(a.pow(3).at(0, 0) == 8);
}

TEST_CASE("eigen_structure diagonal") {
  auto s = eigen_structure(m2(3, 0, 0, 2));
  REQUIRE(s.real_eigen.size() == 2);
  CHECK(alg_compare(s.real_eigen[0].value, AlgebraicNumber::from_int(3)) == 0);
  CHECK(alg_compare(s.real_eigen[1].value, AlgebraicNumber::from_int(2)) == 0);
  CHECK(s.real_eigen[0].rational_span.dim() == 1);
  CHECK(s.real_eigen[0].rational_span.contains(v2(1, 0)));
  CHECK(s.real_eigen[1].rational_span.contains(v2(0, 1)));
}

TEST_CASE("eigen_structure irrational eigenline") {
  auto s = eigen_structure(m2(-1, 3, 3, 2));
  REQUIRE(s.real_eigen.size() == 2);
  // eigenvalues (1 +- 3 sqrt5)/2, approx 3.8541 and -2.8541
  CHECK(s.real_eigen[0].value.approx() == doctest::Approx(3.8541).epsilon(1e-3));
  CHECK(s.real_eigen[1].value.approx() == doctest::Approx(-2.8541).epsilon(1e-3));
  CHECK(s.real_eigen[0].rational_span.dim() == 2);
  CHECK(s.real_eigen[1].rational_span.dim() == 2);
  // eigenvector evaluates to an actual eigenvector
  auto ev = eigenvector_values(s.real_eigen[0]);
  IntMatrix a = m2(-1, 3, 3, 2);
  for (int i = 0; i < 2; ++i) {
    AlgebraicNumber lhs = AlgebraicNumber::from_int(0);
    for (int j = 0; j < 2; ++j)
      lhs = lhs + AlgebraicNumber::from_rational(Rat(a.at(i, j))) * ev[j];
    CHECK(alg_compare(lhs, s.real_eigen[0].value * ev[i]) == 0);
  }
}

TEST_CASE("eigen_structure complex pair") {
  auto s = eigen_structure(m2(-1, -1, 3, -1));
  CHECK(s.real_eigen.empty());
  REQUIRE(s.complex_pairs.size() == 1);
  CHECK(s.complex_pairs[0].pair_det == 4);
  CHECK(s.complex_pairs[0].pair_trace == -2);
  CHECK(s.complex_pairs[0].ratio_root_of_unity);
}

TEST_CASE("property: root-of-unity flag vs scalar-power oracle") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> coef(-4, 4);
  int tested = 0;
  while (tested < 50) {
    IntMatrix a = m2(coef(rng), coef(rng), coef(rng), coef(rng));
    if (a.det() == 0) continue;
    auto s = eigen_structure(a);
    if (s.complex_pairs.size() != 1) continue;
    ++tested;
    bool oracle = false;
    IntMatrix p = a;
    for (int k = 1; k <= 12; ++k) {
      if (p.is_scalar()) {
        oracle = true;
        break;
      }
      p = p * a;
    }
    CHECK(s.complex_pairs[0].ratio_root_of_unity == oracle);
  }
}

TEST_CASE("negex char poly roots to 4 decimals") {
  IntMatrix a(3, {v3(3, 1, 0), v3(1, -2, 1), v3(0, 1, -2)});
  auto s = eigen_structure(a);
  REQUIRE(s.real_eigen.size() == 3);
  CHECK(s.real_eigen[0].value.approx() == doctest::Approx(3.1997).epsilon(1e-4));
  CHECK(s.real_eigen[1].value.approx() == doctest::Approx(-1.1142).epsilon(1e-4));
  CHECK(s.real_eigen[2].value.approx() == doctest::Approx(-3.0855).epsilon(1e-4));
  CHECK(a.trace() == -1);
}
