#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "fanstab/stab2d.hpp"

using namespace fanstab;

namespace {

Vec v2(long a, long b) { return Vec{Int(a), Int(b)}; }

Fan p2_fan() {
  Fan f;
  f.rank = 2;
  f.rays = {v2(1, 0), v2(0, 1), v2(-1, -1)};
  f.cones = {{0, 1}, {1, 2}, {0, 2}};
  return f;
}

Fan p1xp1_fan() {
  Fan f;
  f.rank = 2;
  f.rays = {v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)};
  f.cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return f;
}

MonomialMap mat2(long a, long b, long c, long d) {
  return make_map(IntMatrix(2, {v2(a, b), v2(c, d)}));
}

std::array<Int, 3> triple(const OrbitState2D& s) { return {s.b, s.delta, s.c}; }

bool fan_has_cone(const Fan& f, const Cone& c) {
  for (size_t i = 0; i < f.cones.size(); ++i)
    if (f.cone_at(static_cast<int>(i)) == c) return true;
  return false;
}

// continued-fraction digits of z1 read off the forward branch structure:
// digit = number of consecutive shift branches before each reciprocal branch
std::vector<Int> branch_digits(OrbitState2D s, int count) {
  std::vector<Int> out;
  Int run = 0;
  while (static_cast<int>(out.size()) < count) {
    bool shift = false;
    s = orbit_forward(s, &shift);
    if (shift) {
      run += 1;
    } else {
      out.push_back(run);
      run = 0;
    }
  }
  return out;
}

void check_output(const MonomialMap& m, const Fan& input, const Stab2DResult& r) {
  REQUIRE((r.tag == Stab2DResult::RegularStabilized ||
           r.tag == Stab2DResult::StabilizedIrregular));
  CHECK(validate_fan(r.fan).ok);
  CHECK(classify_fan(r.fan).complete);
  CHECK(is_refinement(r.fan, input));
  CHECK(verify_certificate(m, r.fan, r.certificate));
  if (r.tag == Stab2DResult::RegularStabilized) CHECK(classify_fan(r.fan).regular);
}

}  // namespace

TEST_CASE("classify2d") {
  CHECK(classify2d(mat2(-1, 3, 3, 2)) == Case2D::IrrationalMixedSign);
  CHECK(classify2d(mat2(-1, -1, 3, -1)) == Case2D::RootOfUnityRatio);
  CHECK(classify2d(mat2(2, 1, 1, 1)) == Case2D::IrrationalSameSign);
  CHECK(classify2d(mat2(2, 1, 1, -1)) == Case2D::IrrationalMixedSign);
  CHECK(classify2d(mat2(2, 0, 0, -1)) == Case2D::IntDistinct);
  CHECK(classify2d(mat2(3, 0, 0, 2)) == Case2D::IntDistinct);
  CHECK(classify2d(mat2(3, 1, 0, 3)) == Case2D::NonDiagonalizable);
  CHECK(classify2d(mat2(-2, 0, 0, -2)) == Case2D::Scalar);
  CHECK(classify2d(mat2(0, -1, 1, 0)) == Case2D::RootOfUnityRatio);
  CHECK(classify2d(mat2(2, -3, 1, 1)) == Case2D::ComplexNotRootOfUnity);
  CHECK_THROWS_AS(classify2d(make_map(IntMatrix::identity(3))), std::invalid_argument);
}

TEST_CASE("orbit seed and recursion") {
  // the motivating mixed-sign example: standard quadrant already straddles
  OrbitState2D s = orbit_seed(mat2(-1, 3, 3, 2));
  CHECK(triple(s) == std::array<Int, 3>{3, -3, 3});
  CHECK(s.gamma == 1);
  CHECK(s.a() == -1);
  CHECK(s.d() == 2);
  OrbitState2D t = orbit_forward(s);
  CHECK(triple(t) == std::array<Int, 3>{3, 3, 3});
  // A_1 has a = 2, d = -1
  CHECK(t.a() == 2);
  CHECK(t.d() == -1);
  CHECK(triple(orbit_forward(t)) == std::array<Int, 3>{3, -3, 3});

  // period-4 example, seeded from the standard basis
  OrbitState2D q = orbit_seed(mat2(2, 1, 1, -1));
  CHECK(triple(q) == std::array<Int, 3>{1, 3, 1});
  q = orbit_forward(q);
  CHECK(triple(q) == std::array<Int, 3>{1, -3, 1});
  q = orbit_forward(q);
  CHECK(triple(q) == std::array<Int, 3>{1, -1, 3});
  q = orbit_forward(q);
  CHECK(triple(q) == std::array<Int, 3>{1, 1, 3});
  q = orbit_forward(q);
  CHECK(triple(q) == std::array<Int, 3>{1, 3, 1});

  CHECK_THROWS_AS(orbit_seed(mat2(2, 1, 1, 1)), std::invalid_argument);
}

TEST_CASE("detect_period") {
  OrbitCycle c1 = detect_period(orbit_seed(mat2(-1, 3, 3, 2)));
  CHECK(c1.period == 2);
  OrbitCycle c2 = detect_period(orbit_seed(mat2(2, 1, 1, -1)));
  CHECK(c2.period == 4);
  // replay: state(n + p) = state(n) for three consecutive n
  OrbitState2D a = c2.states[1];
  OrbitState2D b = a;
  for (int i = 0; i < c2.period; ++i) b = orbit_forward(b);
  for (int n = 0; n < 3; ++n) {
    CHECK(triple(a) == triple(b));
    a = orbit_forward(a);
    b = orbit_forward(b);
  }
}

TEST_CASE("conserved quantities and backward inverse") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<long> coef(-10, 10);
  std::uniform_int_distribution<long> pos(1, 20);
  int tested = 0;
  while (tested < 100) {
    OrbitState2D s;
    s.v1 = v2(1, 0);
    s.v2 = v2(0, 1);
    long a = coef(rng), d = coef(rng);
    s.b = pos(rng);
    s.c = pos(rng);
    s.gamma = a + d;
    s.delta = a - d;
    Int disc = s.discriminant();
    Int root;
    mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
    if (root * root == disc) continue;  // rational eigenvalues: ties possible
    ++tested;
    if (s.c < s.b - abs(s.delta)) {
      // backward is the inverse on normalized states only: swap generators
      std::swap(s.b, s.c);
      s.delta = -s.delta;
      std::swap(s.v1, s.v2);
    }
    OrbitState2D cur = s;
    for (int n = 0; n < 200; ++n) {
      OrbitState2D nxt = orbit_forward(cur);
      CHECK(nxt.discriminant() == disc);
      CHECK(nxt.gamma == s.gamma);
      CHECK(nxt.b > 0);
      CHECK(nxt.c > 0);
      // the two branches are exact inverses, including the basis pair
      OrbitState2D back = orbit_backward(nxt);
      CHECK(triple(back) == triple(cur));
      CHECK(back.v1 == cur.v1);
      CHECK(back.v2 == cur.v2);
      cur = nxt;
    }
  }
  CHECK(tested == 100);
}

TEST_CASE("branch choices match the continued fraction of z1") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<long> coef(-8, 8);
  std::uniform_int_distribution<long> pos(1, 12);
  int tested = 0;
  while (tested < 20) {
    OrbitState2D s;
    s.v1 = v2(1, 0);
    s.v2 = v2(0, 1);
    long a = coef(rng), d = coef(rng);
    s.b = pos(rng);
    s.c = pos(rng);
    s.gamma = a + d;
    s.delta = a - d;
    Int disc = s.discriminant();
    Int root;
    mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
    if (root * root == disc) continue;
    ++tested;
    // z1 = (-delta + sqrt(D)) / (2b)
    std::vector<Int> oracle = surd_continued_fraction(-s.delta, 2 * s.b, disc, 20);
    std::vector<Int> digits = branch_digits(s, 20);
    CHECK(digits == oracle);
  }
  CHECK(tested == 20);
}

TEST_CASE("decide_regular_stabilizable") {
  RegularDecision no = decide_regular_stabilizable(mat2(-1, 3, 3, 2));
  CHECK(no.tag == RegularDecision::No);
  REQUIRE(no.cycle.size() == 2);
  for (const auto& st : no.cycle) CHECK(abs(st.delta) > st.gamma);

  RegularDecision yes = decide_regular_stabilizable(mat2(2, 1, 1, -1));
  CHECK(yes.tag == RegularDecision::Yes);
  CHECK(abs(yes.witness.delta) <= yes.witness.gamma);
  CHECK(yes.witness.a() >= 0);
  CHECK(yes.witness.d() >= 0);
  // the state (1, 1, 3) with A = [[1,1],[3,0]] >= 0 occurs in the cycle
  bool found = false;
  for (const auto& st : detect_period(orbit_seed(mat2(2, 1, 1, -1))).states)
    if (triple(st) == std::array<Int, 3>{1, 1, 3}) found = true;
  CHECK(found);
  // the witness cones are invariant for phi resp. phi^{-1}
  IntMatrix m(2, {v2(2, 1), v2(1, -1)});
  for (const auto& g : yes.sigma1.gens) CHECK(cone_contains(yes.sigma1, m.apply(g)));
  IntMatrix psi = m.adjugate();
  Cone neg2 = make_cone(2, {vec_neg(yes.sigma2.gens[0]), vec_neg(yes.sigma2.gens[1])});
  for (const auto& g : yes.sigma2.gens) {
    Vec w = psi.apply(g);
    CHECK((cone_contains(yes.sigma2, w) || cone_contains(neg2, w)));
  }

  CHECK(decide_regular_stabilizable(mat2(2, 1, 1, 1)).tag == RegularDecision::NotApplicable);
}

TEST_CASE("divisor_obstruction") {
  // phi^3 = 8 id but |det| = 4 admits no compatible multiplier pattern
  MonomialMap motex2 = mat2(-1, -1, 3, -1);
  IntMatrix cube = motex2.matrix.pow(3);
  CHECK(cube == IntMatrix(2, {v2(8, 0), v2(0, 8)}));
  CHECK(divisor_obstruction(motex2));
  CHECK_FALSE(divisor_obstruction(mat2(0, -1, 1, 0)));
  CHECK_FALSE(divisor_obstruction(mat2(2, 0, 0, 2)));
  CHECK_FALSE(divisor_obstruction(mat2(2, 1, 1, 1)));  // no scalar power
}

TEST_CASE("stabilize_2d: scalar and non-diagonalizable") {
  Fan f = p2_fan();
  MonomialMap sc = mat2(-2, 0, 0, -2);
  Stab2DResult r = stabilize_2d(sc, f);
  CHECK(r.tag == Stab2DResult::RegularStabilized);
  check_output(sc, f, r);

  MonomialMap nd = mat2(3, 1, 0, 3);
  Stab2DResult rn = stabilize_2d(nd, p1xp1_fan());
  CHECK(rn.tag == Stab2DResult::RegularStabilized);
  check_output(nd, p1xp1_fan(), rn);

  // negative double eigenvalue: symmetric variant of the same construction
  MonomialMap ndn = mat2(-3, 1, 0, -3);
  Stab2DResult rm = stabilize_2d(ndn, p1xp1_fan());
  CHECK(rm.tag == Stab2DResult::RegularStabilized);
  check_output(ndn, p1xp1_fan(), rm);
}

TEST_CASE("stabilize_2d: complex eigenvalues") {
  Stab2DResult r = stabilize_2d(mat2(2, -3, 1, 1), p2_fan());
  CHECK(r.tag == Stab2DResult::ImpossibleAny);
  CHECK_FALSE(r.reason.empty());

  // rotation by 90 degrees: regular invariant fan from ray closure
  MonomialMap rot = mat2(0, -1, 1, 0);
  Stab2DResult rr = stabilize_2d(rot, p2_fan());
  CHECK(rr.tag == Stab2DResult::RegularStabilized);
  CHECK_FALSE(rr.impossible_regular);
  check_output(rot, p2_fan(), rr);

  // root-of-unity ratio with the divisor obstruction: stabilized, but no
  // complete regular fan can ever be invariant
  MonomialMap motex2 = mat2(-1, -1, 3, -1);
  Stab2DResult r2 = stabilize_2d(motex2, p2_fan());
  CHECK(r2.tag == Stab2DResult::StabilizedIrregular);
  CHECK(r2.impossible_regular);
  CHECK_FALSE(r2.reason.empty());
  check_output(motex2, p2_fan(), r2);
  // every ray maps onto a ray of the fan
  for (const auto& ray : r2.fan.rays)
    CHECK(r2.fan.ray_index(primitive(motex2.matrix.apply(ray))) >= 0);
}

TEST_CASE("stabilize_2d: integer eigenvalues") {
  // Theorem C(b) example: phi swaps the two planted cones at the eigenray
  MonomialMap m = mat2(2, 0, 0, -1);
  Fan f = p1xp1_fan();
  Stab2DResult r = stabilize_2d(m, f);
  CHECK(r.tag == Stab2DResult::RegularStabilized);
  check_output(m, f, r);
  Cone s1 = make_cone(2, {v2(1, 0), v2(1, 1)});
  Cone s2 = make_cone(2, {v2(1, 0), v2(1, -1)});
  CHECK(fan_has_cone(r.fan, s1));
  CHECK(fan_has_cone(r.fan, s2));
  CHECK(fan_has_cone(r.fan, make_cone(2, {v2(-1, 0), v2(-1, -1)})));
  CHECK(cone_contains(s2, m.matrix.apply(v2(1, 1))));
  CHECK(cone_contains(s1, m.matrix.apply(v2(1, -1))));

  // distinct positive integer eigenvalues (same sign)
  MonomialMap m2 = mat2(3, 0, 0, 2);
  Stab2DResult r2 = stabilize_2d(m2, p2_fan());
  CHECK(r2.tag == Stab2DResult::RegularStabilized);
  check_output(m2, p2_fan(), r2);

  // negative dominant eigenvalue, mixed sign
  MonomialMap m3 = mat2(-3, 0, 1, 1);
  Stab2DResult r3 = stabilize_2d(m3, p1xp1_fan());
  CHECK(r3.tag == Stab2DResult::RegularStabilized);
  check_output(m3, p1xp1_fan(), r3);

  // mu2 = -mu1: a power of phi is scalar, ray closure applies
  MonomialMap m4 = mat2(0, 1, 4, 0);
  Stab2DResult r4 = stabilize_2d(m4, p1xp1_fan());
  REQUIRE((r4.tag == Stab2DResult::RegularStabilized ||
           r4.tag == Stab2DResult::StabilizedIrregular));
  check_output(m4, p1xp1_fan(), r4);
}

TEST_CASE("stabilize_2d: irrational same sign") {
  MonomialMap m = mat2(2, 1, 1, 1);
  Stab2DResult r = stabilize_2d(m, p2_fan());
  CHECK(r.tag == Stab2DResult::RegularStabilized);
  check_output(m, p2_fan(), r);

  // negative trace variant
  MonomialMap m2 = mat2(-2, -1, -1, -1);
  Stab2DResult r2 = stabilize_2d(m2, p2_fan());
  CHECK(r2.tag == Stab2DResult::RegularStabilized);
  check_output(m2, p2_fan(), r2);
}

TEST_CASE("stabilize_2d: irrational mixed sign, regular case") {
  MonomialMap m = mat2(2, 1, 1, -1);
  Stab2DResult r = stabilize_2d(m, p1xp1_fan());
  CHECK(r.tag == Stab2DResult::RegularStabilized);
  CHECK_FALSE(r.impossible_regular);
  check_output(m, p1xp1_fan(), r);
}

TEST_CASE("stabilize_2d: irrational mixed sign, irregular fallback") {
  MonomialMap m = mat2(-1, 3, 3, 2);
  Stab2DResult r = stabilize_2d(m, p1xp1_fan());
  CHECK(r.tag == Stab2DResult::StabilizedIrregular);
  CHECK(r.impossible_regular);
  CHECK(r.cycle_proof.size() == 2);
  for (const auto& st : r.cycle_proof) CHECK(abs(st.delta) > st.gamma);
  check_output(m, p1xp1_fan(), r);
  REQUIRE(r.irregular_cones.size() == 4);
  // the planted cones are in the fan, and nothing else is irregular
  for (const auto& c : r.irregular_cones) CHECK(fan_has_cone(r.fan, c));
  for (size_t i = 0; i < r.fan.cones.size(); ++i) {
    Cone c = r.fan.cone_at(static_cast<int>(i));
    bool planted = false;
    for (const auto& p : r.irregular_cones)
      if (c == p) planted = true;
    if (!planted) CHECK(cone_is_regular(c));
  }
}

TEST_CASE("stabilize_2d: randomized mixed-sign family") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<long> coef(-3, 3);
  int tested = 0;
  int regular_seen = 0;
  while (tested < 10) {
    IntMatrix mm(2, {v2(coef(rng), coef(rng)), v2(coef(rng), coef(rng))});
    if (mm.det() == 0) continue;
    MonomialMap m = make_map(mm);
    if (classify2d(m) != Case2D::IrrationalMixedSign) continue;
    if (sign(mm.trace()) == 0) continue;
    ++tested;
    RegularDecision dec = decide_regular_stabilizable(m);
    Stab2DResult r = stabilize_2d(m, p1xp1_fan());
    check_output(m, p1xp1_fan(), r);
    if (dec.tag == RegularDecision::Yes) {
      CHECK(r.tag == Stab2DResult::RegularStabilized);
      ++regular_seen;
    } else {
      CHECK(r.tag == Stab2DResult::StabilizedIrregular);
      CHECK(r.impossible_regular);
    }
  }
  CHECK(tested == 10);
  CHECK(regular_seen > 0);
}
