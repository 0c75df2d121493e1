#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fanstab/refine.hpp"

using namespace fanstab;

namespace {

Vec v2(long a, long b) { return Vec{Int(a), Int(b)}; }
Vec v3(long a, long b, long c) { return Vec{Int(a), Int(b), Int(c)}; }

Fan p2_fan() {
  Fan f;
  f.rank = 2;
  f.rays = {v2(1, 0), v2(0, 1), v2(-1, -1)};
  f.cones = {{0, 1}, {1, 2}, {0, 2}};
  return f;
}

Fan p3_fan() {
  Fan f;
  f.rank = 3;
  f.rays = {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1), v3(-1, -1, -1)};
  f.cones = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}};
  return f;
}

Fan p1xp1_fan() {
  Fan f;
  f.rank = 2;
  f.rays = {v2(1, 0), v2(0, 1), v2(-1, 0), v2(0, -1)};
  f.cones = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
  return f;
}

bool fan_has_cone(const Fan& f, const Cone& c) {
  // as a face of some stored cone
  for (const auto& idx : f.cones) {
    Cone big = f.cone_of(idx);
    std::set<Vec> gs(big.gens.begin(), big.gens.end());
    bool sub = true;
    for (const auto& g : c.gens)
      if (!gs.count(g)) sub = false;
    if (sub) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("incorporate_cone 2D split") {
  Fan f = p2_fan();
  IncorporationPlan plan;
  plan.sigma0 = make_cone(2, {v2(1, 0), v2(0, 1)});
  plan.sigma1 = make_cone(2, {v2(1, 1), v2(0, 1)});
  Fan out = incorporate_cone(f, plan);
  CHECK(validate_fan(out).ok);
  CHECK(is_refinement(out, f));
  CHECK(fan_has_cone(out, plan.sigma1));
  CHECK(fan_has_cone(out, make_cone(2, {v2(1, 0), v2(1, 1)})));
  CHECK(out.cones.size() == 4);
}

TEST_CASE("incorporate_cone identity") {
  Fan f = p2_fan();
  IncorporationPlan plan;
  plan.sigma0 = make_cone(2, {v2(1, 0), v2(0, 1)});
  plan.sigma1 = plan.sigma0;
  Fan out = incorporate_cone(f, plan);
  CHECK(out == f);
}

TEST_CASE("incorporate_cone interior wedge in 3D") {
  Fan f = p3_fan();
  IncorporationPlan plan;
  plan.sigma0 = make_cone(3, {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)});
  // wedge sharing the ray e1 with sigma0, other generators interior
  plan.sigma1 = make_cone(3, {v3(1, 0, 0), v3(1, 1, 1), v3(1, 1, 2)});
  Fan out = incorporate_cone(f, plan);
  CHECK(validate_fan(out).ok);
  CHECK(is_refinement(out, f));
  CHECK(classify_fan(out).simplicial);
  CHECK(fan_has_cone(out, plan.sigma1));
  // all other maximal cones of f survive unchanged
  for (size_t i = 1; i < f.cones.size(); ++i) {
    Cone c = f.cone_at(static_cast<int>(i));
    bool present = false;
    for (const auto& idx : out.cones)
      if (out.cone_of(idx) == c) present = true;
    CHECK(present);
  }
  // new rays only from sigma1
  for (const auto& r : out.rays) {
    if (f.ray_index(r) >= 0) continue;
    CHECK(cone_contains(plan.sigma1, r));
    bool is_gen = false;
    for (const auto& g : plan.sigma1.gens)
      if (g == r) is_gen = true;
    CHECK(is_gen);
  }
}

TEST_CASE("incorporate_cone rejects boundary-crossing plans") {
  Fan f = p3_fan();
  IncorporationPlan plan;
  plan.sigma0 = make_cone(3, {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)});
  // (1,1,0) lies on the boundary of sigma0 but is not one of its rays
  plan.sigma1 = make_cone(3, {v3(1, 0, 0), v3(1, 1, 0), v3(1, 1, 1)});
  CHECK_THROWS_AS(incorporate_cone(f, plan), std::invalid_argument);
}

TEST_CASE("property: random interior plans satisfy the four claims") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> coef(1, 4);
  int done = 0;
  while (done < 25) {
    Fan f = p3_fan();
    IncorporationPlan plan;
    plan.sigma0 = make_cone(3, {v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)});
    std::vector<Vec> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(v3(coef(rng), coef(rng), coef(rng)));
    Cone s1 = make_cone(3, gens);
    s1.gens = irredundant_generators(s1.gens, 3);
    if (!s1.is_simplicial()) continue;
    plan.sigma1 = s1;
    ++done;
    Fan out = incorporate_cone(f, plan);
    CHECK(validate_fan(out).ok);
    CHECK(is_refinement(out, f));
    CHECK(fan_has_cone(out, s1));
    for (size_t i = 1; i < f.cones.size(); ++i) {
      Cone c = f.cone_at(static_cast<int>(i));
      bool present = false;
      for (const auto& idx : out.cones)
        if (out.cone_of(idx) == c) present = true;
      CHECK(present);
    }
    for (const auto& r : out.rays) {
      if (f.ray_index(r) >= 0) continue;
      bool is_gen = false;
      for (const auto& g : s1.gens)
        if (g == r) is_gen = true;
      CHECK(is_gen);
    }
  }
}

TEST_CASE("incorporate_cone_projective") {
  Fan f = p2_fan();
  auto h = projectivity_certificate(f);
  REQUIRE(h.has_value());
  IncorporationPlan plan;
  plan.sigma0 = make_cone(2, {v2(1, 0), v2(0, 1)});
  plan.sigma1 = make_cone(2, {v2(1, 1), v2(0, 1)});
  auto [out, hp] = incorporate_cone_projective(f, *h, plan);
  CHECK(validate_fan(out).ok);
  CHECK(is_strictly_convex_support(hp));

  // identity plan
  plan.sigma1 = plan.sigma0;
  auto [same, hsame] = incorporate_cone_projective(f, *h, plan);
  CHECK(same == f);

  // on P1xP1, h' differs from h only inside the refined quadrant
  Fan q = p1xp1_fan();
  auto hq = projectivity_certificate(q);
  REQUIRE(hq.has_value());
  IncorporationPlan plan2;
  plan2.sigma0 = make_cone(2, {v2(1, 0), v2(0, 1)});
  plan2.sigma1 = make_cone(2, {v2(2, 1), v2(1, 1)});
  auto [out2, hp2] = incorporate_cone_projective(q, *hq, plan2);
  CHECK(is_strictly_convex_support(hp2));
  Cone quad = plan2.sigma0;
  for (size_t i = 0; i < out2.cones.size(); ++i) {
    Cone c = out2.cone_at(static_cast<int>(i));
    bool inside = true;
    for (const auto& g : c.gens)
      if (!cone_contains(quad, g)) inside = false;
    if (!inside) {
      // value agreement with hq on every generator outside the quadrant
      for (const auto& g : c.gens)
        CHECK(qvec_dot(hp2.xi[i], to_qvec(g)) == eval_support(*hq, g));
    }
  }
}

TEST_CASE("regularize") {
  Fan f;
  f.rank = 2;
  f.rays = {v2(1, 0), v2(1, 2)};
  f.cones = {{0, 1}};
  Fan out = regularize(f);
  CHECK(classify_fan(out).regular);
  CHECK(is_refinement(out, f));
  CHECK(out.ray_index(v2(1, 1)) >= 0);

  Fan p2 = p2_fan();
  CHECK(regularize(p2) == p2);

  // symmetric option
  Fan sym;
  sym.rank = 2;
  sym.rays = {v2(1, 0), v2(1, 2), v2(-1, 0), v2(-1, -2)};
  sym.cones = {{0, 1}, {2, 3}};
  Fan rsym = regularize(sym, {.keep_regular = true, .symmetric = true});
  CHECK(classify_fan(rsym).regular);
  CHECK(classify_fan(rsym).symmetric);
  CHECK(rsym.ray_index(v2(1, 1)) >= 0);
  CHECK(rsym.ray_index(v2(-1, -1)) >= 0);
}

TEST_CASE("regularize a 3D singular cone") {
  Fan f;
  f.rank = 3;
  f.rays = {v3(1, 0, 0), v3(0, 1, 0), v3(1, 1, 2)};
  f.cones = {{0, 1, 2}};
  Fan out = regularize(f);
  CHECK(classify_fan(out).regular);
  CHECK(is_refinement(out, f));
}

TEST_CASE("barycentric_subdivide") {
  Fan f;
  f.rank = 2;
  f.rays = {v2(1, 0), v2(0, 1)};
  f.cones = {{0, 1}};
  Fan one = barycentric_subdivide(f, make_cone(2, {v2(1, 0), v2(0, 1)}));
  CHECK(one.ray_index(v2(1, 1)) >= 0);
  CHECK(one.cones.size() == 2);
  Fan two = barycentric_subdivide(one, make_cone(2, {v2(1, 0), v2(1, 1)}));
  CHECK(two.ray_index(v2(2, 1)) >= 0);
  std::set<Vec> rays(two.rays.begin(), two.rays.end());
  CHECK(rays == std::set<Vec>{v2(1, 0), v2(2, 1), v2(1, 1), v2(0, 1)});
  CHECK(validate_fan(two).ok);

  Fan g;
  g.rank = 2;
  g.rays = {v2(1, 1), v2(0, 1)};
  g.cones = {{0, 1}};
  Fan h = barycentric_subdivide(g, make_cone(2, {v2(1, 1), v2(0, 1)}));
  CHECK(h.ray_index(v2(1, 2)) >= 0);
}

TEST_CASE("subdivision_path") {
  Cone quad = make_cone(2, {v2(1, 0), v2(0, 1)});
  auto empty = subdivision_path(quad, quad);
  REQUIRE(empty.has_value());
  CHECK(empty->empty());

  Cone tau = make_cone(2, {v2(2, 1), v2(1, 1)});
  auto path = subdivision_path(tau, quad);
  REQUIRE(path.has_value());
  CHECK(path->size() == 2);
  // replay
  Fan f;
  f.rank = 2;
  f.rays = {v2(1, 0), v2(0, 1)};
  f.cones = {{0, 1}};
  Cone cur = quad;
  for (auto step : *path) {
    Vec mid = vec_add(cur.gens[0], cur.gens[1]);
    cur = (step == SubdivisionStep::Left) ? Cone{2, {cur.gens[0], mid}}
                                          : Cone{2, {mid, cur.gens[1]}};
  }
  CHECK(cur == tau);

  CHECK_FALSE(subdivision_path(quad, make_cone(2, {v2(0, 1), v2(-1, 0)})).has_value());
}

TEST_CASE("nested subdivision chains grow like Fibonacci") {
  // repeatedly take the child containing the golden-ratio direction
  Cone cur = make_cone(2, {v2(1, 0), v2(0, 1)});
  std::vector<Int> fib = {1, 1};
  for (int k = 2; k < 16; ++k) fib.push_back(fib[k - 1] + fib[k - 2]);
  for (int k = 1; k < 14; ++k) {
    Vec mid = vec_add(cur.gens[0], cur.gens[1]);
    // keep the child whose interior contains direction (phi, 1)
    Cone left{2, {cur.gens[0], mid}};
    // (phi,1): compare mid slope with golden ratio: choose by cross product
    // with the Fibonacci ray, which converges to it alternately
    Cone right{2, {mid, cur.gens[1]}};
    cur = (k % 2) ? right : left;
    Int maxc = 0;
    for (const auto& g : cur.gens)
      for (const auto& x : g)
        if (abs(x) > maxc) maxc = abs(x);
    CHECK(maxc >= fib[k]);
  }
}

TEST_CASE("common_refinement") {
  Fan p2 = p2_fan();
  CHECK(common_refinement(p2, p2) == p2);

  Fan cr = common_refinement(p2, p1xp1_fan());
  CHECK(validate_fan(cr).ok);
  std::set<Vec> rays(cr.rays.begin(), cr.rays.end());
  CHECK(rays == std::set<Vec>{v2(1, 0), v2(0, 1), v2(-1, -1), v2(-1, 0), v2(0, -1)});
  CHECK(is_refinement(cr, p2));
  CHECK(is_refinement(cr, p1xp1_fan()));

  Fan a, b;
  a.rank = b.rank = 2;
  a.rays = {v2(1, 0), v2(1, 1), v2(0, 1)};
  a.cones = {{0, 1}, {1, 2}};
  b.rays = {v2(1, 0), v2(1, -1), v2(0, 1)};
  b.cones = {{1, 0}, {0, 2}};
  // supports differ: b covers the (1,-1) wedge, a does not
  CHECK_THROWS_AS(common_refinement(a, b), std::invalid_argument);

  Fan a2 = a, b2;
  b2.rank = 2;
  b2.rays = {v2(1, 0), v2(1, 2), v2(0, 1)};
  b2.cones = {{0, 1}, {1, 2}};
  Fan cr2 = common_refinement(a2, b2);
  CHECK(cr2.cones.size() == 3);
}
