#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "sie/harness.hpp"
#include "sie/multidim.hpp"

using namespace sie;

TEST_SUITE("multidim2d") {
  TEST_CASE("built-in characteristics pass validation") {
    for (const char* name : {"cos2", "sin2", "cos3"}) {
      const Characteristic ch = characteristic(name);
      CHECK(ch.name == name);
      for (double th : ch.zero_rays) CHECK(std::abs(ch.phi(th)) < 1e-12);
    }
    CHECK_THROWS_AS(characteristic("cos1x"), Error);
  }

  TEST_CASE("characteristic validation rejects bad input") {
    CHECK_THROWS_AS(make_characteristic("mean", [](double t) { return 1.0 + std::cos(2 * t); }, {}), Error);
    CHECK_THROWS_AS(make_characteristic("ray", [](double t) { return std::cos(2 * t); }, {0.0}), Error);
    CHECK_NOTHROW(make_characteristic("ok", [](double t) { return std::cos(2 * t); }, {pi / 4}));
  }

  TEST_CASE("panel coefficient matches tensor cubature off the panel") {
    gen::Gen g(101);
    const Characteristic ch = characteristic("cos2");
    for (int trial = 0; trial < 30; ++trial) {
      const Rect r{g.uniform(-1, 0), g.uniform(0.1, 1), g.uniform(-1, 0), g.uniform(0.1, 1)};
      double tx, ty;
      do {
        tx = g.uniform(-2, 2);
        ty = g.uniform(-2, 2);
      } while (tx > r.x0 - 0.01 && tx < r.x1 + 0.01 && ty > r.y0 - 0.01 && ty < r.y1 + 0.01);
      CHECK(panel_coeff(tx, ty, r, ch) == doctest::Approx(panel_coeff_cubature(tx, ty, r, ch)).epsilon(1e-8).scale(1e-10));
    }
  }

  TEST_CASE("principal value is additive across a centred square") {
    gen::Gen g(102);
    for (const char* name : {"cos2", "sin2", "cos3"}) {
      const Characteristic ch = characteristic(name);
      for (int trial = 0; trial < 5; ++trial) {
        const Rect R{-1.0, g.uniform(0.5, 1.5), -1.0, g.uniform(0.5, 1.5)};
        const double tx = g.uniform(-0.5, 0.3), ty = g.uniform(-0.5, 0.3), e = 0.05;
        // the centred square contributes zero; cover the rest by four rectangles
        const Rect pieces[] = {{R.x0, tx - e, R.y0, R.y1}, {tx + e, R.x1, R.y0, R.y1}, {tx - e, tx + e, R.y0, ty - e},
                               {tx - e, tx + e, ty + e, R.y1}};
        double ref = 0.0;
        for (const Rect& q : pieces) ref += panel_coeff_cubature(tx, ty, q, ch);
        CHECK(std::abs(panel_coeff(tx, ty, {tx - e, tx + e, ty - e, ty + e}, ch)) < 1e-12);
        CHECK(panel_coeff(tx, ty, R, ch) == doctest::Approx(ref).epsilon(1e-8).scale(1e-10));
      }
    }
  }

  TEST_CASE("targets on a panel edge are rejected") {
    const Characteristic ch = characteristic("sin2");
    CHECK_THROWS_AS(panel_coeff(0.0, 0.5, {0.0, 1.0, 0.0, 1.0}, ch), Error);
    CHECK_THROWS_AS(panel_coeff_cubature(0.5, 0.5, {0.0, 1.0, 0.0, 1.0}, ch), Error);
  }

  TEST_CASE("merged intervals tile the square") {
    const Grid2D g = build_grid(6, 1.5, 0.1, 0.2);
    double len = 0.0;
    for (int k = 1; k <= g.N; ++k) {
      const auto [a, b] = g.interval(k);
      len += b - a;
      CHECK(g.node_x(k) > a);
      CHECK(g.node_x(k) < b);
    }
    CHECK(len == doctest::Approx(3.0));
    CHECK(g.index(g.N, g.N) == g.N * g.N - 1);
    CHECK_THROWS_AS(build_grid(3, 1.0, 0.1, 0.1), Error);
    CHECK_THROWS_AS(build_grid(6, 1.0, g.h, 0.1), Error);
  }

  TEST_CASE("operator of a constant at the centre is a") {
    const Problem2D p = multidim_default_problem();
    const cplx v = apply_operator(p, 1.0, [](double, double) { return cplx{1.0}; }, 0.0, 0.0);
    CHECK(std::abs(v - p.a(0.0, 0.0)) < 1e-9);
  }

  TEST_CASE("tuned shift is dominant and the error decreases") {
    std::function<cplx(double, double)> exact;
    const Problem2D p = multidim_default_problem("sin2", 0.1, &exact);
    double prev = INFINITY;
    for (int N : {6, 12}) {
      const ShiftChoice sc = tune_shift(p, N, 1.0);
      REQUIRE(sc.feasible);
      CHECK(sc.dominance.min_margin > 0.0);
      const Solution2D sol = assemble_solve(p, build_grid(N, 1.0, sc.h1, sc.h2));
      double e = 0.0;
      for (int k = 1; k <= N; ++k)
        for (int l = 1; l <= N; ++l)
          e = std::max(e, std::abs(sol.x[sol.grid.index(k, l)] - exact(sol.grid.node_x(k), sol.grid.node_y(l))));
      CHECK(e < prev);
      prev = e;
    }
  }

  TEST_CASE("infeasible tuning is reported") {
    Problem2D p = multidim_default_problem();
    p.a = [](double, double) { return cplx{0.01}; };
    p.b = [](double, double) { return cplx{1.0}; };
    CHECK_FALSE(tune_shift(p, 8, 1.0).feasible);
    CHECK_THROWS_AS(assemble_solve(p, 8), Error);
  }

  TEST_CASE("block jacobi agrees with the direct solve") {
    const Problem2D p = multidim_default_problem();
    const Grid2D g = build_grid(8, 1.0, 0.5 * 2.0 / 10, 0.5 * 2.0 / 10);
    const Solution2D direct = assemble_solve(p, g);
    for (int P : {1, 4, 16}) {
      const Solution2D it = parallel_solve(p, g, P);
      CHECK(max_abs_diff(it.x, direct.x) < 1e-10);
    }
    CHECK_THROWS_AS(parallel_solve(p, g, 5), Error);
  }

  TEST_CASE("parallel and serial assembly agree bitwise") {
    const Problem2D p = multidim_default_problem();
    const Grid2D g = build_grid(6, 1.0, 0.1, 0.12);
    const DenseSystem a = assemble_grid(p, g, Exec::parallel), b = assemble_grid(p, g, Exec::serial);
    CHECK((a.C - b.C).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.F - b.F).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("spline collocation of degree one") {
    std::function<cplx(double, double)> exact;
    const Problem2D p = multidim_default_problem("sin2", 0.1, &exact);
    SplineParams2D prm;
    prm.N = 6;
    prm.r = 1;
    const SplineSolution2D sol = solve_spline(p, prm, exact);
    CHECK(sol.report.dominance.dominant);
    CHECK(sol.report.error < 0.1);
    CHECK(std::abs(sol(sol.nodes[4], sol.nodes[3]) - sol.x[4 * 6 + 3]) < 1e-12);
  }
}
