#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "sie/harness.hpp"
#include "sie/spline.hpp"

using namespace sie;

TEST_SUITE("spline_collocation") {
  TEST_CASE("lagrange basis is a nodal partition of unity") {
    gen::Gen g(61);
    for (int trial = 0; trial < 30; ++trial) {
      const int r = g.integer(1, 5);
      rvec xs;
      for (int i = 0; i < r; ++i) xs.push_back(i + g.uniform(0.1, 0.9));
      const double t = g.uniform(-1.0, 6.0);
      double sum = 0.0;
      for (int j = 0; j < r; ++j) {
        sum += lagrange(xs, j, t);
        for (int i = 0; i < r; ++i) CHECK(lagrange(xs, j, xs[i]) == doctest::Approx(i == j ? 1.0 : 0.0));
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-10));
    }
  }

  TEST_CASE("mesh nodes and special intervals stay inside their panels") {
    gen::Gen g(62);
    for (int trial = 0; trial < 20; ++trial) {
      MeshParams p;
      p.n = g.integer(2, 20);
      p.r = g.integer(1, 3);
      p.h_star = g.uniform(0.05, 0.95) * (2.0 / p.n) / (p.r + 1);
      p.q = g.uniform(0.05, 0.95);
      const SplineMesh m = build_mesh(p);
      CHECK(static_cast<int>(m.nodes.size()) == p.n * p.r);
      for (int k = 0; k < p.n; ++k)
        for (int j = 0; j < p.r; ++j) {
          const double t = m.nodes[k * p.r + j];
          const auto [a, b] = m.special[k * p.r + j];
          CHECK(m.t[k] < a);
          CHECK(a < t);
          CHECK(t < b);
          CHECK(b < m.t[k + 1]);
          CHECK((t - a) / (b - t) == doctest::Approx(p.q));
        }
    }
  }

  TEST_CASE("invalid mesh parameters are rejected") {
    MeshParams p{4, 2, 0.3, 0.5, 0.0};
    CHECK_THROWS_AS(build_mesh(p), Error);
    p.h_star = 0.1;
    p.q = 1.0;
    CHECK_THROWS_AS(build_mesh(p), Error);
    p.q = 0.5;
    p.n = 0;
    CHECK_THROWS_AS(build_mesh(p), Error);
  }

  TEST_CASE("special defect against adaptive quadrature") {
    const MeshParams p{6, 3, 0.08, 0.4, 0.0};
    const SplineMesh m = build_mesh(p);
    for (int k : {0, 3, 5})
      for (int j = 0; j < 3; ++j) {
        const rvec xs = m.panel_nodes(k);
        const double t = xs[j];
        const auto [a, b] = m.special[k * 3 + j];
        const double ref = integrate(
            [&](double tau) { return std::abs(tau - t) < 1e-14 ? 0.0 : (lagrange(xs, j, tau) - 1.0) / (tau - t); }, a,
            b);
        CHECK(special_defect(m, k, j) == doctest::Approx(ref).epsilon(1e-10).scale(1e-12));
      }
  }

  TEST_CASE("tuned parameters give a dominant system") {
    const SegmentProblem p = spline_default_problem();
    for (int r : {1, 2, 3}) {
      const MeshParams mp = tune_params(p, 12, r, 0.0);
      CHECK(mp.q > 0.0);
      CHECK(mp.q < 1.0);
      CHECK(hadamard_margins(assemble_linear(p, mp)).dominant);
    }
  }

  TEST_CASE("tuning needs b away from zero") {
    SegmentProblem p = spline_default_problem();
    p.b = [](double) { return cplx{}; };
    CHECK_THROWS_AS(tune_params(p, 8, 1, 0.0), Error);
  }

  TEST_CASE("error decreases under refinement") {
    std::function<cplx(double)> exact;
    const SegmentProblem p = spline_default_problem(&exact);
    double prev = INFINITY;
    for (int n : {8, 16, 32}) {
      const double e = solve_linear(p, tune_params(p, n, 2, 0.0), exact).report.error;
      CHECK(e < prev);
      prev = e;
    }
  }

  TEST_CASE("parallel and serial assembly agree bitwise") {
    const SegmentProblem p = spline_default_problem();
    const MeshParams mp = tune_params(p, 10, 2, 0.0);
    const DenseSystem a = assemble_linear(p, mp, Exec::parallel), b = assemble_linear(p, mp, Exec::serial);
    CHECK((a.C - b.C).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.F - b.F).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("hilbert nonlinear problem without integral terms is pointwise") {
    HilbertNonlinearProblem p;
    p.a = [](double s) { return cplx{2.0 + std::cos(s)}; };
    p.f = [](double s) { return cplx{std::sin(s), 1.0}; };
    const HilbertSolution sol = solve_nonlinear_hilbert(p, 8, pi / 32);
    CHECK(sol.newton.converged);
    for (std::size_t k = 0; k < sol.x.size(); ++k)
      CHECK(std::abs(sol.x[k] - p.f(sol.nodes[k]) / p.a(sol.nodes[k])) < 1e-12);
  }
}
