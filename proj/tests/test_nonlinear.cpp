#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "sie/harness.hpp"
#include "sie/nonlinear.hpp"

using namespace sie;

namespace {

Vec random_vec(gen::Gen& g, int n, double r) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g.complex(r);
  return v;
}

}  // namespace

TEST_SUITE("nonlinear_circle") {
  TEST_CASE("basic newton converges quadratically on componentwise squares") {
    NonlinearSystem sys;
    sys.residual = [](const Vec& x) { return Vec(x.cwiseProduct(x) - Vec::Constant(x.size(), 2.0)); };
    sys.jacobian = [](const Vec& x) { return Mat(Mat(2.0 * x.asDiagonal())); };
    const NewtonResult r = newton_solve(sys, Vec::Constant(3, 1.5));
    CHECK(r.report.converged);
    CHECK(std::abs(r.x(0) - std::sqrt(2.0)) < 1e-12);
    const rvec& res = r.report.residuals;
    for (std::size_t m = 1; m + 1 < res.size(); ++m)
      if (res[m] < 0.1 && res[m + 1] > 1e-14) CHECK(res[m + 1] < 2.0 * res[m] * res[m]);
  }

  TEST_CASE("modified newton contracts linearly") {
    NonlinearSystem sys;
    sys.residual = [](const Vec& x) { return Vec(x.cwiseProduct(x) - Vec::Constant(x.size(), 2.0)); };
    sys.jacobian = [](const Vec& x) { return Mat(Mat(2.0 * x.asDiagonal())); };
    NewtonConfig cfg;
    cfg.mode = NewtonMode::modified;
    const NewtonResult r = newton_solve(sys, Vec::Constant(2, 1.5), cfg);
    CHECK(r.report.converged);
    for (double q : r.report.ratios) CHECK(q < 1.0);
  }

  TEST_CASE("inverse norm estimate is a lower bound") {
    gen::Gen g(81);
    Mat A = Mat::Identity(6, 6) * 3.0;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) A(i, j) += g.complex(0.4);
    const Mat inv = A.inverse();
    const double est = inverse_norm_estimate([&](const Vec& v) { return Vec(inv * v); }, 6, 3);
    CHECK(est <= mat_inf_norm(inv) * (1 + 1e-12));
    CHECK(est > 0.2 * mat_inf_norm(inv));
  }

  TEST_CASE("supplied derivatives agree with central differences") {
    const NonlinearCircleProblem p = nonlinear_default_problem();
    CHECK(derivative_mismatch(p) < 1e-6);
    NonlinearCircleProblem q = p;
    q.a_u = {};
    q.h_u = {};
    const NonlinearCircleProblem r = with_derivatives(q);
    CHECK(static_cast<bool>(r.a_u));
    CHECK(std::abs(r.a_u(unit(0.3), 0.7) - p.a_u(unit(0.3), 0.7)) < 1e-6);
  }

  TEST_CASE("scheme jacobians match finite differences of the residual") {
    gen::Gen g(82);
    const NonlinearCircleProblem p = nonlinear_default_problem();
    const int n = 5, N = 2 * n + 1;
    for (NonlinearScheme s : {NonlinearScheme::scheme1, NonlinearScheme::scheme2, NonlinearScheme::scheme3}) {
      const NonlinearSystem sys = scheme_system(p, n, s);
      const Vec x = Vec::Constant(N, 1.0) + random_vec(g, N, 0.3);
      const Vec dir = random_vec(g, N, 1.0);
      const double e = 1e-6;
      const Vec fd = (sys.residual(x + e * dir) - sys.residual(x - e * dir)) / (2 * e);
      CHECK((sys.jacobian(x) * dir - fd).cwiseAbs().maxCoeff() < 1e-6);
    }
  }

  TEST_CASE("parallel and serial residuals agree bitwise") {
    gen::Gen g(83);
    const NonlinearCircleProblem p = nonlinear_default_problem();
    const Vec x = random_vec(g, 17, 1.0);
    CHECK((residual_scheme1(p, x, 8, Exec::parallel) - residual_scheme1(p, x, 8, Exec::serial)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((jacobian_scheme3(p, x, 8, Exec::parallel) - jacobian_scheme3(p, x, 8, Exec::serial)).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("error decreases under refinement for every scheme") {
    std::function<cplx(cplx)> exact;
    const NonlinearCircleProblem p = nonlinear_default_problem(&exact);
    for (NonlinearScheme s : {NonlinearScheme::scheme1, NonlinearScheme::scheme2, NonlinearScheme::scheme3}) {
      double prev = INFINITY;
      for (int n : {8, 16, 32}) {
        const NonlinearCircleSolution sol = solve_nonlinear_circle(p, n, s);
        REQUIRE(sol.newton.converged);
        const double e = grid_norm([&](double u) { return sol.x(u) - exact(unit(u)); }, NormKind::holder_grid);
        CHECK(e < std::max(prev, 1e-12));
        prev = e;
      }
      CHECK(prev < 5e-2);
    }
  }

  TEST_CASE("l2 descent reduces the residual") {
    const NonlinearCircleProblem p = nonlinear_default_problem();
    const int n = 6;
    const DescentResult r = l2_descent(p, n, Vec::Constant(2 * n + 1, 1.0), NonlinearScheme::scheme3, 1e-8, 2000);
    REQUIRE(r.residuals.size() >= 2);
    CHECK(r.residuals.back() < r.residuals.front());
  }

  TEST_CASE("scheme names round trip") {
    for (NonlinearScheme s : {NonlinearScheme::scheme1, NonlinearScheme::scheme2, NonlinearScheme::scheme3})
      CHECK(nonlinear_scheme_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(nonlinear_scheme_from_string("scheme4"), Error);
  }
}
