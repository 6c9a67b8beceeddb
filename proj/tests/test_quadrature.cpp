#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "sie/quadrature.hpp"

using namespace sie;

TEST_SUITE("quadrature") {
  TEST_CASE("cot panel equals the adaptive integral of the cotangent") {
    gen::Gen g(21);
    for (int trial = 0; trial < 20; ++trial) {
      const double a = g.uniform(0.0, 3.0), b = a + g.uniform(0.1, 2.0);
      const double s = b + g.uniform(0.1, 2.0);
      const double ref = integrate([&](double u) { return 1.0 / std::tan(0.5 * (u - s)); }, a, b);
      CHECK(cot_panel(a, b, s) == doctest::Approx(ref).epsilon(1e-10));
    }
  }

  TEST_CASE("cot panel principal value with the target inside") {
    // symmetric panel about s has zero principal value
    CHECK(std::abs(cot_panel(0.5, 1.5, 1.0)) < 1e-15);
    // PV = limit of the two one-sided integrals
    const double a = 0.2, b = 1.3, s = 0.6, e = 1e-6;
    const double ref = integrate([&](double u) { return 1.0 / std::tan(0.5 * (u - s)); }, a, s - e) +
                       integrate([&](double u) { return 1.0 / std::tan(0.5 * (u - s)); }, s + e, b);
    CHECK(cot_panel(a, b, s) == doctest::Approx(ref).epsilon(1e-9));
  }

  TEST_CASE("cauchy segment panel closed form") {
    CHECK(cauchy_panel_segment(0.0, 1.0, 2.0) == doctest::Approx(std::log(0.5)));
    CHECK(std::abs(cauchy_panel_segment(-1.0, 1.0, 0.0)) < 1e-15);
    CHECK_THROWS_AS(cauchy_panel_segment(0.0, 1.0, 1.0), Error);
    CHECK_THROWS_AS(cot_panel(0.0, 1.0, 0.0), Error);
  }

  TEST_CASE("gauss legendre integrates polynomials of degree 2m-1 exactly") {
    for (int m : {1, 4, 16, 32}) {
      const auto [x, w] = gauss_legendre(m);
      for (int d = 0; d <= 2 * m - 1; ++d) {
        double acc = 0.0;
        for (int i = 0; i < m; ++i) acc += w[i] * std::pow(x[i], d);
        const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
        CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
      }
    }
  }

  TEST_CASE("endpoint quadrature handles algebraic singularities") {
    const double v = integrate_endpoint([](double t) { return 1.0 / std::sqrt(1.0 - t * t); }, -1.0, 1.0);
    CHECK(v == doctest::Approx(pi).epsilon(1e-8));
    CHECK(integrate([](double t) { return std::exp(t); }, 0.0, 1.0) == doctest::Approx(std::exp(1.0) - 1.0));
  }

  TEST_CASE("circle principal value on trigonometric polynomials") {
    gen::Gen g(22);
    const TrigPoly p = g.poly(4);
    for (int trial = 0; trial < 5; ++trial) {
      const double s = g.uniform(0.0, 2 * pi);
      cplx ref = 0.0;
      for (int k = -4; k <= 4; ++k)
        if (k != 0) ref += I * sign_mode(k) * p.coef(k) * unit(k * s);
      CHECK(std::abs(circle_cot_pv([&](double u) { return p(u); }, s) - ref) < 1e-9);
      CHECK(std::abs(pv_oracle([&](double u) { return p(u); }, s, 4096) - ref) < 1e-10);
    }
  }

  TEST_CASE("segment principal value of a polynomial") {
    // PV int_{-1}^{1} tau^2/(tau - t) = 2t + t^2 ln((1-t)/(1+t))
    for (double t : {-0.7, 0.0, 0.3, 0.9}) {
      const double ref = 2 * t + t * t * std::log((1 - t) / (1 + t));
      CHECK(std::abs(segment_pv([](double u) { return cplx{u * u}; }, t, -1.0, 1.0) - ref) < 1e-9);
    }
  }

  TEST_CASE("weak panel against endpoint quadrature") {
    const double eta = 0.5, s = 0.3;
    const double ref = integrate_endpoint(
        [&](double u) { return std::pow(std::abs(unit(u) - unit(s)), -eta); }, s, 1.2);
    CHECK(weak_panel(s, s, 1.2, eta) == doctest::Approx(ref).epsilon(1e-8));
  }

  TEST_CASE("weak weight caps near the target") {
    WeakKernelSpec spec{0.5, CutoffMode::node_spacing, 0.0};
    const int n = 8;
    const double cap = weak_weight(0.0, 1e-6, spec, n);
    CHECK(cap == doctest::Approx(std::pow(std::abs(unit(2 * pi / 17) - 1.0), -0.5)));
    CHECK(weak_weight(0.0, 1.0, spec, n) == doctest::Approx(std::pow(2 * std::sin(0.5), -0.5)));
    spec.eta = 0.0;
    CHECK(weak_weight(0.0, 1e-9, spec, n) == 1.0);
    spec = {0.5, CutoffMode::fixed_rho, 0.0};
    CHECK_THROWS_AS(weak_weight(0.0, 1.0, spec, n), Error);
  }
}
