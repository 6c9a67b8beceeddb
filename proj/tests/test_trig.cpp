#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "sie/quadrature.hpp"
#include "sie/trig.hpp"

using namespace sie;

TEST_SUITE("trig_core") {
  TEST_CASE("interpolation reproduces polynomials of degree n") {
    gen::Gen g(11);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = g.integer(0, 12);
      const TrigPoly p = g.poly(n);
      for (const NodeSet nodes : {plain_nodes(n), shifted_nodes(n)}) {
        const TrigPoly q = interpolate([&](double s) { return p(s); }, nodes);
        for (int k = -n; k <= n; ++k) CHECK(std::abs(q.coef(k) - p.coef(k)) < 1e-12);
      }
    }
  }

  TEST_CASE("interpolant matches samples at the nodes") {
    gen::Gen g(12);
    const int n = 7;
    cvec v(2 * n + 1);
    for (auto& z : v) z = g.complex();
    const TrigPoly q = interpolate(v);
    const cvec back = evaluate(q, plain_nodes(n));
    CHECK(max_abs_diff(v, back) < 1e-13);
  }

  TEST_CASE("even sample counts are rejected") {
    CHECK_THROWS_AS(interpolate(cvec(4, 1.0)), Error);
  }

  TEST_CASE("fundamental polynomial is the nodal delta") {
    const int n = 5;
    for (int k = 0; k < 2 * n + 1; ++k)
      for (int j = 0; j < 2 * n + 1; ++j)
        CHECK(fundamental_eval(n, k, plain_nodes(n).node(j)) == doctest::Approx(j == k ? 1.0 : 0.0).epsilon(1e-12));
    // direct sum of e^{im(s - s_k)}/(2n+1)
    const double s = 0.37;
    cplx acc = 0.0;
    for (int m = -n; m <= n; ++m) acc += unit(m * (s - plain_nodes(n).node(2)));
    CHECK(fundamental_eval(n, 2, s) == doctest::Approx(acc.real() / (2 * n + 1)).epsilon(1e-13));
  }

  TEST_CASE("cauchy operator squares to the identity") {
    gen::Gen g(13);
    for (int trial = 0; trial < 100; ++trial) {
      const TrigPoly p = g.poly(g.integer(0, 20));
      const TrigPoly q = cauchy_apply(cauchy_apply(p));
      for (int k = -p.n; k <= p.n; ++k) CHECK(q.coef(k) == p.coef(k));
    }
  }

  TEST_CASE("plemelj parts recombine to p and S p") {
    gen::Gen g(14);
    const TrigPoly p = g.poly(9);
    const auto [plus, minus] = plemel_split(p);
    const TrigPoly sum = plus - minus, diff = plus + minus, Sp = cauchy_apply(p);
    for (int k = -p.n; k <= p.n; ++k) {
      CHECK(std::abs(sum.coef(k) - p.coef(k)) < 1e-15);
      CHECK(std::abs(diff.coef(k) - Sp.coef(k)) < 1e-15);
    }
  }

  TEST_CASE("hilbert transform against the principal value oracle") {
    gen::Gen g(15);
    const TrigPoly p = g.poly(6);
    const TrigPoly h = hilbert_apply(p);
    for (int trial = 0; trial < 8; ++trial) {
      const double s = g.uniform(0.0, 2 * pi);
      CHECK(std::abs(h(s) - pv_oracle([&](double u) { return p(u); }, s, 1 << 12)) < 1e-10);
    }
  }

  TEST_CASE("derivative against central differences") {
    gen::Gen g(16);
    const TrigPoly p = g.poly(5);
    const TrigPoly d = derivative(p);
    const double s = 1.1, e = 1e-5;
    CHECK(std::abs(d(s) - (p(s + e) - p(s - e)) / (2 * e)) < 1e-8);
  }

  TEST_CASE("operator matrices act on nodal values") {
    gen::Gen g(17);
    const int n = 6;
    const TrigPoly p = g.poly(n);
    const Vec x = to_vec(evaluate(p, plain_nodes(n)));
    rvec rows;
    for (int j = 0; j < 9; ++j) rows.push_back(g.uniform(0.0, 2 * pi));
    const Vec ex = eval_matrix(n, rows) * x, sx = cauchy_matrix(n, rows) * x, hx = hilbert_matrix(n, rows) * x,
              dx = diff_matrix(n, rows) * x;
    for (int j = 0; j < 9; ++j) {
      CHECK(std::abs(ex(j) - p(rows[j])) < 1e-12);
      CHECK(std::abs(sx(j) - cauchy_apply(p)(rows[j])) < 1e-12);
      CHECK(std::abs(hx(j) - hilbert_apply(p)(rows[j])) < 1e-12);
      CHECK(std::abs(dx(j) - derivative(p)(rows[j])) < 1e-11);
    }
  }

  TEST_CASE("parallel and serial multiplier matrices agree bitwise") {
    rvec rows{0.1, 0.7, 2.3, 4.4, 6.0};
    auto mu = [](int m) { return cplx{1.0 / (1.0 + m * m), 0.5 * m}; };
    const Mat a = multiplier_matrix(8, rows, mu, 0.2, Exec::parallel);
    const Mat b = multiplier_matrix(8, rows, mu, 0.2, Exec::serial);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  }
}
