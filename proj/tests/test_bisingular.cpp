#include <cmath>

#include "doctest.h"
#include "gen.hpp"
#include "sie/bisingular.hpp"
#include "sie/harness.hpp"

using namespace sie;

namespace {

TrigPoly2D random_poly2(gen::Gen& g, int n) {
  TrigPoly2D p(n);
  for (Eigen::Index i = 0; i < p.c.size(); ++i) p.c(i) = g.complex();
  return p;
}

double coef_gap(const TrigPoly2D& a, const TrigPoly2D& b) {
  double e = 0.0;
  const int n = std::max(a.n, b.n);
  for (int k = -n; k <= n; ++k)
    for (int l = -n; l <= n; ++l) e = std::max(e, std::abs(a.coef(k, l) - b.coef(k, l)));
  return e;
}

// smallest disk through two or three of the points that holds all of them
double brute_radius(const std::vector<cplx>& pts) {
  auto holds = [&](cplx c, double r) {
    for (cplx z : pts)
      if (std::abs(z - c) > r * (1 + 1e-9) + 1e-12) return false;
    return true;
  };
  double best = INFINITY;
  const std::size_t m = pts.size();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const cplx c = (pts[i] + pts[j]) / 2.0;
      const double r = std::abs(pts[i] - pts[j]) / 2;
      if (holds(c, r)) best = std::min(best, r);
      for (std::size_t k = j + 1; k < m; ++k) {
        const cplx a = pts[i], b = pts[j], d = pts[k];
        const cplx ba = b - a, da = d - a;
        const double den = 2 * (ba.real() * da.imag() - ba.imag() * da.real());
        if (std::abs(den) < 1e-14) continue;
        const double bb = std::norm(ba), dd = std::norm(da);
        const cplx c3 = a + cplx{(da.imag() * bb - ba.imag() * dd) / den, (ba.real() * dd - da.real() * bb) / den};
        const double r3 = std::abs(c3 - a);
        if (holds(c3, r3)) best = std::min(best, r3);
      }
    }
  return best;
}

}  // namespace

TEST_SUITE("bisingular") {
  TEST_CASE("interpolation on the torus grid reproduces polynomials") {
    gen::Gen g(91);
    const TrigPoly2D p = random_poly2(g, 4);
    const TrigPoly2D q = interpolate2d(evaluate2d(p, 4));
    CHECK(coef_gap(p, q) < 1e-13);
    CHECK(std::abs(p(0.3, 1.7) - q(0.3, 1.7)) < 1e-12);
  }

  TEST_CASE("partial cauchy operators are commuting involutions") {
    gen::Gen g(92);
    for (int trial = 0; trial < 20; ++trial) {
      const TrigPoly2D p = random_poly2(g, g.integer(0, 6));
      CHECK(coef_gap(cauchy1(cauchy1(p)), p) == 0.0);
      CHECK(coef_gap(cauchy2(cauchy2(p)), p) == 0.0);
      CHECK(coef_gap(cauchy1(cauchy2(p)), cauchy12(p)) == 0.0);
      CHECK(coef_gap(cauchy2(cauchy1(p)), cauchy12(p)) == 0.0);
    }
  }

  TEST_CASE("quadrant parts recombine") {
    gen::Gen g(93);
    for (int trial = 0; trial < 20; ++trial) {
      const TrigPoly2D p = random_poly2(g, g.integer(0, 6));
      const QuadrantSplit q = quadrant_split(p);
      CHECK(coef_gap(q.recombine(), p) < 1e-15);
      CHECK(coef_gap(q.s12(), cauchy12(p)) < 1e-15);
    }
  }

  TEST_CASE("factorization of a smooth zero-winding coefficient") {
    auto G = [](cplx t1, cplx t2) { return std::exp(0.3 * t1 + 0.2 / t2 + 0.1 * t1 * t2); };
    const FactorData2D fd = factorize(G, 16);
    CHECK(fd.kappa1 == 0);
    CHECK(fd.kappa2 == 0);
    CHECK(fd.residual < 1e-10);
  }

  TEST_CASE("nonzero winding is reported") {
    auto G = [](cplx t1, cplx) { return t1; };
    CHECK_THROWS_AS(factorize(G, 6), Error);
  }

  TEST_CASE("enclosing disk matches the brute-force optimum") {
    gen::Gen g(94);
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<cplx> pts;
      const int m = g.integer(1, 12);
      for (int i = 0; i < m; ++i) pts.push_back(g.complex(2.0));
      const Disk d = min_enclosing_disk(pts, trial);
      for (cplx z : pts) CHECK(std::abs(z - d.center) <= d.radius * (1 + 1e-9) + 1e-12);
      if (m >= 2) CHECK(d.radius == doctest::Approx(brute_radius(pts)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(min_enclosing_disk({}), Error);
  }

  TEST_CASE("constant coefficients are solved exactly for polynomial data") {
    gen::Gen g(95);
    const int n = 4;
    const TrigPoly2D x = random_poly2(g, n);
    const TrigPoly2D sx = cauchy12(x);
    BisingularProblem p;
    const cplx a = 3.0, d = cplx(0.5, 0.5);
    p.a = [a](cplx, cplx) { return a; };
    p.d = [d](cplx, cplx) { return d; };
    p.f = [=](cplx t1, cplx t2) { return a * x(std::arg(t1), std::arg(t2)) + d * sx(std::arg(t1), std::arg(t2)); };
    const BisingularSolution sol = solve_collocation(p, n);
    for (double s1 : {0.2, 2.5})
      for (double s2 : {1.1, 4.0}) CHECK(std::abs(sol(s1, s2) - x(s1, s2)) < 1e-10);
  }

  TEST_CASE("collocation error decreases on the default problem") {
    std::function<cplx(cplx, cplx)> exact;
    const BisingularProblem p = bisingular_default_problem(&exact);
    double prev = INFINITY;
    for (int n : {4, 8, 12}) {
      const BisingularSolution sol = solve_collocation(p, n);
      double e = 0.0;
      for (double s1 = 0.05; s1 < 2 * pi; s1 += 0.5)
        for (double s2 = 0.1; s2 < 2 * pi; s2 += 0.5) e = std::max(e, std::abs(sol(s1, s2) - exact(unit(s1), unit(s2))));
      CHECK(e < prev);
      prev = e;
    }
  }

  TEST_CASE("riemann iteration contracts and agrees with collocation") {
    const BisingularProblem p = bisingular_default_problem();
    IterationConfig cfg;
    cfg.n = 8;
    const IterationResult it = riemann_iterate(p, cfg);
    CHECK(it.converged);
    CHECK(it.q < 1.0);
    for (double r : it.ratios) CHECK(r <= it.q * (1 + 1e-6) + 1e-12);
    const BisingularSolution sol = solve_collocation(p, 8);
    CHECK(std::abs(it.x(0.4, 2.2) - sol(0.4, 2.2)) < 1e-3);
  }

  TEST_CASE("four-term iteration solves a separable problem") {
    gen::Gen g(96);
    const int n = 5;
    const TrigPoly2D x = random_poly2(g, 3);
    FourTermProblem p;
    p.a = [](cplx, cplx) { return cplx{4.0}; };
    p.b = [](cplx, cplx) { return cplx{0.5}; };
    p.c = [](cplx, cplx) { return cplx{-0.4}; };
    p.d = [](cplx, cplx) { return cplx{0.3}; };
    const TrigPoly2D s1 = cauchy1(x), s2 = cauchy2(x), s12 = cauchy12(x);
    p.f = [=](cplx t1, cplx t2) {
      const double u = std::arg(t1), v = std::arg(t2);
      return 4.0 * x(u, v) + 0.5 * s1(u, v) - 0.4 * s2(u, v) + 0.3 * s12(u, v);
    };
    FourTermConfig cfg;
    cfg.n = n;
    const FourTermResult r = four_term_iterate(p, cfg);
    CHECK(r.converged);
    CHECK(std::abs(r.x(0.7, 5.1) - x(0.7, 5.1)) < 1e-9);
  }

  TEST_CASE("parallel and serial collocation assembly agree bitwise") {
    const BisingularProblem p = bisingular_default_problem();
    const FactorData2D fd = factorize(riemann_coefficient(p), 12);
    CHECK((assemble_collocation(p, fd, 6, Exec::parallel).C - assemble_collocation(p, fd, 6, Exec::serial).C)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
}
