#include "sie/harness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "sie/bisingular.hpp"
#include "sie/dominant.hpp"
#include "sie/exceptional.hpp"
#include "sie/multidim.hpp"
#include "sie/quadrature.hpp"
#include "sie/spline.hpp"

namespace sie {

std::string to_string(Family f) {
  switch (f) {
    case Family::circle_linear: return "circle_linear";
    case Family::circle_weak: return "circle_weak";
    case Family::dominant_segment: return "dominant_segment";
    case Family::spline_segment: return "spline_segment";
    case Family::exceptional: return "exceptional";
    case Family::nonlinear_circle: return "nonlinear_circle";
    case Family::bisingular: return "bisingular";
    case Family::multidim2d: return "multidim2d";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  for (Family f : {Family::circle_linear, Family::circle_weak, Family::dominant_segment, Family::spline_segment,
                   Family::exceptional, Family::nonlinear_circle, Family::bisingular, Family::multidim2d})
    if (to_string(f) == s) return f;
  fail(ErrorKind::invalid_input, "unknown case family: " + s);
}

cplx box_noise(std::uint64_t seed, int channel, double u, double v) {
  const auto bu = std::bit_cast<std::uint64_t>(u), bv = std::bit_cast<std::uint64_t>(v);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(channel), static_cast<std::uint32_t>(bu),
                    static_cast<std::uint32_t>(bu >> 32), static_cast<std::uint32_t>(bv),
                    static_cast<std::uint32_t>(bv >> 32)};
  std::mt19937_64 g(seq);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  const double re = d(g);
  return {re, d(g)};
}

namespace {

double angle_of(cplx t) { return wrap_angle(std::arg(t)); }

rvec random_points(std::uint64_t seed, int count, double lo, double hi) {
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> d(lo, hi);
  rvec out(count);
  for (double& x : out) x = d(g);
  return out;
}

double max_dev(const cvec& a, const cvec& b) { return max_abs_diff(a, b); }

// dyadic tensor Gauss over a rectangle that avoids the target
cplx cell_cubature(const std::function<cplx(double, double)>& x, const Characteristic& ch, double tx, double ty,
                   double x0, double x1, double y0, double y1, int depth) {
  auto rule = [&](int m) {
    const auto [gx, gw] = gauss_legendre(m);
    cplx s{};
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double px = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * gx[i];
        const double py = 0.5 * (y0 + y1) + 0.5 * (y1 - y0) * gx[j];
        const double dx = px - tx, dy = py - ty;
        s += gw[i] * gw[j] * ch.phi(std::atan2(dy, dx)) / (dx * dx + dy * dy) * x(px, py);
      }
    return s * 0.25 * (x1 - x0) * (y1 - y0);
  };
  const cplx lo = rule(12), hi = rule(20);
  if (std::abs(hi - lo) <= 1e-12 * std::max(1.0, std::abs(hi)) || depth >= 40) return hi;
  const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
  return cell_cubature(x, ch, tx, ty, x0, xm, y0, ym, depth + 1) + cell_cubature(x, ch, tx, ty, xm, x1, y0, ym, depth + 1) +
         cell_cubature(x, ch, tx, ty, x0, xm, ym, y1, depth + 1) + cell_cubature(x, ch, tx, ty, xm, x1, ym, y1, depth + 1);
}

// PV int over [-A, A]^2 of phi x / r^2: Cartesian cells outside a centred square of half-size d,
// first-order Taylor term inside it
cplx cartesian_pv(const std::function<cplx(double, double)>& x, const Characteristic& ch, double tx, double ty,
                  double A, double d) {
  const double xs[4] = {-A, tx - d, tx + d, A}, ys[4] = {-A, ty - d, ty + d, A};
  cplx s{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != 1 || j != 1) s += cell_cubature(x, ch, tx, ty, xs[i], xs[i + 1], ys[j], ys[j + 1], 0);
  const double e = 1e-4;
  const cplx gx = (x(tx + e, ty) - x(tx - e, ty)) / (2 * e), gy = (x(tx, ty + e) - x(tx, ty - e)) / (2 * e);
  // int_S phi (cos, sin) / r = int phi(theta) (cos, sin) R(theta) d theta, R the exit distance of the square
  std::function<double(double)> mx = [&](double th) {
    return ch.phi(th) * std::cos(th) * d / std::max(std::abs(std::cos(th)), std::abs(std::sin(th)));
  };
  std::function<double(double)> my = [&](double th) {
    return ch.phi(th) * std::sin(th) * d / std::max(std::abs(std::cos(th)), std::abs(std::sin(th)));
  };
  for (int q = 0; q < 4; ++q) {
    const double a0 = -pi / 4 + q * pi / 2, a1 = a0 + pi / 2;
    s += gx * integrate(mx, a0, a1, 1e-14) + gy * integrate(my, a0, a1, 1e-14);
  }
  return s;
}

}  // namespace

ManufacturedCase circle_case(double alpha, double eta, CircleScheme scheme, double scale) {
  auto xs = [=](double s) {
    return scale * std::pow(std::abs(std::sin(0.5 * s)), alpha) * (1.0 + 0.3 * unit(s) + 0.2 * unit(-2 * s));
  };
  auto a = [](cplx t) { return 2.0 + 0.25 * (t + 1.0 / t); };
  auto b = [](cplx t) { return 0.5 + 0.1 * t; };
  auto h = [](cplx t, cplx tau) { return 0.2 * (1.0 + 0.5 * t * std::conj(tau)); };
  auto apply = [=](double s, double tol) {
    const cplx t = unit(s);
    std::function<cplx(double)> x = xs;
    const cplx mean = integrate_endpoint_complex(x, 0.0, 2 * pi, tol) / (2 * pi);
    const cplx S = -I * circle_cot_pv(x, s, {0.0}, tol) + mean;
    std::function<cplx(double)> w = [&](double sg) {
      const cplx tau = unit(sg);
      const double d = std::abs(tau - t);
      const double wt = eta == 0.0 ? 1.0 : std::pow(d, -eta);
      return h(t, tau) * wt * xs(sg) * tau;
    };
    cplx U;
    if (s > 1e-14 && s < 2 * pi - 1e-14)
      U = integrate_endpoint_complex(w, 0.0, s, tol) + integrate_endpoint_complex(w, s, 2 * pi, tol);
    else
      U = integrate_endpoint_complex(w, 0.0, 2 * pi, tol);
    return a(t) * xs(s) + b(t) * S + U / (2 * pi);
  };
  auto problem = [=](double eps, std::uint64_t seed) {
    CircleProblem p;
    p.a = [=](cplx t) { return a(t) + eps * box_noise(seed, 0, angle_of(t)); };
    p.b = [=](cplx t) { return b(t) + eps * box_noise(seed, 1, angle_of(t)); };
    p.f = [=](cplx t) { return apply(angle_of(t), 1e-11) + eps * box_noise(seed, 2, angle_of(t)); };
    p.h = h;
    p.weak.eta = eta;
    p.form = KernelForm::weak;
    return p;
  };
  ManufacturedCase c;
  c.family = eta == 0.0 ? Family::circle_linear : Family::circle_weak;
  c.name = to_string(c.family) + "-" + to_string(scheme);
  c.smoothness = alpha;
  c.solve = [=](int n) {
    return solve(problem(0.0, 0), n, scheme, NormKind::holder_grid, xs).report;
  };
  c.oracle_residual = [=](std::uint64_t seed) {
    double r = 0.0;
    for (double s : random_points(seed, 64, 0.0, 2 * pi)) r = std::max(r, std::abs(apply(s, 1e-11) - apply(s, 1e-13)));
    return r;
  };
  c.perturbed = [=](int n, double eps, std::uint64_t seed) {
    return solve(problem(eps, seed), n, scheme).nodal;
  };
  return c;
}

ManufacturedCase dominant_segment_case(int k, double p) {
  auto exact = [=](double t) { return (cheb_t(k + 1, t) + p / pi) / std::sqrt(1.0 - t * t); };
  ManufacturedCase c;
  c.family = Family::dominant_segment;
  c.name = "dominant_segment-index1";
  c.smoothness = k;
  c.solve = [=](int n) {
    SegmentDominantProblem prob{[=](double t) { return cplx(cheb_u(k, t)); }, SegmentIndex::one, p};
    const WeightedSolution sol = solve_dominant(prob, n);
    SolveReport rep;
    rep.scheme = "index1";
    rep.n = n;
    rep.error = 0.0;
    for (double t : sol.nodes) {
      rep.error = std::max(rep.error, std::abs(eval(sol, t) - exact(t)));
      rep.solution_norm = std::max(rep.solution_norm, std::abs(eval(sol, t)));
    }
    return rep;
  };
  c.oracle_residual = [=](std::uint64_t seed) {
    double r = 0.0;
    for (double t : random_points(seed, 64, -0.95, 0.95)) {
      // tau = cos u removes the weight; PV int_0^pi du / (cos u - t) = 0 for |t| < 1
      const double u0 = std::acos(t);
      auto g = [=](double u) { return cheb_t(k + 1, std::cos(u)) + p / pi; };
      std::function<cplx(double)> q = [&](double u) { return cplx((g(u) - g(u0)) / (std::cos(u) - t)); };
      const cplx sx = (integrate_complex(q, 0.0, u0, 1e-13) + integrate_complex(q, u0, pi, 1e-13)) / pi;
      r = std::max(r, std::abs(sx - cheb_u(k, t)));
    }
    return r;
  };
  return c;
}

namespace {

// ingredients of the default problems; apply(t, tol) is K x* by oracle quadrature
struct SplineData {
  static cplx xs(double t) { return {(1 - t * t) * std::cos(t), 0.3 * t * (1 - t * t)}; }
  static cplx a(double t) { return 1.5 + 0.3 * t; }
  static cplx b(double) { return 0.4; }
  static cplx h(double t, double tau) { return 0.2 * std::cos(t - tau); }
  static cplx apply(double t, double tol) {
    std::function<cplx(double)> x = xs;
    std::function<cplx(double)> hx = [&](double tau) { return h(t, tau) * xs(tau); };
    return a(t) * xs(t) + b(t) * segment_pv(x, t, -1.0, 1.0, {}, tol) + integrate_complex(hx, -1.0, 1.0, tol);
  }
};

struct ExceptionalData {
  Geometry g;
  cplx xs(double s) const {
    if (g == Geometry::circle) return {std::cos(s) + 0.5, 0.3 * std::sin(2 * s)};
    return (1 - s * s) * cplx(1.0 + 0.5 * s, 0.2 * s * s);
  }
  cplx a(double s) const {
    const double c = g == Geometry::circle ? std::cos(s) : s;
    return 1.0 + 0.5 * std::pow(std::max(0.0, c), 2);
  }
  cplx b(double) const { return 1.0; }
  cplx h(double s, double sg) const { return 0.1 * std::cos(s - sg); }
  cplx apply(double s, double tol) const {
    std::function<cplx(double)> x = [this](double u) { return xs(u); };
    std::function<cplx(double)> hx = [&](double u) { return h(s, u) * xs(u); };
    if (g == Geometry::circle)
      return a(s) * xs(s) + b(s) * circle_cot_pv(x, s, {}, tol) + integrate_complex(hx, 0.0, 2 * pi, tol);
    return a(s) * xs(s) + b(s) / pi * segment_pv(x, s, -1.0, 1.0, {}, tol) + integrate_complex(hx, -1.0, 1.0, tol);
  }
};

struct NonlinearData {
  static cplx xs(cplx t) { return std::exp(0.3 * t) + 0.1 * std::exp(0.4 / t); }
  static NonlinearCircleProblem base() {
    NonlinearCircleProblem p;
    p.a = [](cplx, cplx u) { return 2.0 * u + 0.05 * u * u; };
    p.a_u = [](cplx, cplx u) { return 2.0 + 0.1 * u; };
    p.h = [](cplx t, cplx, cplx u) { return (0.5 + 0.1 * t) * u + 0.05 * u * u; };
    p.h_u = [](cplx t, cplx, cplx u) { return 0.5 + 0.1 * t + 0.1 * u; };
    p.h_uu = [](cplx, cplx, cplx) { return cplx(0.1); };
    return p;
  }
  static cplx apply(const NonlinearCircleProblem& p, double s, double tol) {
    const cplx t = unit(s);
    std::function<cplx(double)> g = [&](double sg) { return p.h(t, unit(sg), xs(unit(sg))); };
    const cplx mean = integrate_complex(g, 0.0, 2 * pi, tol) / (2 * pi);
    return p.a(t, xs(t)) - I * circle_cot_pv(g, s, {}, tol) + mean;
  }
};

// g = g+ + g- with S g = g+ - g-
struct BisingularData {
  static cplx gp(cplx t) { return 1.0 / (1.0 - t / 3.0); }
  static cplx gm(cplx t) { return 0.5 / (3.0 * t - 1.0); }
  static cplx xs(cplx t1, cplx t2) { return (gp(t1) + gm(t1)) * (gp(t2) + gm(t2)); }
  static cplx s12(cplx t1, cplx t2) { return (gp(t1) - gm(t1)) * (gp(t2) - gm(t2)); }
  static cplx a(cplx t1, cplx t2) { return 2.0 + 0.2 * (t1 + 1.0 / t1) + 0.1 * (t2 + 1.0 / t2); }
  static cplx d(cplx, cplx t2) { return 0.5 + 0.1 * t2; }
};

struct MultidimData {
  static cplx xs(double u, double v) {
    return {std::cos(pi * u / 2) * std::cos(pi * v / 2), 0.2 * std::sin(pi * u) * std::cos(pi * v / 2)};
  }
  static cplx a(double u, double) { return 1.0 + 0.1 * u; }
};

}  // namespace

SegmentProblem spline_default_problem(std::function<cplx(double)>* exact) {
  if (exact) *exact = SplineData::xs;
  return {SplineData::a, SplineData::b, [](double t) { return SplineData::apply(t, 1e-11); }, SplineData::h};
}

ExceptionalProblem exceptional_default_problem(Geometry g, std::function<cplx(double)>* exact) {
  const ExceptionalData d{g};
  if (exact) *exact = [d](double s) { return d.xs(s); };
  return {[d](double s) { return d.a(s); }, [d](double s) { return d.b(s); },
          [d](double s) { return d.apply(d.g == Geometry::circle ? wrap_angle(s) : s, 1e-11); },
          [d](double s, double u) { return d.h(s, u); }};
}

NonlinearCircleProblem nonlinear_default_problem(std::function<cplx(cplx)>* exact) {
  if (exact) *exact = NonlinearData::xs;
  NonlinearCircleProblem p = NonlinearData::base();
  const NonlinearCircleProblem q = p;
  p.f = [q](cplx t) { return NonlinearData::apply(q, angle_of(t), 1e-11); };
  return p;
}

BisingularProblem bisingular_default_problem(std::function<cplx(cplx, cplx)>* exact) {
  if (exact) *exact = BisingularData::xs;
  BisingularProblem p;
  p.a = BisingularData::a;
  p.d = BisingularData::d;
  p.f = [](cplx t1, cplx t2) {
    return BisingularData::a(t1, t2) * BisingularData::xs(t1, t2) + BisingularData::d(t1, t2) * BisingularData::s12(t1, t2);
  };
  return p;
}

Problem2D multidim_default_problem(const std::string& name, double bval, std::function<cplx(double, double)>* exact) {
  if (exact) *exact = MultidimData::xs;
  Problem2D p{MultidimData::a, [bval](double, double) { return cplx(bval); }, {}, characteristic(name), {}};
  const Problem2D q = p;
  p.f = [q](double u, double v) { return apply_operator(q, 1.0, MultidimData::xs, u, v); };
  return p;
}

ManufacturedCase spline_segment_case(int r) {
  ManufacturedCase c;
  c.family = Family::spline_segment;
  c.name = "spline_segment-r" + std::to_string(r);
  c.smoothness = r;
  c.solve = [=](int n) {
    std::function<cplx(double)> xs;
    const SegmentProblem p = spline_default_problem(&xs);
    return solve_linear(p, tune_params(p, n, r, 0.0), xs).report;
  };
  c.oracle_residual = [](std::uint64_t seed) {
    double res = 0.0;
    for (double t : random_points(seed, 64, -0.99, 0.99))
      res = std::max(res, std::abs(SplineData::apply(t, 1e-11) - SplineData::apply(t, 1e-13)));
    return res;
  };
  return c;
}

ManufacturedCase exceptional_case(Geometry g) {
  ManufacturedCase c;
  c.family = Family::exceptional;
  c.name = "exceptional-" + to_string(g);
  c.smoothness = 1.0;
  c.solve = [=](int n) {
    std::function<cplx(double)> xs;
    const ExceptionalProblem p = exceptional_default_problem(g, &xs);
    return g == Geometry::circle ? solve_circle_exceptional(p, n, 0.0, xs).report
                                 : solve_segment_exceptional(p, n, 0.0, xs).report;
  };
  c.oracle_residual = [=](std::uint64_t seed) {
    const ExceptionalData d{g};
    double res = 0.0;
    const rvec pts = g == Geometry::circle ? random_points(seed, 64, 0.0, 2 * pi) : random_points(seed, 64, -0.99, 0.99);
    for (double s : pts) res = std::max(res, std::abs(d.apply(s, 1e-11) - d.apply(s, 1e-13)));
    return res;
  };
  return c;
}

ManufacturedCase nonlinear_circle_case(NonlinearScheme scheme) {
  ManufacturedCase c;
  c.family = Family::nonlinear_circle;
  c.name = "nonlinear_circle-" + to_string(scheme);
  c.smoothness = 1.0;
  c.solve = [=](int n) {
    std::function<cplx(cplx)> xs;
    const NonlinearCircleProblem p = nonlinear_default_problem(&xs);
    const NonlinearCircleSolution sol = solve_nonlinear_circle(p, n, scheme);
    if (!sol.newton.converged) fail(ErrorKind::divergence, "Newton iteration did not converge");
    SolveReport rep;
    rep.scheme = to_string(scheme);
    rep.n = n;
    rep.residual = sol.newton.residuals.empty() ? 0.0 : sol.newton.residuals.back();
    rep.solution_norm = grid_norm([&](double s) { return sol.x(s); }, NormKind::holder_grid);
    rep.error = grid_norm([&](double s) { return sol.x(s) - xs(unit(s)); }, NormKind::holder_grid);
    return rep;
  };
  c.oracle_residual = [](std::uint64_t seed) {
    const NonlinearCircleProblem p = NonlinearData::base();
    double res = 0.0;
    for (double s : random_points(seed, 64, 0.0, 2 * pi))
      res = std::max(res, std::abs(NonlinearData::apply(p, s, 1e-11) - NonlinearData::apply(p, s, 1e-13)));
    return res;
  };
  return c;
}

ManufacturedCase bisingular_case() {
  auto problem = [](double eps, std::uint64_t seed) {
    const BisingularProblem b = bisingular_default_problem();
    BisingularProblem p;
    p.a = [=](cplx t1, cplx t2) { return b.a(t1, t2) + eps * box_noise(seed, 0, angle_of(t1), angle_of(t2)); };
    p.d = [=](cplx t1, cplx t2) { return b.d(t1, t2) + eps * box_noise(seed, 1, angle_of(t1), angle_of(t2)); };
    p.f = [=](cplx t1, cplx t2) { return b.f(t1, t2) + eps * box_noise(seed, 2, angle_of(t1), angle_of(t2)); };
    return p;
  };
  ManufacturedCase c;
  c.family = Family::bisingular;
  c.name = "bisingular-collocation";
  c.smoothness = 1.0;
  c.solve = [=](int n) {
    const BisingularSolution sol = solve_collocation(problem(0.0, 0), n);
    SolveReport rep = sol.report;
    rep.error = 0.0;
    const int m = 41;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        const double s1 = 2 * pi * (i + 0.5) / m, s2 = 2 * pi * (j + 0.5) / m;
        rep.error = std::max(rep.error, std::abs(sol(s1, s2) - BisingularData::xs(unit(s1), unit(s2))));
      }
    return rep;
  };
  c.oracle_residual = [](std::uint64_t seed) {
    // S12 of the product through the one-dimensional PV oracle in each variable
    std::function<cplx(double)> g = [](double sg) { return BisingularData::gp(unit(sg)) + BisingularData::gm(unit(sg)); };
    const cplx mean = integrate_complex(g, 0.0, 2 * pi, 1e-13) / (2 * pi);
    auto S = [&](double s) { return -I * circle_cot_pv(g, s, {}, 1e-13) + mean; };
    double res = 0.0;
    const rvec pts = random_points(seed, 128, 0.0, 2 * pi);
    for (int i = 0; i < 64; ++i) {
      const double s1 = pts[2 * i], s2 = pts[2 * i + 1];
      res = std::max(res, std::abs(S(s1) * S(s2) - BisingularData::s12(unit(s1), unit(s2))));
    }
    return res;
  };
  c.perturbed = [=](int n, double eps, std::uint64_t seed) {
    const BisingularSolution sol = solve_collocation(problem(eps, seed), n);
    return cvec(sol.nodal.data(), sol.nodal.data() + sol.nodal.size());
  };
  return c;
}

ManufacturedCase multidim_case(const std::string& name, double bval) {
  const Problem2D base = multidim_default_problem(name, bval);
  // nodal rhs values are shared between the base and perturbed solves
  auto problem = [=](double eps, std::uint64_t seed) {
    Problem2D p = base;
    p.a = [=](double u, double v) { return base.a(u, v) + eps * box_noise(seed, 0, u, v); };
    p.b = [=](double u, double v) { return base.b(u, v) + eps * box_noise(seed, 1, u, v); };
    p.f = [=](double u, double v) { return base.f(u, v) + eps * box_noise(seed, 2, u, v); };
    return p;
  };
  auto grid = [=](int N) {
    const ShiftChoice sc = tune_shift(base, N, 1.0);
    if (!sc.feasible)
      fail(ErrorKind::tuning, "no dominant shift; best margin " + std::to_string(sc.dominance.min_margin));
    return build_grid(N, 1.0, sc.h1, sc.h2);
  };
  ManufacturedCase c;
  c.family = Family::multidim2d;
  c.name = "multidim2d-" + name;
  c.smoothness = 1.0;
  c.solve = [=](int N) {
    const Grid2D g = grid(N);
    const Solution2D sol = assemble_solve(base, g);
    SolveReport rep = sol.report;
    rep.error = 0.0;
    for (int k = 1; k <= N; ++k)
      for (int l = 1; l <= N; ++l)
        rep.error = std::max(rep.error, std::abs(sol.x[g.index(k, l)] - MultidimData::xs(g.node_x(k), g.node_y(l))));
    return rep;
  };
  c.oracle_residual = [=](std::uint64_t seed) {
    double res = 0.0;
    const rvec pts = random_points(seed, 128, -0.9, 0.9);
    for (int i = 0; i < 64; ++i) {
      const double u = pts[2 * i], v = pts[2 * i + 1];
      const cplx ref = base.a(u, v) * MultidimData::xs(u, v) +
                       base.b(u, v) * cartesian_pv(MultidimData::xs, base.ch, u, v, 1.0, 1e-5);
      res = std::max(res, std::abs(base.f(u, v) - ref));
    }
    return res;
  };
  c.perturbed = [=](int N, double eps, std::uint64_t seed) { return assemble_solve(problem(eps, seed), grid(N)).x; };
  c.perturbed_margin = [=](int N, double eps, std::uint64_t seed) {
    return hadamard_margins(assemble_grid(problem(eps, seed), grid(N))).min_margin;
  };
  return c;
}

ManufacturedCase make_case(Family f) {
  switch (f) {
    case Family::circle_linear: return circle_case(0.75, 0.0, CircleScheme::basic);
    case Family::circle_weak: return circle_case(0.75, 0.5, CircleScheme::optimal);
    case Family::dominant_segment: return dominant_segment_case();
    case Family::spline_segment: return spline_segment_case();
    case Family::exceptional: return exceptional_case(Geometry::circle);
    case Family::nonlinear_circle: return nonlinear_circle_case();
    case Family::bisingular: return bisingular_case();
    case Family::multidim2d: return multidim_case();
  }
  fail(ErrorKind::invalid_input, "unknown case family");
}

double fitted_order(const std::vector<int>& ns, const rvec& errors) {
  const std::size_t m = std::min(ns.size(), errors.size());
  if (m < 2) fail(ErrorKind::invalid_input, "order fit needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = std::log(static_cast<double>(ns[i])), y = std::log(errors[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return -slope;
}

ConvergenceReport run_convergence(const ManufacturedCase& c, const std::vector<int>& ns) {
  if (ns.size() < 3) fail(ErrorKind::invalid_input, "convergence needs at least three sizes");
  for (std::size_t i = 1; i < ns.size(); ++i)
    if (ns[i] <= ns[i - 1]) fail(ErrorKind::invalid_input, "sizes must be strictly increasing");
  ConvergenceReport rep;
  rep.name = c.name;
  for (int n : ns) {
    try {
      const SolveReport s = c.solve(n);
      rep.ns.push_back(n);
      rep.errors.push_back(s.error);
    } catch (const Error& e) {
      rep.failure = "n=" + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  for (std::size_t i = 1; i < rep.errors.size(); ++i)
    if (rep.errors[i] > 2.0 * rep.errors[i - 1]) rep.monotone = false;
  const bool roundoff = std::all_of(rep.errors.begin(), rep.errors.end(), [](double e) { return e < 1e-12; });
  if (rep.errors.size() >= 2 && !roundoff) {
    rep.order = fitted_order(rep.ns, rep.errors);
    rep.order_fitted = true;
  }
  return rep;
}

StabilityReport run_stability(const ManufacturedCase& c, int n, const rvec& eps, std::uint64_t seed) {
  if (!c.perturbed) fail(ErrorKind::invalid_input, "case " + c.name + " has no stability experiment");
  StabilityReport rep;
  rep.name = c.name;
  rep.n = n;
  const cvec base = c.perturbed(n, 0.0, seed);
  rep.zero_deviation = max_dev(c.perturbed(n, 0.0, seed), base);
  if (c.perturbed_margin) rep.base_margin = c.perturbed_margin(n, 0.0, seed);
  double lo = INFINITY, hi = 0.0;
  for (double e : eps) {
    rep.eps.push_back(e);
    try {
      const double d = max_dev(c.perturbed(n, e, seed), base);
      rep.deviations.push_back(d);
      rep.ratios.push_back(d / e);
      rep.failures.emplace_back();
      lo = std::min(lo, d / e);
      hi = std::max(hi, d / e);
    } catch (const Error& err) {
      rep.deviations.push_back(NAN);
      rep.ratios.push_back(NAN);
      rep.failures.emplace_back(err.what());
    }
    if (c.perturbed_margin) rep.margins.push_back(c.perturbed_margin(n, e, seed));
  }
  const bool all_ok = std::all_of(rep.failures.begin(), rep.failures.end(), [](const std::string& s) { return s.empty(); });
  rep.spread = lo > 0 ? hi / lo : INFINITY;
  rep.stable = all_ok && rep.zero_deviation == 0.0 && rep.spread < 10.0;
  return rep;
}

}  // namespace sie
