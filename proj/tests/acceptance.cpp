#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include "sie/bisingular.hpp"
#include "sie/dominant.hpp"
#include "sie/harness.hpp"
#include "sie/multidim.hpp"
#include "sie/quadrature.hpp"

using namespace sie;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& detail, double seconds) {
  std::printf("criterion %d: %s  %s  [%.1fs]\n", id, ok ? "PASS" : "FAIL", detail.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

TrigPoly random_poly(std::mt19937_64& g, int n) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  TrigPoly p(n);
  for (auto& c : p.c) c = {d(g), d(g)};
  return p;
}

template <class F>
void run(int id, F&& body) {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = false;
  std::string detail;
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail += std::string(" exception: ") + e.what();
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  verdict(id, ok, detail, dt);
}

bool operator_identities(std::string& detail) {
  std::mt19937_64 g(2024);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const TrigPoly p = random_poly(g, 1 + trial % 16);
    const TrigPoly q = cauchy_apply(cauchy_apply(p));
    for (int k = -p.n; k <= p.n; ++k) worst = std::max(worst, std::abs(q.coef(k) - p.coef(k)));
  }
  double hil = 0.0;
  std::uniform_real_distribution<double> d(0.0, 2 * pi);
  for (int trial = 0; trial < 20; ++trial) {
    const TrigPoly p = random_poly(g, 1 + trial % 8);
    const TrigPoly h = hilbert_apply(p);
    for (int i = 0; i < 5; ++i) {
      const double s = d(g);
      hil = std::max(hil, std::abs(h(s) - pv_oracle([&](double u) { return p(u); }, s, 1 << 14)));
    }
  }
  detail = "S^2 - I coef error " + num(worst) + ", Hilbert vs PV oracle " + num(hil);
  return worst < 1e-12 && hil < 1e-6;
}

bool dominant_exactness(std::string& detail) {
  const cplx a = 2.0, b = 0.5;
  double circ = 0.0;
  for (int n : {4, 8, 16}) {
    TrigPoly f(3);
    f.coef(-3) = 0.2;
    f.coef(-1) = cplx(0.1, 0.4);
    f.coef(0) = 1.0;
    f.coef(2) = cplx(0.0, -0.5);
    auto exact = [&](double s) {
      cplx x{};
      for (int k = -3; k <= 3; ++k) x += f.coef(k) / (a + b * sign_mode(k)) * unit(k * s);
      return x;
    };
    CircleProblem p;
    p.a = [&](cplx) { return a; };
    p.b = [&](cplx) { return b; };
    p.f = [&](cplx t) { return f.at(t); };
    circ = std::max(circ, solve(p, n, CircleScheme::basic, NormKind::holder_grid, exact).report.error);
  }
  double seg = 0.0;
  const ManufacturedCase c = dominant_segment_case(3, 0.7);
  for (int n : {6, 10, 20}) seg = std::max(seg, c.solve(n).error);
  detail = "circle grid-max " + num(circ) + ", index-1 segment " + num(seg);
  return circ < 1e-10 && seg < 1e-8;
}

bool convergence_orders(std::string& detail) {
  bool ok = true;
  for (CircleScheme s : {CircleScheme::basic, CircleScheme::optimal}) {
    const ConvergenceReport r = run_convergence(circle_case(0.75, 0.5, s), {8, 16, 32, 64});
    detail += to_string(s) + ": order " + num(r.order) + (r.monotone ? " monotone; " : " NOT monotone; ");
    if (!r.failure.empty()) detail += r.failure + "; ";
    ok = ok && r.failure.empty() && r.order_fitted && r.order >= 0.4 && r.monotone;
  }
  return ok;
}

bool hadamard_tuning(std::string& detail) {
  const SegmentProblem sp = spline_default_problem();
  const double m_spline = hadamard_margins(assemble_linear(sp, tune_params(sp, 16, 2, 0.0))).min_margin;
  detail = "spline " + num(m_spline);
  double m_circle = -1, m_segment = -1, m_md = -1;
  try {
    m_circle = solve_circle_exceptional(exceptional_default_problem(Geometry::circle), 16).report.dominance.min_margin;
  } catch (const Error& e) {
    detail += std::string(", circle exceptional: ") + e.what();
  }
  try {
    m_segment =
        solve_segment_exceptional(exceptional_default_problem(Geometry::segment), 16).report.dominance.min_margin;
  } catch (const Error& e) {
    detail += std::string(", segment exceptional: ") + e.what();
  }
  const ShiftChoice sc = tune_shift(multidim_default_problem(), 16, 1.0);
  m_md = sc.feasible ? sc.dominance.min_margin : -1.0;
  detail += ", circle exceptional " + num(m_circle) + ", segment exceptional " + num(m_segment) + ", multidim " +
            num(m_md);
  return m_spline > 0 && m_circle > 0 && m_segment > 0 && m_md > 0;
}

bool newton_engine(std::string& detail) {
  NonlinearCircleProblem p = nonlinear_default_problem();
  const int n = 16;
  // start from f/2, inside the region where the Kantorovich bound holds
  p.x0 = interpolate([&](double s) { return p.f(unit(s)) / 2.0; }, plain_nodes(n));
  NewtonConfig basic;
  const auto rb = solve_nonlinear_circle(p, n, NonlinearScheme::scheme1, basic).newton;
  NewtonConfig mod;
  mod.mode = NewtonMode::modified;
  const auto rm = solve_nonlinear_circle(p, n, NonlinearScheme::scheme1, mod).newton;
  const double floor = 1e-12;
  bool squaring = rb.converged, geometric = rm.converged;
  int pairs_b = 0, pairs_m = 0;
  double worst_ratio = 0.0;
  for (std::size_t m = 0; m + 1 < rb.residuals.size(); ++m) {
    const double r0 = rb.residuals[m], r1 = rb.residuals[m + 1];
    if (r1 < floor || r0 >= 1.0) continue;
    ++pairs_b;
    squaring = squaring && r1 <= 0.5 * std::pow(r0, 1.8);
  }
  for (std::size_t m = 0; m + 1 < rm.residuals.size(); ++m) {
    const double r0 = rm.residuals[m], r1 = rm.residuals[m + 1];
    if (r1 < floor) continue;
    ++pairs_m;
    worst_ratio = std::max(worst_ratio, r1 / r0);
  }
  geometric = geometric && pairs_m > 0 && worst_ratio < 1.0;
  detail = "basic: " + std::to_string(rb.iterations) + " iterations, " + std::to_string(pairs_b) +
           " squaring pairs checked; modified: worst ratio " + num(worst_ratio) + " over " + std::to_string(pairs_m) +
           " pairs";
  return squaring && pairs_b > 0 && geometric;
}

bool bisingular_checks(std::string& detail) {
  std::mt19937_64 g(99);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double quad = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    TrigPoly2D p(1 + trial % 6);
    for (int i = 0; i < p.c.rows(); ++i)
      for (int j = 0; j < p.c.cols(); ++j) p.c(i, j) = {d(g), d(g)};
    quad = std::max(quad, (quadrant_split(p).recombine().c - p.c).cwiseAbs().maxCoeff());
  }
  std::function<cplx(cplx, cplx)> exact;
  const BisingularProblem bp = bisingular_default_problem(&exact);
  const FactorData2D fd = factorize(riemann_coefficient(bp), 24);
  IterationConfig cfg;
  cfg.n = 12;
  const IterationResult it = riemann_iterate(bp, cfg);
  bool ratios_ok = it.converged;
  for (std::size_t m = 0; m < it.ratios.size(); ++m)
    if (it.history[m + 1] > 1e-13) ratios_ok = ratios_ok && it.ratios[m] <= it.q * (1 + 1e-9);
  const BisingularSolution col = solve_collocation(bp, 12);
  double e_it = 0, e_col = 0, diff = 0;
  const int m = 41;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double s1 = 2 * pi * (i + 0.5) / m, s2 = 2 * pi * (j + 0.5) / m;
      const cplx xe = exact(unit(s1), unit(s2)), xi = it.x(s1, s2), xc = col(s1, s2);
      e_it = std::max(e_it, std::abs(xi - xe));
      e_col = std::max(e_col, std::abs(xc - xe));
      diff = std::max(diff, std::abs(xi - xc));
    }
  detail = "quadrants " + num(quad) + ", factor residual " + num(fd.residual) + ", q " + num(it.q) +
           ", iterate/collocation gap " + num(diff) + " vs errors " + num(e_it) + "/" + num(e_col);
  return quad < 1e-13 && fd.residual < 1e-8 && ratios_ok && diff <= 3 * std::max(e_it, e_col) + 1e-12;
}

bool parallel_solve_check(std::string& detail) {
  const Problem2D p = multidim_default_problem();
  const ShiftChoice sc = tune_shift(p, 8, 1.0);
  if (!sc.feasible) {
    detail = "no dominant shift";
    return false;
  }
  const Grid2D g = build_grid(8, 1.0, sc.h1, sc.h2);
  const Solution2D direct = assemble_solve(p, g);
  double worst = 0.0;
  for (int P : {1, 2, 4}) worst = std::max(worst, max_abs_diff(parallel_solve(p, g, P).x, direct.x));
  const DenseSystem sys = assemble_grid(p, g);
  const BlockPartition part(sys.C, 4);
  Vec a = Vec::Zero(sys.F.size()), b = a, c = a;
  bool identical = true;
  for (int sweep = 0; sweep < 5; ++sweep) {
    a = block_jacobi_sweep(part, sys.F, a, {0, 1, 2, 3});
    b = block_jacobi_sweep(part, sys.F, b, {3, 1, 0, 2});
    c = block_jacobi_sweep_serial(part, sys.F, c, {2, 0, 3, 1});
    identical = identical && a == b && a == c;
  }
  detail = "max gap to direct " + num(worst) + (identical ? ", shuffled sweeps bitwise identical" : ", sweeps differ");
  return worst < 1e-8 && identical;
}

bool stability(std::string& detail) {
  const rvec eps{1e-2, 1e-3, 1e-4};
  bool ok = true;
  struct Item {
    ManufacturedCase c;
    int n;
  };
  for (const Item& it : {Item{circle_case(0.75, 0.0, CircleScheme::basic), 16}, Item{bisingular_case(), 8},
                         Item{multidim_case(), 8}}) {
    const StabilityReport r = run_stability(it.c, it.n, eps, 7);
    detail += it.c.name + " spread " + num(r.spread) + (r.zero_deviation == 0 ? "" : " nonzero at eps=0") + "; ";
    ok = ok && r.stable;
    for (std::size_t i = 0; i < r.margins.size(); ++i)
      if (r.eps[i] < 0.5 * r.base_margin && !(r.margins[i] > 0)) ok = false;
  }
  return ok;
}

bool cross_scheme(std::string& detail) {
  NonlinearCircleProblem lin;
  lin.a = [](cplx t, cplx u) { return (2.0 + 0.2 * t) * u; };
  lin.a_u = [](cplx t, cplx) { return 2.0 + 0.2 * t; };
  lin.h = [](cplx t, cplx tau, cplx u) { return (0.5 + 0.1 * t + 0.05 * std::conj(tau)) * u; };
  lin.h_u = [](cplx t, cplx tau, cplx) { return 0.5 + 0.1 * t + 0.05 * std::conj(tau); };
  lin.h_uu = [](cplx, cplx, cplx) { return cplx(0.0); };
  lin.f = [](cplx t) { return std::exp(0.2 * t) + 0.1 / t; };
  std::vector<TrigPoly> x32, x64;
  rvec self;
  for (NonlinearScheme s : {NonlinearScheme::scheme1, NonlinearScheme::scheme2, NonlinearScheme::scheme3}) {
    const auto a = solve_nonlinear_circle(lin, 32, s), b = solve_nonlinear_circle(lin, 64, s);
    x32.push_back(a.x);
    x64.push_back(b.x);
    self.push_back(grid_norm([&](double t) { return a.x(t) - b.x(t); }, NormKind::holder_grid));
  }
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const double gap = grid_norm([&](double t) { return x32[i](t) - x32[j](t); }, NormKind::holder_grid);
      worst = std::max(worst, gap / (3 * std::max(self[i], self[j]) + 1e-12));
      ok = ok && gap <= 3 * std::max(self[i], self[j]) + 1e-12;
    }
  const ExceptionalProblem ep = exceptional_default_problem(Geometry::circle);
  const int n = 16;
  const ExceptionalSolution es = solve_circle_exceptional(ep, n);
  HilbertNonlinearProblem hp;
  hp.a = ep.a;
  hp.f = ep.f;
  hp.b = [&](double s, double, cplx u) { return ep.b(s) * u; };
  hp.b_u = [&](double s, double, cplx) { return ep.b(s); };
  hp.h = [&](double s, double sg, cplx u) { return ep.h(s, sg) * u; };
  hp.h_u = [&](double s, double sg, cplx) { return ep.h(s, sg); };
  const HilbertSolution hs = solve_nonlinear_hilbert(hp, n, es.report.parameter);
  const double node_gap = max_abs_diff(hs.x, es.x);
  detail = "scheme gaps at most " + num(worst) + " of 3x self-convergence; spline vs exceptional " + num(node_gap);
  return ok && node_gap < 1e-9;
}

}  // namespace

int main() {
  run(1, operator_identities);
  run(2, dominant_exactness);
  run(3, convergence_orders);
  run(4, hadamard_tuning);
  run(5, newton_engine);
  run(6, bisingular_checks);
  run(7, parallel_solve_check);
  run(8, stability);
  run(9, cross_scheme);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
