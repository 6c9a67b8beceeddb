#include "sie/exceptional.hpp"

#include <algorithm>
#include <cmath>

namespace sie {

namespace {

constexpr int max_halvings = 60;
constexpr double min_offset = 1e-9;
constexpr double accept_margin = 1.0;

void check_n(int n) {
  if (n < 2) fail(ErrorKind::invalid_input, "exceptional schemes need n >= 2");
}

cplx eval_h(const ExceptionalProblem& p, double t, double tau) { return p.h ? p.h(t, tau) : cplx{}; }

double circle_wrap_panel(const rvec& s, int k) { return s[k + 1] - s[k]; }

void finish_report(ExceptionalSolution& sol, const DenseSystem& sys, const std::string& name,
                   const std::function<cplx(double)>& exact) {
  const LuResult lr = lu_solve(sys);
  sol.x = to_cvec(lr.x);
  sol.report.scheme = name;
  sol.report.n = sol.scheme.n;
  sol.report.residual = lr.residual;
  sol.report.dominance = hadamard_margins(sys);
  sol.report.solution_norm = max_abs(sol.x);
  sol.report.parameter = sol.scheme.offset;
  if (exact) {
    double e = 0.0;
    for (std::size_t j = 0; j < sol.x.size(); ++j) e = std::max(e, std::abs(sol.x[j] - exact(sol.scheme.star[j])));
    sol.report.error = e;
  }
}

template <class Assemble>
ExceptionalSolution tuned_solve(Assemble&& assemble, const std::function<ShiftedScheme(double)>& make, double h0,
                                double h_fixed, const std::string& name, const std::function<cplx(double)>& exact) {
  ExceptionalSolution sol;
  if (h_fixed > 0.0) {
    sol.scheme = make(h_fixed);
    finish_report(sol, assemble(sol.scheme), name, exact);
    return sol;
  }
  double best = -INFINITY;
  for (int m = 0; m <= max_halvings; ++m) {
    const double h = h0 * std::ldexp(1.0, -m);
    if (h < min_offset * h0) break;
    const ShiftedScheme sc = make(h);
    const DenseSystem sys = assemble(sc);
    const DominanceReport d = hadamard_margins(sys);
    best = std::max(best, d.min_margin);
    if (d.min_margin >= accept_margin) {
      sol.scheme = sc;
      finish_report(sol, sys, name, exact);
      return sol;
    }
  }
  fail(ErrorKind::tuning, name + ": no offset h gives a dominant system (best margin " + std::to_string(best) + ")");
}

}  // namespace

cplx ExceptionalSolution::operator()(double t) const {
  const rvec& z = scheme.star;
  const int m = static_cast<int>(z.size());
  if (scheme.s.size() == z.size() + 1) {
    // periodic polygon
    const double u = wrap_angle(t - z[0]) + z[0];
    int k = static_cast<int>(std::upper_bound(z.begin(), z.end(), u) - z.begin()) - 1;
    const int k1 = (k + 1) % m;
    double span = (k1 == 0 ? z[0] + 2 * pi : z[k1]) - z[k];
    const double w = (u - z[k]) / span;
    return (1.0 - w) * x[k] + w * x[k1];
  }
  if (t <= z.front()) return x.front();
  if (t >= z.back()) return x.back();
  const int k = static_cast<int>(std::upper_bound(z.begin(), z.end(), t) - z.begin()) - 1;
  const double w = (t - z[k]) / (z[k + 1] - z[k]);
  return (1.0 - w) * x[k] + w * x[k + 1];
}

bool CorrectiveLine::slope_bounded(double alpha, int n) const { return std::abs(slope) <= std::pow(n, 1.0 - alpha); }

ShiftedScheme circle_scheme(int n, double h) {
  check_n(n);
  if (!(h > 0.0 && h <= pi / (2 * n) * (1 + 1e-12)))
    fail(ErrorKind::invalid_input, "circle offset h must lie in (0, pi/2n]");
  ShiftedScheme sc;
  sc.n = n;
  sc.offset = h;
  sc.lo = 0.0;
  sc.width = pi / n;
  for (int k = 0; k <= 2 * n; ++k) sc.s.push_back(pi * k / n);
  for (int k = 0; k < 2 * n; ++k) sc.star.push_back(sc.s[k] + h);
  return sc;
}

ShiftedScheme segment_scheme(int n, double h, double lo, double width) {
  check_n(n);
  if (width <= 0.0) width = 1.0 / n;
  if (!(h > 0.0 && h <= width / 2 * (1 + 1e-12)))
    fail(ErrorKind::invalid_input, "segment offset h must lie in (0, width/2]");
  ShiftedScheme sc;
  sc.n = n;
  sc.offset = h;
  sc.lo = lo;
  sc.width = width;
  for (int k = 0; k <= 2 * n; ++k) sc.s.push_back(lo + k * width);
  for (int j = 1; j <= 2 * n - 2; ++j) sc.star.push_back(j <= n - 1 ? sc.s[j] + h : sc.s[j + 1] - h);
  return sc;
}

DenseSystem assemble_circle_exceptional(const ExceptionalProblem& p, const ShiftedScheme& sc, Exec exec) {
  const int n2 = 2 * sc.n;
  DenseSystem sys{Mat::Zero(n2, n2), Vec(n2)};
  parallel_for(0, n2, exec, [&](int j) {
    const double sj = sc.star[j];
    const cplx bj = p.b ? p.b(sj) : cplx{};
    sys.C(j, j) += p.a(sj);
    for (int k = 0; k < n2; ++k) {
      if (k != (j + n2 - 1) % n2 && k != (j + 1) % n2 && bj != 0.0)
        sys.C(j, k) += bj / (2 * pi) * cot_panel(sc.s[k], sc.s[k + 1], sj);
      if (p.h) sys.C(j, k) += circle_wrap_panel(sc.s, k) * eval_h(p, sj, sc.star[k]);
    }
    sys.F(j) = p.f(sj);
  });
  return sys;
}

std::vector<std::pair<std::pair<double, double>, int>> segment_row_panels(const ShiftedScheme& sc, int j) {
  const int n = sc.n, last = 2 * n - 2;
  const rvec& t = sc.s;
  auto panel = [&](int k) -> std::pair<double, double> {
    if (k == 1) return {t[0], t[2]};
    if (k == last) return {t[last], t[2 * n]};
    return {t[k], t[k + 1]};
  };
  std::vector<std::pair<std::pair<double, double>, int>> out;
  if (j == 1) {
    out.push_back({{t[1], t[2]}, 1});
    for (int k = 3; k <= last - 1; ++k) out.push_back({panel(k), k});
    if (last > 1) out.push_back({panel(last), last});
  } else if (j == last) {
    out.push_back({panel(1), 1});
    for (int k = 2; k <= last - 2; ++k) out.push_back({panel(k), k});
    out.push_back({{t[last], t[last + 1]}, last});
  } else {
    for (int k = 1; k <= last; ++k)
      if (k != j - 1 && k != j + 1) out.push_back({panel(k), k});
  }
  return out;
}

std::vector<std::pair<double, double>> segment_skipped(const ShiftedScheme& sc, int j) {
  auto row = segment_row_panels(sc, j);
  std::vector<std::pair<double, double>> cover;
  for (const auto& [iv, k] : row) cover.push_back(iv);
  std::sort(cover.begin(), cover.end());
  std::vector<std::pair<double, double>> gaps;
  double at = sc.s.front();
  const double tol = 1e-12 * (1.0 + std::abs(sc.s.back()));
  for (const auto& [a, b] : cover) {
    if (a > at + tol) gaps.push_back({at, a});
    at = std::max(at, b);
  }
  if (sc.s.back() > at + tol) gaps.push_back({at, sc.s.back()});
  return gaps;
}

DenseSystem assemble_segment_exceptional(const ExceptionalProblem& p, const ShiftedScheme& sc, Exec exec) {
  const int m = 2 * sc.n - 2;
  DenseSystem sys{Mat::Zero(m, m), Vec(m)};
  // quadrature weight of unknown k in the Fredholm sum: its panel length
  rvec len(m);
  for (int k = 1; k <= m; ++k) {
    const bool merged = k == 1 || k == m;
    len[k - 1] = merged ? 2 * sc.width : sc.width;
  }
  parallel_for(1, m + 1, exec, [&](int j) {
    const double tj = sc.star[j - 1];
    const cplx bj = p.b ? p.b(tj) : cplx{};
    sys.C(j - 1, j - 1) += p.a(tj);
    if (bj != 0.0)
      for (const auto& [iv, k] : segment_row_panels(sc, j))
        sys.C(j - 1, k - 1) += bj / pi * cauchy_panel_segment(iv.first, iv.second, tj);
    if (p.h)
      for (int k = 1; k <= m; ++k) sys.C(j - 1, k - 1) += len[k - 1] * eval_h(p, tj, sc.star[k - 1]);
    sys.F(j - 1) = p.f(tj);
  });
  return sys;
}

ExceptionalSolution solve_circle_exceptional(const ExceptionalProblem& p, int n, double h,
                                             const std::function<cplx(double)>& exact) {
  check_n(n);
  return tuned_solve([&](const ShiftedScheme& sc) { return assemble_circle_exceptional(p, sc); },
                     [n](double hh) { return circle_scheme(n, hh); }, pi / (2 * n), h, "circle_exceptional", exact);
}

ExceptionalSolution solve_segment_exceptional(const ExceptionalProblem& p, int n, double h,
                                              const std::function<cplx(double)>& exact) {
  check_n(n);
  return tuned_solve([&](const ShiftedScheme& sc) { return assemble_segment_exceptional(p, sc); },
                     [n](double hh) { return segment_scheme(n, hh); }, 1.0 / (2 * n), h, "segment_exceptional",
                     exact);
}

ExceptionalProblem lavrentyev_line(std::function<cplx(double)> f) {
  ExceptionalProblem p;
  p.a = [](double) { return cplx{1.0}; };
  p.b = [](double) { return -I; };
  p.f = std::move(f);
  return p;
}

ExceptionalSolution solve_line_truncated(const ExceptionalProblem& p, const LineOptions& opt) {
  if (!(opt.A > 0.0)) fail(ErrorKind::invalid_input, "truncation half-width A must be positive");
  check_n(opt.N);
  // int_{|t|>A} |f| with t = A/u
  auto tail_side = [&](double sign) {
    return integrate_endpoint(
        [&](double u) {
          if (u <= 0.0) return 0.0;
          return std::abs(p.f(sign * opt.A / u)) * opt.A / (u * u);
        },
        0.0, 1.0, 1e-10);
  };
  const double tail = tail_side(1.0) + tail_side(-1.0);
  if (!std::isfinite(tail) || tail > opt.tail_tol)
    fail(ErrorKind::domain, "rhs tail outside [-A, A] is " + std::to_string(tail) + "; increase A");
  const double width = opt.A / opt.N;
  ExceptionalSolution sol =
      tuned_solve([&](const ShiftedScheme& sc) { return assemble_segment_exceptional(p, sc); },
                  [&](double hh) { return segment_scheme(opt.N, hh, -opt.A, width); }, width / 2, opt.h,
                  "line_truncated", {});
  sol.tail = tail;
  return sol;
}

CorrectiveLine corrective_line(int j, cplx value, int n, double h, Geometry g) {
  CorrectiveLine line;
  line.value = value;
  std::vector<std::pair<double, double>> skipped;
  double c0 = 0.0;
  if (g == Geometry::circle) {
    const ShiftedScheme sc = circle_scheme(n, h);
    if (j < 0 || j >= 2 * n) fail(ErrorKind::invalid_input, "node index out of range");
    line.anchor = sc.star[j];
    const double d = pi / n;
    // skipped panels [s_{j-1}, s_j] and [s_{j+1}, s_{j+2}] around s*_j
    const double s0 = sc.star[j] - h;
    skipped = {{s0 - d, s0}, {s0 + d, s0 + 2 * d}};
    for (const auto& [a, b] : skipped) c0 += cot_panel(a, b, line.anchor);
  } else {
    const ShiftedScheme sc = segment_scheme(n, h);
    if (j < 1 || j > 2 * n - 2) fail(ErrorKind::invalid_input, "node index out of range");
    line.anchor = sc.star[j - 1];
    skipped = segment_skipped(sc, j);
    for (const auto& [a, b] : skipped) c0 += cauchy_panel_segment(a, b, line.anchor);
  }
  double c1 = 0.0;
  for (const auto& [a, b] : skipped) {
    if (g == Geometry::circle)
      c1 += integrate(
          [&](double s) {
            const double u = s - line.anchor;
            return std::abs(u) < 1e-12 ? 2.0 : u / std::tan(u / 2);
          },
          a, b);
    else
      c1 += b - a;
  }
  line.slope = c1 == 0.0 ? cplx{} : -value * c0 / c1;
  return line;
}

cplx printed_circle_slope(cplx value, int n, double h) {
  const double arg = std::sin(h / 2) / std::sin(pi / n - h / 2) * std::sin(2 * pi / n - h / 2) / std::sin(pi / n + h / 2);
  return -(static_cast<double>(n) * value / (2 * pi)) * std::log(arg);
}

cplx printed_segment_slope(cplx value, int n, double h) {
  const double d = 1.0 / n;
  return -(value * (n / 2.0)) * std::log(h * (2 * d - h) / ((d + h) * (d - h)));
}

std::string to_string(Geometry g) { return g == Geometry::circle ? "circle" : "segment"; }

}  // namespace sie
