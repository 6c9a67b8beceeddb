#include "sie/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

namespace sie {

double cot_panel(double s_a, double s_b, double s_star) {
  const double num = std::sin(0.5 * (s_b - s_star));
  const double den = std::sin(0.5 * (s_a - s_star));
  if (std::abs(num) < 1e-15 || std::abs(den) < 1e-15)
    fail(ErrorKind::domain, "singular panel: collocation point on a panel endpoint");
  return 2.0 * std::log(std::abs(num / den));
}

double cauchy_panel_segment(double t_a, double t_b, double t_star) {
  const double scale = std::max({1.0, std::abs(t_a), std::abs(t_b)});
  if (std::abs(t_star - t_a) < 1e-15 * scale || std::abs(t_star - t_b) < 1e-15 * scale)
    fail(ErrorKind::domain, "singular panel: collocation point on a panel endpoint");
  return std::log(std::abs((t_b - t_star) / (t_a - t_star)));
}

double weak_weight(double s, double sigma, const WeakKernelSpec& spec, int n) {
  if (n < 1) fail(ErrorKind::invalid_input, "weak_weight needs n >= 1");
  if (spec.eta == 0.0) return 1.0;
  const double d = std::abs(angle_diff(sigma, s));
  const double dist = 2.0 * std::sin(0.5 * d);
  if (spec.mode == CutoffMode::fixed_rho) {
    if (spec.rho <= 0.0) fail(ErrorKind::invalid_input, "fixed cutoff radius must be positive");
    return dist < spec.rho ? std::pow(spec.rho, -spec.eta) : std::pow(dist, -spec.eta);
  }
  const double spacing = 2.0 * pi / (2 * n + 1);
  if (d < spacing * (1.0 - 1e-12)) return std::pow(std::abs(unit(spacing) - 1.0), -spec.eta);
  return std::pow(dist, -spec.eta);
}

double weak_weight(cplx t, cplx tau, const WeakKernelSpec& spec, int n) {
  return weak_weight(std::arg(t), std::arg(tau), spec, n);
}

double weak_panel(double s_star, double s_a, double s_b, double eta) {
  if (eta < 0.0 || eta >= 1.0) fail(ErrorKind::domain, "divergent kernel: eta must lie in [0, 1)");
  if (s_b < s_a) return -weak_panel(s_star, s_b, s_a, eta);
  if (eta == 0.0) return s_b - s_a;
  // shift s* to the copy nearest the panel
  const double mid = 0.5 * (s_a + s_b);
  const double ss = mid + angle_diff(s_star, mid);
  auto g = [eta](double u) {
    const double v = 2.0 * std::abs(std::sin(0.5 * u));
    return v == 0.0 ? 0.0 : std::pow(v, -eta);
  };
  // integrate |2 sin(u/2)|^{-eta} in u = sigma - s*, singular only at u = 0 (mod 2 pi)
  auto piece = [&](double u0, double u1) {
    if (u1 <= u0) return 0.0;
    if (u0 >= 0.0)
      return integrate_endpoint([&](double w) { return g(u0 + w); }, 0.0, u1 - u0, 1e-13);
    return integrate_endpoint([&](double w) { return g(u1 - w); }, 0.0, u1 - u0, 1e-13);
  };
  const double ua = s_a - ss, ub = s_b - ss;
  if (ua < 0.0 && ub > 0.0) return piece(ua, 0.0) + piece(0.0, ub);
  // far copies of the singularity at +-2pi lie outside a panel shorter than 2pi
  return piece(ua, ub);
}

cplx pv_oracle(const std::function<cplx(double)>& f, double s, int resolution) {
  if (resolution < 1000) fail(ErrorKind::invalid_input, "pv_oracle resolution must be >= 1000");
  const double h = 2.0 * pi / resolution;
  cplx acc = 0.0;
  for (int m = 0; m < resolution; ++m) {
    const double u = (m + 0.5) * h;
    acc += f(s + u) / std::tan(0.5 * u);
  }
  return acc / static_cast<double>(resolution);
}

std::pair<rvec, rvec> gauss_legendre(int m) {
  rvec x(m), w(m);
  for (int i = 0; i < m; ++i) {
    double z = std::cos(pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, tol);
}

cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b, double tol) {
  const double re = integrate(std::function<double(double)>([&](double x) { return f(x).real(); }), a, b, tol);
  const double im = integrate(std::function<double(double)>([&](double x) { return f(x).imag(); }), a, b, tol);
  return {re, im};
}

static boost::math::quadrature::tanh_sinh<double>& ts() {
  thread_local boost::math::quadrature::tanh_sinh<double> q(15);
  return q;
}

double integrate_endpoint(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  if (b < a) return -integrate_endpoint(f, b, a, tol);
  double err = 0.0, l1 = 0.0;
  std::size_t levels = 0;
  return ts().integrate(
      [&](double x) {
        const double v = f(x);
        return std::isfinite(v) ? v : 0.0;
      },
      a, b, tol, &err, &l1, &levels);
}

cplx integrate_endpoint_complex(const std::function<cplx(double)>& f, double a, double b, double tol) {
  const double re = integrate_endpoint(std::function<double(double)>([&](double x) { return f(x).real(); }), a, b, tol);
  const double im = integrate_endpoint(std::function<double(double)>([&](double x) { return f(x).imag(); }), a, b, tol);
  return {re, im};
}

cplx circle_cot_pv(const std::function<cplx(double)>& f, double s, const rvec& breaks, double tol) {
  const cplx fs = f(s);
  rvec cuts{0.0, 2.0 * pi};
  for (double b : breaks) {
    const double u = wrap_angle(b - s);
    if (u > 1e-14 && u < 2.0 * pi - 1e-14) cuts.push_back(u);
  }
  std::sort(cuts.begin(), cuts.end());
  auto g = [&](double u) -> cplx {
    const double t = std::tan(0.5 * u);
    if (t == 0.0 || !std::isfinite(t)) return 0.0;
    return (f(s + u) - fs) / t;
  };
  cplx acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += integrate_endpoint_complex(g, cuts[i], cuts[i + 1], tol);
  return acc / (2.0 * pi);
}

cplx segment_pv(const std::function<cplx(double)>& f, double t, double a, double b, const rvec& breaks,
                double tol) {
  rvec cuts{a, b};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  const bool inside = t > a && t < b;
  if (inside) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  cplx acc = 0.0;
  if (inside) {
    const cplx ft = f(t);
    auto g = [&](double x) -> cplx {
      if (x == t) return 0.0;
      return (f(x) - ft) / (x - t);
    };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += integrate_endpoint_complex(g, cuts[i], cuts[i + 1], tol);
    acc += ft * std::log((b - t) / (t - a));
  } else {
    auto g = [&](double x) -> cplx { return f(x) / (x - t); };
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) acc += integrate_endpoint_complex(g, cuts[i], cuts[i + 1], tol);
  }
  return acc;
}

}  // namespace sie
