#pragma once

#include <functional>
#include <utility>

#include "sie/common.hpp"

namespace sie {

enum class CutoffMode { node_spacing, fixed_rho };

struct WeakKernelSpec {
  double eta = 0.0;
  CutoffMode mode = CutoffMode::node_spacing;
  double rho = 0.0;
};

// 2 ln|sin((sb - s*)/2) / sin((sa - s*)/2)|, the integral of cot((sigma - s*)/2)
double cot_panel(double s_a, double s_b, double s_star);

// integral of d tau / (tau - t*) over [t_a, t_b], PV when t* is inside
double cauchy_panel_segment(double t_a, double t_b, double t_star);

// capped |tau - t|^{-eta}; angles s (target) and sigma (source)
double weak_weight(double s, double sigma, const WeakKernelSpec& spec, int n);
double weak_weight(cplx t, cplx tau, const WeakKernelSpec& spec, int n);

// arc integral of |tau - t*|^{-eta} d sigma over [s_a, s_b]
double weak_panel(double s_star, double s_a, double s_b, double eta);

// (1/2pi) PV int f(sigma) cot((sigma - s)/2) d sigma on a midpoint grid symmetric about s
cplx pv_oracle(const std::function<cplx(double)>& f, double s, int resolution);

// Gauss-Legendre rule on [-1, 1]
std::pair<rvec, rvec> gauss_legendre(int m);

// adaptive Gauss-Kronrod for smooth integrands
double integrate(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);
cplx integrate_complex(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-12);

// tanh-sinh for integrands with endpoint singularities
double integrate_endpoint(const std::function<double(double)>& f, double a, double b, double tol = 1e-12);
cplx integrate_endpoint_complex(const std::function<cplx(double)>& f, double a, double b, double tol = 1e-12);

// (1/2pi) PV int_0^{2pi} f(sigma) cot((sigma - s)/2) d sigma; breaks are angles where f is rough
cplx circle_cot_pv(const std::function<cplx(double)>& f, double s, const rvec& breaks = {},
                   double tol = 1e-12);

// PV int_a^b f(tau) / (tau - t) d tau; breaks are points where f is rough
cplx segment_pv(const std::function<cplx(double)>& f, double t, double a, double b,
                const rvec& breaks = {}, double tol = 1e-12);

}  // namespace sie
