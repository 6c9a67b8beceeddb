#pragma once

#include <complex>
#include <exception>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sie {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using rvec = std::vector<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

enum class ErrorKind {
  invalid_input,
  domain,
  singular,
  tuning,
  divergence,
  cubature,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

// parallel kernels run rows under OpenMP; serial is the reference path
enum class Exec { parallel, serial };

// body(i) for i in [lo, hi); the first exception thrown by any row is rethrown after the loop
template <class Body>
void parallel_for(int lo, int hi, Exec exec, Body&& body) {
  std::exception_ptr err;
#pragma omp parallel for schedule(static) if (exec == Exec::parallel)
  for (int i = lo; i < hi; ++i) {
    try {
      body(i);
    } catch (...) {
#pragma omp critical(sie_parallel_for_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

inline cplx unit(double s) { return {std::cos(s), std::sin(s)}; }

double max_abs(const cvec& v);
double max_abs_diff(const cvec& a, const cvec& b);
double max_abs(const Vec& v);

Vec to_vec(const cvec& v);
cvec to_cvec(const Vec& v);

// wrap an angle into [0, 2pi)
double wrap_angle(double s);
// signed angular distance in (-pi, pi]
double angle_diff(double a, double b);

}  // namespace sie
