#include "sie/common.hpp"

#include <algorithm>
#include <cmath>

namespace sie {

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

double max_abs(const cvec& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, std::abs(z));
  return m;
}

double max_abs_diff(const cvec& a, const cvec& b) {
  if (a.size() != b.size()) fail(ErrorKind::invalid_input, "size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Vec to_vec(const cvec& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

cvec to_cvec(const Vec& v) { return cvec(v.data(), v.data() + v.size()); }

double wrap_angle(double s) {
  double r = std::fmod(s, 2 * pi);
  if (r < 0) r += 2 * pi;
  if (r >= 2 * pi) r -= 2 * pi;
  return r;
}

double angle_diff(double a, double b) {
  double d = std::remainder(a - b, 2 * pi);
  if (d <= -pi) d += 2 * pi;
  return d;
}

}  // namespace sie
