#include "problem_file.hpp"

#include <fstream>

#include "sie/dominant.hpp"

namespace sie::cli {

namespace {

struct Term {
  int k = 0, l = 0;
  cplx c;
};

std::vector<Term> terms(const json& list, int ints) {
  if (!list.is_array()) fail(ErrorKind::invalid_input, "coefficient list must be an array");
  std::vector<Term> out;
  for (const auto& e : list) {
    if (!e.is_array() || static_cast<int>(e.size()) != ints + 2)
      fail(ErrorKind::invalid_input, "coefficient entry needs " + std::to_string(ints + 2) + " numbers");
    Term t;
    t.k = e[0].get<int>();
    if (ints == 2) t.l = e[1].get<int>();
    t.c = {e[ints].get<double>(), e[ints + 1].get<double>()};
    out.push_back(t);
  }
  return out;
}

bool is_constant(const json& j) { return j.is_number() || (j.is_array() && j.size() == 2); }

const json& field(const json& j, const char* key) {
  if (!j.contains(key)) fail(ErrorKind::invalid_input, std::string("problem is missing \"") + key + "\"");
  return j.at(key);
}

const char* form_of(const json& j) {
  for (const char* k : {"fourier", "chebyshev", "fourier2", "poly2"})
    if (j.is_object() && j.contains(k)) return k;
  fail(ErrorKind::invalid_input, "unrecognized function value: " + j.dump());
}

}  // namespace

cplx constant_value(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  fail(ErrorKind::invalid_input, "expected a constant: " + j.dump());
}

std::function<cplx(cplx)> circle_fn(const json& j) {
  if (is_constant(j)) return [c = constant_value(j)](cplx) { return c; };
  if (std::string(form_of(j)) != "fourier") fail(ErrorKind::invalid_input, "circle functions use \"fourier\"");
  auto ts = terms(j.at("fourier"), 1);
  return [ts](cplx t) {
    cplx s{};
    for (const auto& e : ts) s += e.c * std::pow(t, e.k);
    return s;
  };
}

std::function<cplx(double)> angle_fn(const json& j) {
  auto f = circle_fn(j);
  return [f](double s) { return f(unit(s)); };
}

std::function<cplx(double)> segment_fn(const json& j) {
  if (is_constant(j)) return [c = constant_value(j)](double) { return c; };
  if (std::string(form_of(j)) != "chebyshev") fail(ErrorKind::invalid_input, "segment functions use \"chebyshev\"");
  auto ts = terms(j.at("chebyshev"), 1);
  return [ts](double t) {
    cplx s{};
    for (const auto& e : ts) s += e.c * cheb_t(e.k, t);
    return s;
  };
}

std::function<cplx(cplx, cplx)> torus_fn(const json& j) {
  if (is_constant(j)) return [c = constant_value(j)](cplx, cplx) { return c; };
  if (std::string(form_of(j)) != "fourier2") fail(ErrorKind::invalid_input, "torus functions use \"fourier2\"");
  auto ts = terms(j.at("fourier2"), 2);
  return [ts](cplx t1, cplx t2) {
    cplx s{};
    for (const auto& e : ts) s += e.c * std::pow(t1, e.k) * std::pow(t2, e.l);
    return s;
  };
}

std::function<cplx(double, double)> plane_fn(const json& j) {
  if (is_constant(j)) return [c = constant_value(j)](double, double) { return c; };
  if (std::string(form_of(j)) != "poly2") fail(ErrorKind::invalid_input, "plane functions use \"poly2\"");
  auto ts = terms(j.at("poly2"), 2);
  for (const auto& e : ts)
    if (e.k < 0 || e.l < 0) fail(ErrorKind::invalid_input, "poly2 exponents must be non-negative");
  return [ts](double u, double v) {
    cplx s{};
    for (const auto& e : ts) s += e.c * std::pow(u, e.k) * std::pow(v, e.l);
    return s;
  };
}

json load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_input, "cannot read problem file " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_input, "problem file " + path + ": " + e.what());
  }
}

json default_problem(const std::string& kind) {
  if (kind == "circle")
    return json::parse(R"({"a": {"fourier": [[0, 2, 0], [1, 0.125, 0], [-1, 0.125, 0]]},
      "b": 0.5, "f": {"fourier": [[0, 1, 0], [1, 0.5, 0], [-2, 0, 0.3]]},
      "h": {"fourier2": [[0, 0, 0.2, 0], [1, -1, 0.1, 0]]}, "eta": 0.5})");
  if (kind == "dominant") return json::parse(R"({"f": {"chebyshev": [[3, 1, 0]]}, "index": 1, "p": 0.7})");
  if (kind == "spline")
    return json::parse(R"({"a": {"chebyshev": [[0, 1.5, 0], [1, 0.3, 0]]}, "b": 0.4,
      "f": {"chebyshev": [[0, 1, 0], [2, 0.5, 0]]}})");
  if (kind == "exceptional")
    return json::parse(R"({"geometry": "circle", "a": {"fourier": [[0, 1.5, 0], [1, 0.25, 0], [-1, 0.25, 0]]},
      "b": 1, "f": {"fourier": [[0, 0.5, 0], [1, 0.5, 0], [-1, 0.5, 0]]}})");
  if (kind == "nonlinear")
    return json::parse(R"({"a": [[1, 2.0], [2, 0.05]], "h": [[1, 0.5], [2, 0.05]],
      "f": {"fourier": [[0, 1, 0], [1, 0.3, 0], [-1, 0.1, 0]]}})");
  if (kind == "bisingular")
    return json::parse(R"({"a": {"fourier2": [[0, 0, 2, 0], [1, 0, 0.2, 0], [-1, 0, 0.2, 0]]},
      "d": {"fourier2": [[0, 0, 0.5, 0], [0, 1, 0.1, 0]]},
      "f": {"fourier2": [[0, 0, 1, 0], [1, 1, 0.3, 0], [-1, 2, 0.2, 0]]}})");
  if (kind == "multidim")
    return json::parse(R"({"characteristic": "sin2", "A": 1, "a": {"poly2": [[0, 0, 1, 0], [1, 0, 0.1, 0]]},
      "b": 0.1, "f": {"poly2": [[0, 0, 1, 0], [2, 0, -0.5, 0], [0, 2, -0.5, 0]]}})");
  fail(ErrorKind::invalid_input, "no built-in problem for " + kind);
}

CircleProblem circle_problem(const json& j) {
  CircleProblem p;
  p.a = circle_fn(field(j, "a"));
  p.b = circle_fn(j.value("b", json(0.0)));
  p.f = circle_fn(field(j, "f"));
  if (j.contains("h")) {
    auto k = torus_fn(j.at("h"));
    p.h = [k](cplx t, cplx tau) { return k(t, tau); };
  }
  p.weak.eta = j.value("eta", 0.0);
  if (j.value("form", std::string("weak")) == "cauchy_full") p.form = KernelForm::cauchy_full;
  return p;
}

SegmentDominantProblem dominant_problem(const json& j) {
  SegmentDominantProblem p;
  auto f = segment_fn(field(j, "f"));
  p.f = f;
  const int idx = j.value("index", 0);
  if (idx != 0 && idx != 1) fail(ErrorKind::invalid_input, "index must be 0 or 1");
  p.xi = idx == 0 ? SegmentIndex::zero : SegmentIndex::one;
  p.p = j.value("p", 0.0);
  return p;
}

SegmentProblem segment_problem(const json& j) {
  SegmentProblem p;
  p.a = segment_fn(field(j, "a"));
  p.b = segment_fn(field(j, "b"));
  p.f = segment_fn(field(j, "f"));
  return p;
}

ExceptionalProblem exceptional_problem(const json& j) {
  ExceptionalProblem p;
  const std::string g = j.value("geometry", std::string("circle"));
  if (g == "circle") {
    p.a = angle_fn(field(j, "a"));
    p.b = angle_fn(field(j, "b"));
    p.f = angle_fn(field(j, "f"));
  } else if (g == "segment" || g == "line") {
    p.a = segment_fn(field(j, "a"));
    p.b = segment_fn(field(j, "b"));
    p.f = segment_fn(field(j, "f"));
  } else {
    fail(ErrorKind::invalid_input, "geometry must be circle, segment or line");
  }
  return p;
}

NonlinearCircleProblem nonlinear_problem(const json& j) {
  auto powers = [](const json& list) {
    std::vector<std::pair<int, cplx>> out;
    for (const auto& e : list) {
      if (!e.is_array() || e.size() < 2) fail(ErrorKind::invalid_input, "power entries are [m, coefficient]");
      const int m = e[0].get<int>();
      if (m < 0) fail(ErrorKind::invalid_input, "powers must be non-negative");
      out.emplace_back(m, constant_value(e.size() == 2 ? e[1] : json::array({e[1], e[2]})));
    }
    return out;
  };
  const auto a = powers(field(j, "a")), h = powers(field(j, "h"));
  auto val = [](const std::vector<std::pair<int, cplx>>& ps, cplx u, int d) {
    cplx s{};
    for (auto [m, c] : ps) {
      if (m < d) continue;
      double f = 1.0;
      for (int q = 0; q < d; ++q) f *= m - q;
      s += c * f * std::pow(u, m - d);
    }
    return s;
  };
  NonlinearCircleProblem p;
  p.a = [=](cplx, cplx u) { return val(a, u, 0); };
  p.a_u = [=](cplx, cplx u) { return val(a, u, 1); };
  p.h = [=](cplx, cplx, cplx u) { return val(h, u, 0); };
  p.h_u = [=](cplx, cplx, cplx u) { return val(h, u, 1); };
  p.h_uu = [=](cplx, cplx, cplx u) { return val(h, u, 2); };
  p.f = circle_fn(field(j, "f"));
  return p;
}

BisingularProblem bisingular_problem(const json& j) {
  BisingularProblem p;
  p.a = torus_fn(field(j, "a"));
  p.d = torus_fn(field(j, "d"));
  p.f = torus_fn(field(j, "f"));
  return p;
}

FourTermProblem four_term_problem(const json& j) {
  FourTermProblem p;
  p.a = torus_fn(field(j, "a"));
  p.b = torus_fn(j.value("b", json(0.0)));
  p.c = torus_fn(j.value("c", json(0.0)));
  p.d = torus_fn(field(j, "d"));
  p.f = torus_fn(field(j, "f"));
  return p;
}

Problem2D multidim_problem(const json& j) {
  Problem2D p;
  p.a = plane_fn(field(j, "a"));
  p.b = plane_fn(field(j, "b"));
  p.f = plane_fn(field(j, "f"));
  p.ch = characteristic(j.value("characteristic", std::string("sin2")));
  return p;
}

}  // namespace sie::cli
