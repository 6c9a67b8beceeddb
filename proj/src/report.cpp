#include "sie/report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

namespace sie {

using nlohmann::json;

namespace {

// NaN is written as null and read back as NaN
json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double num(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json nums(const rvec& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

rvec nums(const json& j) {
  rvec v;
  for (const auto& x : j) v.push_back(num(x));
  return v;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Format format_from_string(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  fail(ErrorKind::invalid_input, "unknown report format: " + s);
}

json to_json(const DominanceReport& d) {
  return {{"min_margin", num(d.min_margin)}, {"dominant", d.dominant}, {"rows", d.margins.size()}};
}

json to_json(const SolveReport& r) {
  json j{{"scheme", r.scheme},
         {"n", r.n},
         {"residual", num(r.residual)},
         {"dominance", to_json(r.dominance)},
         {"solution_norm", num(r.solution_norm)},
         {"parameter", num(r.parameter)}};
  if (r.error >= 0) j["error"] = num(r.error);
  return j;
}

json to_json(const ConvergenceReport& r) {
  return {{"name", r.name},     {"ns", r.ns},         {"errors", nums(r.errors)},
          {"order", num(r.order)}, {"order_fitted", r.order_fitted}, {"monotone", r.monotone},
          {"failure", r.failure}};
}

json to_json(const StabilityReport& r) {
  return {{"name", r.name},
          {"n", r.n},
          {"eps", nums(r.eps)},
          {"deviations", nums(r.deviations)},
          {"ratios", nums(r.ratios)},
          {"failures", r.failures},
          {"margins", nums(r.margins)},
          {"base_margin", num(r.base_margin)},
          {"zero_deviation", num(r.zero_deviation)},
          {"spread", num(r.spread)},
          {"stable", r.stable}};
}

ConvergenceReport convergence_from_json(const json& j) {
  ConvergenceReport r;
  r.name = j.at("name").get<std::string>();
  r.ns = j.at("ns").get<std::vector<int>>();
  r.errors = nums(j.at("errors"));
  r.order = num(j.at("order"));
  r.order_fitted = j.at("order_fitted").get<bool>();
  r.monotone = j.at("monotone").get<bool>();
  r.failure = j.at("failure").get<std::string>();
  return r;
}

StabilityReport stability_from_json(const json& j) {
  StabilityReport r;
  r.name = j.at("name").get<std::string>();
  r.n = j.at("n").get<int>();
  r.eps = nums(j.at("eps"));
  r.deviations = nums(j.at("deviations"));
  r.ratios = nums(j.at("ratios"));
  r.failures = j.at("failures").get<std::vector<std::string>>();
  r.margins = nums(j.at("margins"));
  r.base_margin = num(j.at("base_margin"));
  r.zero_deviation = num(j.at("zero_deviation"));
  r.spread = num(j.at("spread"));
  r.stable = j.at("stable").get<bool>();
  return r;
}

std::string to_csv(const SolveReport& r) {
  std::string s = "scheme,n,residual,min_margin,dominant,solution_norm,error,parameter\n";
  s += r.scheme + "," + std::to_string(r.n) + "," + fmt(r.residual) + "," + fmt(r.dominance.min_margin) + "," +
       (r.dominance.dominant ? "1" : "0") + "," + fmt(r.solution_norm) + "," + fmt(r.error) + "," + fmt(r.parameter) +
       "\n";
  return s;
}

std::string to_csv(const ConvergenceReport& r) {
  std::string s = "n,error\n";
  for (std::size_t i = 0; i < r.ns.size(); ++i) s += std::to_string(r.ns[i]) + "," + fmt(r.errors[i]) + "\n";
  return s;
}

std::string to_csv(const StabilityReport& r) {
  std::string s = "eps,deviation,ratio,margin,failure\n";
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    s += fmt(r.eps[i]) + "," + fmt(r.deviations[i]) + "," + fmt(r.ratios[i]) + ",";
    if (i < r.margins.size()) s += fmt(r.margins[i]);
    s += "," + (r.failures[i].empty() ? std::string() : "\"" + r.failures[i] + "\"") + "\n";
  }
  return s;
}

void emit_report(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::invalid_input, "cannot open " + path + " for writing");
  out << text;
  if (!out) fail(ErrorKind::invalid_input, "write to " + path + " failed");
}

}  // namespace sie
