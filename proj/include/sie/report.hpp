#pragma once

#include <string>

#include "json.hpp"
#include "sie/harness.hpp"

namespace sie {

enum class Format { json, csv };
Format format_from_string(const std::string& s);

nlohmann::json to_json(const DominanceReport& d);
nlohmann::json to_json(const SolveReport& r);
nlohmann::json to_json(const ConvergenceReport& r);
nlohmann::json to_json(const StabilityReport& r);

ConvergenceReport convergence_from_json(const nlohmann::json& j);
StabilityReport stability_from_json(const nlohmann::json& j);

std::string to_csv(const SolveReport& r);
std::string to_csv(const ConvergenceReport& r);  // one row per n
std::string to_csv(const StabilityReport& r);    // one row per eps

template <class R>
std::string render(const R& r, Format f) {
  return f == Format::json ? to_json(r).dump(2) + "\n" : to_csv(r);
}

// writes text to path, or to stdout for "-"; I/O failures raise an input error
void emit_report(const std::string& text, const std::string& path);

}  // namespace sie
