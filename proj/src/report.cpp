#include "qhopf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace qhopf {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skipped:
      return "skipped";
  }
  return "unknown";
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_complex(std::complex<double> z) {
  const std::string im = format_number(z.imag());
  return format_number(z.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

CheckEntry& CheckReport::add(std::string name, double residual, double tolerance,
                             std::optional<std::string> witness) {
  CheckEntry e;
  e.name = std::move(name);
  e.residual = std::isnan(residual) ? residual : std::abs(residual);
  e.status = (residual <= tolerance) ? CheckStatus::pass : CheckStatus::fail;
  e.witness = std::move(witness);
  checks.push_back(std::move(e));
  return checks.back();
}

CheckEntry& CheckReport::add_skipped(std::string name, std::string reason) {
  CheckEntry e;
  e.name = std::move(name);
  e.status = CheckStatus::skipped;
  e.witness = std::move(reason);
  checks.push_back(std::move(e));
  return checks.back();
}

CheckEntry& CheckReport::add_failure(std::string name, std::string witness) {
  CheckEntry e;
  e.name = std::move(name);
  e.status = CheckStatus::fail;
  e.residual = std::numeric_limits<double>::infinity();
  e.witness = std::move(witness);
  checks.push_back(std::move(e));
  return checks.back();
}

void CheckReport::merge(const CheckReport& other, const std::string& prefix) {
  for (auto e : other.checks) {
    e.name = prefix + e.name;
    checks.push_back(std::move(e));
  }
}

bool CheckReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckEntry& e) { return e.status == CheckStatus::fail; });
}

double CheckReport::max_residual(const std::string& name_prefix) const {
  double m = 0.0;
  for (const auto& e : checks) {
    if (e.status == CheckStatus::skipped) continue;
    if (e.name.rfind(name_prefix, 0) != 0) continue;
    if (std::isnan(e.residual)) return e.residual;
    m = std::max(m, e.residual);
  }
  return m;
}

const CheckEntry* CheckReport::find(const std::string& name) const {
  for (const auto& e : checks)
    if (e.name == name) return &e;
  return nullptr;
}

nlohmann::json CheckReport::to_json() const {
  std::vector<const CheckEntry*> sorted;
  for (const auto& e : checks) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CheckEntry* a, const CheckEntry* b) { return a->name < b->name; });
  nlohmann::json list = nlohmann::json::array();
  for (const auto* e : sorted) {
    nlohmann::json j;
    j["name"] = e->name;
    j["status"] = to_string(e->status);
    // Round to 17 significant digits so serialisation is stable across runs.
    j["residual"] = std::isfinite(e->residual) ? std::stod(format_number(e->residual))
                                               : std::numeric_limits<double>::max();
    if (e->witness) j["witness"] = *e->witness;
    list.push_back(std::move(j));
  }
  nlohmann::json out;
  out["tool_version"] = tool_version;
  out["params"] = params;
  out["checks"] = std::move(list);
  out["overall"] = passed() ? "pass" : "fail";
  return out;
}

std::string CheckReport::summary() const {
  std::vector<const CheckEntry*> sorted;
  for (const auto& e : checks) sorted.push_back(&e);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const CheckEntry* a, const CheckEntry* b) { return a->name < b->name; });
  std::ostringstream os;
  for (const auto* e : sorted) {
    os << (e->status == CheckStatus::pass ? "  ok    " : e->status == CheckStatus::fail ? "  FAIL  " : "  skip  ")
       << e->name;
    if (e->status != CheckStatus::skipped) os << "  residual=" << format_number(e->residual);
    if (e->witness) os << "  [" << *e->witness << "]";
    os << '\n';
  }
  os << "overall: " << (passed() ? "pass" : "fail") << '\n';
  return os.str();
}

}  // namespace qhopf
