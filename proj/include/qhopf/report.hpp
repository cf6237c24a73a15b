#ifndef QHOPF_REPORT_HPP
#define QHOPF_REPORT_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace qhopf {

inline constexpr const char* kToolVersion = "qhopf 1.0.0";

enum class CheckStatus { pass, fail, skipped };

const char* to_string(CheckStatus s);

struct CheckEntry {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  double residual = 0.0;
  std::optional<std::string> witness;
};

/// Structured outcome of a verification run. Failures are entries, never
/// exceptions; overall() is pass iff every non-skipped entry passes.
struct CheckReport {
  std::string tool_version = kToolVersion;
  nlohmann::json params = nlohmann::json::object();
  std::vector<CheckEntry> checks;

  /// Records `residual` against `tolerance`; NaN counts as a failure.
  CheckEntry& add(std::string name, double residual, double tolerance,
                  std::optional<std::string> witness = std::nullopt);
  CheckEntry& add_skipped(std::string name, std::string reason);
  CheckEntry& add_failure(std::string name, std::string witness);

  void merge(const CheckReport& other, const std::string& prefix = "");

  bool passed() const;
  double max_residual(const std::string& name_prefix = "") const;
  const CheckEntry* find(const std::string& name) const;

  /// Entries ordered by name, numbers at 17 significant digits.
  nlohmann::json to_json() const;
  std::string summary() const;
};

/// %.17g formatting used for every number the tools print.
std::string format_number(double v);
/// "re+imi" with both parts at 17 significant digits.
std::string format_complex(std::complex<double> z);

}  // namespace qhopf

#endif  // QHOPF_REPORT_HPP
