#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcm/app/config.hpp"

namespace gcm::app {

struct CheckItem {
  std::string module;
  std::string name;
  bool pass = true;
  std::string detail;
};

/// Invariant suite at L <= 50. A user scenario, when given, is checked for
/// physicality and non-negative mutual information as well.
std::vector<CheckItem> run_checks(const std::optional<RunConfig>& user);

/// Appendix comparator table: corrected and literal deviations per preset
/// scenario at a few L. Informational only.
std::string appendix_table();

}  // namespace gcm::app
