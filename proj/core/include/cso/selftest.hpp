#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cso {

struct SelftestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Fast property checks across the modules; prints one line per check.
std::vector<SelftestResult> run_selftest(std::ostream& out);

}  // namespace cso
