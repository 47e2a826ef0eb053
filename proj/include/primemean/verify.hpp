#pragma once

#include <optional>
#include <string>
#include <vector>

#include "primemean/sieve.hpp"

namespace pmean::verify {

/// Overrides for a check's default range. Unset fields use the defaults
/// listed in `registry()`.
struct CheckParams {
  std::optional<Integer> from;
  std::optional<Integer> to;
  std::optional<std::size_t> points;
  unsigned threads = 1;
  SieveConfig sieve;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::vector<std::string> details;
  double seconds = 0.0;
};

struct CheckInfo {
  std::string name;
  std::string description;
};

/// Registered checks in a stable order.
const std::vector<CheckInfo>& registry();

/// Runs one check; throws UnknownCheck for names outside the registry.
CheckResult run_check(const std::string& name, const CheckParams& params = {});

}  // namespace pmean::verify
