#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace orthoplex {

// Resource limits for the brute-force and table-driven routines. Every
// operation that can blow up takes one of these; the CLI can raise them.
struct Guards {
  std::uint64_t enumeration_limit = 100'000'000;  // lattice points visited
  std::uint64_t dp_budget = 4'000'000'000;        // DP cell updates
  std::uint64_t box_cells = 20'000'000;           // grid cells per GridFunction
  unsigned ehrhart_max_dimension = 64;

  static Guards unlimited() {
    constexpr auto inf = std::numeric_limits<std::uint64_t>::max();
    return Guards{inf, inf, inf, std::numeric_limits<unsigned>::max()};
  }
};

// Thrown when a guard would be exceeded. `guard()` names the limit.
class GuardViolation : public std::runtime_error {
 public:
  GuardViolation(std::string guard, const std::string& detail)
      : std::runtime_error("guard '" + guard + "' violated: " + detail),
        guard_(std::move(guard)) {}

  const std::string& guard() const noexcept { return guard_; }

 private:
  std::string guard_;
};

// A floating-point evaluation produced inf/nan.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orthoplex
