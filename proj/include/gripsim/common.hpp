// Shared error types and angle helpers.

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace gripsim {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Raised when an asperity slope satisfies mu * tan(beta) >= 1 and the
/// effective friction coefficient diverges. Callers decide whether to
/// treat the spine as unconditionally holding or to propagate.
class self_locking_error : public std::domain_error {
 public:
  explicit self_locking_error(const std::string& what) : std::domain_error(what) {}
};

/// Scenario/config validation failure. Carries every violation found so a
/// user can fix the whole file in one pass.
class config_error : public std::runtime_error {
 public:
  explicit config_error(std::vector<std::string> violations)
      : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "config error:";
    for (const auto& s : v) {
      out += "\n  - ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace gripsim
