// Finger load sharing implementation: exact small QP by support enumeration.

#include "gripsim/load_distribution.hpp"

#include "gripsim/common.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gripsim {
namespace {

// Solves the 3x3 system M x = b by Gauss elimination with full pivoting.
// Rank-deficient but consistent systems get a particular solution (free
// variables zero); inconsistent ones return false.
bool solve3(std::array<std::array<double, 3>, 3> m, std::array<double, 3> b,
            std::array<double, 3>& x) {
  std::array<int, 3> col_of = {0, 1, 2};
  double scale = 0.0;
  for (const auto& row : m) {
    for (double v : row) {
      scale = std::max(scale, std::abs(v));
    }
  }
  const double tol = 1.0e-12 * std::max(1.0, scale);

  int rank = 0;
  for (int step = 0; step < 3; ++step) {
    int pr = -1;
    int pc = -1;
    double best = tol;
    for (int r = step; r < 3; ++r) {
      for (int c = step; c < 3; ++c) {
        if (std::abs(m[r][c]) > best) {
          best = std::abs(m[r][c]);
          pr = r;
          pc = c;
        }
      }
    }
    if (pr < 0) {
      break;  // remaining block is numerically zero
    }
    std::swap(m[step], m[pr]);
    std::swap(b[step], b[pr]);
    for (int r = 0; r < 3; ++r) {
      std::swap(m[r][step], m[r][pc]);
    }
    std::swap(col_of[step], col_of[pc]);
    for (int r = step + 1; r < 3; ++r) {
      const double factor = m[r][step] / m[step][step];
      for (int c = step; c < 3; ++c) {
        m[r][c] -= factor * m[step][c];
      }
      b[r] -= factor * b[step];
    }
    rank = step + 1;
  }
  for (int r = rank; r < 3; ++r) {
    if (std::abs(b[r]) > 1.0e-9 * std::max(1.0, scale)) {
      return false;  // zero row with nonzero right-hand side
    }
  }
  std::array<double, 3> pivoted{0.0, 0.0, 0.0};
  for (int r = rank - 1; r >= 0; --r) {
    double sum = b[r];
    for (int c = r + 1; c < 3; ++c) {
      sum -= m[r][c] * pivoted[c];
    }
    pivoted[r] = sum / m[r][r];
  }
  for (int r = 0; r < 3; ++r) {
    x[col_of[r]] = pivoted[r];
  }
  return true;
}

}  // namespace

LoadDistribution distribute_load(double total_n, double pull_angle_deg,
                                 const std::vector<double>& finger_azimuths_deg,
                                 double pull_azimuth_deg,
                                 double lateral_coupling,
                                 const std::vector<bool>* active) {
  const int n = static_cast<int>(finger_azimuths_deg.size());
  if (n < 2 || n > 8) {
    throw std::invalid_argument("distribute_load: need 2..8 finger azimuths");
  }
  if (total_n < 0.0) {
    throw std::domain_error("distribute_load: total force must be >= 0");
  }
  if (pull_angle_deg < 0.0 || pull_angle_deg > 90.0) {
    throw std::domain_error("distribute_load: pull angle must be in [0, 90]");
  }
  if (lateral_coupling < 0.0 || lateral_coupling > 1.0) {
    throw std::domain_error("distribute_load: coupling must be in [0, 1]");
  }
  if (active != nullptr && static_cast<int>(active->size()) != n) {
    throw std::invalid_argument(
        "distribute_load: active mask size must match finger count");
  }
  auto is_active = [&](int i) { return active == nullptr || (*active)[i]; };

  std::vector<double> azimuth(n);
  for (int i = 0; i < n; ++i) {
    azimuth[i] = deg_to_rad(finger_azimuths_deg[i]);
  }
  LoadDistribution result;
  result.loads_n.assign(n, 0.0);
  if (total_n == 0.0) {
    return result;
  }
  unsigned active_mask = 0;
  for (int i = 0; i < n; ++i) {
    if (is_active(i)) {
      active_mask |= 1u << i;
    }
  }
  if (active_mask == 0) {
    result.feasible = false;
    result.unresisted_n = total_n;
    return result;
  }

  // In-plane demand the finger loads must sum to: opposite the pull azimuth,
  // scaled by the lateral component of the pull.
  const double demand_mag =
      lateral_coupling * total_n * std::sin(deg_to_rad(pull_angle_deg));
  const double demand_x = -demand_mag * std::cos(deg_to_rad(pull_azimuth_deg));
  const double demand_y = -demand_mag * std::sin(deg_to_rad(pull_azimuth_deg));
  const std::array<double, 3> rhs = {total_n, demand_x, demand_y};

  // The optimum of the QP lies on some support subset; with at most eight
  // fingers all subsets can be tried and the best kept. On a fixed support
  // the minimizer has the form f = A^T nu, so nu comes from the 3x3 normal
  // system (A A^T) nu = rhs.
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<double> best_loads;
  std::vector<double> candidate(n);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    if ((mask & ~active_mask) != 0) {
      continue;  // uses a detached finger
    }
    std::array<std::array<double, 3>, 3> gram{};
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) {
        continue;
      }
      const std::array<double, 3> col = {1.0, std::cos(azimuth[i]),
                                         std::sin(azimuth[i])};
      for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
          gram[r][c] += col[r] * col[c];
        }
      }
    }
    std::array<double, 3> nu{};
    if (!solve3(gram, rhs, nu)) {
      continue;
    }
    std::fill(candidate.begin(), candidate.end(), 0.0);
    double cost = 0.0;
    double sum = 0.0;
    double lat_x = 0.0;
    double lat_y = 0.0;
    bool nonneg = true;
    for (int i = 0; i < n; ++i) {
      if (!(mask & (1u << i))) {
        continue;
      }
      double f =
          nu[0] + nu[1] * std::cos(azimuth[i]) + nu[2] * std::sin(azimuth[i]);
      if (f < -1.0e-9 * total_n) {
        nonneg = false;
        break;
      }
      f = std::max(f, 0.0);
      candidate[i] = f;
      cost += f * f;
      sum += f;
      lat_x += f * std::cos(azimuth[i]);
      lat_y += f * std::sin(azimuth[i]);
    }
    if (!nonneg) {
      continue;
    }
    const double res_tol = 1.0e-7 * (1.0 + total_n);
    if (std::abs(sum - total_n) > res_tol ||
        std::abs(lat_x - demand_x) > res_tol ||
        std::abs(lat_y - demand_y) > res_tol) {
      continue;  // normal system was consistent only in the rank-reduced sense
    }
    if (cost < best_cost - 1.0e-15) {
      best_cost = cost;
      best_loads = candidate;
    }
  }

  if (!best_loads.empty()) {
    result.loads_n = best_loads;
  } else {
    // No finger subset can balance the demand: dump the load on the finger
    // whose in-plane direction lines up best with it and report the miss.
    result.feasible = false;
    int best_finger = -1;
    double best_align = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!is_active(i)) {
        continue;
      }
      const double align =
          std::cos(azimuth[i]) * demand_x + std::sin(azimuth[i]) * demand_y;
      if (align > best_align) {
        best_align = align;
        best_finger = i;
      }
    }
    result.loads_n[best_finger] = total_n;
    const double miss_x = demand_x - total_n * std::cos(azimuth[best_finger]);
    const double miss_y = demand_y - total_n * std::sin(azimuth[best_finger]);
    result.unresisted_n = std::hypot(miss_x, miss_y);
  }

  int max_i = 0;
  for (int i = 1; i < n; ++i) {
    if (result.loads_n[i] > result.loads_n[max_i]) {
      max_i = i;
    }
  }
  result.max_load_finger = max_i;
  return result;
}

}  // namespace gripsim
