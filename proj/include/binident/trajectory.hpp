#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace binident {

// Squared-error samples of one seeded run, indexed by the estimate number k:
// k = 1 is the initial estimate, k = K + 1 the estimate after K updates.
struct TrialTrajectory {
  std::vector<std::int64_t> ks;
  std::vector<double> err_sq;
  std::uint64_t seed = 0;
  std::string mode;
  double wall_seconds = 0.0;

  double final_err_sq() const { return err_sq.empty() ? 0.0 : err_sq.back(); }
};

// Shared logging grid over estimate indices [1, K + 1]: every ceil(1.1^j),
// every power of ten, and both endpoints. Depends only on K, so all trials of
// one experiment aggregate pointwise.
inline std::vector<std::int64_t> log_grid(std::int64_t steps, bool every_step = false) {
  const std::int64_t last = steps + 1;
  std::vector<std::int64_t> grid;
  if (every_step) {
    grid.resize(static_cast<std::size_t>(last));
    std::iota(grid.begin(), grid.end(), std::int64_t{1});
    return grid;
  }
  grid.push_back(1);
  for (double g = 1.0; ; g *= 1.1) {
    const auto k = static_cast<std::int64_t>(std::ceil(g));
    if (k > last) break;
    grid.push_back(k);
  }
  for (std::int64_t p = 10; p > 0 && p <= last; p *= 10) grid.push_back(p);
  grid.push_back(last);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace binident
