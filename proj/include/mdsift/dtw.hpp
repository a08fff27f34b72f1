#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace mdsift {

/// Alignment cost and the warping path that realizes it.
struct WarpResult {
  double distance = 0.0;
  std::vector<std::pair<std::size_t, std::size_t>> path;  // (i, j), front()=(0,0)
};

/// Classic dynamic-time-warping distance: local cost |a_i - b_j|, steps
/// (+1,0), (0,+1), (+1,+1), full O(n*m) table, no band constraint.
/// Path ties prefer the diagonal step, then the step advancing `a`.
WarpResult dtw_distance(std::span<const double> a, std::span<const double> b);

/// Same recurrence, distance only, O(min(n,m)) memory.
double dtw_distance_only(std::span<const double> a, std::span<const double> b);

struct PairwiseDtwStats {
  double mean = 0.0;
  double std = 0.0;          // sample std over pairs; one pair -> 0
  std::size_t pair_count = 0;
};

/// Statistics over all C(n,2) unordered pairs; requires n >= 2.
PairwiseDtwStats pairwise_dtw_stats(const std::vector<std::vector<double>>& series);

}  // namespace mdsift
