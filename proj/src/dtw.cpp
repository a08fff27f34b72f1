#include "mdsift/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mdsift/errors.hpp"

namespace mdsift {

namespace {

void validate_series(std::span<const double> s, const char* name) {
  if (s.empty()) {
    throw DomainError(std::string("dtw: ") + name + " is empty");
  }
  for (double v : s) {
    if (!std::isfinite(v)) {
      throw DomainError(std::string("dtw: ") + name + " contains a non-finite value");
    }
  }
}

}  // namespace

WarpResult dtw_distance(std::span<const double> a, std::span<const double> b) {
  validate_series(a, "first series");
  validate_series(b, "second series");

  const std::size_t n = a.size();
  const std::size_t m = b.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> d(n * m, inf);
  auto at = [&](std::size_t i, std::size_t j) -> double& { return d[i * m + j]; };

  at(0, 0) = std::abs(a[0] - b[0]);
  for (std::size_t i = 1; i < n; ++i) at(i, 0) = at(i - 1, 0) + std::abs(a[i] - b[0]);
  for (std::size_t j = 1; j < m; ++j) at(0, j) = at(0, j - 1) + std::abs(a[0] - b[j]);
  for (std::size_t i = 1; i < n; ++i) {
    for (std::size_t j = 1; j < m; ++j) {
      const double best = std::min({at(i - 1, j - 1), at(i - 1, j), at(i, j - 1)});
      at(i, j) = std::abs(a[i] - b[j]) + best;
    }
  }

  WarpResult result;
  result.distance = at(n - 1, m - 1);

  // Backtrack; ties prefer the diagonal, then the step advancing `a`.
  std::size_t i = n - 1, j = m - 1;
  result.path.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = at(i - 1, j - 1);
      const double vert = at(i - 1, j);
      const double horiz = at(i, j - 1);
      const double best = std::min({diag, vert, horiz});
      if (diag == best) {
        --i;
        --j;
      } else if (vert == best) {
        --i;
      } else {
        --j;
      }
    }
    result.path.emplace_back(i, j);
  }
  std::reverse(result.path.begin(), result.path.end());
  return result;
}

double dtw_distance_only(std::span<const double> a, std::span<const double> b) {
  validate_series(a, "first series");
  validate_series(b, "second series");
  if (b.size() > a.size()) {
    std::swap(a, b);  // roll along the shorter series
  }

  const std::size_t n = a.size();
  const std::size_t m = b.size();
  std::vector<double> prev(m), curr(m);
  prev[0] = std::abs(a[0] - b[0]);
  for (std::size_t j = 1; j < m; ++j) prev[j] = prev[j - 1] + std::abs(a[0] - b[j]);
  for (std::size_t i = 1; i < n; ++i) {
    curr[0] = prev[0] + std::abs(a[i] - b[0]);
    for (std::size_t j = 1; j < m; ++j) {
      curr[j] = std::abs(a[i] - b[j]) + std::min({prev[j - 1], prev[j], curr[j - 1]});
    }
    std::swap(prev, curr);
  }
  return prev[m - 1];
}

PairwiseDtwStats pairwise_dtw_stats(const std::vector<std::vector<double>>& series) {
  if (series.size() < 2) {
    throw DomainError("pairwise_dtw_stats: need at least two series");
  }
  std::vector<double> distances;
  distances.reserve(series.size() * (series.size() - 1) / 2);
  for (std::size_t i = 0; i < series.size(); ++i) {
    for (std::size_t j = i + 1; j < series.size(); ++j) {
      distances.push_back(dtw_distance_only(series[i], series[j]));
    }
  }

  PairwiseDtwStats stats;
  stats.pair_count = distances.size();
  double sum = 0.0;
  for (double v : distances) sum += v;
  stats.mean = sum / static_cast<double>(distances.size());
  if (distances.size() > 1) {
    double ss = 0.0;
    for (double v : distances) ss += (v - stats.mean) * (v - stats.mean);
    stats.std = std::sqrt(ss / static_cast<double>(distances.size() - 1));
  }
  return stats;
}

}  // namespace mdsift
