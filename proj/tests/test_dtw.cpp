#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "mdsift/dtw.hpp"
#include "mdsift/errors.hpp"
#include "support/oracles.hpp"

using namespace mdsift;

namespace {

std::vector<double> random_series(std::mt19937_64& rng, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
  std::uniform_int_distribution<int> val_dist(0, 2);
  std::vector<double> s(len_dist(rng));
  for (double& v : s) v = static_cast<double>(val_dist(rng));
  return s;
}

// every sequence over {0, 1, 2} of the given length, counting in base 3
std::vector<std::vector<double>> all_sequences(std::size_t length) {
  std::size_t total = 1;
  for (std::size_t i = 0; i < length; ++i) total *= 3;
  std::vector<std::vector<double>> out;
  out.reserve(total);
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<double> s(length);
    std::size_t rest = code;
    for (std::size_t i = 0; i < length; ++i) {
      s[i] = static_cast<double>(rest % 3);
      rest /= 3;
    }
    out.push_back(std::move(s));
  }
  return out;
}

double path_cost(const WarpResult& result, const std::vector<double>& a,
                 const std::vector<double>& b) {
  double cost = 0.0;
  for (const auto& [i, j] : result.path) cost += std::abs(a[i] - b[j]);
  return cost;
}

}  // namespace

TEST_CASE("known alignments") {
  auto d = [](const std::vector<double>& a, const std::vector<double>& b) {
    return dtw_distance(a, b).distance;
  };
  CHECK(d({0.0, 0.0}, {1.0, 1.0}) == doctest::Approx(2.0));
  // the repeated 2 absorbs into the diagonal for free
  CHECK(d({1.0, 2.0, 3.0}, {1.0, 2.0, 2.0, 3.0}) == doctest::Approx(0.0));
  // singleton against a run sums every deviation
  CHECK(d({5.0}, {1.0, 2.0, 3.0}) == doctest::Approx(9.0));
  CHECK(d({1.0}, {1.0}) == 0.0);
}

TEST_CASE("self-alignment is free and purely diagonal") {
  const std::vector<double> a = {0.4, 1.7, 0.2, 3.3, 3.3, 1.0};
  const WarpResult r = dtw_distance(a, a);
  CHECK(r.distance == 0.0);
  REQUIRE(r.path.size() == a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(r.path[k] == std::pair<std::size_t, std::size_t>{k, k});
  }
}

TEST_CASE("distance is symmetric") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_series(rng, 12);
    const auto b = random_series(rng, 12);
    CHECK(dtw_distance(a, b).distance == doctest::Approx(dtw_distance(b, a).distance));
    CHECK(dtw_distance_only(a, b) == doctest::Approx(dtw_distance_only(b, a)));
  }
}

TEST_CASE("the reported path is monotone, complete, and realizes the distance") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_series(rng, 10);
    const auto b = random_series(rng, 10);
    const WarpResult r = dtw_distance(a, b);

    REQUIRE_FALSE(r.path.empty());
    CHECK(r.path.front() == std::pair<std::size_t, std::size_t>{0, 0});
    CHECK(r.path.back() == std::pair<std::size_t, std::size_t>{a.size() - 1, b.size() - 1});
    for (std::size_t k = 1; k < r.path.size(); ++k) {
      const std::size_t di = r.path[k].first - r.path[k - 1].first;
      const std::size_t dj = r.path[k].second - r.path[k - 1].second;
      CHECK(di <= 1);
      CHECK(dj <= 1);
      CHECK(di + dj >= 1);
    }
    CHECK(path_cost(r, a, b) == doctest::Approx(r.distance));
  }
}

TEST_CASE("the rolling variant agrees with the full table") {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_series(rng, 15);
    const auto b = random_series(rng, 15);
    CHECK(dtw_distance_only(a, b) == doctest::Approx(dtw_distance(a, b).distance));
  }
}

TEST_CASE("dynamic program matches exhaustive path enumeration") {
  // full cross product of every sequence up to length 3 over {0, 1, 2}
  std::vector<std::vector<double>> pool;
  for (std::size_t len = 1; len <= 3; ++len) {
    auto seqs = all_sequences(len);
    pool.insert(pool.end(), seqs.begin(), seqs.end());
  }
  for (const auto& a : pool) {
    for (const auto& b : pool) {
      CHECK(dtw_distance(a, b).distance == doctest::Approx(oracles::dtw_bruteforce(a, b)));
    }
  }

  // random spot checks at the oracle's length limit
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_series(rng, 6);
    const auto b = random_series(rng, 6);
    CHECK(dtw_distance_only(a, b) == doctest::Approx(oracles::dtw_bruteforce(a, b)));
  }
}

TEST_CASE("alignment rejects empty and non-finite series") {
  const std::vector<double> good = {1.0, 2.0};
  const std::vector<double> empty;
  const std::vector<double> poisoned = {1.0, std::numeric_limits<double>::quiet_NaN()};

  CHECK_THROWS_AS(dtw_distance(empty, good), DomainError);
  CHECK_THROWS_AS(dtw_distance(good, empty), DomainError);
  CHECK_THROWS_AS(dtw_distance_only(empty, good), DomainError);
  CHECK_THROWS_AS(dtw_distance(good, poisoned), DomainError);
  CHECK_THROWS_AS(dtw_distance_only(poisoned, good), DomainError);
}

TEST_CASE("pairwise statistics cover every unordered pair") {
  const std::vector<std::vector<double>> three = {{0.0, 0.0}, {1.0, 1.0}, {1.0, 1.0}};
  const PairwiseDtwStats stats = pairwise_dtw_stats(three);
  CHECK(stats.pair_count == 3);
  CHECK(stats.mean == doctest::Approx(4.0 / 3.0));
  CHECK(stats.std == doctest::Approx(std::sqrt(4.0 / 3.0)));

  const PairwiseDtwStats single = pairwise_dtw_stats({{0.0}, {2.5}});
  CHECK(single.pair_count == 1);
  CHECK(single.mean == doctest::Approx(2.5));
  CHECK(single.std == 0.0);

  CHECK_THROWS_AS(pairwise_dtw_stats({}), DomainError);
  CHECK_THROWS_AS(pairwise_dtw_stats({{1.0}}), DomainError);
}
