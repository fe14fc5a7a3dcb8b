#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "ccmatch/matcher.hpp"
#include "ccmatch/synth.hpp"
#include "oracles.hpp"

using ccmatch::AlphaProfile;
using ccmatch::MatchCurve;
using ccmatch::TimeSeries;
using ccmatch::Vector;

namespace {

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

TimeSeries random_series(std::mt19937_64& rng, size_t n) {
  return TimeSeries(oracle::to_eigen(oracle::random_vector(rng, n)));
}

}  // namespace

TEST_CASE("alpha_profile has l - k entries") {
  std::mt19937_64 rng(31);
  const TimeSeries data = random_series(rng, 10);
  const auto profile = ccmatch::alpha_profile(data.samples().head(3), data);
  CHECK(profile.values.size() == 7);
  CHECK(profile.template_length == 3);
  CHECK(profile.data_length == 10);
}

TEST_CASE("alpha_profile of a periodic pattern") {
  const TimeSeries data(vec({1, 2, 1, 2, 1, 2}));
  const auto profile = ccmatch::alpha_profile(vec({1, 2}), data);
  REQUIRE(profile.values.size() == 4);
  // misaligned window [2,1]: (1*2 + 2*1) / 5 = 0.8
  CHECK(*profile.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*profile.values[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(*profile.values[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*profile.values[3] == doctest::Approx(0.8).epsilon(1e-12));
}

TEST_CASE("alpha_profile self-match at lag zero") {
  std::mt19937_64 rng(32);
  const TimeSeries data = random_series(rng, 40);
  const auto profile =
      ccmatch::alpha_profile(data.samples().head(data.size() - 1), data);
  REQUIRE(profile.values.size() == 1);
  CHECK(*profile.values[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("alpha_profile marks silent windows as skipped") {
  const TimeSeries data(vec({0, 0, 0, 1, 1}));
  const auto profile = ccmatch::alpha_profile(vec({1, 1}), data);
  REQUIRE(profile.values.size() == 3);
  CHECK_FALSE(profile.values[0].has_value());
  CHECK_FALSE(profile.values[1].has_value());
  CHECK(profile.values[2].has_value());
  CHECK(*profile.values[2] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("alpha_profile contract violations") {
  const TimeSeries data(vec({1, 2, 3}));
  CHECK_THROWS_AS(ccmatch::alpha_profile(vec({1, 2, 3}), data), ccmatch::ContractError);
  CHECK_THROWS_AS(ccmatch::alpha_profile(vec({1, 2, 3, 4}), data), ccmatch::ContractError);
  CHECK_THROWS_AS(ccmatch::alpha_profile(vec({0, 0}), data),
                  ccmatch::DegenerateTemplateError);
}

TEST_CASE("count_matches uses absolute values") {
  AlphaProfile profile;
  profile.template_length = 2;
  profile.data_length = 5;
  profile.values = {0.99, -0.985, 0.5};
  CHECK(ccmatch::count_matches(profile, 0.98) == 2);

  AlphaProfile skipped;
  skipped.values = {std::nullopt, std::nullopt};
  CHECK(ccmatch::count_matches(skipped, 0.98) == 0);

  CHECK_THROWS_AS(ccmatch::count_matches(profile, 0.0), ccmatch::ContractError);
  CHECK_THROWS_AS(ccmatch::count_matches(profile, 1.5), ccmatch::ContractError);
}

TEST_CASE("tiled data yields one match per fully contained tile") {
  std::mt19937_64 rng(33);
  const size_t k = 8;
  const size_t tiles = 5;
  const auto tile = oracle::random_vector(rng, k);
  std::vector<double> data;
  // p tiles plus one more so that p aligned occurrences fall inside the
  // profile's l - k lags
  for (size_t t = 0; t < tiles + 1; ++t) data.insert(data.end(), tile.begin(), tile.end());

  const auto expected = oracle::profile(tile, data);
  size_t oracle_count = 0;
  for (const auto& value : expected) {
    if (value && std::abs(*value) >= 0.98) ++oracle_count;
  }
  CHECK(oracle_count >= tiles);

  const auto profile =
      ccmatch::alpha_profile(oracle::to_eigen(tile), TimeSeries(oracle::to_eigen(data)));
  CHECK(ccmatch::count_matches(profile, 0.98) == static_cast<std::int64_t>(oracle_count));
}

TEST_CASE("property: profile length law") {
  std::mt19937_64 rng(34);
  for (size_t l = 2; l <= 64; ++l) {
    const TimeSeries data = random_series(rng, l);
    const size_t k = 1 + static_cast<size_t>(rng() % (l - 1));
    const auto profile =
        ccmatch::alpha_profile(data.samples().head(static_cast<Eigen::Index>(k)), data);
    CHECK(profile.values.size() == l - k);
  }
}

TEST_CASE("property: count monotonicity in threshold") {
  std::mt19937_64 rng(35);
  for (int iter = 0; iter < 50; ++iter) {
    const size_t l = 20 + static_cast<size_t>(rng() % 100);
    const size_t k = 1 + static_cast<size_t>(rng() % 10);
    const TimeSeries data = random_series(rng, l);
    const auto profile = ccmatch::alpha_profile(
        oracle::to_eigen(oracle::random_vector(rng, k)), data);
    std::uniform_real_distribution<double> dist(0.01, 1.0);
    double t1 = dist(rng), t2 = dist(rng);
    if (t1 > t2) std::swap(t1, t2);
    CHECK(ccmatch::count_matches(profile, t1) >= ccmatch::count_matches(profile, t2));
  }
}

TEST_CASE("property: profile values match the naive oracle") {
  std::mt19937_64 rng(36);
  for (int iter = 0; iter < 50; ++iter) {
    const size_t l = 2 + static_cast<size_t>(rng() % 199);
    const size_t k = 1 + static_cast<size_t>(rng() % (l - 1));
    const auto f = oracle::random_vector(rng, k);
    const auto m = oracle::random_vector(rng, l);
    const auto naive = oracle::profile(f, m);
    const auto profile =
        ccmatch::alpha_profile(oracle::to_eigen(f), TimeSeries(oracle::to_eigen(m)));
    REQUIRE(profile.values.size() == naive.size());
    for (size_t i = 0; i < naive.size(); ++i) {
      REQUIRE(profile.values[i].has_value() == naive[i].has_value());
      if (naive[i]) {
        CHECK(*profile.values[i] == doctest::Approx(*naive[i]).epsilon(1e-9));
        CHECK(std::abs(*profile.values[i]) <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("property: prepending data shifts the profile") {
  std::mt19937_64 rng(37);
  for (int iter = 0; iter < 20; ++iter) {
    const size_t l = 30 + static_cast<size_t>(rng() % 50);
    const size_t k = 1 + static_cast<size_t>(rng() % 8);
    const size_t shift = 1 + static_cast<size_t>(rng() % 10);
    const auto f = oracle::to_eigen(oracle::random_vector(rng, k));
    const auto m = oracle::random_vector(rng, l);
    auto extended = oracle::random_vector(rng, shift);
    extended.insert(extended.end(), m.begin(), m.end());

    const auto base = ccmatch::alpha_profile(f, TimeSeries(oracle::to_eigen(m)));
    const auto shifted = ccmatch::alpha_profile(f, TimeSeries(oracle::to_eigen(extended)));
    for (size_t i = 0; i < base.values.size(); ++i) {
      // identical windows, identical arithmetic: bitwise equal
      CHECK(shifted.values[i + shift] == base.values[i]);
    }
  }
}

TEST_CASE("match_curve on a self-prefix keeps at least one match at every length") {
  std::mt19937_64 rng(38);
  const TimeSeries data = random_series(rng, 120);
  const auto curve =
      ccmatch::match_curve(data.samples(), data, 10, 50, 1, 0.98, "self", "self");
  CHECK(curve.points.size() == 41);
  for (const auto& point : curve.points) {
    CHECK(point.count >= 1);
  }
}

TEST_CASE("match_curve grid follows min/max/step") {
  std::mt19937_64 rng(39);
  const TimeSeries data = random_series(rng, 40);
  const auto curve = ccmatch::match_curve(data.samples().head(12), data, 1, 5, 1, 0.98);
  REQUIRE(curve.points.size() == 5);
  for (size_t i = 0; i < 5; ++i) {
    CHECK(curve.points[i].length == static_cast<Eigen::Index>(i + 1));
  }

  const auto strided = ccmatch::match_curve(data.samples().head(12), data, 5, 11, 3, 0.98);
  REQUIRE(strided.points.size() == 3);
  CHECK(strided.points[0].length == 5);
  CHECK(strided.points[1].length == 8);
  CHECK(strided.points[2].length == 11);
}

TEST_CASE("match_curve counts agree with per-length profiles") {
  std::mt19937_64 rng(40);
  for (int iter = 0; iter < 10; ++iter) {
    const TimeSeries data = random_series(rng, 150);
    const auto source = oracle::to_eigen(oracle::random_vector(rng, 60));
    const auto curve = ccmatch::match_curve(source, data, 3, 47, 7, 0.6);
    for (const auto& point : curve.points) {
      const auto profile = ccmatch::alpha_profile(source.head(point.length), data);
      CHECK(point.count == ccmatch::count_matches(profile, 0.6));
      CHECK(point.count <= data.size() - point.length);
    }
  }
}

TEST_CASE("match_curve flags zero-norm prefixes and recovers afterwards") {
  Vector source(6);
  source << 0, 0, 0, 1, 2, 1;
  std::mt19937_64 rng(41);
  TimeSeries data = random_series(rng, 30);
  const auto curve = ccmatch::match_curve(source, data, 2, 6, 2, 0.98);
  REQUIRE(curve.points.size() == 3);
  CHECK(curve.points[0].skipped);  // prefix [0,0] has zero norm
  CHECK(curve.points[0].count == 0);
  CHECK_FALSE(curve.points[1].skipped);  // prefix [0,0,0,1] does not
  CHECK_FALSE(curve.points[2].skipped);
}

TEST_CASE("match_curve contract violations") {
  std::mt19937_64 rng(42);
  const TimeSeries data = random_series(rng, 50);
  const auto source = data.samples().head(20);
  CHECK_THROWS_AS(ccmatch::match_curve(source, data, 0, 5, 1, 0.98), ccmatch::ContractError);
  CHECK_THROWS_AS(ccmatch::match_curve(source, data, 6, 5, 1, 0.98), ccmatch::ContractError);
  CHECK_THROWS_AS(ccmatch::match_curve(source, data, 1, 21, 1, 0.98), ccmatch::ContractError);
  CHECK_THROWS_AS(ccmatch::match_curve(source, data, 1, 5, 0, 0.98), ccmatch::ContractError);
  CHECK_THROWS_AS(ccmatch::match_curve(source, data, 1, 5, 1, 1.5), ccmatch::ContractError);
  const TimeSeries short_data(source.head(10).eval());
  CHECK_THROWS_AS(ccmatch::match_curve(source, short_data, 1, 10, 1, 0.98),
                  ccmatch::ContractError);
}

TEST_CASE("white-noise template finds no matches at length 30 and beyond") {
  std::int64_t total = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto data = ccmatch::gaussian_noise(300, 1.0, seed);
    const auto source = ccmatch::gaussian_noise(48, 1.0, seed + 1000000);
    const auto curve = ccmatch::match_curve(source.samples(), data, 30, 45, 5, 0.98);
    for (const auto& point : curve.points) total += point.count;
  }
  CHECK(total == 0);
}

TEST_CASE("thread count does not change results") {
  std::mt19937_64 rng(43);
  const TimeSeries data = random_series(rng, 400);
  const auto source = oracle::to_eigen(oracle::random_vector(rng, 80));

  const auto p1 = ccmatch::alpha_profile(source, data, 1);
  const auto p4 = ccmatch::alpha_profile(source, data, 4);
  REQUIRE(p1.values.size() == p4.values.size());
  for (size_t i = 0; i < p1.values.size(); ++i) {
    CHECK(p1.values[i] == p4.values[i]);  // bitwise identical
  }

  const auto c1 = ccmatch::match_curve(source, data, 5, 70, 1, 0.7, "", "", 1);
  const auto c4 = ccmatch::match_curve(source, data, 5, 70, 1, 0.7, "", "", 4);
  REQUIRE(c1.points.size() == c4.points.size());
  for (size_t i = 0; i < c1.points.size(); ++i) {
    CHECK(c1.points[i].count == c4.points[i].count);
    CHECK(c1.points[i].length == c4.points[i].length);
  }
}

TEST_CASE("match_curve sweep of 10k samples x 1000 lengths stays well under a minute") {
  std::mt19937_64 rng(44);
  const TimeSeries data = random_series(rng, 10000);
  const auto source = oracle::to_eigen(oracle::random_vector(rng, 1000));
  const auto start = std::chrono::steady_clock::now();
  const auto curve = ccmatch::match_curve(source, data, 1, 1000, 1, 0.98);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  CHECK(curve.points.size() == 1000);
  CHECK(elapsed.count() < 60.0);
}
