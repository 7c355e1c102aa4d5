#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "spmdiag/errors.hpp"
#include "spmdiag/ingest.hpp"
#include "spmdiag/similarity.hpp"
#include "support.hpp"

using namespace spmdiag;

namespace {

PerformanceVector vec(Rank r, std::vector<double> values) {
  std::vector<RegionId> ids(values.size());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<RegionId>(i + 1);
  return PerformanceVector(r, ids, std::move(values));
}

}  // namespace

TEST_CASE("distance examples") {
  CHECK(distance(vec(0, {1, 2, 3}), vec(1, {1, 2, 3})) == 0.0);
  CHECK(distance(vec(0, {3, 4}), vec(1, {0, 0})) == 5.0);
  CHECK(distance(vec(0, {1, 0}), vec(1, {0, 1})) == doctest::Approx(1.4142135).epsilon(1e-7));
  CHECK_THROWS_AS(distance(vec(0, {1, 2}), vec(1, {1, 2, 3})), ValidationError);
}

TEST_CASE("distance honours masks") {
  auto a = vec(0, {3, 4, 100});
  auto b = vec(1, {0, 0, 0});
  CHECK(distance(a.with_mask({3}), b) == 5.0);
}

TEST_CASE("severity examples") {
  std::vector<PerformanceVector> same{vec(0, {3, 4}), vec(1, {3, 4})};
  CHECK(severity(same).severity == 0.0);

  std::vector<PerformanceVector> unit{vec(0, {1, 0}), vec(1, {0, 1})};
  const auto s = severity(unit);
  CHECK(s.severity == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(s.max_pair == std::pair<Rank, Rank>{0, 1});
  CHECK(s.min_length == 1.0);

  std::vector<PerformanceVector> one{vec(0, {1, 0})};
  CHECK_THROWS_AS(severity(one), ValidationError);

  std::vector<PerformanceVector> zero{vec(0, {1, 0}), vec(1, {0, 0})};
  CHECK_THROWS_AS(severity(zero), DegenerateVectorError);
  std::vector<PerformanceVector> masked_zero{vec(0, {1, 0}), vec(1, {0, 2}).with_mask({2})};
  CHECK_THROWS_AS(severity(masked_zero), DegenerateVectorError);
}

TEST_CASE("severity reports the extreme pair and shortest rank") {
  std::vector<PerformanceVector> vs{vec(0, {2, 2}), vec(1, {1, 1}), vec(2, {5, 1})};
  const auto s = severity(vs);
  CHECK(s.max_pair == std::pair<Rank, Rank>{1, 2});
  CHECK(s.min_len_rank == 1);
  CHECK(s.severity == doctest::Approx(4.0 / std::sqrt(2.0)));
}

TEST_CASE("nearly balanced trace has low severity") {
  auto spec = load_synth_spec(spmdiag::testing::fixture("balanced_spec.json"));
  spec.noise_amplitude = 0.01;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto vs = build_vectors(generate_trace(spec, seed));
    CHECK(severity(vs).severity < 0.05);
  }
}

TEST_CASE("a column identical on every rank never raises severity") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int iter = 0; iter < 200; ++iter) {
    std::vector<PerformanceVector> base, extended;
    const double shared = u(rng);
    for (Rank r = 0; r < 5; ++r) {
      std::vector<double> values{u(rng), u(rng), u(rng)};
      base.push_back(vec(r, values));
      values.push_back(shared);
      extended.push_back(vec(r, values));
    }
    for (std::size_t i = 0; i < base.size(); ++i) {
      CHECK(length(extended[i]) > length(base[i]));
      for (std::size_t j = i + 1; j < base.size(); ++j) {
        CHECK(distance(extended[i], extended[j]) <= distance(base[i], base[j]) * (1 + 1e-15));
      }
    }
    CHECK(severity(extended).severity <= severity(base).severity * (1 + 1e-12));
  }
}

TEST_CASE("severity ignores input order") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  std::vector<PerformanceVector> vs;
  for (Rank r = 0; r < 6; ++r) vs.push_back(vec(r, {u(rng), u(rng), u(rng), u(rng)}));
  const auto ref = severity(vs);
  for (int iter = 0; iter < 20; ++iter) {
    std::shuffle(vs.begin(), vs.end(), rng);
    const auto s = severity(vs);
    CHECK(s.severity == ref.severity);
    CHECK(s.max_pair == ref.max_pair);
    CHECK(s.min_len_rank == ref.min_len_rank);
  }
}
