#include <doctest.h>

#include <random>

#include "ihtc/ihtc.hpp"
#include "oracles.hpp"

using namespace ihtc;

TEST_CASE("euclidean and manhattan on a 3-4-5 triangle") {
  const Dataset d = Dataset::from_rows({{0.0, 0.0}, {3.0, 4.0}});
  CHECK(dissimilarity(d, 0, 1, MetricKind::euclidean) == 5.0);
  CHECK(dissimilarity(d, 0, 1, MetricKind::manhattan) == 7.0);
  CHECK(dissimilarity(d, 1, 1, MetricKind::euclidean) == 0.0);
  CHECK(dissimilarity(d, 0, 0, MetricKind::manhattan) == 0.0);
}

TEST_CASE("index out of range") {
  const Dataset d = Dataset::from_rows({{0.0}, {1.0}});
  CHECK_THROWS_AS(dissimilarity(d, 0, 2, Metric{}), ConfigError);
  CHECK_THROWS_AS(dissimilarity(d, 5, 0, Metric{}), ConfigError);
}

TEST_CASE("parse and name") {
  CHECK(Metric::parse("euclidean").kind() == MetricKind::euclidean);
  CHECK(Metric::parse("manhattan").kind() == MetricKind::manhattan);
  CHECK(Metric(MetricKind::manhattan).name() == "manhattan");
  CHECK_THROWS_AS(Metric::parse("cosine"), ConfigError);
}

TEST_CASE("triangle inequality and symmetry on random triples") {
  std::mt19937_64 rng(2024);
  const Dataset d = oracle::random_points(rng, 200, 3, 50.0);
  std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
  for (const Metric m : {Metric(MetricKind::euclidean), Metric(MetricKind::manhattan)}) {
    std::size_t violations = 0;
    for (int t = 0; t < 10000; ++t) {
      const auto i = pick(rng), j = pick(rng), l = pick(rng);
      const double dij = dissimilarity(d, i, j, m), djl = dissimilarity(d, j, l, m), dil = dissimilarity(d, i, l, m);
      if (dij + djl < dil - 1e-12) ++violations;
      if (dij != dissimilarity(d, j, i, m)) ++violations;
      if (dij < 0.0) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("rank key is monotone in the metric") {
  std::mt19937_64 rng(1);
  const Dataset d = oracle::random_points(rng, 30, 2);
  const Metric m;
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double key = m.rank_key(d.row(0), d.row(i));
    CHECK(m.from_rank_key(key) == doctest::Approx(m(d.row(0), d.row(i))));
  }
}
