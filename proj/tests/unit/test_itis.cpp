#include <doctest.h>

#include <cmath>
#include <random>

#include "ihtc/ihtc.hpp"
#include "oracles.hpp"

using namespace ihtc;

TEST_CASE("one level on three pairs") {
  const Dataset d = Dataset::from_column({0, 1, 10, 11, 20, 21});
  const auto h = itis_run(d, 2, Iterations{1}, Metric{});
  REQUIRE(h.num_levels() == 1);
  CHECK(h.level_size(0) == 6);
  CHECK(h.level_size(1) == 3);
  CHECK(h.prototypes(1).column(0) == std::vector<double>{0.5, 10.5, 20.5});
  const auto map = h.parent_map(1);
  CHECK(std::vector<std::size_t>(map.begin(), map.end()) == std::vector<std::size_t>{0, 0, 1, 1, 2, 2});
  CHECK_FALSE(h.early_terminated());
}

TEST_CASE("second level collapses to one prototype") {
  const Dataset d = Dataset::from_column({0, 1, 10, 11, 20, 21});
  const auto h = itis_run(d, 2, Iterations{2}, Metric{});
  REQUIRE(h.num_levels() == 2);
  CHECK(h.level_size(2) == 1);
  CHECK(h.prototypes(2)(0, 0) == doctest::Approx(10.5));
  CHECK(h.top_ancestors() == std::vector<std::size_t>(6, 0));

  const auto h3 = itis_run(d, 2, Iterations{3}, Metric{});
  CHECK(h3.num_levels() == 2);
  CHECK(h3.early_terminated());
}

TEST_CASE("n equal to the threshold gives the centroid") {
  const Dataset d = Dataset::from_rows({{0, 0}, {2, 4}, {4, 2}});
  const auto h = itis_run(d, 3, Iterations{1}, Metric{});
  CHECK(h.level_size(1) == 1);
  CHECK(h.prototypes(1)(0, 0) == doctest::Approx(2.0));
  CHECK(h.prototypes(1)(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("centroid and medoid prototypes") {
  const Dataset pair = Dataset::from_rows({{0, 0}, {2, 2}});
  const auto c = make_prototypes(pair, Clustering({0, 0}), CenterRule::centroid);
  CHECK(c.points(0, 0) == 1.0);
  CHECK(c.points(0, 1) == 1.0);

  const Dataset three = Dataset::from_rows({{0, 0}, {2, 2}, {10, 10}});
  const auto m = make_prototypes(three, Clustering({0, 0, 0}), CenterRule::medoid);
  CHECK(m.points(0, 0) == 2.0);
  CHECK(m.points(0, 1) == 2.0);

  // Equal distance sums go to the lowest index.
  const auto tie = make_prototypes(Dataset::from_column({5, 1}), Clustering({0, 0}), CenterRule::medoid);
  CHECK(tie.points(0, 0) == 5.0);
  CHECK(m.parent_map == std::vector<std::size_t>{0, 0, 0});
}

TEST_CASE("back-out composes parent maps") {
  const Dataset d = Dataset::from_column({0, 1, 10, 11, 20, 21});
  const auto h = itis_run(d, 2, Iterations{1}, Metric{});
  const auto out = back_out(h, Clustering({0, 0, 1}));
  CHECK(oracle::as_int(out.labels()) == std::vector<int>{0, 0, 0, 0, 1, 1});
  CHECK_THROWS_AS(back_out(h, Clustering({0, 1})), ConfigError);

  const PrototypeHierarchy empty(4, 2, CenterRule::centroid);
  const Clustering pass({1, 0, 1, 0});
  CHECK(back_out(empty, pass) == pass);

  const auto top = itis_run(d, 2, Iterations{2}, Metric{});
  CHECK(back_out(top, Clustering({0})).num_clusters() == 1);
}

TEST_CASE("reduction factor stopping") {
  std::mt19937_64 rng(6);
  const Dataset d = oracle::random_points(rng, 2000, 2);
  const auto h = itis_run(d, 2, ReductionFactor{10.0}, Metric{});
  CHECK(static_cast<double>(h.top_size()) <= 200.0);
  for (std::size_t l = 1; l < h.num_levels(); ++l) CHECK(static_cast<double>(h.level_size(l)) > 200.0);

  const auto far = itis_run(d, 2, ReductionFactor{1e9}, Metric{});
  CHECK(far.early_terminated());
  CHECK(far.top_size() < 2);
  CHECK_THROWS_AS(itis_run(d, 2, ReductionFactor{1.0}, Metric{}), ConfigError);
  CHECK_THROWS_AS(itis_run(d, 2, Iterations{0}, Metric{}), ConfigError);
  CHECK_THROWS_AS(itis_run(d, 1, Iterations{1}, Metric{}), ConfigError);
}

TEST_CASE("hierarchy invariants on random instances") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 50 + rng() % 2000;
    const std::size_t t = 2 + rng() % 3;
    const std::size_t m = 1 + rng() % 3;
    const CenterRule rule = trial % 2 ? CenterRule::medoid : CenterRule::centroid;
    const Dataset d = oracle::random_points(rng, n, 2);
    const auto h = itis_run(d, t, Iterations{m}, Metric{}, rule);
    for (std::size_t l = 1; l <= h.num_levels(); ++l) {
      CHECK(h.level_size(l) * t <= h.level_size(l - 1));
      CHECK(h.parent_map(l).size() == h.level_size(l - 1));
    }
    const std::size_t levels = h.num_levels();
    const double bound = static_cast<double>(n) / std::pow(static_cast<double>(t), static_cast<double>(levels));
    CHECK(static_cast<double>(h.top_size()) <= bound);

    // Identity top labels recover the composed partition.
    std::vector<Label> ident(h.top_size());
    std::iota(ident.begin(), ident.end(), 0);
    const auto parts = back_out(h, Clustering(ident));
    const auto anc = h.top_ancestors();
    for (std::size_t i = 0; i < n; ++i) CHECK(static_cast<std::size_t>(parts.label(i)) == anc[i]);
    const auto need = static_cast<std::size_t>(std::llround(std::pow(double(t), double(levels))));
    CHECK(parts.min_cluster_size() >= need);

    const auto again = itis_run(d, t, Iterations{m}, Metric{}, rule);
    CHECK(again.top_ancestors() == anc);
    CHECK(again.prototypes(again.num_levels()) == h.prototypes(h.num_levels()));
  }
}
