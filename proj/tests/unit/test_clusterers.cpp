#include <doctest.h>

#include <cmath>
#include <random>

#include "ihtc/ihtc.hpp"
#include "oracles.hpp"

using namespace ihtc;

namespace {

void check_nonincreasing(const KMeansResult& r) {
  for (std::size_t i = 1; i < r.wcss_history.size(); ++i)
    CHECK(r.wcss_history[i] <= r.wcss_history[i - 1] * (1.0 + 1e-12));
}

}  // namespace

TEST_CASE("kmeans with k equal to n") {
  std::mt19937_64 rng(1);
  const Dataset d = oracle::random_points(rng, 12, 2);
  KMeansConfig cfg;
  cfg.k = 12;
  const auto r = kmeans(d, cfg);
  CHECK(r.clustering.num_clusters() == 12);
  CHECK(r.clustering.max_cluster_size() == 1);
  CHECK(r.wcss == 0.0);
}

TEST_CASE("kmeans with one cluster gives the total sum of squares") {
  std::mt19937_64 rng(2);
  const Dataset d = oracle::random_points(rng, 100, 3);
  KMeansConfig cfg;
  cfg.k = 1;
  const auto r = kmeans(d, cfg);
  const auto sums = oracle::sums_of_squares(d, std::vector<int>(100, 0));
  CHECK(r.wcss == doctest::Approx(sums.tss).epsilon(1e-12));
  for (std::size_t j = 0; j < 3; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < 100; ++i) mean += d(i, j);
    CHECK(r.centers[j] == doctest::Approx(mean / 100.0));
  }
}

TEST_CASE("kmeans separates two far pairs from any start") {
  const Dataset d = Dataset::from_column({0, 1, 100, 101});
  for (std::uint64_t seed = 0; seed < 30; ++seed)
    for (const auto init : {KMeansInit::random_units, KMeansInit::kmeans_plus_plus}) {
      KMeansConfig cfg;
      cfg.k = 2;
      cfg.seed = seed;
      cfg.init = init;
      const auto r = kmeans(d, cfg);
      std::vector<double> centers = r.centers;
      std::sort(centers.begin(), centers.end());
      CHECK(centers == std::vector<double>{0.5, 100.5});
      CHECK(r.converged);
    }
}

TEST_CASE("kmeans errors and determinism") {
  const Dataset d = Dataset::from_column({0, 1, 2});
  KMeansConfig cfg;
  cfg.k = 4;
  CHECK_THROWS_AS(kmeans(d, cfg), ConfigError);
  cfg.k = 0;
  CHECK_THROWS_AS(kmeans(d, cfg), ConfigError);
  cfg.k = 2;
  cfg.max_iterations = 0;
  CHECK_THROWS_AS(kmeans(d, cfg), ConfigError);

  const auto sample = generate_gaussian_mixture(GaussianMixtureSpec::benchmark(3), 2000);
  KMeansConfig c3;
  const auto a = kmeans(sample.data, c3);
  const auto b = kmeans(sample.data, c3);
  CHECK(a.clustering == b.clustering);
  CHECK(a.centers == b.centers);
}

TEST_CASE("kmeans fixed point and monotone cost on random data") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 5 + rng() % 300;
    const Dataset d = oracle::random_points(rng, n, 1 + trial % 4, 10.0, trial % 3 == 0 ? 1 : 0);
    KMeansConfig cfg;
    cfg.k = 1 + rng() % std::min<std::size_t>(n, 8);
    cfg.seed = rng();
    cfg.init = trial % 2 ? KMeansInit::kmeans_plus_plus : KMeansInit::random_units;
    const auto r = kmeans(d, cfg);
    check_nonincreasing(r);
    CHECK(r.clustering.num_clusters() == cfg.k);
    const auto sums = oracle::sums_of_squares(d, oracle::as_int(r.clustering.labels()));
    CHECK(r.wcss == doctest::Approx(sums.wcss).epsilon(1e-9).scale(1.0));
    if (r.converged) {
      // Centers are the means of their members.
      for (std::size_t c = 0; c < cfg.k; ++c)
        for (std::size_t j = 0; j < d.dims(); ++j) {
          double s = 0.0;
          for (auto i : r.clustering.members(c)) s += d(i, j);
          CHECK(r.centers[c * d.dims() + j] == doctest::Approx(s / double(r.clustering.cluster_size(c))));
        }
    }
  }
}

TEST_CASE("kmeans repairs empty clusters") {
  // Five copies of one point and one outlier: with k = 3 two starts coincide.
  const Dataset d = Dataset::from_column({0, 0, 0, 0, 0, 9});
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    KMeansConfig cfg;
    cfg.k = 3;
    cfg.seed = seed;
    const auto r = kmeans(d, cfg);
    CHECK(r.clustering.num_clusters() == 3);
    check_nonincreasing(r);
  }
}

TEST_CASE("hac on three points") {
  const Dataset d = Dataset::from_column({0, 1, 10});
  const auto s = hac(d, Linkage::single);
  REQUIRE(s.merges.size() == 2);
  CHECK(s.merges[0].cluster_a == 0);
  CHECK(s.merges[0].cluster_b == 1);
  CHECK(s.merges[0].height == 1.0);
  CHECK(s.merges[1].cluster_a == 2);
  CHECK(s.merges[1].cluster_b == 3);
  CHECK(s.merges[1].height == 9.0);
  CHECK(s.merges[1].size == 3);

  const auto c = hac(d, Linkage::complete);
  CHECK(c.merges[0].height == 1.0);
  CHECK(c.merges[1].height == 10.0);
  const auto a = hac(d, Linkage::average);
  CHECK(a.merges[1].height == 9.5);
  // Ward distance between {0,1} and {10}: sqrt(2 * 2 * 1 / 3) * 9.5.
  const auto w = hac(d, Linkage::ward);
  CHECK(w.merges[0].height == 1.0);
  CHECK(w.merges[1].height == doctest::Approx(std::sqrt(4.0 / 3.0) * 9.5));

  const auto two = hac(Dataset::from_column({2, 5}), Linkage::average);
  CHECK(two.merges.size() == 1);
  CHECK(two.merges[0].height == 3.0);
}

TEST_CASE("cutting the dendrogram") {
  const auto s = hac(Dataset::from_column({0, 1, 10}), Linkage::single);
  CHECK(oracle::as_int(cut_dendrogram(s, 1).labels()) == std::vector<int>{0, 0, 0});
  CHECK(oracle::as_int(cut_dendrogram(s, 2).labels()) == std::vector<int>{0, 0, 1});
  CHECK(oracle::as_int(cut_dendrogram(s, 3).labels()) == std::vector<int>{0, 1, 2});
  CHECK_THROWS_AS(cut_dendrogram(s, 0), ConfigError);
  CHECK_THROWS_AS(cut_dendrogram(s, 4), ConfigError);
}

TEST_CASE("hac limits") {
  CHECK_THROWS_AS(hac(Dataset::from_column({1}), Linkage::single), ConfigError);
  CHECK_THROWS_AS(hac(Dataset::from_column({1, 2, 3, 4}), Linkage::single, Metric{}, 3), InfeasibleError);
  CHECK_THROWS_AS(hac(Dataset::from_column({1, 2, 3}), Linkage::ward, MetricKind::manhattan), ConfigError);
  CHECK(parse_linkage("average") == Linkage::average);
  CHECK_THROWS_AS(parse_linkage("centroid"), ConfigError);
}

TEST_CASE("merge heights are monotone and every cut has k clusters") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 24; ++trial) {
    const std::size_t n = 2 + rng() % 120;
    const Dataset d = oracle::random_points(rng, n, 1 + trial % 3, 10.0, trial % 4 == 0 ? 1 : 0);
    const Linkage link = static_cast<Linkage>(trial % 4);
    const auto dendro = hac(d, link);
    CHECK(dendro.merges.size() == n - 1);
    for (std::size_t s = 1; s < dendro.merges.size(); ++s)
      CHECK(dendro.merges[s].height >= dendro.merges[s - 1].height * (1.0 - 1e-12) - 1e-12);
    CHECK(dendro.merges.back().size == n);
    for (std::size_t k = 1; k <= n; k += 1 + n / 10) CHECK(cut_dendrogram(dendro, k).num_clusters() == k);
  }
}

TEST_CASE("single linkage heights are the minimum spanning tree") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 15; ++trial) {
    const Dataset d = oracle::random_points(rng, 2 + rng() % 150, 2);
    for (const Metric m : {Metric(MetricKind::euclidean), Metric(MetricKind::manhattan)}) {
      const auto dendro = hac(d, Linkage::single, m);
      const auto mst = oracle::mst_weights(d, m.kind() == MetricKind::manhattan);
      REQUIRE(mst.size() == dendro.merges.size());
      for (std::size_t s = 0; s < mst.size(); ++s) CHECK(dendro.merges[s].height == doctest::Approx(mst[s]));
    }
  }
}

TEST_CASE("dbscan on two blobs") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 10; ++i) rows.push_back({0.1 * i, 0.0});
  for (int i = 0; i < 10; ++i) rows.push_back({100.0 + 0.1 * i, 0.0});
  const auto c = dbscan(Dataset::from_rows(rows), DbscanConfig{1.0, 3});
  CHECK(c.num_clusters() == 2);
  CHECK(c.noise_count() == 0);
  CHECK(c.label(0) == 0);
  CHECK(c.label(19) == 1);
}

TEST_CASE("dbscan border cases") {
  const auto sparse = dbscan(Dataset::from_column({0, 10, 20, 30}), DbscanConfig{1.0, 2});
  CHECK(sparse.noise_count() == 4);
  CHECK(sparse.num_clusters() == 0);
  const auto single = dbscan(Dataset::from_column({4}), DbscanConfig{1.0, 1});
  CHECK(single.num_clusters() == 1);
  CHECK(single.label(0) == 0);
  CHECK_THROWS_AS(dbscan(Dataset::from_column({4}), DbscanConfig{0.0, 1}), ConfigError);
  CHECK_THROWS_AS(dbscan(Dataset::from_column({4}), DbscanConfig{1.0, 0}), ConfigError);
}

TEST_CASE("dbscan equals exhaustive region queries") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 400;
    const Dataset d = oracle::random_points(rng, n, 1 + trial % 3, 10.0, trial % 3 == 0 ? 2 : 0);
    const DbscanConfig cfg{0.3 + 0.1 * double(rng() % 10), 1 + rng() % 6};
    const bool man = trial % 5 == 4;
    const auto c = dbscan(d, cfg, man ? MetricKind::manhattan : MetricKind::euclidean);
    CHECK(oracle::as_int(c.labels()) == oracle::dbscan(d, cfg.epsilon, cfg.min_pts, man));
  }
}
