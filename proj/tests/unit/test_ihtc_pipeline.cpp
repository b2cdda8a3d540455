#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "ihtc/ihtc.hpp"
#include "oracles.hpp"

using namespace ihtc;

namespace {

std::vector<std::vector<std::size_t>> groups(const Clustering& c) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t l = 0; l < c.num_clusters(); ++l) {
    const auto m = c.members(l);
    out.emplace_back(m.begin(), m.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("six point line with kmeans on three prototypes") {
  const Dataset d = Dataset::from_column({0, 1, 10, 11, 20, 21});
  const std::vector<std::vector<std::size_t>> left{{0, 1, 2, 3}, {4, 5}};
  const std::vector<std::vector<std::size_t>> right{{0, 1}, {2, 3, 4, 5}};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    IhtcConfig cfg;
    cfg.t_star = 2;
    cfg.iterations = 1;
    KMeansConfig km;
    km.k = 2;
    km.seed = seed;
    cfg.base = km;
    const auto r = ihtc_run(d, cfg);
    const auto g = groups(r.clustering);
    CHECK((g == left || g == right));
    CHECK(r.clustering.min_cluster_size() >= 2);
    CHECK(r.prototype_count == 3);
  }
}

TEST_CASE("zero iterations equals the base clusterer") {
  const auto sample = generate_gaussian_mixture(GaussianMixtureSpec::benchmark(4), 3000);
  IhtcConfig cfg;
  cfg.iterations = 0;
  KMeansConfig km;
  km.seed = 99;
  cfg.base = km;
  const auto r = ihtc_run(sample.data, cfg);
  CHECK(r.clustering == kmeans(sample.data, km).clustering);
  CHECK(r.prototype_count == 3000);
  CHECK(r.hierarchy.num_levels() == 0);

  const Dataset small = Dataset::from_column({0, 1, 10, 11, 30});
  cfg.base = HacConfig{Linkage::single, 2};
  CHECK(ihtc_run(small, cfg).clustering == cut_dendrogram(hac(small, Linkage::single), 2));
  cfg.base = DbscanConfig{1.5, 2};
  CHECK(ihtc_run(small, cfg).clustering == dbscan(small, DbscanConfig{1.5, 2}));
}

TEST_CASE("infeasible configurations") {
  const Dataset d = Dataset::from_column({0, 1, 10, 11, 20, 21});
  IhtcConfig cfg;
  cfg.iterations = 2;  // one prototype left, k = 3 needs three
  try {
    ihtc_run(d, cfg);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("largest feasible number of iterations is 1") != std::string::npos);
  }
  cfg.iterations = 5;
  CHECK_THROWS_AS(ihtc_run(d, cfg), InfeasibleError);

  std::mt19937_64 rng(3);
  const Dataset big = oracle::random_points(rng, 500, 2);
  IhtcConfig hcfg;
  hcfg.iterations = 1;
  hcfg.base = HacConfig{Linkage::ward, 3, 100};
  try {
    ihtc_run(big, hcfg);
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(std::string(e.what()).find("iterations") != std::string::npos);
  }
  hcfg.iterations = 3;
  CHECK(ihtc_run(big, hcfg).clustering.num_clusters() == 3);

  IhtcConfig bad;
  bad.t_star = 1;
  CHECK_THROWS_AS(ihtc_run(d, bad), ConfigError);
}

TEST_CASE("size guarantee for kmeans and hac bases") {
  std::mt19937_64 rng(61);
  int ran = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 200 + rng() % 3000;
    const std::size_t t = 2 + rng() % 3;
    const std::size_t m = 1 + rng() % 3;
    const Dataset d = oracle::random_points(rng, n, 2);
    IhtcConfig cfg;
    cfg.t_star = t;
    cfg.iterations = m;
    if (trial % 2) cfg.base = HacConfig{static_cast<Linkage>(rng() % 4), 2 + rng() % 4};
    else {
      KMeansConfig km;
      km.k = 2 + rng() % 4;
      km.seed = rng();
      cfg.base = km;
    }
    std::optional<IhtcResult> res;
    try {
      res.emplace(ihtc_run(d, cfg));
    } catch (const InfeasibleError&) {
      continue;
    }
    ++ran;
    const IhtcResult& r = *res;
    const auto need = static_cast<std::size_t>(std::llround(std::pow(double(t), double(m))));
    CHECK(r.clustering.size() == n);
    CHECK(r.clustering.min_cluster_size() >= need);
    CHECK(r.prototype_count == r.hierarchy.top_size());
    CHECK(static_cast<double>(r.prototype_count) <= double(n) / double(need));
  }
  CHECK(ran > 20);
}

TEST_CASE("dbscan base propagates noise") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 40; ++i) rows.push_back({0.01 * i, 0.0});
  for (int i = 0; i < 40; ++i) rows.push_back({50.0 + 0.01 * i, 0.0});
  rows.push_back({1000.0, 0.0});
  rows.push_back({1000.5, 0.0});
  IhtcConfig cfg;
  cfg.iterations = 1;
  cfg.base = DbscanConfig{0.5, 3};
  const auto r = ihtc_run(Dataset::from_rows(rows), cfg);
  CHECK(r.clustering.size() == 82);
  CHECK(r.clustering.num_clusters() == 2);
  CHECK(r.clustering.label(80) == kNoise);
  CHECK(r.clustering.label(81) == kNoise);
  CHECK(r.clustering.noise_count() == 2);
}

TEST_CASE("phase timings add up") {
  const auto sample = generate_gaussian_mixture(GaussianMixtureSpec::benchmark(2), 20000);
  IhtcConfig cfg;
  cfg.iterations = 2;
  const auto r = ihtc_run(sample.data, cfg);
  const auto& t = r.timings;
  const double parts = t.graph_seconds + t.tc_seconds + t.prototype_seconds + t.base_seconds + t.back_out_seconds;
  CHECK(std::abs(parts - t.total_seconds) <= 0.005 * 5);
  CHECK(t.graph_seconds > 0.0);
  CHECK(r.memory.peak_bytes >= r.memory.base_bytes);
}

TEST_CASE("centroid and medoid rules both hold the guarantee") {
  std::mt19937_64 rng(8);
  const Dataset d = oracle::random_points(rng, 1500, 3);
  for (const auto rule : {CenterRule::centroid, CenterRule::medoid}) {
    IhtcConfig cfg;
    cfg.t_star = 3;
    cfg.iterations = 2;
    cfg.center_rule = rule;
    const auto r = ihtc_run(d, cfg);
    CHECK(r.clustering.min_cluster_size() >= 9);
  }
}
