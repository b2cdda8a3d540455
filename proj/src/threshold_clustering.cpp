#include "ihtc/threshold_clustering.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"

namespace ihtc {

namespace {

void check_threshold(std::size_t n, std::size_t t_star) {
  if (t_star < 2) throw ConfigError("t_star must be at least 2");
  if (n < t_star) {
    throw ConfigError("threshold clustering needs n >= t_star (n = " + std::to_string(n) +
                      ", t_star = " + std::to_string(t_star) + ")");
  }
}

std::vector<std::size_t> seed_scan_order(const KnnGraph& graph, SeedOrder order) {
  std::vector<std::size_t> out(graph.size());
  std::iota(out.begin(), out.end(), std::size_t{0});
  if (order == SeedOrder::ascending_degree) {
    std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
      return graph.degree(a) < graph.degree(b);
    });
  }
  return out;
}

}  // namespace

TcResult threshold_cluster(const Dataset& data, std::size_t t_star, Metric metric,
                           const TcOptions& options) {
  check_threshold(data.size(), t_star);
  const KnnGraph graph = build_knn_graph(data, t_star - 1, metric, options.knn);
  return threshold_cluster(data, graph, t_star, metric, options.seed_order);
}

TcResult threshold_cluster(const Dataset& data, const KnnGraph& graph, std::size_t t_star,
                           Metric metric, SeedOrder seed_order) {
  const std::size_t n = data.size();
  check_threshold(n, t_star);
  if (graph.size() != n || graph.k() != t_star - 1)
    throw ConfigError("threshold clustering needs the (t_star - 1)-nearest-neighbors graph of the data");

  // Seeds: greedy maximal independent set of the graph's second power.
  std::vector<std::uint8_t> blocked(n, 0);
  std::vector<std::size_t> seeds;
  for (std::size_t v : seed_scan_order(graph, seed_order)) {
    if (blocked[v]) continue;
    seeds.push_back(v);
    blocked[v] = 1;
    for (Vertex u : graph.neighbors(v)) {
      blocked[u] = 1;
      for (Vertex w : graph.neighbors(u)) blocked[w] = 1;
    }
  }

  // Grow: each seed takes its graph neighbors. Seeds share no neighbors, so
  // these clusters are disjoint.
  std::vector<Label> grown(n, kNoise);
  for (std::size_t c = 0; c < seeds.size(); ++c) {
    const auto label = static_cast<Label>(c);
    grown[seeds[c]] = label;
    for (Vertex u : graph.neighbors(seeds[c])) grown[u] = label;
  }

  // Every unit left over sits two steps from some seed; attach it to the
  // closest such seed, lowest cluster id on ties.
  std::vector<Label> labels = grown;
  for (std::size_t j = 0; j < n; ++j) {
    if (grown[j] != kNoise) continue;
    Label best = kNoise;
    double best_distance = std::numeric_limits<double>::infinity();
    for (Vertex u : graph.neighbors(j)) {
      const Label c = grown[u];
      if (c == kNoise || c == best) continue;
      const double dist = metric(data.row(seeds[static_cast<std::size_t>(c)]), data.row(j));
      if (dist < best_distance || (dist == best_distance && c < best)) {
        best = c;
        best_distance = dist;
      }
    }
    if (best == kNoise) throw std::logic_error("threshold clustering: unit not within two steps of a seed");
    labels[j] = best;
  }

  return TcResult{Clustering(std::move(labels)), std::move(seeds), graph.max_edge_weight()};
}

BtppSolution btpp_bruteforce(const Dataset& data, std::size_t t_star, Metric metric) {
  const std::size_t n = data.size();
  if (n > kBtppMaxUnits)
    throw ConfigError("btpp_bruteforce enumerates partitions and accepts at most " +
                      std::to_string(kBtppMaxUnits) + " units");
  if (t_star < 1 || t_star > n) throw ConfigError("btpp_bruteforce needs 1 <= t_star <= n");

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = metric(data.row(i), data.row(j));

  struct Block {
    std::vector<std::size_t> members;
    double diameter = 0.0;
  };
  std::vector<Block> blocks;
  std::vector<std::size_t> assignment(n), best_assignment;
  double best = std::numeric_limits<double>::infinity();

  auto deficit = [&] {
    std::size_t d = 0;
    for (const auto& b : blocks) d += b.members.size() < t_star ? t_star - b.members.size() : 0;
    return d;
  };

  auto place = [&](auto&& self, std::size_t i, double bottleneck) -> void {
    if (bottleneck >= best) return;
    if (deficit() > n - i) return;
    if (i == n) {
      best = bottleneck;
      best_assignment = assignment;
      return;
    }
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      double grown = blocks[b].diameter;
      for (std::size_t u : blocks[b].members) grown = std::max(grown, dist[i * n + u]);
      const double saved = blocks[b].diameter;
      blocks[b].members.push_back(i);
      blocks[b].diameter = grown;
      assignment[i] = b;
      self(self, i + 1, std::max(bottleneck, grown));
      blocks[b].members.pop_back();
      blocks[b].diameter = saved;
    }
    blocks.push_back(Block{{i}, 0.0});
    assignment[i] = blocks.size() - 1;
    self(self, i + 1, bottleneck);
    blocks.pop_back();
  };
  place(place, 0, 0.0);

  std::vector<Label> labels(best_assignment.begin(), best_assignment.end());
  return BtppSolution{Clustering(std::move(labels)), best};
}

double max_within_cluster_dissimilarity(const Dataset& data, const Clustering& clustering,
                                        Metric metric) {
  if (clustering.size() != data.size()) throw ConfigError("clustering and data sizes differ");
  double worst = 0.0;
  for (std::size_t c = 0; c < clustering.num_clusters(); ++c) {
    const auto members = clustering.members(c);
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = a + 1; b < members.size(); ++b)
        worst = std::max(worst, metric(data.row(members[a]), data.row(members[b])));
  }
  return worst;
}

}  // namespace ihtc
