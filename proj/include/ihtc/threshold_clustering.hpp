#pragma once

#include <cstddef>
#include <vector>

#include "ihtc/clustering.hpp"
#include "ihtc/knn_graph.hpp"
#include "ihtc/metric.hpp"

namespace ihtc {

class Dataset;

enum class SeedOrder {
  ascending_index,
  // Low-degree vertices first, ties by index.
  ascending_degree,
};

struct TcOptions {
  SeedOrder seed_order = SeedOrder::ascending_index;
  KnnOptions knn;
};

struct TcResult {
  Clustering clustering;
  // seeds[l] anchors cluster l.
  std::vector<std::size_t> seeds;
  double graph_max_edge = 0.0;
};

// Threshold clustering: every cluster gets at least t_star units and the
// largest within-cluster dissimilarity is at most 4x the optimum.
TcResult threshold_cluster(const Dataset& data, std::size_t t_star, Metric metric,
                           const TcOptions& options = {});

// Same, on a prebuilt (t_star - 1)-nearest-neighbors graph of `data`.
TcResult threshold_cluster(const Dataset& data, const KnnGraph& graph, std::size_t t_star,
                           Metric metric, SeedOrder seed_order = SeedOrder::ascending_index);

struct BtppSolution {
  Clustering clustering;
  double lambda = 0.0;
};

inline constexpr std::size_t kBtppMaxUnits = 12;

// Exact bottleneck threshold partition by enumerating set partitions.
// Exponential; n <= kBtppMaxUnits.
BtppSolution btpp_bruteforce(const Dataset& data, std::size_t t_star, Metric metric);

double max_within_cluster_dissimilarity(const Dataset& data, const Clustering& clustering,
                                        Metric metric);

}  // namespace ihtc
