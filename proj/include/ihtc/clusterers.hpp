#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "ihtc/clustering.hpp"
#include "ihtc/metric.hpp"

namespace ihtc {

class Dataset;

// ---------------------------------------------------------------- k-means

enum class KMeansInit { random_units, kmeans_plus_plus };

struct KMeansConfig {
  std::size_t k = 3;
  std::size_t max_iterations = 100;
  KMeansInit init = KMeansInit::random_units;
  std::uint64_t seed = 1;
  // Stop once no center moves farther than this (euclidean).
  double tolerance = 0.0;

  void validate() const;
};

struct KMeansResult {
  Clustering clustering;
  std::vector<double> centers;  // k x d, row-major
  double wcss = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  // WCSS after each update step; nonincreasing.
  std::vector<double> wcss_history;
};

// Lloyd's algorithm on squared euclidean distance. An empty cluster is
// reseeded with the unit farthest from its current center.
KMeansResult kmeans(const Dataset& data, const KMeansConfig& config);

// ---------------------------------------------------------------- HAC

enum class Linkage { single, complete, average, ward };

struct Merge {
  // Units are 0..n-1; the cluster formed by merge s has id n + s.
  std::size_t cluster_a;
  std::size_t cluster_b;
  double height;
  std::size_t size;
};

struct Dendrogram {
  std::size_t num_units = 0;
  Linkage linkage = Linkage::ward;
  std::vector<Merge> merges;
};

inline constexpr std::size_t kDefaultHacMaxUnits = 20000;

// Agglomerative clustering with Lance-Williams updates over a condensed
// distance matrix (O(n^2) memory). Among equally close pairs, the pair whose
// smallest member indices are lexicographically smallest merges first.
// Ward uses squared euclidean internally and reports sqrt heights.
Dendrogram hac(const Dataset& data, Linkage linkage, Metric metric = {},
               std::size_t max_units = kDefaultHacMaxUnits);

// Undoes the last k - 1 merges. Clusters are numbered by smallest member.
Clustering cut_dendrogram(const Dendrogram& dendrogram, std::size_t k);

Linkage parse_linkage(std::string_view name);
std::string_view linkage_name(Linkage linkage);

// ---------------------------------------------------------------- DBSCAN

struct DbscanConfig {
  double epsilon = 1.0;
  // Neighborhood size, the point itself included, needed for a core point.
  std::size_t min_pts = 5;

  void validate() const;
};

// Ascending-index scan; clusters are numbered in discovery order and a border
// point joins the first cluster that reaches it. Noise is kNoise.
Clustering dbscan(const Dataset& data, const DbscanConfig& config, Metric metric = {});

}  // namespace ihtc
