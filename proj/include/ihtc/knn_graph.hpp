#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ihtc/metric.hpp"

namespace ihtc {

class Dataset;

using Vertex = std::uint32_t;

// Undirected k-nearest-neighbors graph: ij is an edge when j is among the k
// closest units to i or i is among the k closest to j. Adjacency is stored
// in CSR form, each row sorted by neighbor index.
class KnnGraph {
 public:
  KnnGraph(std::size_t k, std::vector<std::size_t> offsets, std::vector<Vertex> neighbors,
           std::vector<double> weights);

  std::size_t size() const { return offsets_.size() - 1; }
  std::size_t k() const { return k_; }
  std::size_t degree(std::size_t v) const { return offsets_[v + 1] - offsets_[v]; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }
  double max_edge_weight() const { return max_edge_weight_; }

  std::span<const Vertex> neighbors(std::size_t v) const {
    return {neighbors_.data() + offsets_[v], degree(v)};
  }
  std::span<const double> weights(std::size_t v) const {
    return {weights_.data() + offsets_[v], degree(v)};
  }

  bool adjacent(std::size_t i, std::size_t j) const;

  // One line per undirected edge, "i j weight" with i < j, ascending.
  void write_edges(std::ostream& out) const;

  std::size_t memory_bytes() const {
    return offsets_.size() * sizeof(std::size_t) + neighbors_.size() * sizeof(Vertex) +
           weights_.size() * sizeof(double);
  }

  friend bool operator==(const KnnGraph&, const KnnGraph&) = default;

 private:
  std::size_t k_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> neighbors_;
  std::vector<double> weights_;
  double max_edge_weight_ = 0.0;
};

enum class KnnMethod { automatic, kd_tree, brute_force };

struct KnnOptions {
  KnnMethod method = KnnMethod::automatic;
  // The tree path hands over to brute force above this dimensionality.
  std::size_t tree_max_dims = 16;
  // 0 = std::thread::hardware_concurrency(). Output does not depend on it.
  unsigned threads = 1;
};

// Exact graph by exhaustive search. Distance ties go to the lower index.
KnnGraph build_knn_bruteforce(const Dataset& data, std::size_t k, Metric metric,
                              unsigned threads = 1);

// Same graph as build_knn_bruteforce, via a kd-tree. Euclidean only.
KnnGraph build_knn_tree(const Dataset& data, std::size_t k, Metric metric,
                        const KnnOptions& options = {});

KnnGraph build_knn_graph(const Dataset& data, std::size_t k, Metric metric,
                         const KnnOptions& options = {});

// True iff a walk of length <= 2 joins i and j (i == j counts).
bool within_walk_two(const KnnGraph& graph, std::size_t i, std::size_t j);

}  // namespace ihtc
