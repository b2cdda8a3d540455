#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ihtc {

class Dataset;

struct Neighbor {
  double key;  // squared euclidean distance
  std::uint32_t index;

  friend bool operator<(const Neighbor& a, const Neighbor& b) {
    return a.key < b.key || (a.key == b.key && a.index < b.index);
  }
};

// Exact euclidean kd-tree. Splits on the widest dimension at the median.
// Keeps a permuted copy of the points for locality; the source Dataset does
// not need to outlive the tree.
class KdTree {
 public:
  explicit KdTree(const Dataset& data, std::size_t leaf_size = 8);

  std::size_t size() const { return index_.size(); }
  std::size_t dims() const { return dims_; }

  // The k nearest units to unit `query` excluding itself, ordered by
  // (squared distance, index). Exact: ties are resolved the same way a brute
  // force scan would resolve them.
  void nearest(std::size_t query, std::size_t k, std::vector<Neighbor>& out) const;

  // Units whose euclidean distance to `point` is <= radius, ascending index.
  void within_radius(std::span<const double> point, double radius,
                     std::vector<std::size_t>& out) const;

  // Units in tree order; iterating queries in this order is cache friendly.
  std::span<const std::uint32_t> order() const { return index_; }

 private:
  struct Node {
    std::uint32_t begin;
    std::uint32_t end;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t dim = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);
  std::span<const double> point(std::size_t slot) const {
    return {points_.data() + slot * dims_, dims_};
  }

  std::size_t dims_;
  std::size_t leaf_size_;
  std::vector<double> points_;        // tree order
  std::vector<std::uint32_t> index_;  // slot -> unit
  std::vector<std::uint32_t> slot_;   // unit -> slot
  std::vector<Node> nodes_;
};

}  // namespace ihtc
