#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ihtc {

using Label = std::int32_t;
inline constexpr Label kNoise = -1;

// A partition of units 0..n-1 into clusters 0..K-1. Every cluster id in
// [0, K) is non-empty. Units labelled kNoise (DBSCAN only) belong to no
// cluster.
class Clustering {
 public:
  Clustering() = default;
  explicit Clustering(std::vector<Label> labels);

  // Renumbers arbitrary non-negative labels by order of first appearance;
  // negative labels become noise.
  static Clustering canonical(std::span<const Label> labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t num_clusters() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  Label label(std::size_t unit) const { return labels_[unit]; }
  std::span<const Label> labels() const { return labels_; }

  std::span<const std::size_t> members(std::size_t cluster) const {
    return {members_.data() + offsets_[cluster], offsets_[cluster + 1] - offsets_[cluster]};
  }
  std::size_t cluster_size(std::size_t cluster) const {
    return offsets_[cluster + 1] - offsets_[cluster];
  }
  std::size_t min_cluster_size() const;
  std::size_t max_cluster_size() const;
  std::size_t noise_count() const { return noise_; }
  bool has_noise() const { return noise_ > 0; }

  friend bool operator==(const Clustering& a, const Clustering& b) { return a.labels_ == b.labels_; }

 private:
  std::vector<Label> labels_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> members_;
  std::size_t noise_ = 0;
};

}  // namespace ihtc
