#include "ihtc/clustering.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

#include "ihtc/error.hpp"

namespace ihtc {

Clustering::Clustering(std::vector<Label> labels) : labels_(std::move(labels)) {
  Label max_label = -1;
  for (Label l : labels_) {
    if (l < kNoise) throw ConfigError("cluster label below -1: " + std::to_string(l));
    max_label = std::max(max_label, l);
  }
  const std::size_t k = static_cast<std::size_t>(max_label + 1);
  offsets_.assign(k + 1, 0);
  for (Label l : labels_) {
    if (l == kNoise) ++noise_;
    else ++offsets_[static_cast<std::size_t>(l) + 1];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (offsets_[c + 1] == 0) throw ConfigError("cluster " + std::to_string(c) + " is empty");
    offsets_[c + 1] += offsets_[c];
  }
  members_.resize(labels_.size() - noise_);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] != kNoise) members_[cursor[static_cast<std::size_t>(labels_[i])]++] = i;
  if (k == 0) offsets_.clear();
}

Clustering Clustering::canonical(std::span<const Label> labels) {
  std::unordered_map<Label, Label> remap;
  std::vector<Label> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      out[i] = kNoise;
      continue;
    }
    auto [it, inserted] = remap.try_emplace(labels[i], static_cast<Label>(remap.size()));
    out[i] = it->second;
  }
  return Clustering(std::move(out));
}

std::size_t Clustering::min_cluster_size() const {
  std::size_t best = num_clusters() ? cluster_size(0) : 0;
  for (std::size_t c = 1; c < num_clusters(); ++c) best = std::min(best, cluster_size(c));
  return best;
}

std::size_t Clustering::max_cluster_size() const {
  std::size_t best = 0;
  for (std::size_t c = 0; c < num_clusters(); ++c) best = std::max(best, cluster_size(c));
  return best;
}

}  // namespace ihtc
