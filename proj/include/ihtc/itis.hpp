#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "ihtc/clustering.hpp"
#include "ihtc/dataset.hpp"
#include "ihtc/metric.hpp"
#include "ihtc/threshold_clustering.hpp"

namespace ihtc {

enum class CenterRule { centroid, medoid };

struct Iterations {
  std::size_t count;
};
struct ReductionFactor {
  double alpha;
};
using ItisStop = std::variant<Iterations, ReductionFactor>;

struct LevelTimings {
  double graph_seconds = 0.0;
  double tc_seconds = 0.0;
  double prototype_seconds = 0.0;
};

// Prototype levels built by iterated threshold instance selection. Level 0
// is the caller's dataset and is not stored; level l >= 1 holds the
// prototypes and, for each level-(l-1) unit, the prototype it merged into.
class PrototypeHierarchy {
 public:
  PrototypeHierarchy(std::size_t original_size, std::size_t t_star, CenterRule center_rule);

  std::size_t original_size() const { return original_size_; }
  std::size_t t_star() const { return t_star_; }
  CenterRule center_rule() const { return center_rule_; }
  std::size_t num_levels() const { return levels_.size(); }

  // Unit count at `level`; level 0 is the original data.
  std::size_t level_size(std::size_t level) const;
  std::size_t top_size() const { return level_size(num_levels()); }

  const Dataset& prototypes(std::size_t level) const;
  std::span<const std::size_t> parent_map(std::size_t level) const;

  // For each original unit, its prototype at the top level.
  std::vector<std::size_t> top_ancestors() const;

  // Set when iteration had to stop because fewer than t_star units remained.
  bool early_terminated() const { return early_terminated_; }
  const std::vector<LevelTimings>& timings() const { return timings_; }

  void push_level(Dataset prototypes, std::vector<std::size_t> parent_map,
                  LevelTimings timings = {});
  void mark_early_terminated() { early_terminated_ = true; }

 private:
  struct Level {
    Dataset prototypes;
    std::vector<std::size_t> parent_map;
  };

  std::size_t original_size_;
  std::size_t t_star_;
  CenterRule center_rule_;
  std::vector<Level> levels_;
  std::vector<LevelTimings> timings_;
  bool early_terminated_ = false;
};

struct Prototypes {
  Dataset points;
  std::vector<std::size_t> parent_map;
};

// Row l of the result is the center of cluster l. Medoid ties go to the
// lowest unit index.
Prototypes make_prototypes(const Dataset& data, const Clustering& clustering,
                           CenterRule rule, Metric metric = {});

PrototypeHierarchy itis_run(const Dataset& data, std::size_t t_star, ItisStop stop,
                            Metric metric, CenterRule center_rule = CenterRule::centroid,
                            const TcOptions& options = {});

// Pushes top-level labels down to every original unit. Noise labels
// propagate as noise.
Clustering back_out(const PrototypeHierarchy& hierarchy, const Clustering& top_labels);

}  // namespace ihtc
