#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>

#include "ihtc/clusterers.hpp"
#include "ihtc/clustering.hpp"
#include "ihtc/itis.hpp"
#include "ihtc/metric.hpp"
#include "ihtc/threshold_clustering.hpp"

namespace ihtc {

class Dataset;

struct HacConfig {
  Linkage linkage = Linkage::ward;
  std::size_t k = 3;
  std::size_t max_units = kDefaultHacMaxUnits;
};

using BaseClusterer = std::variant<KMeansConfig, HacConfig, DbscanConfig>;

std::string_view base_name(const BaseClusterer& base);

struct IhtcConfig {
  std::size_t t_star = 2;
  // 0 runs the base clusterer on the raw data.
  std::size_t iterations = 1;
  BaseClusterer base = KMeansConfig{};
  Metric metric = MetricKind::euclidean;
  CenterRule center_rule = CenterRule::centroid;
  TcOptions tc;

  void validate() const;
};

struct PhaseTimings {
  double graph_seconds = 0.0;
  double tc_seconds = 0.0;
  double prototype_seconds = 0.0;
  double base_seconds = 0.0;
  double back_out_seconds = 0.0;
  double total_seconds = 0.0;
};

struct MemoryUsage {
  // Heap high-water of the whole run above the level at entry. Dominated by
  // the nearest-neighbors graph, which grows linearly in t_star.
  std::int64_t peak_bytes = 0;
  // Points handed to the base clusterer plus its own heap high-water.
  std::int64_t base_bytes = 0;
  std::size_t peak_rss_bytes = 0;
  bool allocator_tracked = false;
};

struct IhtcResult {
  Clustering clustering;
  PrototypeHierarchy hierarchy;
  std::size_t prototype_count = 0;
  PhaseTimings timings;
  MemoryUsage memory;
};

// ITIS for `iterations` levels, the base clusterer on the top prototypes,
// then back-out to all n units. Throws InfeasibleError when the prototypes
// cannot support the base clusterer (too few for k, or too many for HAC).
IhtcResult ihtc_run(const Dataset& data, const IhtcConfig& config);

}  // namespace ihtc
