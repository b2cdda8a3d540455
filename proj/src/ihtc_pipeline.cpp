#include "ihtc/ihtc_pipeline.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"
#include "ihtc/memory.hpp"

namespace ihtc {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t required_units(const BaseClusterer& base) {
  if (const auto* km = std::get_if<KMeansConfig>(&base)) return km->k;
  if (const auto* h = std::get_if<HacConfig>(&base)) return std::max<std::size_t>(h->k, 2);
  return 1;
}

// Deepest level whose unit count still satisfies `enough`.
template <typename Pred>
std::size_t deepest_level(const PrototypeHierarchy& h, Pred enough) {
  std::size_t best = 0;
  for (std::size_t l = 0; l <= h.num_levels(); ++l)
    if (enough(h.level_size(l))) best = l;
  return best;
}

Clustering run_base(const Dataset& points, const BaseClusterer& base, Metric metric) {
  if (const auto* km = std::get_if<KMeansConfig>(&base)) return kmeans(points, *km).clustering;
  if (const auto* h = std::get_if<HacConfig>(&base))
    return cut_dendrogram(hac(points, h->linkage, metric, h->max_units), h->k);
  return dbscan(points, std::get<DbscanConfig>(base), metric);
}

}  // namespace

std::string_view base_name(const BaseClusterer& base) {
  if (std::holds_alternative<KMeansConfig>(base)) return "kmeans";
  if (std::holds_alternative<HacConfig>(base)) return "hac";
  return "dbscan";
}

void IhtcConfig::validate() const {
  if (iterations >= 1 && t_star < 2) throw ConfigError("t_star must be at least 2 when iterations >= 1");
  if (const auto* km = std::get_if<KMeansConfig>(&base)) km->validate();
  if (const auto* h = std::get_if<HacConfig>(&base)) {
    if (h->k < 1) throw ConfigError("HAC needs k >= 1");
    if (h->linkage == Linkage::ward && metric.kind() != MetricKind::euclidean)
      throw ConfigError("ward linkage needs the euclidean metric");
  }
  if (const auto* db = std::get_if<DbscanConfig>(&base)) db->validate();
}

IhtcResult ihtc_run(const Dataset& data, const IhtcConfig& config) {
  config.validate();
  const auto run_start = Clock::now();
  memory::HighWater whole_run;
  PhaseTimings timings;
  const std::size_t need = required_units(config.base);

  PrototypeHierarchy hierarchy(data.size(), config.t_star, config.center_rule);
  if (config.iterations >= 1) {
    if (data.size() < config.t_star) {
      throw InfeasibleError("n = " + std::to_string(data.size()) + " is below t_star = " +
                            std::to_string(config.t_star));
    }
    hierarchy = itis_run(data, config.t_star, Iterations{config.iterations}, config.metric,
                         config.center_rule, config.tc);
    for (const auto& level : hierarchy.timings()) {
      timings.graph_seconds += level.graph_seconds;
      timings.tc_seconds += level.tc_seconds;
      timings.prototype_seconds += level.prototype_seconds;
    }
    if (hierarchy.num_levels() < config.iterations || hierarchy.top_size() < need) {
      const std::size_t reachable = deepest_level(hierarchy, [&](std::size_t units) { return units >= need; });
      throw InfeasibleError("only " + std::to_string(hierarchy.top_size()) + " prototypes remain after " +
                            std::to_string(hierarchy.num_levels()) + " iterations but " +
                            std::string(base_name(config.base)) + " needs " + std::to_string(need) +
                            "; the largest feasible number of iterations is " + std::to_string(reachable));
    }
  } else if (data.size() < need) {
    throw InfeasibleError("the base clusterer needs at least " + std::to_string(need) + " units");
  }

  const Dataset& top = hierarchy.num_levels() ? hierarchy.prototypes(hierarchy.num_levels()) : data;
  if (const auto* h = std::get_if<HacConfig>(&config.base); h && top.size() > h->max_units) {
    std::size_t more = 0;
    double units = static_cast<double>(top.size());
    while (units > static_cast<double>(h->max_units)) {
      units /= static_cast<double>(std::max<std::size_t>(config.t_star, 2));
      ++more;
    }
    throw InfeasibleError("HAC cannot run on " + std::to_string(top.size()) + " units (cap " +
                          std::to_string(h->max_units) + "); use at least " +
                          std::to_string(config.iterations + more) + " iterations");
  }

  const std::size_t top_bytes = top.memory_bytes();
  std::int64_t base_heap = 0;
  auto start = Clock::now();
  Clustering top_labels;
  {
    memory::HighWater base_phase;
    top_labels = run_base(top, config.base, config.metric);
    base_heap = base_phase.bytes();
  }
  timings.base_seconds = seconds_since(start);

  start = Clock::now();
  Clustering clustering = hierarchy.num_levels() ? back_out(hierarchy, top_labels) : std::move(top_labels);
  timings.back_out_seconds = seconds_since(start);
  timings.total_seconds = seconds_since(run_start);

  IhtcResult result{std::move(clustering), std::move(hierarchy), 0, timings, {}};
  result.prototype_count = result.hierarchy.top_size();
  result.memory.allocator_tracked = memory::allocator_tracking_enabled();
  result.memory.peak_bytes = whole_run.bytes();
  result.memory.base_bytes = static_cast<std::int64_t>(top_bytes) + base_heap;
  result.memory.peak_rss_bytes = memory::peak_rss_bytes();
  return result;
}

}  // namespace ihtc
