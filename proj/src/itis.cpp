#include "ihtc/itis.hpp"

#include <chrono>
#include <limits>
#include <string>

#include "ihtc/error.hpp"
#include "ihtc/knn_graph.hpp"

namespace ihtc {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

PrototypeHierarchy::PrototypeHierarchy(std::size_t original_size, std::size_t t_star,
                                       CenterRule center_rule)
    : original_size_(original_size), t_star_(t_star), center_rule_(center_rule) {}

std::size_t PrototypeHierarchy::level_size(std::size_t level) const {
  if (level == 0) return original_size_;
  return prototypes(level).size();
}

const Dataset& PrototypeHierarchy::prototypes(std::size_t level) const {
  if (level == 0 || level > levels_.size())
    throw ConfigError("prototype level " + std::to_string(level) + " out of range [1, " +
                      std::to_string(levels_.size()) + "]");
  return levels_[level - 1].prototypes;
}

std::span<const std::size_t> PrototypeHierarchy::parent_map(std::size_t level) const {
  if (level == 0 || level > levels_.size())
    throw ConfigError("prototype level " + std::to_string(level) + " out of range");
  return levels_[level - 1].parent_map;
}

void PrototypeHierarchy::push_level(Dataset prototypes, std::vector<std::size_t> parent_map,
                                    LevelTimings timings) {
  if (parent_map.size() != level_size(num_levels()))
    throw ConfigError("parent map must cover every unit of the previous level");
  for (std::size_t p : parent_map)
    if (p >= prototypes.size()) throw ConfigError("parent map points past the prototype count");
  levels_.push_back(Level{std::move(prototypes), std::move(parent_map)});
  timings_.push_back(timings);
}

std::vector<std::size_t> PrototypeHierarchy::top_ancestors() const {
  std::vector<std::size_t> anc(original_size_);
  for (std::size_t i = 0; i < original_size_; ++i) anc[i] = i;
  for (const auto& level : levels_)
    for (auto& a : anc) a = level.parent_map[a];
  return anc;
}

Prototypes make_prototypes(const Dataset& data, const Clustering& clustering, CenterRule rule,
                           Metric metric) {
  if (clustering.size() != data.size()) throw ConfigError("clustering and data sizes differ");
  if (clustering.has_noise()) throw ConfigError("prototypes need a clustering without noise");
  const std::size_t k = clustering.num_clusters();
  const std::size_t d = data.dims();
  std::vector<double> centers(k * d, 0.0);

  for (std::size_t c = 0; c < k; ++c) {
    const auto members = clustering.members(c);
    double* center = centers.data() + c * d;
    if (rule == CenterRule::centroid) {
      for (std::size_t i : members)
        for (std::size_t j = 0; j < d; ++j) center[j] += data(i, j);
      for (std::size_t j = 0; j < d; ++j) center[j] /= static_cast<double>(members.size());
    } else {
      std::size_t best = members.front();
      double best_sum = std::numeric_limits<double>::infinity();
      for (std::size_t a : members) {
        double sum = 0.0;
        for (std::size_t b : members) sum += a == b ? 0.0 : metric(data.row(a), data.row(b));
        if (sum < best_sum) {
          best_sum = sum;
          best = a;
        }
      }
      for (std::size_t j = 0; j < d; ++j) center[j] = data(best, j);
    }
  }

  std::vector<std::size_t> parents(clustering.size());
  for (std::size_t i = 0; i < parents.size(); ++i) parents[i] = static_cast<std::size_t>(clustering.label(i));
  return Prototypes{Dataset(k, d, std::move(centers), data.column_names()), std::move(parents)};
}

PrototypeHierarchy itis_run(const Dataset& data, std::size_t t_star, ItisStop stop, Metric metric,
                            CenterRule center_rule, const TcOptions& options) {
  if (t_star < 2) throw ConfigError("t_star must be at least 2");
  if (data.size() < t_star) throw ConfigError("ITIS needs n >= t_star");
  std::size_t max_levels = std::numeric_limits<std::size_t>::max();
  double target = 0.0;
  if (const auto* it = std::get_if<Iterations>(&stop)) {
    if (it->count < 1) throw ConfigError("ITIS needs at least one iteration");
    max_levels = it->count;
  } else {
    const double alpha = std::get<ReductionFactor>(stop).alpha;
    if (!(alpha > 1.0)) throw ConfigError("reduction factor alpha must exceed 1");
    target = static_cast<double>(data.size()) / alpha;
  }

  PrototypeHierarchy hierarchy(data.size(), t_star, center_rule);
  const Dataset* current = &data;
  for (std::size_t level = 1; level <= max_levels; ++level) {
    if (current->size() < t_star) {
      hierarchy.mark_early_terminated();
      break;
    }
    LevelTimings timings;
    auto start = std::chrono::steady_clock::now();
    const KnnGraph graph = build_knn_graph(*current, t_star - 1, metric, options.knn);
    timings.graph_seconds = seconds_since(start);

    start = std::chrono::steady_clock::now();
    TcResult tc = threshold_cluster(*current, graph, t_star, metric, options.seed_order);
    timings.tc_seconds = seconds_since(start);

    start = std::chrono::steady_clock::now();
    Prototypes protos = make_prototypes(*current, tc.clustering, center_rule, metric);
    timings.prototype_seconds = seconds_since(start);

    hierarchy.push_level(std::move(protos.points), std::move(protos.parent_map), timings);
    current = &hierarchy.prototypes(hierarchy.num_levels());
    if (target > 0.0 && static_cast<double>(current->size()) <= target) break;
  }
  return hierarchy;
}

Clustering back_out(const PrototypeHierarchy& hierarchy, const Clustering& top_labels) {
  if (top_labels.size() != hierarchy.top_size()) {
    throw ConfigError("top-level labels cover " + std::to_string(top_labels.size()) +
                      " prototypes, hierarchy has " + std::to_string(hierarchy.top_size()));
  }
  const auto anc = hierarchy.top_ancestors();
  std::vector<Label> labels(anc.size());
  for (std::size_t i = 0; i < anc.size(); ++i) labels[i] = top_labels.label(anc[i]);
  return Clustering(std::move(labels));
}

}  // namespace ihtc
