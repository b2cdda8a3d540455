#include "ihtc/metric.hpp"

#include <string>

#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"

namespace ihtc {

std::string_view Metric::name() const {
  return kind_ == MetricKind::euclidean ? "euclidean" : "manhattan";
}

Metric Metric::parse(std::string_view name) {
  if (name == "euclidean") return MetricKind::euclidean;
  if (name == "manhattan") return MetricKind::manhattan;
  throw ConfigError("unknown metric \"" + std::string(name) + "\" (expected euclidean|manhattan)");
}

double dissimilarity(const Dataset& data, std::size_t i, std::size_t j, Metric metric) {
  if (i >= data.size() || j >= data.size())
    throw ConfigError("unit index out of range: " + std::to_string(std::max(i, j)) +
                      " >= " + std::to_string(data.size()));
  if (i == j) return 0.0;
  return metric(data.row(i), data.row(j));
}

}  // namespace ihtc
