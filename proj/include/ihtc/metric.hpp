#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string_view>

namespace ihtc {

class Dataset;

enum class MetricKind { euclidean, manhattan };

inline double squared_euclidean(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    s += diff * diff;
  }
  return s;
}

inline double manhattan(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

// A dissimilarity satisfying the triangle inequality. Standardized Euclidean
// distance is euclidean applied to a standardized Dataset.
class Metric {
 public:
  constexpr Metric(MetricKind kind = MetricKind::euclidean) : kind_(kind) {}

  double operator()(std::span<const double> a, std::span<const double> b) const {
    return kind_ == MetricKind::euclidean ? std::sqrt(squared_euclidean(a, b)) : manhattan(a, b);
  }

  // Monotone proxy used to rank neighbors; avoids the sqrt for euclidean.
  double rank_key(std::span<const double> a, std::span<const double> b) const {
    return kind_ == MetricKind::euclidean ? squared_euclidean(a, b) : manhattan(a, b);
  }
  double from_rank_key(double key) const {
    return kind_ == MetricKind::euclidean ? std::sqrt(key) : key;
  }

  MetricKind kind() const { return kind_; }
  std::string_view name() const;
  static Metric parse(std::string_view name);

  friend bool operator==(Metric, Metric) = default;

 private:
  MetricKind kind_;
};

double dissimilarity(const Dataset& data, std::size_t i, std::size_t j, Metric metric);

}  // namespace ihtc
