#include "ihtc/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"

namespace ihtc {

namespace {

// Minimum-cost perfect matching on a square matrix (Hungarian method with
// potentials). Returns assignment row -> column.
std::vector<std::size_t> min_cost_assignment(const std::vector<double>& cost, std::size_t m) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<std::uint8_t> used(m + 1);
  for (std::size_t i = 1; i <= m; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost[(i0 - 1) * m + (j - 1)] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<std::size_t> row_to_col(m);
  for (std::size_t j = 1; j <= m; ++j) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

double prediction_accuracy(const Clustering& predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) {
    throw ConfigError("prediction_accuracy: " + std::to_string(predicted.size()) +
                      " predictions vs " + std::to_string(truth.size()) + " true labels");
  }
  if (truth.empty()) return 0.0;
  std::map<int, std::size_t> truth_ids;
  for (int t : truth) truth_ids.try_emplace(t, truth_ids.size());
  const std::size_t m = std::max(predicted.num_clusters(), truth_ids.size());

  std::vector<double> agree(m * m, 0.0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const Label c = predicted.label(i);
    if (c == kNoise) continue;
    agree[static_cast<std::size_t>(c) * m + truth_ids[truth[i]]] += 1.0;
  }
  std::vector<double> cost(agree.size());
  for (std::size_t e = 0; e < agree.size(); ++e) cost[e] = -agree[e];
  const auto match = min_cost_assignment(cost, m);
  double correct = 0.0;
  for (std::size_t r = 0; r < m; ++r) correct += agree[r * m + match[r]];
  return correct / static_cast<double>(truth.size());
}

SumOfSquares sum_of_squares(const Dataset& data, const Clustering& clustering) {
  if (clustering.size() != data.size()) throw ConfigError("clustering and data sizes differ");
  const std::size_t d = data.dims();
  const std::size_t k = clustering.num_clusters();
  std::vector<double> global(d, 0.0), centroid(k * d, 0.0);
  std::size_t counted = 0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t i : clustering.members(c))
      for (std::size_t j = 0; j < d; ++j) centroid[c * d + j] += data(i, j);
    counted += clustering.cluster_size(c);
    for (std::size_t j = 0; j < d; ++j) {
      global[j] += centroid[c * d + j];
      centroid[c * d + j] /= static_cast<double>(clustering.cluster_size(c));
    }
  }
  SumOfSquares out;
  if (counted == 0) return out;
  for (auto& g : global) g /= static_cast<double>(counted);

  for (std::size_t c = 0; c < k; ++c) {
    double between = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = centroid[c * d + j] - global[j];
      between += diff * diff;
    }
    out.bss += static_cast<double>(clustering.cluster_size(c)) * between;
    for (std::size_t i : clustering.members(c)) {
      for (std::size_t j = 0; j < d; ++j) {
        const double w = data(i, j) - centroid[c * d + j];
        const double t = data(i, j) - global[j];
        out.wcss += w * w;
        out.tss += t * t;
      }
    }
  }
  const double gap = std::abs(out.bss + out.wcss - out.tss);
  if (gap > 1e-6 * out.tss)
    throw std::logic_error("sum_of_squares: BSS + WCSS differs from TSS by " + std::to_string(gap));
  return out;
}

double bss_tss(const Dataset& data, const Clustering& clustering) {
  return sum_of_squares(data, clustering).ratio();
}

std::vector<double> elbow_scan(const Dataset& data, std::size_t k_min, std::size_t k_max,
                               const KMeansConfig& config_template) {
  if (k_min < 1 || k_min > k_max) throw ConfigError("elbow_scan needs 1 <= k_min <= k_max");
  if (k_max > data.size()) throw ConfigError("elbow_scan needs k_max <= n");
  std::vector<double> out;
  for (std::size_t k = k_min; k <= k_max; ++k) {
    KMeansConfig config = config_template;
    config.k = k;
    out.push_back(kmeans(data, config).wcss);
  }
  return out;
}

}  // namespace ihtc
