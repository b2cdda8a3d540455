#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ihtc/clusterers.hpp"
#include "ihtc/clustering.hpp"

namespace ihtc {

class Dataset;

// Best fraction of units whose cluster agrees with the true component over
// all one-to-one cluster/component matchings. Noise never counts as correct.
double prediction_accuracy(const Clustering& predicted, std::span<const int> truth);

struct SumOfSquares {
  double bss = 0.0;
  double wcss = 0.0;
  double tss = 0.0;

  double ratio() const { return tss > 0.0 ? bss / tss : 0.0; }
};

// Noise units are left out of all three sums. Throws std::logic_error if
// BSS + WCSS drifts from TSS by more than 1e-6 relative.
SumOfSquares sum_of_squares(const Dataset& data, const Clustering& clustering);
double bss_tss(const Dataset& data, const Clustering& clustering);

// WCSS of k-means for every k in [k_min, k_max], each run with the template's
// seed and init.
std::vector<double> elbow_scan(const Dataset& data, std::size_t k_min, std::size_t k_max,
                               const KMeansConfig& config_template);

}  // namespace ihtc
