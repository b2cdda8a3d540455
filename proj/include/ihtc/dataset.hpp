#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ihtc {

/// Dense n x d matrix of finite doubles, stored row-major. Row i is unit i.
/// Immutable after construction.
class Dataset {
 public:
  Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
          std::vector<std::string> column_names = {});

  static Dataset from_rows(const std::vector<std::vector<double>>& rows);
  // One-dimensional convenience used heavily by tests and examples.
  static Dataset from_column(const std::vector<double>& column);

  std::size_t size() const { return rows_; }
  std::size_t dims() const { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * cols_ + j]; }

  std::span<const double> values() const { return values_; }
  const std::vector<std::string>& column_names() const { return column_names_; }
  std::vector<double> column(std::size_t j) const;

  std::size_t memory_bytes() const { return values_.size() * sizeof(double); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> values_;
  std::vector<std::string> column_names_;
};

struct CsvOptions {
  bool has_header = true;
  // Column names (when the file has a header) or zero-based indices.
  std::optional<std::vector<std::string>> columns;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
void write_csv(const std::filesystem::path& path, const Dataset& data);

// Z-scores every column using the population standard deviation (divisor n).
// Constant columns become all zeros.
Dataset standardize(const Dataset& data);

struct PcaModel {
  std::size_t dims = 0;
  std::vector<double> mean;
  // Descending eigenvalues of the sample covariance (divisor n - 1).
  std::vector<double> eigenvalues;
  // Row r (length dims) is the r-th principal axis, sign-fixed so its
  // largest-magnitude entry is positive.
  std::vector<double> components;

  double explained_variance_ratio(std::size_t num_components) const;
  Dataset project(const Dataset& data, std::size_t num_components) const;
};

PcaModel pca_fit(const Dataset& data);
Dataset pca_project(const Dataset& data, std::size_t num_components);

struct SymmetricEigen {
  std::vector<double> values;   // descending
  std::vector<double> vectors;  // row r is the eigenvector of values[r]
};

// Cyclic Jacobi sweeps on a dense symmetric d x d matrix. Throws when the
// off-diagonal norm does not fall below `tolerance` within `max_sweeps`.
SymmetricEigen jacobi_eigen(std::vector<double> matrix, std::size_t d,
                            double tolerance = 1e-10, int max_sweeps = 100);

struct GaussianComponent {
  double weight = 0.0;
  std::vector<double> mean;
  std::vector<double> variances;  // diagonal of the covariance
};

struct GaussianMixtureSpec {
  std::vector<GaussianComponent> components;
  std::uint64_t seed = 0;

  std::size_t dims() const;
  void validate() const;

  // The three-component bivariate mixture used by the simulation study:
  // weights 0.5/0.3/0.2, means (1,2),(7,8),(3,5), diagonal covariances
  // (1,0.5),(2,1),(3,4).
  static GaussianMixtureSpec benchmark(std::uint64_t seed);
};

struct LabeledDataset {
  Dataset data;
  std::vector<int> labels;
};

// Stream 0 of the seed picks components; stream j + 1 feeds the normal draws
// of component j. Bit-identical output for identical specs.
LabeledDataset generate_gaussian_mixture(const GaussianMixtureSpec& spec, std::size_t n);

}  // namespace ihtc
