#include "ihtc/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ihtc/error.hpp"
#include "ihtc/random.hpp"

namespace ihtc {

Dataset::Dataset(std::size_t rows, std::size_t cols, std::vector<double> values,
                 std::vector<std::string> column_names)
    : rows_(rows), cols_(cols), values_(std::move(values)), column_names_(std::move(column_names)) {
  if (rows_ == 0 || cols_ == 0) throw ConfigError("dataset needs at least one row and one column");
  if (values_.size() != rows_ * cols_) throw ConfigError("dataset value count does not match shape");
  if (!column_names_.empty() && column_names_.size() != cols_)
    throw ConfigError("dataset column name count does not match column count");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw DataError("non-finite value at row " + std::to_string(i / cols_) + ", column " +
                      std::to_string(i % cols_));
    }
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ConfigError("dataset needs at least one row");
  const std::size_t d = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * d);
  for (const auto& r : rows) {
    if (r.size() != d) throw ConfigError("ragged rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return Dataset(rows.size(), d, std::move(values));
}

Dataset Dataset::from_column(const std::vector<double>& column) {
  return Dataset(column.size(), 1, column);
}

std::vector<double> Dataset::column(std::size_t j) const {
  std::vector<double> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = values_[i * cols_ + j];
  return out;
}

// ---------------------------------------------------------------- CSV

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  std::string line;
  std::vector<std::string> header;
  std::size_t line_number = 0;
  bool have_first = false;

  std::vector<std::size_t> selected;
  std::vector<std::string> selected_names;
  std::size_t field_count = 0;
  std::vector<double> values;
  std::size_t rows = 0;

  auto resolve_columns = [&](std::size_t width) {
    field_count = width;
    if (!options.columns) {
      selected.resize(width);
      std::iota(selected.begin(), selected.end(), std::size_t{0});
    } else {
      for (const auto& name : *options.columns) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it != header.end()) {
          selected.push_back(static_cast<std::size_t>(it - header.begin()));
          continue;
        }
        std::size_t idx = 0;
        const auto [ptr, ec] = std::from_chars(name.data(), name.data() + name.size(), idx);
        if (ec != std::errc() || ptr != name.data() + name.size() || idx >= width)
          throw DataError("unknown column \"" + name + "\" in " + path.string());
        selected.push_back(idx);
      }
      if (selected.empty()) throw ConfigError("no columns selected");
    }
    for (std::size_t c : selected)
      selected_names.push_back(header.empty() ? "x" + std::to_string(c) : header[c]);
  };

  while (std::getline(in, line)) {
    ++line_number;
    if (is_blank(line)) continue;
    const auto fields = split_fields(line);
    if (!have_first) {
      have_first = true;
      if (options.has_header) {
        for (auto f : fields) header.emplace_back(f);
        resolve_columns(fields.size());
        continue;
      }
      resolve_columns(fields.size());
    }
    ++rows;
    if (fields.size() != field_count) {
      throw DataError("row " + std::to_string(rows) + " (line " + std::to_string(line_number) +
                      ") has " + std::to_string(fields.size()) + " fields, expected " +
                      std::to_string(field_count));
    }
    for (std::size_t s = 0; s < selected.size(); ++s) {
      double v = 0.0;
      if (!parse_double(fields[selected[s]], v)) {
        throw DataError("non-numeric value \"" + std::string(fields[selected[s]]) + "\" at row " +
                        std::to_string(rows) + ", column \"" + selected_names[s] + "\"");
      }
      values.push_back(v);
    }
  }
  if (rows == 0) throw DataError("no data rows in " + path.string());
  return Dataset(rows, selected.size(), std::move(values), std::move(selected_names));
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  for (std::size_t j = 0; j < data.dims(); ++j) {
    if (j) out << ',';
    out << (data.column_names().empty() ? "x" + std::to_string(j) : data.column_names()[j]);
  }
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.dims(); ++j) {
      if (j) out << ',';
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, data(i, j));
      out.write(buf, ptr - buf);
    }
    out << '\n';
  }
}

// ---------------------------------------------------------------- standardize

Dataset standardize(const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t d = data.dims();
  if (n < 2) throw ConfigError("standardize needs at least two rows");
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += data(i, j);
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = data(i, j) - mean[j];
      sd[j] += diff * diff;
    }
  for (auto& s : sd) s = std::sqrt(s / static_cast<double>(n));

  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out[i * d + j] = sd[j] > 0.0 ? (data(i, j) - mean[j]) / sd[j] : 0.0;
  return Dataset(n, d, std::move(out), data.column_names());
}

// ---------------------------------------------------------------- PCA

SymmetricEigen jacobi_eigen(std::vector<double> a, std::size_t d, double tolerance,
                            int max_sweeps) {
  if (a.size() != d * d) throw ConfigError("jacobi_eigen: matrix is not d x d");
  std::vector<double> v(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = 1.0;

  auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) s += a[p * d + q] * a[p * d + q];
    return std::sqrt(2.0 * s);
  };
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  const double threshold = tolerance * std::max(scale, 1.0);

  bool converged = off_norm() <= threshold;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a[p * d + q];
        if (apq == 0.0) continue;
        const double theta = (a[q * d + q] - a[p * d + p]) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a[k * d + p], akq = a[k * d + q];
          a[k * d + p] = c * akp - s * akq;
          a[k * d + q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a[p * d + k], aqk = a[q * d + k];
          a[p * d + k] = c * apk - s * aqk;
          a[q * d + k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v[k * d + p], vkq = v[k * d + q];
          v[k * d + p] = c * vkp - s * vkq;
          v[k * d + q] = s * vkp + c * vkq;
        }
      }
    }
    converged = off_norm() <= threshold;
  }
  if (!converged) throw Error("jacobi_eigen: no convergence within " + std::to_string(max_sweeps) + " sweeps");

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a[x * d + x] > a[y * d + y]; });
  SymmetricEigen out;
  out.values.resize(d);
  out.vectors.resize(d * d);
  for (std::size_t r = 0; r < d; ++r) {
    const std::size_t col = order[r];
    out.values[r] = a[col * d + col];
    std::size_t big = 0;
    for (std::size_t k = 0; k < d; ++k) {
      out.vectors[r * d + k] = v[k * d + col];
      if (std::abs(v[k * d + col]) > std::abs(v[big * d + col])) big = k;
    }
    if (out.vectors[r * d + big] < 0)
      for (std::size_t k = 0; k < d; ++k) out.vectors[r * d + k] = -out.vectors[r * d + k];
  }
  return out;
}

PcaModel pca_fit(const Dataset& data) {
  const std::size_t n = data.size();
  const std::size_t d = data.dims();
  if (n < 2) throw ConfigError("PCA needs at least two rows");
  PcaModel model;
  model.dims = d;
  model.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) model.mean[j] += data(i, j);
  for (auto& m : model.mean) m /= static_cast<double>(n);

  std::vector<double> cov(d * d, 0.0);
  std::vector<double> centered(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) centered[j] = data(i, j) - model.mean[j];
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p; q < d; ++q) cov[p * d + q] += centered[p] * centered[q];
  }
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = p; q < d; ++q) {
      cov[p * d + q] /= static_cast<double>(n - 1);
      cov[q * d + p] = cov[p * d + q];
    }
  auto eig = jacobi_eigen(std::move(cov), d);
  model.eigenvalues = std::move(eig.values);
  model.components = std::move(eig.vectors);
  return model;
}

double PcaModel::explained_variance_ratio(std::size_t num_components) const {
  double total = 0.0, kept = 0.0;
  for (std::size_t r = 0; r < eigenvalues.size(); ++r) {
    const double ev = std::max(eigenvalues[r], 0.0);
    total += ev;
    if (r < num_components) kept += ev;
  }
  return total > 0.0 ? kept / total : 0.0;
}

Dataset PcaModel::project(const Dataset& data, std::size_t num_components) const {
  if (num_components < 1 || num_components > dims)
    throw ConfigError("num_components must be in [1, " + std::to_string(dims) + "]");
  if (data.dims() != dims) throw ConfigError("PCA model and data dimensionality differ");
  const std::size_t n = data.size();
  std::vector<double> out(n * num_components, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < num_components; ++r) {
      double s = 0.0;
      for (std::size_t j = 0; j < dims; ++j) s += (data(i, j) - mean[j]) * components[r * dims + j];
      out[i * num_components + r] = s;
    }
  std::vector<std::string> names;
  for (std::size_t r = 0; r < num_components; ++r) names.push_back("PC" + std::to_string(r + 1));
  return Dataset(n, num_components, std::move(out), std::move(names));
}

Dataset pca_project(const Dataset& data, std::size_t num_components) {
  if (num_components < 1 || num_components > data.dims())
    throw ConfigError("num_components must be in [1, " + std::to_string(data.dims()) + "]");
  return pca_fit(data).project(data, num_components);
}

// ---------------------------------------------------------------- mixture

std::size_t GaussianMixtureSpec::dims() const {
  return components.empty() ? 0 : components.front().mean.size();
}

void GaussianMixtureSpec::validate() const {
  if (components.empty()) throw ConfigError("mixture needs at least one component");
  const std::size_t d = dims();
  if (d == 0) throw ConfigError("mixture components need a non-empty mean");
  double total = 0.0;
  for (const auto& c : components) {
    if (c.mean.size() != d || c.variances.size() != d)
      throw ConfigError("mixture components disagree on dimensionality");
    if (!(c.weight >= 0.0)) throw ConfigError("mixture weights must be non-negative");
    for (double v : c.variances)
      if (!(v > 0.0)) throw ConfigError("covariance diagonal entries must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) throw ConfigError("mixture weights must sum to 1");
}

GaussianMixtureSpec GaussianMixtureSpec::benchmark(std::uint64_t seed) {
  GaussianMixtureSpec spec;
  spec.components = {
      {0.5, {1.0, 2.0}, {1.0, 0.5}},
      {0.3, {7.0, 8.0}, {2.0, 1.0}},
      {0.2, {3.0, 5.0}, {3.0, 4.0}},
  };
  spec.seed = seed;
  return spec;
}

LabeledDataset generate_gaussian_mixture(const GaussianMixtureSpec& spec, std::size_t n) {
  spec.validate();
  if (n == 0) throw ConfigError("n must be at least 1");
  const std::size_t d = spec.dims();
  const std::size_t k = spec.components.size();

  std::vector<double> cumulative(k);
  double acc = 0.0;
  for (std::size_t j = 0; j < k; ++j) cumulative[j] = acc += spec.components[j].weight;

  Engine selector = make_engine(spec.seed, 0);
  std::vector<Engine> draws;
  std::vector<std::vector<double>> sd(k);
  for (std::size_t j = 0; j < k; ++j) {
    draws.push_back(make_engine(spec.seed, j + 1));
    for (double v : spec.components[j].variances) sd[j].push_back(std::sqrt(v));
  }
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  // One distribution per component: libstdc++ caches the second normal of
  // each pair, and that cache must stay within the component's stream.
  std::vector<std::normal_distribution<double>> normal(k);

  std::vector<double> values(n * d);
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = uniform(selector);
    std::size_t j = 0;
    while (j + 1 < k && u >= cumulative[j]) ++j;
    labels[i] = static_cast<int>(j);
    const auto& comp = spec.components[j];
    for (std::size_t c = 0; c < d; ++c) {
      values[i * d + c] = comp.mean[c] + sd[j][c] * normal[j](draws[j]);
    }
  }
  return {Dataset(n, d, std::move(values)), std::move(labels)};
}

}  // namespace ihtc
