#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ihtc/ihtc_pipeline.hpp"
#include "ihtc/itis.hpp"
#include "ihtc/metric.hpp"

namespace ihtc {

enum class Scenario { gaussian_mixture, csv_file };

struct BenchSpec {
  Scenario scenario = Scenario::gaussian_mixture;
  // csv_file scenario only; n_values is then ignored.
  std::filesystem::path csv_path;
  bool standardize = false;

  std::vector<std::size_t> n_values{10000};
  std::vector<std::size_t> t_star_values{2};
  std::vector<std::size_t> m_values{0, 1};
  BaseClusterer base = KMeansConfig{};
  Metric metric = MetricKind::euclidean;
  CenterRule center_rule = CenterRule::centroid;
  std::size_t replicates = 50;
  std::uint64_t seed_base = 1;

  // Empty path keeps the report in memory only.
  std::filesystem::path output;
  bool resume = false;
  // Write zeros in the timing and memory columns so output is reproducible
  // byte for byte.
  bool omit_measurements = false;
  std::size_t memory_budget_bytes = std::size_t{8} << 30;

  void validate() const;
};

struct BenchRow {
  std::size_t n = 0;
  std::size_t t_star = 0;
  std::size_t m = 0;
  std::string base;
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  bool feasible = true;
  PhaseTimings timings;
  std::int64_t peak_memory_bytes = 0;
  std::int64_t base_memory_bytes = 0;
  std::optional<double> accuracy;
  double bss_tss = 0.0;
  std::size_t prototype_count = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

std::string bench_csv_header();
std::string format_bench_row(const BenchRow& row);
BenchRow parse_bench_row(const std::string& line, std::size_t line_number);

// Seeds for replicate r: data from derive_seed(seed_base + r, 0), the base
// clusterer from derive_seed(seed_base + r, 1).
std::uint64_t replicate_seed(std::uint64_t seed_base, std::size_t replicate);

// Runs every (n, replicate, t_star, m) cell, streaming rows to spec.output.
// With spec.resume, rows already in the file are kept and skipped.
BenchReport bench_run(const BenchSpec& spec, std::ostream* progress = nullptr);

struct AggregateRow {
  std::size_t n = 0;
  std::size_t t_star = 0;
  std::size_t m = 0;
  std::string base;
  std::size_t replicates = 0;
  std::size_t infeasible = 0;
  // Per measure: mean and sample sd (empty when fewer than 2 values).
  std::vector<std::optional<double>> mean;
  std::vector<std::optional<double>> sd;
};

struct Aggregate {
  std::vector<std::string> measures;
  std::vector<AggregateRow> rows;
};

Aggregate bench_aggregate(const std::filesystem::path& report_csv);
void write_aggregate_csv(std::ostream& out, const Aggregate& aggregate);
// One block per measure: rows keyed by (t_star, m), one column per n.
void write_pivot_csv(std::ostream& out, const Aggregate& aggregate);

}  // namespace ihtc
