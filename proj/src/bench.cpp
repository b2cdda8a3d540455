#include "ihtc/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"
#include "ihtc/evaluation.hpp"
#include "ihtc/random.hpp"

namespace ihtc {

namespace {

constexpr std::size_t kFieldCount = 18;

std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fixed6(double v) {
  char buf[48];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 6);
  return std::string(buf, ptr);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_number, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw DataError("line " + std::to_string(line_number) + ": bad " + what + " \"" + text + "\"");
  return value;
}

using RowKey = std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>;

RowKey key_of(const BenchRow& row) { return {row.n, row.t_star, row.m, row.replicate}; }

BaseClusterer with_seed(BaseClusterer base, std::uint64_t seed) {
  if (auto* km = std::get_if<KMeansConfig>(&base)) km->seed = seed;
  return base;
}

std::size_t estimate_bytes(const BenchSpec& spec, std::size_t n, std::size_t d) {
  const std::size_t t_max = *std::max_element(spec.t_star_values.begin(), spec.t_star_values.end());
  std::size_t bytes = 4 * n * d * sizeof(double);  // data, prototypes, scratch
  bytes += n * (t_max - 1) * 2 * (sizeof(Vertex) + sizeof(double) + 16);  // graph + symmetrize scratch
  if (const auto* h = std::get_if<HacConfig>(&spec.base)) {
    const std::size_t hac_units = std::min(n, h->max_units);
    bytes += hac_units * hac_units / 2 * sizeof(double);
  }
  return bytes;
}

}  // namespace

void BenchSpec::validate() const {
  if (replicates < 1) throw ConfigError("replicates must be at least 1");
  if (t_star_values.empty() || m_values.empty()) throw ConfigError("t_star and m lists must be non-empty");
  if (scenario == Scenario::gaussian_mixture && n_values.empty()) throw ConfigError("n list must be non-empty");
  for (std::size_t t : t_star_values)
    if (t < 2) throw ConfigError("t_star values must be at least 2");
  for (std::size_t n : n_values)
    if (n < 1) throw ConfigError("n values must be positive");
  if (scenario == Scenario::csv_file && csv_path.empty()) throw ConfigError("csv scenario needs an input path");
}

std::uint64_t replicate_seed(std::uint64_t seed_base, std::size_t replicate) {
  return seed_base + replicate;
}

std::string bench_csv_header() {
  return "n,t_star,m,base,replicate,seed,status,graph_seconds,tc_seconds,prototype_seconds,"
         "base_seconds,backout_seconds,total_seconds,peak_memory_bytes,base_memory_bytes,"
         "accuracy,bss_tss,prototype_count";
}

std::string format_bench_row(const BenchRow& row) {
  std::ostringstream out;
  out << row.n << ',' << row.t_star << ',' << row.m << ',' << row.base << ',' << row.replicate << ','
      << row.seed << ',' << (row.feasible ? "ok" : "infeasible");
  if (!row.feasible) {
    out << std::string(kFieldCount - 7, ',');
    return out.str();
  }
  const auto& t = row.timings;
  for (double s : {t.graph_seconds, t.tc_seconds, t.prototype_seconds, t.base_seconds, t.back_out_seconds,
                   t.total_seconds})
    out << ',' << fixed6(s);
  out << ',' << row.peak_memory_bytes << ',' << row.base_memory_bytes << ','
      << (row.accuracy ? shortest(*row.accuracy) : "") << ',' << shortest(row.bss_tss) << ','
      << row.prototype_count;
  return out.str();
}

BenchRow parse_bench_row(const std::string& line, std::size_t line_number) {
  const auto f = split(line);
  if (f.size() != kFieldCount) {
    throw DataError("line " + std::to_string(line_number) + ": expected " + std::to_string(kFieldCount) +
                    " fields, found " + std::to_string(f.size()));
  }
  BenchRow row;
  row.n = parse_number<std::size_t>(f[0], line_number, "n");
  row.t_star = parse_number<std::size_t>(f[1], line_number, "t_star");
  row.m = parse_number<std::size_t>(f[2], line_number, "m");
  row.base = f[3];
  row.replicate = parse_number<std::size_t>(f[4], line_number, "replicate");
  row.seed = parse_number<std::uint64_t>(f[5], line_number, "seed");
  if (f[6] == "infeasible") {
    row.feasible = false;
    return row;
  }
  if (f[6] != "ok") throw DataError("line " + std::to_string(line_number) + ": bad status \"" + f[6] + "\"");
  auto& t = row.timings;
  t.graph_seconds = parse_number<double>(f[7], line_number, "graph_seconds");
  t.tc_seconds = parse_number<double>(f[8], line_number, "tc_seconds");
  t.prototype_seconds = parse_number<double>(f[9], line_number, "prototype_seconds");
  t.base_seconds = parse_number<double>(f[10], line_number, "base_seconds");
  t.back_out_seconds = parse_number<double>(f[11], line_number, "backout_seconds");
  t.total_seconds = parse_number<double>(f[12], line_number, "total_seconds");
  row.peak_memory_bytes = parse_number<std::int64_t>(f[13], line_number, "peak_memory_bytes");
  row.base_memory_bytes = parse_number<std::int64_t>(f[14], line_number, "base_memory_bytes");
  if (!f[15].empty()) row.accuracy = parse_number<double>(f[15], line_number, "accuracy");
  row.bss_tss = parse_number<double>(f[16], line_number, "bss_tss");
  row.prototype_count = parse_number<std::size_t>(f[17], line_number, "prototype_count");
  return row;
}

namespace {

// Loads complete rows from an interrupted run and truncates any partial
// trailing line so appends continue a well-formed file.
std::vector<BenchRow> recover_rows(const std::filesystem::path& path) {
  std::vector<BenchRow> rows;
  if (!std::filesystem::exists(path)) return rows;
  std::string content;
  {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    content = buf.str();
  }
  const auto last_newline = content.rfind('\n');
  content.resize(last_newline == std::string::npos ? 0 : last_newline + 1);
  std::istringstream lines(content);
  std::string line;
  std::size_t line_number = 0;
  bool header_ok = false;
  while (std::getline(lines, line)) {
    ++line_number;
    if (line_number == 1) {
      if (line != bench_csv_header()) throw DataError("cannot resume: " + path.string() + " has a different header");
      header_ok = true;
      continue;
    }
    rows.push_back(parse_bench_row(line, line_number));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!header_ok) content = bench_csv_header() + "\n";
  out << content;
  return rows;
}

}  // namespace

BenchReport bench_run(const BenchSpec& spec, std::ostream* progress) {
  spec.validate();
  BenchReport report;
  std::set<RowKey> done;
  std::ofstream out;
  if (!spec.output.empty()) {
    if (spec.resume) {
      report.rows = recover_rows(spec.output);
      for (const auto& row : report.rows) done.insert(key_of(row));
      out.open(spec.output, std::ios::binary | std::ios::app);
    } else {
      out.open(spec.output, std::ios::binary | std::ios::trunc);
      out << bench_csv_header() << '\n';
    }
    if (!out) throw DataError("cannot write " + spec.output.string());
  }

  std::optional<Dataset> file_data;
  std::vector<std::size_t> n_values = spec.n_values;
  if (spec.scenario == Scenario::csv_file) {
    Dataset loaded = load_csv(spec.csv_path);
    file_data = spec.standardize ? standardize(loaded) : std::move(loaded);
    n_values = {file_data->size()};
  }
  const std::size_t dims = file_data ? file_data->dims() : 2;
  for (std::size_t n : n_values) {
    const std::size_t need = estimate_bytes(spec, n, dims);
    if (need > spec.memory_budget_bytes) {
      throw ConfigError("estimated memory for n = " + std::to_string(n) + " is " + std::to_string(need >> 20) +
                        " MiB, over the budget of " + std::to_string(spec.memory_budget_bytes >> 20) + " MiB");
    }
  }

  const std::string base = std::string(base_name(spec.base));
  for (std::size_t n : n_values) {
    for (std::size_t r = 0; r < spec.replicates; ++r) {
      const std::uint64_t seed = replicate_seed(spec.seed_base, r);
      bool pending = false;
      for (std::size_t t : spec.t_star_values)
        for (std::size_t m : spec.m_values) pending |= !done.contains(RowKey{n, t, m, r});
      if (!pending) continue;

      std::optional<LabeledDataset> generated;
      if (!file_data) generated = generate_gaussian_mixture(GaussianMixtureSpec::benchmark(derive_seed(seed, 0)), n);
      const Dataset& data = file_data ? *file_data : generated->data;

      for (std::size_t t : spec.t_star_values) {
        for (std::size_t m : spec.m_values) {
          if (done.contains(RowKey{n, t, m, r})) continue;
          BenchRow row;
          row.n = n;
          row.t_star = t;
          row.m = m;
          row.base = base;
          row.replicate = r;
          row.seed = seed;

          IhtcConfig config;
          config.t_star = t;
          config.iterations = m;
          config.base = with_seed(spec.base, derive_seed(seed, 1));
          config.metric = spec.metric;
          config.center_rule = spec.center_rule;
          try {
            const IhtcResult result = ihtc_run(data, config);
            row.timings = result.timings;
            row.peak_memory_bytes = result.memory.allocator_tracked
                                        ? result.memory.peak_bytes
                                        : static_cast<std::int64_t>(result.memory.peak_rss_bytes);
            row.base_memory_bytes = result.memory.base_bytes;
            if (generated) row.accuracy = prediction_accuracy(result.clustering, generated->labels);
            row.bss_tss = bss_tss(data, result.clustering);
            row.prototype_count = result.prototype_count;
          } catch (const InfeasibleError& e) {
            row.feasible = false;
            if (progress) *progress << "infeasible: n=" << n << " t*=" << t << " m=" << m << ": " << e.what() << '\n';
          }
          if (spec.omit_measurements) {
            row.timings = {};
            row.peak_memory_bytes = 0;
            row.base_memory_bytes = 0;
          }
          if (out.is_open()) out << format_bench_row(row) << '\n' << std::flush;
          if (progress && row.feasible) {
            *progress << "n=" << n << " t*=" << t << " m=" << m << " rep=" << r << " total="
                      << fixed6(row.timings.total_seconds) << "s"
                      << (row.accuracy ? " accuracy=" + shortest(*row.accuracy) : "") << '\n';
          }
          report.rows.push_back(std::move(row));
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------- aggregate

namespace {

const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names{
      "total_seconds", "graph_seconds",  "tc_seconds", "prototype_seconds", "base_seconds", "backout_seconds",
      "peak_memory_mb", "base_memory_mb", "accuracy",  "bss_tss",           "prototype_count"};
  return names;
}

std::vector<std::optional<double>> measures_of(const BenchRow& row) {
  constexpr double mb = 1024.0 * 1024.0;
  const auto& t = row.timings;
  return {t.total_seconds,
          t.graph_seconds,
          t.tc_seconds,
          t.prototype_seconds,
          t.base_seconds,
          t.back_out_seconds,
          static_cast<double>(row.peak_memory_bytes) / mb,
          static_cast<double>(row.base_memory_bytes) / mb,
          row.accuracy,
          row.bss_tss,
          static_cast<double>(row.prototype_count)};
}

std::string cell(const std::optional<double>& v) { return v ? shortest(*v) : ""; }

}  // namespace

Aggregate bench_aggregate(const std::filesystem::path& report_csv) {
  std::ifstream in(report_csv);
  if (!in) throw DataError("cannot open " + report_csv.string());
  std::string line;
  std::size_t line_number = 0;
  using GroupKey = std::tuple<std::string, std::size_t, std::size_t, std::size_t>;  // base, t*, m, n
  std::map<GroupKey, std::vector<BenchRow>> groups;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_number == 1) {
      if (line != bench_csv_header()) throw DataError("line 1: not a bench report header");
      continue;
    }
    if (line.empty()) continue;
    BenchRow row = parse_bench_row(line, line_number);
    groups[GroupKey{row.base, row.t_star, row.m, row.n}].push_back(std::move(row));
  }
  if (line_number == 0) throw DataError(report_csv.string() + " is empty");

  Aggregate agg;
  agg.measures = measure_names();
  for (const auto& [key, rows] : groups) {
    AggregateRow out;
    out.base = std::get<0>(key);
    out.t_star = std::get<1>(key);
    out.m = std::get<2>(key);
    out.n = std::get<3>(key);
    out.replicates = rows.size();
    const std::size_t count = agg.measures.size();
    std::vector<std::vector<double>> values(count);
    for (const auto& row : rows) {
      if (!row.feasible) {
        ++out.infeasible;
        continue;
      }
      const auto ms = measures_of(row);
      for (std::size_t k = 0; k < count; ++k)
        if (ms[k]) values[k].push_back(*ms[k]);
    }
    for (std::size_t k = 0; k < count; ++k) {
      const auto& v = values[k];
      if (v.empty()) {
        out.mean.emplace_back();
        out.sd.emplace_back();
        continue;
      }
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(v.size());
      out.mean.emplace_back(mean);
      if (v.size() < 2) {
        out.sd.emplace_back();
        continue;
      }
      double ss = 0.0;
      for (double x : v) ss += (x - mean) * (x - mean);
      out.sd.emplace_back(std::sqrt(ss / static_cast<double>(v.size() - 1)));
    }
    agg.rows.push_back(std::move(out));
  }
  return agg;
}

void write_aggregate_csv(std::ostream& out, const Aggregate& agg) {
  out << "n,t_star,m,base,replicates,infeasible";
  for (const auto& m : agg.measures) out << ',' << m << "_mean," << m << "_sd";
  out << '\n';
  for (const auto& row : agg.rows) {
    out << row.n << ',' << row.t_star << ',' << row.m << ',' << row.base << ',' << row.replicates << ','
        << row.infeasible;
    for (std::size_t k = 0; k < agg.measures.size(); ++k) out << ',' << cell(row.mean[k]) << ',' << cell(row.sd[k]);
    out << '\n';
  }
}

void write_pivot_csv(std::ostream& out, const Aggregate& agg) {
  std::set<std::size_t> ns;
  std::set<std::tuple<std::string, std::size_t, std::size_t>> keys;
  std::map<std::tuple<std::string, std::size_t, std::size_t, std::size_t>, const AggregateRow*> lookup;
  for (const auto& row : agg.rows) {
    ns.insert(row.n);
    keys.insert({row.base, row.t_star, row.m});
    lookup[{row.base, row.t_star, row.m, row.n}] = &row;
  }
  out << "measure,base,t_star,m";
  for (std::size_t n : ns) out << ",n_" << n;
  out << '\n';
  for (std::size_t k = 0; k < agg.measures.size(); ++k) {
    for (const auto& [base, t, m] : keys) {
      out << agg.measures[k] << ',' << base << ',' << t << ',' << m;
      for (std::size_t n : ns) {
        out << ',';
        const auto it = lookup.find({base, t, m, n});
        if (it == lookup.end()) continue;
        const AggregateRow& row = *it->second;
        if (row.infeasible == row.replicates) out << "infeasible";
        else out << cell(row.mean[k]);
      }
      out << '\n';
    }
  }
}

}  // namespace ihtc
