#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ihtc/ihtc.hpp"

namespace {

using ihtc::Dataset;
using json = nlohmann::json;

struct InputOptions {
  std::string path;
  bool no_header = false;
  std::vector<std::string> columns;
  bool standardize = false;
  std::size_t pca = 0;
  // "standardize-first" or "pca-first"
  std::string order = "standardize-first";
  std::string metric = "euclidean";

  void attach(CLI::App* cmd) {
    cmd->add_option("--input", path, "CSV file of numeric columns")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--no-header", no_header, "first line is data");
    cmd->add_option("--columns", columns, "columns to keep, by name or 0-based index")->delimiter(',');
    cmd->add_flag("--standardize", standardize, "z-score each column");
    cmd->add_option("--pca", pca, "project onto this many principal components");
    cmd->add_option("--order", order, "standardize-first or pca-first")
        ->check(CLI::IsMember({"standardize-first", "pca-first"}));
    cmd->add_option("--metric", metric)->check(CLI::IsMember({"euclidean", "manhattan"}));
  }

  Dataset load() const {
    ihtc::CsvOptions csv;
    csv.has_header = !no_header;
    if (!columns.empty()) csv.columns = columns;
    Dataset data = ihtc::load_csv(path, csv);
    const auto apply_pca = [&] {
      if (pca > 0) data = ihtc::pca_project(data, pca);
    };
    const auto apply_std = [&] {
      if (standardize) data = ihtc::standardize(data);
    };
    if (order == "pca-first") {
      apply_pca();
      apply_std();
    } else {
      apply_std();
      apply_pca();
    }
    return data;
  }
};

struct BaseOptions {
  std::string base = "kmeans";
  std::size_t k = 3;
  std::string linkage = "ward";
  double eps = 1.0;
  std::size_t min_pts = 5;
  std::string kmeans_init = "random";
  std::uint64_t seed = 1;
  std::size_t max_iterations = 100;
  std::size_t hac_max_units = ihtc::kDefaultHacMaxUnits;

  void attach(CLI::App* cmd) {
    cmd->add_option("--base", base)->check(CLI::IsMember({"kmeans", "hac", "dbscan"}));
    cmd->add_option("--k", k, "number of clusters for kmeans or the hac cut");
    cmd->add_option("--linkage", linkage)->check(CLI::IsMember({"single", "complete", "average", "ward"}));
    cmd->add_option("--eps", eps, "dbscan radius");
    cmd->add_option("--min-pts", min_pts, "dbscan core threshold, point included");
    cmd->add_option("--kmeans-init", kmeans_init)->check(CLI::IsMember({"random", "kmeans++"}));
    cmd->add_option("--seed", seed);
    cmd->add_option("--max-iterations", max_iterations, "Lloyd iteration cap");
    cmd->add_option("--hac-max-units", hac_max_units);
  }

  ihtc::BaseClusterer make() const {
    if (base == "hac") return ihtc::HacConfig{ihtc::parse_linkage(linkage), k, hac_max_units};
    if (base == "dbscan") return ihtc::DbscanConfig{eps, min_pts};
    ihtc::KMeansConfig km;
    km.k = k;
    km.seed = seed;
    km.max_iterations = max_iterations;
    km.init = kmeans_init == "kmeans++" ? ihtc::KMeansInit::kmeans_plus_plus : ihtc::KMeansInit::random_units;
    return km;
  }
};

void write_labels(const std::string& path, const ihtc::Clustering& c) {
  std::ofstream out(path);
  if (!out) throw ihtc::DataError("cannot write " + path);
  out << "unit_index,cluster_id\n";
  for (std::size_t i = 0; i < c.size(); ++i) out << i << ',' << c.label(i) << '\n';
}

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    const auto value = std::stoull(item, &used);
    if (used != item.size()) throw ihtc::ConfigError("bad list entry \"" + item + "\"");
    out.push_back(static_cast<T>(value));
  }
  if (out.empty()) throw ihtc::ConfigError("empty list \"" + text + "\"");
  return out;
}

json timings_json(const ihtc::PhaseTimings& t) {
  return {{"graph", t.graph_seconds},   {"tc", t.tc_seconds},
          {"prototype", t.prototype_seconds}, {"base", t.base_seconds},
          {"back_out", t.back_out_seconds}, {"total", t.total_seconds}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold clustering, instance selection and hybrid clustering"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "sample the three-component benchmark mixture");
  std::size_t gen_n = 10000;
  std::uint64_t gen_seed = 1;
  std::string gen_out, gen_labels;
  gen->add_option("--n", gen_n)->required();
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out)->required();
  gen->add_option("--labels", gen_labels, "write true component labels");

  // knn
  auto* knn = app.add_subcommand("knn", "build the symmetric nearest-neighbors graph");
  InputOptions knn_in;
  knn_in.attach(knn);
  std::size_t knn_k = 1;
  std::string knn_method = "auto", knn_out;
  knn->add_option("--k", knn_k)->required();
  knn->add_option("--method", knn_method)->check(CLI::IsMember({"auto", "tree", "brute"}));
  knn->add_option("--out", knn_out, "edge list i j w")->required();

  // tc
  auto* tc = app.add_subcommand("tc", "threshold clustering");
  InputOptions tc_in;
  tc_in.attach(tc);
  std::size_t tc_t = 2;
  std::string tc_out;
  tc->add_option("--t-star", tc_t)->required();
  tc->add_option("--out", tc_out)->required();

  // itis
  auto* itis = app.add_subcommand("itis", "iterated threshold instance selection");
  InputOptions itis_in;
  itis_in.attach(itis);
  std::size_t itis_t = 2;
  std::optional<std::size_t> itis_m;
  std::optional<double> itis_alpha;
  std::string itis_center = "centroid", itis_prefix = "proto";
  itis->add_option("--t-star", itis_t)->required();
  auto* m_opt = itis->add_option("--iterations", itis_m);
  auto* a_opt = itis->add_option("--alpha", itis_alpha);
  m_opt->excludes(a_opt);
  itis->add_option("--center", itis_center)->check(CLI::IsMember({"centroid", "medoid"}));
  itis->add_option("--out-prefix", itis_prefix);

  // ihtc
  auto* run = app.add_subcommand("ihtc", "instance selection, base clustering and back-out");
  InputOptions run_in;
  run_in.attach(run);
  BaseOptions run_base;
  run_base.attach(run);
  std::size_t run_t = 2, run_m = 1;
  std::string run_center = "centroid", run_out, run_report;
  run->add_option("--t-star", run_t);
  run->add_option("--iterations", run_m);
  run->add_option("--center", run_center)->check(CLI::IsMember({"centroid", "medoid"}));
  run->add_option("--out", run_out)->required();
  run->add_option("--report", run_report);

  // elbow
  auto* elbow = app.add_subcommand("elbow", "k-means WCSS over a range of k");
  InputOptions elbow_in;
  elbow_in.attach(elbow);
  BaseOptions elbow_base;
  elbow_base.attach(elbow);
  std::size_t k_min = 1, k_max = 8;
  elbow->add_option("--k-min", k_min);
  elbow->add_option("--k-max", k_max);

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark grid over n, t*, m and replicates");
  BaseOptions bench_base;
  bench_base.attach(bench);
  std::string scenario = "gaussian", bench_csv, bench_n = "10000", bench_t = "2", bench_m = "0,1", bench_out;
  std::string bench_center = "centroid", bench_metric = "euclidean";
  std::size_t replicates = 50;
  std::uint64_t seed_base = 1;
  bool bench_resume = false, bench_std = false, omit = false, quiet = false;
  double budget_gib = 8.0;
  bench->add_option("--scenario", scenario)->check(CLI::IsMember({"gaussian", "csv"}));
  bench->add_option("--input", bench_csv, "CSV for the csv scenario");
  bench->add_flag("--standardize", bench_std);
  bench->add_option("--n", bench_n, "comma-separated sizes");
  bench->add_option("--t-star", bench_t, "comma-separated thresholds");
  bench->add_option("--m", bench_m, "comma-separated iteration counts");
  bench->add_option("--replicates", replicates);
  bench->add_option("--seed-base", seed_base);
  bench->add_option("--metric", bench_metric)->check(CLI::IsMember({"euclidean", "manhattan"}));
  bench->add_option("--center", bench_center)->check(CLI::IsMember({"centroid", "medoid"}));
  bench->add_option("--out", bench_out)->required();
  bench->add_flag("--resume", bench_resume, "keep rows already in --out and run the rest");
  bench->add_flag("--omit-measurements", omit, "zero timing and memory columns");
  bench->add_option("--memory-budget-gib", budget_gib);
  bench->add_flag("--quiet", quiet);

  // aggregate
  auto* agg = app.add_subcommand("aggregate", "mean and sd per configuration");
  std::string agg_in, agg_out, agg_pivot;
  agg->add_option("--input", agg_in)->required()->check(CLI::ExistingFile);
  agg->add_option("--out", agg_out, "aggregate CSV (stdout when omitted)");
  agg->add_option("--pivot", agg_pivot, "pivoted CSV, m rows by n columns");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      const auto sample = ihtc::generate_gaussian_mixture(ihtc::GaussianMixtureSpec::benchmark(gen_seed), gen_n);
      ihtc::write_csv(gen_out, sample.data);
      if (!gen_labels.empty()) {
        std::ofstream out(gen_labels);
        out << "unit_index,component\n";
        for (std::size_t i = 0; i < sample.labels.size(); ++i) out << i << ',' << sample.labels[i] << '\n';
      }
    } else if (*knn) {
      const Dataset data = knn_in.load();
      ihtc::KnnOptions opt;
      opt.method = knn_method == "tree"    ? ihtc::KnnMethod::kd_tree
                   : knn_method == "brute" ? ihtc::KnnMethod::brute_force
                                           : ihtc::KnnMethod::automatic;
      const auto graph = ihtc::build_knn_graph(data, knn_k, ihtc::Metric::parse(knn_in.metric), opt);
      std::ofstream out(knn_out);
      graph.write_edges(out);
    } else if (*tc) {
      const Dataset data = tc_in.load();
      const auto result = ihtc::threshold_cluster(data, tc_t, ihtc::Metric::parse(tc_in.metric));
      write_labels(tc_out, result.clustering);
      std::cout << "clusters " << result.clustering.num_clusters() << ", smallest "
                << result.clustering.min_cluster_size() << ", largest graph edge " << result.graph_max_edge
                << '\n';
    } else if (*itis) {
      if (!itis_m && !itis_alpha) throw ihtc::ConfigError("itis needs --iterations or --alpha");
      const Dataset data = itis_in.load();
      ihtc::ItisStop stop = itis_m ? ihtc::ItisStop{ihtc::Iterations{*itis_m}}
                                   : ihtc::ItisStop{ihtc::ReductionFactor{*itis_alpha}};
      const auto rule = itis_center == "medoid" ? ihtc::CenterRule::medoid : ihtc::CenterRule::centroid;
      const auto h = ihtc::itis_run(data, itis_t, stop, ihtc::Metric::parse(itis_in.metric), rule);
      for (std::size_t l = 1; l <= h.num_levels(); ++l) {
        const std::string stem = itis_prefix + "_level" + std::to_string(l);
        ihtc::write_csv(stem + ".csv", h.prototypes(l));
        std::ofstream parents(stem + "_parents.csv");
        parents << "child_index,parent_index\n";
        const auto map = h.parent_map(l);
        for (std::size_t i = 0; i < map.size(); ++i) parents << i << ',' << map[i] << '\n';
        std::cout << "level " << l << ": " << h.level_size(l) << " prototypes\n";
      }
      if (h.early_terminated())
        std::cerr << "warning: stopped early, fewer than " << itis_t << " prototypes would remain\n";
    } else if (*run) {
      const Dataset data = run_in.load();
      ihtc::IhtcConfig config;
      config.t_star = run_t;
      config.iterations = run_m;
      config.base = run_base.make();
      config.metric = ihtc::Metric::parse(run_in.metric);
      config.center_rule = run_center == "medoid" ? ihtc::CenterRule::medoid : ihtc::CenterRule::centroid;
      const auto result = ihtc::ihtc_run(data, config);
      write_labels(run_out, result.clustering);
      const auto ss = ihtc::sum_of_squares(data, result.clustering);
      std::cout << "clusters " << result.clustering.num_clusters() << ", prototypes " << result.prototype_count
                << ", bss/tss " << ss.ratio() << ", total " << result.timings.total_seconds << " s\n";
      if (!run_report.empty()) {
        json levels = json::array();
        for (std::size_t l = 0; l <= result.hierarchy.num_levels(); ++l) levels.push_back(result.hierarchy.level_size(l));
        json report = {
            {"n", data.size()},
            {"d", data.dims()},
            {"t_star", run_t},
            {"iterations", run_m},
            {"base", std::string(ihtc::base_name(config.base))},
            {"prototype_count", result.prototype_count},
            {"prototypes_per_level", levels},
            {"num_clusters", result.clustering.num_clusters()},
            {"noise_count", result.clustering.noise_count()},
            {"bss", ss.bss},
            {"wcss", ss.wcss},
            {"tss", ss.tss},
            {"bss_tss", ss.ratio()},
            {"timings_seconds", timings_json(result.timings)},
            {"memory",
             {{"peak_bytes", result.memory.peak_bytes},
              {"base_bytes", result.memory.base_bytes},
              {"peak_rss_bytes", result.memory.peak_rss_bytes},
              {"allocator_tracked", result.memory.allocator_tracked}}},
        };
        std::ofstream out(run_report);
        out << report.dump(2) << '\n';
      }
    } else if (*elbow) {
      const Dataset data = elbow_in.load();
      const auto base = elbow_base.make();
      const auto* km = std::get_if<ihtc::KMeansConfig>(&base);
      if (!km) throw ihtc::ConfigError("elbow uses the kmeans base");
      const auto wcss = ihtc::elbow_scan(data, k_min, k_max, *km);
      std::cout << "k,wcss\n";
      for (std::size_t i = 0; i < wcss.size(); ++i) std::cout << k_min + i << ',' << wcss[i] << '\n';
    } else if (*bench) {
      ihtc::BenchSpec spec;
      spec.scenario = scenario == "csv" ? ihtc::Scenario::csv_file : ihtc::Scenario::gaussian_mixture;
      spec.csv_path = bench_csv;
      spec.standardize = bench_std;
      spec.n_values = parse_list<std::size_t>(bench_n);
      spec.t_star_values = parse_list<std::size_t>(bench_t);
      spec.m_values = parse_list<std::size_t>(bench_m);
      spec.base = bench_base.make();
      spec.metric = ihtc::Metric::parse(bench_metric);
      spec.center_rule = bench_center == "medoid" ? ihtc::CenterRule::medoid : ihtc::CenterRule::centroid;
      spec.replicates = replicates;
      spec.seed_base = seed_base;
      spec.output = bench_out;
      spec.resume = bench_resume;
      spec.omit_measurements = omit;
      spec.memory_budget_bytes = static_cast<std::size_t>(budget_gib * 1024.0 * 1024.0 * 1024.0);
      ihtc::bench_run(spec, quiet ? nullptr : &std::cerr);
    } else if (*agg) {
      const auto aggregate = ihtc::bench_aggregate(agg_in);
      if (agg_out.empty()) {
        ihtc::write_aggregate_csv(std::cout, aggregate);
      } else {
        std::ofstream out(agg_out);
        ihtc::write_aggregate_csv(out, aggregate);
      }
      if (!agg_pivot.empty()) {
        std::ofstream out(agg_pivot);
        ihtc::write_pivot_csv(out, aggregate);
      }
    }
  } catch (const ihtc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
