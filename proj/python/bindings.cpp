#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>

#include "ihtc/ihtc.hpp"

namespace py = pybind11;
using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using LabelArray = py::array_t<ihtc::Label>;

namespace {

ihtc::Dataset to_dataset(const Array& x) {
  if (x.ndim() == 1) {
    const auto n = static_cast<std::size_t>(x.shape(0));
    return ihtc::Dataset(n, 1, std::vector<double>(x.data(), x.data() + n));
  }
  if (x.ndim() != 2) throw ihtc::ConfigError("expected a 1-D or 2-D array");
  const auto n = static_cast<std::size_t>(x.shape(0)), d = static_cast<std::size_t>(x.shape(1));
  return ihtc::Dataset(n, d, std::vector<double>(x.data(), x.data() + n * d));
}

Array to_array(const ihtc::Dataset& d) {
  Array out({d.size(), d.dims()});
  std::copy(d.values().begin(), d.values().end(), out.mutable_data());
  return out;
}

LabelArray labels_of(const ihtc::Clustering& c) {
  LabelArray out(static_cast<py::ssize_t>(c.size()));
  std::copy(c.labels().begin(), c.labels().end(), out.mutable_data());
  return out;
}

ihtc::Clustering clustering_of(const py::array_t<ihtc::Label, py::array::c_style | py::array::forcecast>& labels) {
  return ihtc::Clustering(std::vector<ihtc::Label>(labels.data(), labels.data() + labels.size()));
}

ihtc::CenterRule center_rule(const std::string& name) {
  if (name == "centroid") return ihtc::CenterRule::centroid;
  if (name == "medoid") return ihtc::CenterRule::medoid;
  throw ihtc::ConfigError("center must be centroid or medoid");
}

ihtc::KMeansConfig kmeans_config(std::size_t k, std::uint64_t seed, const std::string& init, std::size_t max_iter) {
  ihtc::KMeansConfig cfg;
  cfg.k = k;
  cfg.seed = seed;
  cfg.max_iterations = max_iter;
  if (init == "kmeans++") cfg.init = ihtc::KMeansInit::kmeans_plus_plus;
  else if (init != "random") throw ihtc::ConfigError("init must be random or kmeans++");
  return cfg;
}

py::dict timings_dict(const ihtc::PhaseTimings& t) {
  py::dict d;
  d["graph"] = t.graph_seconds;
  d["tc"] = t.tc_seconds;
  d["prototype"] = t.prototype_seconds;
  d["base"] = t.base_seconds;
  d["back_out"] = t.back_out_seconds;
  d["total"] = t.total_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Threshold clustering, instance selection and hybrid clustering";

  auto base_error = py::register_exception<ihtc::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ihtc::ConfigError>(m, "ConfigError", base_error.ptr());
  py::register_exception<ihtc::DataError>(m, "DataError", base_error.ptr());
  py::register_exception<ihtc::InfeasibleError>(m, "InfeasibleError", base_error.ptr());

  m.def("generate_gaussian_mixture", [](std::size_t n, std::uint64_t seed) {
        const auto s = ihtc::generate_gaussian_mixture(ihtc::GaussianMixtureSpec::benchmark(seed), n);
        py::array_t<int> labels(static_cast<py::ssize_t>(n));
        std::copy(s.labels.begin(), s.labels.end(), labels.mutable_data());
        return py::make_tuple(to_array(s.data), labels);
      }, py::arg("n"), py::arg("seed") = 1);

  m.def("standardize", [](const Array& x) { return to_array(ihtc::standardize(to_dataset(x))); }, py::arg("x"));
  m.def("pca_project", [](const Array& x, std::size_t q) { return to_array(ihtc::pca_project(to_dataset(x), q)); },
        py::arg("x"), py::arg("num_components"));

  m.def("dissimilarity", [](const Array& x, std::size_t i, std::size_t j, const std::string& metric) {
        return ihtc::dissimilarity(to_dataset(x), i, j, ihtc::Metric::parse(metric));
      }, py::arg("x"), py::arg("i"), py::arg("j"), py::arg("metric") = "euclidean");

  m.def("knn_graph", [](const Array& x, std::size_t k, const std::string& metric, const std::string& method) {
        ihtc::KnnOptions opt;
        if (method == "tree") opt.method = ihtc::KnnMethod::kd_tree;
        else if (method == "brute") opt.method = ihtc::KnnMethod::brute_force;
        else if (method != "auto") throw ihtc::ConfigError("method must be auto, tree or brute");
        const auto g = ihtc::build_knn_graph(to_dataset(x), k, ihtc::Metric::parse(metric), opt);
        py::list adjacency;
        for (std::size_t v = 0; v < g.size(); ++v) {
          const auto nb = g.neighbors(v);
          adjacency.append(std::vector<ihtc::Vertex>(nb.begin(), nb.end()));
        }
        return py::make_tuple(adjacency, g.max_edge_weight());
      }, py::arg("x"), py::arg("k"), py::arg("metric") = "euclidean", py::arg("method") = "auto");

  m.def("threshold_cluster", [](const Array& x, std::size_t t_star, const std::string& metric) {
        const auto r = ihtc::threshold_cluster(to_dataset(x), t_star, ihtc::Metric::parse(metric));
        return py::make_tuple(labels_of(r.clustering), r.seeds, r.graph_max_edge);
      }, py::arg("x"), py::arg("t_star"), py::arg("metric") = "euclidean");

  m.def("btpp_bruteforce", [](const Array& x, std::size_t t_star, const std::string& metric) {
        const auto r = ihtc::btpp_bruteforce(to_dataset(x), t_star, ihtc::Metric::parse(metric));
        return py::make_tuple(labels_of(r.clustering), r.lambda);
      }, py::arg("x"), py::arg("t_star"), py::arg("metric") = "euclidean");

  m.def("max_within_cluster_dissimilarity", [](const Array& x, const LabelArray& labels, const std::string& metric) {
        return ihtc::max_within_cluster_dissimilarity(to_dataset(x), clustering_of(labels), ihtc::Metric::parse(metric));
      }, py::arg("x"), py::arg("labels"), py::arg("metric") = "euclidean");

  m.def("itis", [](const Array& x, std::size_t t_star, std::optional<std::size_t> iterations,
                   std::optional<double> alpha, const std::string& center, const std::string& metric) {
        if (iterations.has_value() == alpha.has_value()) throw ihtc::ConfigError("pass exactly one of iterations or alpha");
        const ihtc::ItisStop stop = iterations ? ihtc::ItisStop{ihtc::Iterations{*iterations}}
                                               : ihtc::ItisStop{ihtc::ReductionFactor{*alpha}};
        const auto h = ihtc::itis_run(to_dataset(x), t_star, stop, ihtc::Metric::parse(metric), center_rule(center));
        py::list levels;
        for (std::size_t l = 1; l <= h.num_levels(); ++l) {
          const auto map = h.parent_map(l);
          levels.append(py::make_tuple(to_array(h.prototypes(l)), std::vector<std::size_t>(map.begin(), map.end())));
        }
        py::dict out;
        out["levels"] = levels;
        out["top_ancestors"] = h.top_ancestors();
        out["early_terminated"] = h.early_terminated();
        return out;
      }, py::arg("x"), py::arg("t_star"), py::arg("iterations") = py::none(), py::arg("alpha") = py::none(),
      py::arg("center") = "centroid", py::arg("metric") = "euclidean");

  m.def("kmeans", [](const Array& x, std::size_t k, std::uint64_t seed, const std::string& init, std::size_t max_iter) {
        const auto data = to_dataset(x);
        const auto r = ihtc::kmeans(data, kmeans_config(k, seed, init, max_iter));
        Array centers({k, data.dims()});
        std::copy(r.centers.begin(), r.centers.end(), centers.mutable_data());
        py::dict out;
        out["labels"] = labels_of(r.clustering);
        out["centers"] = centers;
        out["wcss"] = r.wcss;
        out["iterations"] = r.iterations;
        out["converged"] = r.converged;
        out["wcss_history"] = r.wcss_history;
        return out;
      }, py::arg("x"), py::arg("k"), py::arg("seed") = 1, py::arg("init") = "random", py::arg("max_iterations") = 100);

  m.def("hac", [](const Array& x, const std::string& linkage, const std::string& metric) {
        const auto d = ihtc::hac(to_dataset(x), ihtc::parse_linkage(linkage), ihtc::Metric::parse(metric));
        Array merges({d.merges.size(), std::size_t{4}});
        double* p = merges.mutable_data();
        for (const auto& mg : d.merges) {
          *p++ = static_cast<double>(mg.cluster_a);
          *p++ = static_cast<double>(mg.cluster_b);
          *p++ = mg.height;
          *p++ = static_cast<double>(mg.size);
        }
        return merges;
      }, py::arg("x"), py::arg("linkage") = "ward", py::arg("metric") = "euclidean");

  m.def("hac_labels", [](const Array& x, std::size_t k, const std::string& linkage, const std::string& metric) {
        const auto d = ihtc::hac(to_dataset(x), ihtc::parse_linkage(linkage), ihtc::Metric::parse(metric));
        return labels_of(ihtc::cut_dendrogram(d, k));
      }, py::arg("x"), py::arg("k"), py::arg("linkage") = "ward", py::arg("metric") = "euclidean");

  m.def("dbscan", [](const Array& x, double eps, std::size_t min_pts, const std::string& metric) {
        return labels_of(ihtc::dbscan(to_dataset(x), ihtc::DbscanConfig{eps, min_pts}, ihtc::Metric::parse(metric)));
      }, py::arg("x"), py::arg("eps"), py::arg("min_pts"), py::arg("metric") = "euclidean");

  m.def("ihtc", [](const Array& x, std::size_t t_star, std::size_t iterations, const std::string& base, std::size_t k,
                   std::uint64_t seed, const std::string& init, const std::string& linkage, double eps,
                   std::size_t min_pts, const std::string& center, const std::string& metric) {
        ihtc::IhtcConfig cfg;
        cfg.t_star = t_star;
        cfg.iterations = iterations;
        cfg.metric = ihtc::Metric::parse(metric);
        cfg.center_rule = center_rule(center);
        if (base == "kmeans") cfg.base = kmeans_config(k, seed, init, 100);
        else if (base == "hac") cfg.base = ihtc::HacConfig{ihtc::parse_linkage(linkage), k};
        else if (base == "dbscan") cfg.base = ihtc::DbscanConfig{eps, min_pts};
        else throw ihtc::ConfigError("base must be kmeans, hac or dbscan");
        const auto r = ihtc::ihtc_run(to_dataset(x), cfg);
        py::dict out;
        out["labels"] = labels_of(r.clustering);
        out["prototype_count"] = r.prototype_count;
        std::vector<std::size_t> sizes;
        for (std::size_t l = 0; l <= r.hierarchy.num_levels(); ++l) sizes.push_back(r.hierarchy.level_size(l));
        out["level_sizes"] = sizes;
        out["timings"] = timings_dict(r.timings);
        out["peak_bytes"] = r.memory.peak_bytes;
        out["base_bytes"] = r.memory.base_bytes;
        return out;
      }, py::arg("x"), py::arg("t_star") = 2, py::arg("iterations") = 1, py::arg("base") = "kmeans", py::arg("k") = 3,
      py::arg("seed") = 1, py::arg("init") = "random", py::arg("linkage") = "ward", py::arg("eps") = 1.0,
      py::arg("min_pts") = 5, py::arg("center") = "centroid", py::arg("metric") = "euclidean");

  m.def("prediction_accuracy", [](const LabelArray& predicted, const py::array_t<int, py::array::c_style | py::array::forcecast>& truth) {
        return ihtc::prediction_accuracy(clustering_of(predicted), std::span<const int>(truth.data(), truth.size()));
      }, py::arg("predicted"), py::arg("truth"));

  m.def("sum_of_squares", [](const Array& x, const LabelArray& labels) {
        const auto s = ihtc::sum_of_squares(to_dataset(x), clustering_of(labels));
        py::dict out;
        out["bss"] = s.bss;
        out["wcss"] = s.wcss;
        out["tss"] = s.tss;
        out["ratio"] = s.ratio();
        return out;
      }, py::arg("x"), py::arg("labels"));

  m.def("bss_tss", [](const Array& x, const LabelArray& labels) {
        return ihtc::bss_tss(to_dataset(x), clustering_of(labels));
      }, py::arg("x"), py::arg("labels"));
}
