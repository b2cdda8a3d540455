#include "ihtc/knn_graph.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"
#include "ihtc/kd_tree.hpp"

namespace ihtc {

KnnGraph::KnnGraph(std::size_t k, std::vector<std::size_t> offsets, std::vector<Vertex> neighbors,
                   std::vector<double> weights)
    : k_(k), offsets_(std::move(offsets)), neighbors_(std::move(neighbors)), weights_(std::move(weights)) {
  if (offsets_.empty() || offsets_.back() != neighbors_.size() || weights_.size() != neighbors_.size())
    throw ConfigError("inconsistent CSR arrays for KnnGraph");
  for (double w : weights_) max_edge_weight_ = std::max(max_edge_weight_, w);
}

bool KnnGraph::adjacent(std::size_t i, std::size_t j) const {
  const auto row = neighbors(i);
  return std::binary_search(row.begin(), row.end(), static_cast<Vertex>(j));
}

void KnnGraph::write_edges(std::ostream& out) const {
  char buf[32];
  for (std::size_t i = 0; i < size(); ++i) {
    const auto row = neighbors(i);
    const auto w = weights(i);
    for (std::size_t e = 0; e < row.size(); ++e) {
      if (row[e] <= i) continue;
      const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, w[e]);
      out << i << ' ' << row[e] << ' ';
      out.write(buf, ptr - buf);
      out << '\n';
    }
  }
}

namespace {

void check_k(const Dataset& data, std::size_t k) {
  if (k < 1 || k >= data.size()) {
    throw ConfigError("k must satisfy 1 <= k < n (k = " + std::to_string(k) +
                      ", n = " + std::to_string(data.size()) + ")");
  }
  if (data.size() > std::numeric_limits<Vertex>::max()) throw ConfigError("too many units for KnnGraph");
}

unsigned resolve_threads(unsigned threads, std::size_t work) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(work / 1024, 1)));
}

// Runs body(begin, end) over [0, n) split into contiguous chunks.
template <typename Body>
void parallel_ranges(std::size_t n, unsigned threads, Body body) {
  if (threads <= 1) {
    body(std::size_t{0}, n);
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([=] { body(begin, end); });
  }
}

// Directed k-nearest lists, row i holds k entries sorted by (key, index).
struct DirectedTable {
  std::size_t n;
  std::size_t k;
  std::vector<Vertex> index;
  std::vector<double> key;
};

KnnGraph symmetrize(const DirectedTable& table, Metric metric) {
  const std::size_t n = table.n, k = table.k;
  std::vector<std::size_t> offsets(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i + 1] += k;
    for (std::size_t e = 0; e < k; ++e) offsets[table.index[i * k + e] + 1] += 1;
  }
  for (std::size_t i = 0; i < n; ++i) offsets[i + 1] += offsets[i];

  struct Entry {
    Vertex to;
    double weight;
  };
  std::vector<Entry> entries(offsets.back());
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = 0; e < k; ++e) {
      const Vertex j = table.index[i * k + e];
      const double w = metric.from_rank_key(table.key[i * k + e]);
      entries[cursor[i]++] = {j, w};
      entries[cursor[j]++] = {static_cast<Vertex>(i), w};
    }
  }

  std::vector<std::size_t> out_offsets(n + 1, 0);
  std::vector<Vertex> neighbors;
  std::vector<double> weights;
  neighbors.reserve(entries.size());
  weights.reserve(entries.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto first = entries.begin() + static_cast<std::ptrdiff_t>(offsets[i]);
    auto last = entries.begin() + static_cast<std::ptrdiff_t>(offsets[i + 1]);
    std::sort(first, last, [](const Entry& a, const Entry& b) { return a.to < b.to; });
    for (auto it = first; it != last; ++it) {
      if (neighbors.size() > out_offsets[i] && neighbors.back() == it->to) continue;
      neighbors.push_back(it->to);
      weights.push_back(it->weight);
    }
    out_offsets[i + 1] = neighbors.size();
  }
  neighbors.shrink_to_fit();
  weights.shrink_to_fit();
  return KnnGraph(k, std::move(out_offsets), std::move(neighbors), std::move(weights));
}

}  // namespace

KnnGraph build_knn_bruteforce(const Dataset& data, std::size_t k, Metric metric, unsigned threads) {
  check_k(data, k);
  const std::size_t n = data.size();
  DirectedTable table{n, k, std::vector<Vertex>(n * k), std::vector<double>(n * k)};
  parallel_ranges(n, resolve_threads(threads, n), [&](std::size_t begin, std::size_t end) {
    std::vector<Neighbor> cand;
    cand.reserve(n - 1);
    for (std::size_t i = begin; i < end; ++i) {
      cand.clear();
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) cand.push_back({metric.rank_key(data.row(i), data.row(j)), static_cast<Vertex>(j)});
      std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
      for (std::size_t e = 0; e < k; ++e) {
        table.index[i * k + e] = cand[e].index;
        table.key[i * k + e] = cand[e].key;
      }
    }
  });
  return symmetrize(table, metric);
}

KnnGraph build_knn_tree(const Dataset& data, std::size_t k, Metric metric, const KnnOptions& options) {
  check_k(data, k);
  if (metric.kind() != MetricKind::euclidean)
    throw ConfigError("the kd-tree builder supports the euclidean metric only");
  if (data.dims() > options.tree_max_dims) return build_knn_bruteforce(data, k, metric, options.threads);

  const std::size_t n = data.size();
  const KdTree tree(data);
  const auto order = tree.order();
  DirectedTable table{n, k, std::vector<Vertex>(n * k), std::vector<double>(n * k)};
  parallel_ranges(n, resolve_threads(options.threads, n), [&](std::size_t begin, std::size_t end) {
    std::vector<Neighbor> found;
    for (std::size_t s = begin; s < end; ++s) {
      const std::size_t i = order[s];
      tree.nearest(i, k, found);
      for (std::size_t e = 0; e < k; ++e) {
        table.index[i * k + e] = found[e].index;
        table.key[i * k + e] = found[e].key;
      }
    }
  });
  return symmetrize(table, metric);
}

KnnGraph build_knn_graph(const Dataset& data, std::size_t k, Metric metric, const KnnOptions& options) {
  switch (options.method) {
    case KnnMethod::brute_force:
      return build_knn_bruteforce(data, k, metric, options.threads);
    case KnnMethod::kd_tree:
      return build_knn_tree(data, k, metric, options);
    case KnnMethod::automatic:
      break;
  }
  if (metric.kind() == MetricKind::euclidean && data.dims() <= options.tree_max_dims)
    return build_knn_tree(data, k, metric, options);
  return build_knn_bruteforce(data, k, metric, options.threads);
}

bool within_walk_two(const KnnGraph& graph, std::size_t i, std::size_t j) {
  if (i == j) return true;
  const auto a = graph.neighbors(i);
  const auto b = graph.neighbors(j);
  if (std::binary_search(a.begin(), a.end(), static_cast<Vertex>(j))) return true;
  auto x = a.begin();
  auto y = b.begin();
  while (x != a.end() && y != b.end()) {
    if (*x == *y) return true;
    if (*x < *y) ++x;
    else ++y;
  }
  return false;
}

}  // namespace ihtc
