// Independent reference implementations used to check the library. Written
// for clarity over speed; none of them share code with src/.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "ihtc/ihtc.hpp"

namespace oracle {

using Points = std::vector<std::vector<double>>;

inline double dist(const std::vector<double>& a, const std::vector<double>& b, bool manhattan = false) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double t = a[k] - b[k];
    s += manhattan ? std::abs(t) : t * t;
  }
  return manhattan ? s : std::sqrt(s);
}

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

inline Points rows_of(const ihtc::Dataset& data) {
  Points p(data.size(), std::vector<double>(data.dims()));
  for (std::size_t i = 0; i < data.size(); ++i)
    for (std::size_t j = 0; j < data.dims(); ++j) p[i][j] = data(i, j);
  return p;
}

// Uniform points in [0, scale)^d. With `snap` > 0 coordinates are rounded to
// multiples of 1/snap, which produces duplicates and distance ties.
inline ihtc::Dataset random_points(std::mt19937_64& rng, std::size_t n, std::size_t d, double scale = 10.0,
                                   int snap = 0) {
  std::uniform_real_distribution<double> u(0.0, scale);
  Points p(n, std::vector<double>(d));
  for (auto& row : p)
    for (auto& v : row) {
      v = u(rng);
      if (snap > 0) v = std::round(v * snap) / snap;
    }
  return ihtc::Dataset::from_rows(p);
}

// Undirected edge set of the symmetric k-NN graph. Neighbors ranked by
// (squared or manhattan distance, index) via a full sort.
inline std::set<std::pair<std::size_t, std::size_t>> knn_edges(const ihtc::Dataset& data, std::size_t k,
                                                              bool manhattan = false) {
  const Points p = rows_of(data);
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (j != i) all.emplace_back(manhattan ? dist(p[i], p[j], true) : sq_dist(p[i], p[j]), j);
    std::sort(all.begin(), all.end());
    for (std::size_t e = 0; e < k; ++e) edges.insert(std::minmax(i, all[e].second));
  }
  return edges;
}

inline std::set<std::pair<std::size_t, std::size_t>> graph_edges(const ihtc::KnnGraph& g) {
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (auto j : g.neighbors(i)) edges.insert(std::minmax<std::size_t>(i, j));
  return edges;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

// DBSCAN from exhaustive range queries. Core points are united when within
// epsilon; clusters are numbered by their smallest core unit; a border unit
// joins the cluster of the smallest-index core unit that reaches it first in
// the ascending scan, which is the lowest numbered cluster among its cores.
inline std::vector<int> dbscan(const ihtc::Dataset& data, double eps, std::size_t min_pts, bool manhattan = false) {
  const Points p = rows_of(data);
  const std::size_t n = p.size();
  std::vector<std::vector<std::size_t>> nb(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dist(p[i], p[j], manhattan) <= eps) nb[i].push_back(j);
  std::vector<bool> core(n);
  for (std::size_t i = 0; i < n; ++i) core[i] = nb[i].size() >= min_pts;
  UnionFind uf(n);
  for (std::size_t i = 0; i < n; ++i)
    if (core[i])
      for (auto j : nb[i])
        if (core[j]) uf.unite(i, j);
  std::vector<int> root_label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (core[i] && root_label[uf.find(i)] < 0) root_label[uf.find(i)] = next++;
  std::vector<int> labels(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      labels[i] = root_label[uf.find(i)];
      continue;
    }
    int best = -1;
    for (auto j : nb[i])
      if (core[j]) {
        const int c = root_label[uf.find(j)];
        if (best < 0 || c < best) best = c;
      }
    labels[i] = best;
  }
  return labels;
}

// Prim's algorithm on the complete graph; returns edge weights ascending.
inline std::vector<double> mst_weights(const ihtc::Dataset& data, bool manhattan = false) {
  const Points p = rows_of(data);
  const std::size_t n = p.size();
  std::vector<bool> in(n, false);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<double> out;
  best[0] = 0.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v] && (u == n || best[v] < best[u])) u = v;
    in[u] = true;
    if (step > 0) out.push_back(best[u]);
    for (std::size_t v = 0; v < n; ++v)
      if (!in[v]) best[v] = std::min(best[v], dist(p[u], p[v], manhattan));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Best agreement over all injective maps from predicted clusters to truth
// labels (noise never agrees).
inline double accuracy_by_permutation(std::span<const int> predicted, std::span<const int> truth) {
  int kp = 0, kt = 0;
  for (int v : predicted) kp = std::max(kp, v + 1);
  for (int v : truth) kt = std::max(kt, v + 1);
  const int slots = std::max(kp, kt);
  std::vector<int> perm(static_cast<std::size_t>(slots));
  std::iota(perm.begin(), perm.end(), 0);
  std::size_t best = 0;
  do {
    std::size_t hit = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i)
      if (predicted[i] >= 0 && perm[static_cast<std::size_t>(predicted[i])] == truth[i]) ++hit;
    best = std::max(best, hit);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(predicted.size());
}

struct Sums {
  double bss = 0.0, wcss = 0.0, tss = 0.0;
};

// Sums of squares over non-noise units, computed in long double.
inline Sums sums_of_squares(const ihtc::Dataset& data, std::span<const int> labels) {
  const std::size_t d = data.dims();
  int k = 0;
  for (int v : labels) k = std::max(k, v + 1);
  std::vector<long double> global(d, 0), counts(static_cast<std::size_t>(k), 0);
  std::vector<std::vector<long double>> centers(static_cast<std::size_t>(k), std::vector<long double>(d, 0));
  long double m = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (labels[i] < 0) continue;
    m += 1;
    counts[static_cast<std::size_t>(labels[i])] += 1;
    for (std::size_t j = 0; j < d; ++j) {
      global[j] += data(i, j);
      centers[static_cast<std::size_t>(labels[i])][j] += data(i, j);
    }
  }
  for (auto& g : global) g /= m;
  for (std::size_t c = 0; c < centers.size(); ++c)
    for (auto& v : centers[c]) v /= counts[c];
  long double bss = 0, wcss = 0, tss = 0;
  for (std::size_t c = 0; c < centers.size(); ++c)
    for (std::size_t j = 0; j < d; ++j) bss += counts[c] * (centers[c][j] - global[j]) * (centers[c][j] - global[j]);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (labels[i] < 0) continue;
    for (std::size_t j = 0; j < d; ++j) {
      const long double x = data(i, j);
      tss += (x - global[j]) * (x - global[j]);
      const long double c = centers[static_cast<std::size_t>(labels[i])][j];
      wcss += (x - c) * (x - c);
    }
  }
  return {static_cast<double>(bss), static_cast<double>(wcss), static_cast<double>(tss)};
}

// True when some walk of length <= 2 joins i and j in the edge set.
inline bool walk_two(const std::set<std::pair<std::size_t, std::size_t>>& edges, std::size_t n, std::size_t i,
                     std::size_t j) {
  if (i == j || edges.contains(std::minmax(i, j))) return true;
  for (std::size_t v = 0; v < n; ++v)
    if (edges.contains(std::minmax(i, v)) && edges.contains(std::minmax(v, j))) return true;
  return false;
}

inline std::vector<int> as_int(std::span<const ihtc::Label> labels) { return {labels.begin(), labels.end()}; }

}  // namespace oracle
