#include "ihtc/clusterers.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"
#include "ihtc/kd_tree.hpp"
#include "ihtc/random.hpp"

namespace ihtc {

// ======================================================================== k-means

void KMeansConfig::validate() const {
  if (k < 1) throw ConfigError("k-means needs k >= 1");
  if (max_iterations < 1) throw ConfigError("k-means needs max_iterations >= 1");
  if (!(tolerance >= 0.0)) throw ConfigError("k-means tolerance must be non-negative");
}

namespace {

std::vector<std::size_t> random_distinct_units(std::size_t n, std::size_t k, Engine& rng) {
  // Floyd's sampling: k draws, no O(n) scratch.
  std::unordered_set<std::size_t> chosen;
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t j = n - k; j < n; ++j) {
    const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
    const std::size_t pick = chosen.insert(t).second ? t : j;
    if (pick == j) chosen.insert(j);
    out.push_back(pick);
  }
  return out;
}

std::vector<std::size_t> kmeans_plus_plus_units(const Dataset& data, std::size_t k, Engine& rng) {
  const std::size_t n = data.size();
  std::vector<std::size_t> out{std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)};
  std::vector<double> d2(n);
  for (std::size_t i = 0; i < n; ++i) d2[i] = squared_euclidean(data.row(i), data.row(out[0]));
  while (out.size() < k) {
    const double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    std::size_t pick = 0;
    if (total > 0.0) {
      double u = std::uniform_real_distribution<double>(0.0, total)(rng);
      pick = n - 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        if (u < d2[i]) {
          pick = i;
          break;
        }
        u -= d2[i];
      }
      while (d2[pick] <= 0.0) --pick;  // guard against rounding at the tail
    } else {
      // Every point coincides with a chosen center; take the first unused unit.
      std::vector<std::uint8_t> used(n, 0);
      for (std::size_t c : out) used[c] = 1;
      while (used[pick]) ++pick;
    }
    out.push_back(pick);
    for (std::size_t i = 0; i < n; ++i)
      d2[i] = std::min(d2[i], squared_euclidean(data.row(i), data.row(pick)));
  }
  return out;
}

}  // namespace

KMeansResult kmeans(const Dataset& data, const KMeansConfig& config) {
  config.validate();
  const std::size_t n = data.size();
  const std::size_t d = data.dims();
  const std::size_t k = config.k;
  if (k > n) throw ConfigError("k-means needs k <= n (k = " + std::to_string(k) + ", n = " + std::to_string(n) + ")");

  Engine rng = make_engine(config.seed, 0);
  const auto init = config.init == KMeansInit::random_units ? random_distinct_units(n, k, rng)
                                                            : kmeans_plus_plus_units(data, k, rng);
  std::vector<double> centers(k * d);
  for (std::size_t c = 0; c < k; ++c) std::copy_n(data.row(init[c]).data(), d, centers.data() + c * d);

  const double* x = data.values().data();
  std::vector<Label> labels(n, 0);
  std::vector<double> best_d2(n);
  std::vector<std::size_t> counts(k);
  std::vector<double> sums(k * d);
  KMeansResult result;

  for (std::size_t iter = 1; iter <= config.max_iterations; ++iter) {
    // Assignment.
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const double* xi = x + i * d;
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t c = 0; c < k; ++c) {
        const double* cc = centers.data() + c * d;
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          const double diff = xi[j] - cc[j];
          s += diff * diff;
        }
        if (s < best) {
          best = s;
          arg = c;
        }
      }
      labels[i] = static_cast<Label>(arg);
      best_d2[i] = best;
      ++counts[arg];
    }

    // Empty clusters take the unit farthest from its center, drawn from a
    // cluster that can spare one.
    for (std::size_t e = 0; e < k; ++e) {
      if (counts[e] != 0) continue;
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[static_cast<std::size_t>(labels[i])] < 2) continue;
        if (far == n || best_d2[i] > best_d2[far]) far = i;
      }
      --counts[static_cast<std::size_t>(labels[far])];
      labels[far] = static_cast<Label>(e);
      counts[e] = 1;
      best_d2[far] = 0.0;
      std::copy_n(x + far * d, d, centers.data() + e * d);
    }

    // Update.
    std::fill(sums.begin(), sums.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      double* s = sums.data() + static_cast<std::size_t>(labels[i]) * d;
      for (std::size_t j = 0; j < d; ++j) s[j] += x[i * d + j];
    }
    double movement = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      double shift = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double updated = sums[c * d + j] / static_cast<double>(counts[c]);
        const double diff = updated - centers[c * d + j];
        shift += diff * diff;
        centers[c * d + j] = updated;
      }
      movement = std::max(movement, std::sqrt(shift));
    }

    double wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      wcss += squared_euclidean(data.row(i), {centers.data() + static_cast<std::size_t>(labels[i]) * d, d});
    if (!result.wcss_history.empty() && wcss > result.wcss_history.back() * (1.0 + 1e-12)) {
      throw std::logic_error("k-means: WCSS increased from " + std::to_string(result.wcss_history.back()) +
                             " to " + std::to_string(wcss));
    }
    result.wcss_history.push_back(wcss);
    result.iterations = iter;
    if (movement <= config.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.wcss = result.wcss_history.back();
  result.centers = std::move(centers);
  result.clustering = Clustering(std::move(labels));
  return result;
}

// ======================================================================== HAC

Linkage parse_linkage(std::string_view name) {
  if (name == "single") return Linkage::single;
  if (name == "complete") return Linkage::complete;
  if (name == "average") return Linkage::average;
  if (name == "ward") return Linkage::ward;
  throw ConfigError("unknown linkage \"" + std::string(name) + "\" (expected single|complete|average|ward)");
}

std::string_view linkage_name(Linkage linkage) {
  switch (linkage) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    case Linkage::average: return "average";
    case Linkage::ward: return "ward";
  }
  return "?";
}

Dendrogram hac(const Dataset& data, Linkage linkage, Metric metric, std::size_t max_units) {
  const std::size_t n = data.size();
  if (n < 2) throw ConfigError("HAC needs at least two units");
  if (n > max_units) {
    throw InfeasibleError("HAC on " + std::to_string(n) + " units exceeds the cap of " +
                          std::to_string(max_units) + "; reduce the data with ITIS first");
  }
  const bool ward = linkage == Linkage::ward;
  if (ward && metric.kind() != MetricKind::euclidean) throw ConfigError("ward linkage needs the euclidean metric");

  auto at = [n](std::size_t i, std::size_t j) {  // i < j
    return i * n - i * (i + 1) / 2 + (j - i - 1);
  };
  std::vector<double> dist(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[at(i, j)] = ward ? squared_euclidean(data.row(i), data.row(j)) : metric(data.row(i), data.row(j));
  auto D = [&](std::size_t i, std::size_t j) -> double& { return i < j ? dist[at(i, j)] : dist[at(j, i)]; };

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<std::uint8_t> active(n, 1);
  std::vector<std::size_t> size(n, 1), id(n), nn(n, none);
  std::vector<double> nnd(n, inf);
  std::iota(id.begin(), id.end(), std::size_t{0});

  // Nearest active neighbor among higher slots; a slot is the smallest unit
  // index in its cluster.
  auto refresh = [&](std::size_t i) {
    nn[i] = none;
    nnd[i] = inf;
    for (std::size_t j = i + 1; j < n; ++j)
      if (active[j] && dist[at(i, j)] < nnd[i]) {
        nnd[i] = dist[at(i, j)];
        nn[i] = j;
      }
  };
  for (std::size_t i = 0; i + 1 < n; ++i) refresh(i);

  Dendrogram out{n, linkage, {}};
  out.merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t a = none;
    for (std::size_t i = 0; i < n; ++i)
      if (active[i] && nn[i] != none && (a == none || nnd[i] < nnd[a])) a = i;
    const std::size_t b = nn[a];
    const double dab = nnd[a];
    const double na = static_cast<double>(size[a]), nb = static_cast<double>(size[b]);
    out.merges.push_back(Merge{std::min(id[a], id[b]), std::max(id[a], id[b]),
                               ward ? std::sqrt(dab) : dab, size[a] + size[b]});

    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double dak = D(a, k), dbk = D(b, k);
      double updated = 0.0;
      switch (linkage) {
        case Linkage::single: updated = std::min(dak, dbk); break;
        case Linkage::complete: updated = std::max(dak, dbk); break;
        case Linkage::average: updated = (na * dak + nb * dbk) / (na + nb); break;
        case Linkage::ward: {
          const double nk = static_cast<double>(size[k]);
          updated = ((na + nk) * dak + (nb + nk) * dbk - nk * dab) / (na + nb + nk);
          break;
        }
      }
      D(a, k) = updated;
    }
    active[b] = 0;
    size[a] += size[b];
    id[a] = n + step;

    for (std::size_t k = 0; k < b; ++k) {
      if (!active[k] || k == a) continue;
      if (nn[k] == a || nn[k] == b) {
        refresh(k);
      } else if (k < a && (D(k, a) < nnd[k] || (D(k, a) == nnd[k] && a < nn[k]))) {
        nn[k] = a;
        nnd[k] = D(k, a);
      }
    }
    refresh(a);
  }
  return out;
}

Clustering cut_dendrogram(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n = dendrogram.num_units;
  if (k < 1 || k > n) throw ConfigError("cut_dendrogram needs 1 <= k <= n");
  if (dendrogram.merges.size() + 1 != n) throw ConfigError("dendrogram is incomplete");
  std::vector<std::size_t> parent(n), rep(2 * n - 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(n), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t s = 0; s + k < n; ++s) {
    const auto& m = dendrogram.merges[s];
    const std::size_t ra = find(rep[m.cluster_a]), rb = find(rep[m.cluster_b]);
    parent[std::max(ra, rb)] = std::min(ra, rb);
    rep[n + s] = std::min(ra, rb);
  }
  std::vector<Label> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<Label>(find(i));
  return Clustering::canonical(labels);
}

// ======================================================================== DBSCAN

void DbscanConfig::validate() const {
  if (!(epsilon > 0.0)) throw ConfigError("DBSCAN epsilon must be positive");
  if (min_pts < 1) throw ConfigError("DBSCAN min_pts must be at least 1");
}

Clustering dbscan(const Dataset& data, const DbscanConfig& config, Metric metric) {
  config.validate();
  const std::size_t n = data.size();
  std::unique_ptr<KdTree> tree;
  if (metric.kind() == MetricKind::euclidean) tree = std::make_unique<KdTree>(data);

  auto region = [&](std::size_t i, std::vector<std::size_t>& out) {
    if (tree) {
      tree->within_radius(data.row(i), config.epsilon, out);
      return;
    }
    out.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (metric(data.row(i), data.row(j)) <= config.epsilon) out.push_back(j);
  };

  constexpr Label unvisited = -2;
  std::vector<Label> labels(n, unvisited);
  std::vector<std::size_t> neighborhood;
  std::deque<std::size_t> frontier;
  Label cluster = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] != unvisited) continue;
    region(i, neighborhood);
    if (neighborhood.size() < config.min_pts) {
      labels[i] = kNoise;
      continue;
    }
    labels[i] = cluster;
    frontier.assign(neighborhood.begin(), neighborhood.end());
    while (!frontier.empty()) {
      const std::size_t q = frontier.front();
      frontier.pop_front();
      if (labels[q] == kNoise) labels[q] = cluster;  // border point
      if (labels[q] != unvisited) continue;
      labels[q] = cluster;
      region(q, neighborhood);
      if (neighborhood.size() >= config.min_pts) {
        for (std::size_t r : neighborhood)
          if (labels[r] == unvisited || labels[r] == kNoise) frontier.push_back(r);
      }
    }
    ++cluster;
  }
  return Clustering(std::move(labels));
}

}  // namespace ihtc
