#include "ihtc/kd_tree.hpp"

#include <algorithm>
#include <limits>

#include "ihtc/dataset.hpp"
#include "ihtc/error.hpp"
#include "ihtc/metric.hpp"

namespace ihtc {

namespace {

// Lower bounds are compared with a little slack so that rounding in the
// bound never prunes a point that ties the current worst candidate.
constexpr double kPruneSlack = 1.0 - 1e-9;

struct SearchState {
  std::span<const double> query;
  std::vector<double> offsets;
};

double bound_from(const std::vector<double>& off) {
  double s = 0.0;
  for (double o : off) s += o * o;
  return s;
}

}  // namespace

KdTree::KdTree(const Dataset& data, std::size_t leaf_size)
    : dims_(data.dims()), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  const std::size_t n = data.size();
  if (n > std::numeric_limits<std::uint32_t>::max() - 1) throw ConfigError("kd-tree: too many points");
  index_.resize(n);
  for (std::size_t i = 0; i < n; ++i) index_[i] = static_cast<std::uint32_t>(i);
  // Build on the caller's layout, then copy into tree order.
  points_.assign(data.values().begin(), data.values().end());
  nodes_.reserve(2 * n / leaf_size_ + 1);
  build(0, static_cast<std::uint32_t>(n));

  std::vector<double> ordered(n * dims_);
  slot_.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::copy_n(points_.data() + index_[s] * dims_, dims_, ordered.data() + s * dims_);
    slot_[index_[s]] = static_cast<std::uint32_t>(s);
  }
  points_ = std::move(ordered);
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size_) return id;

  // Widest dimension over the range; points_ is still in input order here.
  std::uint32_t best_dim = 0;
  double best_spread = -1.0;
  for (std::uint32_t dim = 0; dim < dims_; ++dim) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::uint32_t s = begin; s < end; ++s) {
      const double v = points_[index_[s] * dims_ + dim];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = dim;
    }
  }
  if (best_spread <= 0.0) return id;  // all points identical

  const std::uint32_t mid = begin + (end - begin) / 2;
  const double* pts = points_.data();
  const std::size_t d = dims_;
  std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     const double va = pts[a * d + best_dim], vb = pts[b * d + best_dim];
                     return va < vb || (va == vb && a < b);
                   });
  const double split = pts[index_[mid] * d + best_dim];
  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.left = left;
  node.right = right;
  node.dim = best_dim;
  node.split = split;
  return id;
}

void KdTree::nearest(std::size_t query, std::size_t k, std::vector<Neighbor>& out) const {
  out.clear();
  if (k == 0) return;
  const auto q = point(slot_[query]);
  const auto self = static_cast<std::uint32_t>(query);
  thread_local std::vector<double> off;
  off.assign(dims_, 0.0);
  constexpr double inf = std::numeric_limits<double>::infinity();

  auto worst = [&] { return out.size() < k ? inf : out.front().key; };

  auto visit = [&](auto&& self_ref, std::int32_t node_id, double bound) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s) {
        const std::uint32_t unit = index_[s];
        if (unit == self) continue;
        const Neighbor cand{squared_euclidean(q, point(s)), unit};
        if (out.size() < k) {
          out.push_back(cand);
          std::push_heap(out.begin(), out.end());
        } else if (cand < out.front()) {
          std::pop_heap(out.begin(), out.end());
          out.back() = cand;
          std::push_heap(out.begin(), out.end());
        }
      }
      return;
    }
    const double diff = q[node.dim] - node.split;
    const std::int32_t near_child = diff < 0 ? node.left : node.right;
    const std::int32_t far_child = diff < 0 ? node.right : node.left;
    self_ref(self_ref, near_child, bound);

    const double saved = off[node.dim];
    const double far_bound = bound - saved * saved + diff * diff;
    if (far_bound * kPruneSlack <= worst()) {
      off[node.dim] = diff;
      self_ref(self_ref, far_child, far_bound);
      off[node.dim] = saved;
    }
  };
  visit(visit, 0, 0.0);
  std::sort_heap(out.begin(), out.end());
}

void KdTree::within_radius(std::span<const double> q, double radius,
                           std::vector<std::size_t>& out) const {
  out.clear();
  if (index_.empty()) return;
  const double r2 = radius * radius;
  std::vector<double> off(dims_, 0.0);

  auto visit = [&](auto&& self_ref, std::int32_t node_id) -> void {
    const Node& node = nodes_[static_cast<std::size_t>(node_id)];
    if (node.left < 0) {
      for (std::uint32_t s = node.begin; s < node.end; ++s)
        if (std::sqrt(squared_euclidean(q, point(s))) <= radius) out.push_back(index_[s]);
      return;
    }
    const double diff = q[node.dim] - node.split;
    const std::int32_t near_child = diff < 0 ? node.left : node.right;
    const std::int32_t far_child = diff < 0 ? node.right : node.left;
    self_ref(self_ref, near_child);
    const double saved = off[node.dim];
    off[node.dim] = diff;
    if (bound_from(off) * kPruneSlack <= r2) self_ref(self_ref, far_child);
    off[node.dim] = saved;
  };
  visit(visit, 0);
  std::sort(out.begin(), out.end());
}

}  // namespace ihtc
