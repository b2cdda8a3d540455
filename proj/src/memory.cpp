#include "ihtc/memory.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <atomic>

namespace ihtc::memory {

namespace {
std::atomic<std::int64_t> g_current{0};
std::atomic<std::int64_t> g_peak{0};
std::atomic<bool> g_enabled{false};
}  // namespace

namespace detail {

void on_allocate(std::size_t bytes) {
  const auto now = g_current.fetch_add(static_cast<std::int64_t>(bytes), std::memory_order_relaxed) +
                   static_cast<std::int64_t>(bytes);
  auto peak = g_peak.load(std::memory_order_relaxed);
  while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
  }
}

void on_release(std::size_t bytes) {
  g_current.fetch_sub(static_cast<std::int64_t>(bytes), std::memory_order_relaxed);
}

void mark_tracking_enabled() { g_enabled.store(true); }

}  // namespace detail

bool allocator_tracking_enabled() { return g_enabled.load(); }
std::int64_t current_bytes() { return g_current.load(std::memory_order_relaxed); }
std::int64_t peak_bytes() { return g_peak.load(std::memory_order_relaxed); }
void reset_peak() { g_peak.store(g_current.load(std::memory_order_relaxed), std::memory_order_relaxed); }

void raise_peak_to(std::int64_t bytes) {
  auto peak = g_peak.load(std::memory_order_relaxed);
  while (bytes > peak && !g_peak.compare_exchange_weak(peak, bytes, std::memory_order_relaxed)) {
  }
}

std::size_t peak_rss_bytes() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0) return 0;
  return static_cast<std::size_t>(usage.ru_maxrss) * 1024;  // Linux reports KiB
}

HighWater::HighWater() : baseline_(current_bytes()), outer_peak_(peak_bytes()) { reset_peak(); }

std::int64_t HighWater::bytes() const { return std::max<std::int64_t>(peak_bytes() - baseline_, 0); }

HighWater::~HighWater() { raise_peak_to(outer_peak_); }

}  // namespace ihtc::memory
