#pragma once

#include <cstddef>
#include <cstdint>

namespace ihtc::memory {

// Heap accounting is live only when the ihtc_alloc_tracking object library
// is linked into the executable (it replaces global operator new/delete).
bool allocator_tracking_enabled();
std::int64_t current_bytes();
std::int64_t peak_bytes();
// Lower the recorded peak to the current level.
void reset_peak();
void raise_peak_to(std::int64_t bytes);

// Peak resident set size of the process as reported by the OS.
std::size_t peak_rss_bytes();

namespace detail {
void on_allocate(std::size_t bytes);
void on_release(std::size_t bytes);
void mark_tracking_enabled();
}  // namespace detail

// Measures the heap high-water above the level at construction. Scopes may
// nest; the outer one still sees peaks reached inside the inner one.
class HighWater {
 public:
  HighWater();
  std::int64_t bytes() const;
  ~HighWater();
  HighWater(const HighWater&) = delete;
  HighWater& operator=(const HighWater&) = delete;

 private:
  std::int64_t baseline_;
  std::int64_t outer_peak_;
};

}  // namespace ihtc::memory
