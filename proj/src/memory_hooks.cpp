// Replaces the global allocation functions so ihtc::memory can report heap
// high-water marks. Linked only into executables.
#include <malloc.h>

#include <cstdlib>
#include <new>

#include "ihtc/memory.hpp"

namespace {

void* tracked_alloc(std::size_t size) {
  void* p = std::malloc(size ? size : 1);
  if (p) ihtc::memory::detail::on_allocate(malloc_usable_size(p));
  return p;
}

void tracked_free(void* p) noexcept {
  if (!p) return;
  ihtc::memory::detail::on_release(malloc_usable_size(p));
  std::free(p);
}

const bool installed = (ihtc::memory::detail::mark_tracking_enabled(), true);

}  // namespace

void* operator new(std::size_t size) {
  if (void* p = tracked_alloc(size)) return p;
  throw std::bad_alloc();
}
void* operator new[](std::size_t size) {
  if (void* p = tracked_alloc(size)) return p;
  throw std::bad_alloc();
}
void* operator new(std::size_t size, const std::nothrow_t&) noexcept { return tracked_alloc(size); }
void* operator new[](std::size_t size, const std::nothrow_t&) noexcept { return tracked_alloc(size); }
void operator delete(void* p) noexcept { tracked_free(p); }
void operator delete[](void* p) noexcept { tracked_free(p); }
void operator delete(void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete[](void* p, std::size_t) noexcept { tracked_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { tracked_free(p); }
