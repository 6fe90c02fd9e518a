#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace expo_surf::detail {

/// Runs fn(chunk) for chunk in [0, chunks) on up to `chunks` threads and
/// rethrows the first failure. Chunks are independent; callers reduce their
/// results in chunk order.
template <class Fn>
void run_chunks(std::size_t chunks, Fn&& fn) {
  if (chunks <= 1) {
    fn(std::size_t{0});
    return;
  }
  std::vector<std::exception_ptr> errors(chunks);
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    threads.emplace_back([&, c] {
      try {
        fn(c);
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

/// Size of chunk c when `total` items are split into `chunks` pieces.
inline std::size_t chunk_size(std::size_t total, std::size_t chunks, std::size_t c) {
  return total / chunks + (c < total % chunks ? 1 : 0);
}

}  // namespace expo_surf::detail
