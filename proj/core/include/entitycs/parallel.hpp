#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace entitycs {

// Applies fn to every element of items. Results land at the element's input
// index, so output order never depends on scheduling. Workers pull indices
// from a shared counter; fn must be a pure function of its input.
template <typename In, typename Out, typename Fn>
std::vector<Out> parallel_map(const std::vector<In>& items, Fn fn,
                              unsigned threads) {
  std::vector<Out> out(items.size());
  if (threads <= 1 || items.size() < 2) {
    for (size_t i = 0; i < items.size(); ++i) out[i] = fn(items[i]);
    return out;
  }
  if (threads > items.size()) threads = static_cast<unsigned>(items.size());
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= items.size()) break;
        out[i] = fn(items[i]);
      }
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace entitycs
