#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace hgconc {

/// Splits trials [first, first + count) into `workers` contiguous blocks,
/// runs `body(trial, acc)` on each block with its own accumulator from
/// `make()`, then folds block results into the first in block order with
/// `merge(into, from)`. With integer-valued accumulators the result does not
/// depend on the worker count.
template <class Make, class Body, class Merge>
auto reduce_trials(std::uint64_t first, std::uint64_t count, unsigned workers, Make make,
                   Body body, Merge merge) {
  using Acc = decltype(make());
  workers = std::max(1u, workers);
  if (count < workers) workers = static_cast<unsigned>(std::max<std::uint64_t>(1, count));

  std::vector<Acc> partial;
  partial.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) partial.push_back(make());

  auto run_block = [&](unsigned w) {
    const std::uint64_t lo = first + count * w / workers;
    const std::uint64_t hi = first + count * (w + 1) / workers;
    for (std::uint64_t t = lo; t < hi; ++t) body(t, partial[w]);
  };

  if (workers == 1) {
    run_block(0);
  } else {
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          run_block(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  Acc result = std::move(partial[0]);
  for (unsigned w = 1; w < workers; ++w) merge(result, partial[w]);
  return result;
}

/// Per-trial results in trial order, computed in parallel.
template <class Fn>
auto map_trials(std::uint64_t first, std::uint64_t count, unsigned workers, Fn fn) {
  using T = decltype(fn(std::uint64_t{}));
  std::vector<T> out(count);
  reduce_trials(
      first, count, workers, [] { return 0; },
      [&](std::uint64_t t, int&) { out[t - first] = fn(t); }, [](int&, int) {});
  return out;
}

}  // namespace hgconc
