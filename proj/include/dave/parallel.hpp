#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace dave {

inline unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

// out[i] = fn(in[i]), computed by up to `jobs` workers. Output order follows
// input order regardless of scheduling.
template <class In, class Fn>
auto parallel_map(const std::vector<In>& in, Fn fn, unsigned jobs = default_jobs()) {
  using Out = decltype(fn(in.front()));
  std::vector<Out> out(in.size());
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(in.size())));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = fn(in[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < in.size();) {
          try {
            out[i] = fn(in[i]);
          } catch (...) {
            std::lock_guard lk(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace dave
