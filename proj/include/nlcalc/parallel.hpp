#ifndef NLCALC_PARALLEL_HPP
#define NLCALC_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace nlcalc {

/// Number of worker threads: hardware concurrency, capped by the
/// NLCALC_THREADS environment variable when set.
std::size_t thread_cap();

/// Runs fn(i) for i in [0, n). Indices are partitioned over threads;
/// callers write results by index, so the merge order is deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace nlcalc

#endif
