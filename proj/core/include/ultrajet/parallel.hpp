#ifndef ULTRAJET_PARALLEL_HPP
#define ULTRAJET_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace ultrajet {

/// Number of worker threads used by parallel_for. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once; callers write
/// results into per-index slots and reduce sequentially, so results do not depend
/// on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ultrajet

#endif
