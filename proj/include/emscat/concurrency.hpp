#ifndef EMSCAT_CONCURRENCY_HPP
#define EMSCAT_CONCURRENCY_HPP

#include <cstddef>
#include <functional>

namespace emscat {

/// Global worker count for data-parallel loops. 0 means "use hardware
/// concurrency". Results never depend on this value: workers only ever
/// write disjoint output slots and every reduction runs in index order.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs fn(i) for i in [0, n) on a static partition of the index range.
/// fn must not touch shared mutable state outside its own slot i.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace emscat

#endif
