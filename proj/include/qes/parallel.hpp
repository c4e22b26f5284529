#ifndef QES_PARALLEL_HPP
#define QES_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace qes {

// Caps the worker pool used by parallel_for. 0 means hardware concurrency.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs body(i) for i in [0, n). Each index must write only its own output
// slot; results are then independent of the schedule. The first exception
// thrown by any body is rethrown on the calling thread.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace qes

#endif
