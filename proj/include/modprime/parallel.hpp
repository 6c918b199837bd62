#pragma once

#include <cstddef>
#include <functional>

namespace modprime {

// Caps the worker count used by parallel_for. 0 restores the hardware default.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs task(i) for i in [0, n_tasks). Tasks must write only to slots owned by
// their index; callers reduce the slots afterwards in a fixed order, so results
// never depend on the worker count.
void parallel_for(std::size_t n_tasks, const std::function<void(std::size_t)>& task);

}  // namespace modprime
