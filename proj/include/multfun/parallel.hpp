#pragma once

#include <cstddef>
#include <functional>

namespace multfun {

/// Worker cap for internal loops; 0 restores the hardware default.
void set_thread_limit(unsigned n);
unsigned thread_limit();

/// Runs body(i) for i in [0, count). Callers write results by index, so the
/// outcome does not depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace multfun
