#pragma once

#include <cstddef>
#include <functional>

namespace fracspec {

/// Process-wide execution mode. In serial mode every loop runs on the calling
/// thread. Parallel mode only splits work into independent items whose results
/// do not depend on scheduling; reductions always run serially, so both modes
/// produce identical numbers.
void set_serial(bool serial);
bool serial_mode();

/// Calls body(i) for i in [0, count), possibly on several threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fracspec
