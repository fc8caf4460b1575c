#pragma once

#include <functional>

namespace pf {

// Number of element workers: PHASEFIELD_THREADS caps hardware concurrency;
// unset or invalid means 1 (serial).
int worker_count();

// Runs body(i) for i in [0, n). With more than one worker the index range is
// chunked across threads; results must be written to per-index slots so that
// any final reduction happens in fixed index order.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace pf
