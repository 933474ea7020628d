#pragma once

#include <cstdint>

namespace extpow::par {

// Number of worker threads the parallel kernels may use.  Controlled by the
// EXTPOW_THREADS environment variable (values < 1 mean "all available").
int max_threads();

// Force a thread count programmatically; overrides the environment.
void set_max_threads(int n);

// True when the library was built with OpenMP and more than one thread is
// currently allowed.
bool parallel_enabled();

}  // namespace extpow::par
