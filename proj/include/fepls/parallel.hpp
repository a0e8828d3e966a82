#pragma once

#include <cstddef>
#include <functional>

namespace fepls {

// Name of the environment variable selecting the worker-pool size.
inline constexpr const char* kThreadsEnvVar = "FEPLS_NUM_THREADS";

// Worker count: the environment variable when set to a positive integer,
// otherwise the available hardware parallelism.
std::size_t worker_count();

// Calls body(i) for i in [0, n) on up to worker_count() threads. Each index
// runs exactly once; the first exception thrown is rethrown after all
// workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace fepls
