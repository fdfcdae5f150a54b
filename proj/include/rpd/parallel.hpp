// parallel.hpp: a minimal fork-join helper for embarrassingly parallel
// trial loops.  Workers share nothing; results land in caller-owned slots
// indexed by job id, so the outcome is independent of scheduling.
#pragma once

#include <functional>

namespace rpd {

/// Worker count for `jobs` independent jobs: min(jobs, hardware threads,
/// RIEMANN_PD_THREADS when that is set to a positive integer).  At least 1.
int worker_count(long long jobs);

/// Run fn(i) for every i in [0, n) on a worker pool (atomic work stealing).
/// Once a job throws, workers stop claiming new jobs; after the join the
/// exception from the lowest-index failed job is rethrown.  Nested calls
/// from inside a running job execute serially on the calling thread.
void parallel_for(long long n, const std::function<void(long long)>& fn);

}  // namespace rpd
