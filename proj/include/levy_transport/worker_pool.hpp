#pragma once

#include <functional>

namespace levy_transport {

// Worker count resolution: explicit request > LEVY_TRANSPORT_WORKERS
// environment variable > hardware concurrency.
int resolve_worker_count(int requested);

// Runs fn(block) for block = 0..n_blocks-1 on a pool of workers. Blocks are
// claimed dynamically; callers that need determinism must make block results
// independent of execution order (e.g. write into a per-block slot and merge
// in index order afterwards).
void parallel_blocks(long n_blocks, int workers, const std::function<void(long)>& fn);

}  // namespace levy_transport
