#pragma once

#include <cstddef>
#include <functional>

namespace qsvm {

/// Worker count for circuit evaluation. Reads QSVM_LAB_THREADS; 0 or unset
/// means one worker per hardware thread.
std::size_t worker_count();

/// Overrides the environment setting (0 restores it). Used by the CLI and tests.
void set_worker_count(std::size_t workers);

/// Runs body(i) for i in [0, n). Each index is visited exactly once; bodies
/// must write only to disjoint outputs. Nested calls run serially on the
/// calling worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &body);

} // namespace qsvm
