#pragma once

#include <cstddef>
#include <functional>

namespace gepsvm::detail {

/// Runs fn(0..count-1), strided across at most `jobs` threads. Results must be
/// written to per-index slots by the caller; the first exception in index
/// order is rethrown after all workers join, so parallel runs behave exactly
/// like serial ones.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace gepsvm::detail
