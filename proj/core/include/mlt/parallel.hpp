// Copyright 2026 the mlt authors
// Licensed under the Apache License, Version 2.0 (see LICENSE file)

#pragma once

#include <cstddef>
#include <functional>

namespace mlt {

/// Effective worker count: the MLT_THREADS environment variable when set to a
/// positive integer, otherwise std::thread::hardware_concurrency().
std::size_t worker_count();

/// Runs body(i) for i in [0, n). Work is split into contiguous index blocks
/// across worker_count() threads. Each index must write only to its own
/// output slot; results are then independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace mlt
