// Copyright 2026 The synthforge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace synthforge {

/// Runs fn(i) for every i in [0, n) on up to `workers` threads. Each index
/// runs exactly once; results must go to disjoint destinations. If any call
/// throws, the exception from the lowest failing index is rethrown after all
/// workers stop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Worker count from SYNTHFORGE_WORKERS, or `fallback` when unset or invalid.
int workers_from_env(int fallback);

}  // namespace synthforge
