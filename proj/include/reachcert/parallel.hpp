//---------------------------------------------------------------------------//
// Copyright 2026 reachcert developers.
// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
#pragma once

#include <cstddef>
#include <functional>

namespace reachcert {

/// Worker count: hardware concurrency, capped by REACHCERT_THREADS when set.
unsigned thread_count();

/*!
 * Runs body(i) for i in [0, count) on up to thread_count() threads.
 *
 * Tasks are claimed dynamically; callers write results into slot i so the
 * outcome never depends on scheduling. The first exception thrown by any
 * task is rethrown after all workers have stopped.
 */
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace reachcert
