/*
 * (C) Copyright 2026 The fairbot Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstddef>
#include <functional>

namespace fairbot {

/// Number of workers for a requested job count; 0 means hardware concurrency.
unsigned resolve_jobs(unsigned requested);

/// Calls fn(i) for every i in [0, count) on up to `jobs` threads. Work items
/// must write only to their own output slots. The first exception thrown by
/// any item is rethrown after all workers stop.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)> & fn);

}  // namespace fairbot
