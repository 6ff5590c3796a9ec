// Copyright 2026 The Somno Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOMNO_PARALLEL_H_
#define SOMNO_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace somno {

// Number of hardware threads, at least 1.
int hardware_workers();

// Runs body(i) for i in [0, n) on up to `workers` threads. Work is pulled
// from a shared counter, so callers must make each index write disjoint
// output. The first exception thrown by any body is rethrown.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace somno

#endif  // SOMNO_PARALLEL_H_
