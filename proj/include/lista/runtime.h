// Copyright 2026 The LISTA Design Space Authors.
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

#ifndef LISTA_RUNTIME_H_
#define LISTA_RUNTIME_H_

#include <cstddef>
#include <functional>

namespace lista {

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index runs
/// exactly once; callers write results into slot i to keep input order.
/// The first exception thrown by fn is rethrown after all workers join.
void parallel_for(std::size_t n, int workers,
                  const std::function<void(std::size_t)>& fn);

/// Raises glibc's mmap and trim thresholds so the large temporaries of
/// batched training are recycled instead of mapped and unmapped per step.
/// No-op on other C libraries.
void tune_allocator();

}  // namespace lista

#endif  // LISTA_RUNTIME_H_
