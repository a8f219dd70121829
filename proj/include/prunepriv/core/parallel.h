//
// Copyright 2026 The prunepriv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef PRUNEPRIV_CORE_PARALLEL_H_
#define PRUNEPRIV_CORE_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace prunepriv {

// Runs task(i) for i in [0, count) on up to `jobs` threads (jobs <= 1 runs
// inline). Tasks must write only to their own output slot; the first
// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& task);

}  // namespace prunepriv

#endif  // PRUNEPRIV_CORE_PARALLEL_H_
