// Copyright 2026 The Unblend Authors.
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


#ifndef UNBLEND_PARALLEL_H_
#define UNBLEND_PARALLEL_H_

#include <functional>

namespace unblend {

// Calls fn(i) for every i in [0, n) from up to `jobs` threads. Callers
// write results by index, so output order does not depend on scheduling.
void ParallelFor(int n, int jobs, const std::function<void(int)>& fn);

}  // namespace unblend

#endif  // UNBLEND_PARALLEL_H_
