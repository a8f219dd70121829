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

#ifndef PRUNEPRIV_CORE_SAMPLING_H_
#define PRUNEPRIV_CORE_SAMPLING_H_

#include <cstddef>

#include "prunepriv/core/matrix.h"
#include "prunepriv/core/rng.h"

namespace prunepriv {

// rows x cols matrix of i.i.d. N(0, sigma_a^2) entries, row-major draw order.
DenseMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols,
                                   double sigma_a, const RngStream& stream);

// |z| / || |z| ||_2 for z ~ N(0, I_dim): nonnegative with unit l2 norm.
DenseVector sample_unit_folded_gaussian(std::size_t dim,
                                        const RngStream& stream);

DenseVector sample_laplace_vector(double location, double scale,
                                  std::size_t dim, const RngStream& stream);

}  // namespace prunepriv

#endif  // PRUNEPRIV_CORE_SAMPLING_H_
