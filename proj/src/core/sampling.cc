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

#include "prunepriv/core/sampling.h"

#include <cmath>
#include <string>

#include "prunepriv/core/errors.h"

namespace prunepriv {

DenseMatrix sample_gaussian_matrix(std::size_t rows, std::size_t cols,
                                   double sigma_a, const RngStream& stream) {
  if (rows == 0 || cols == 0) {
    throw ParameterError("sample_gaussian_matrix: empty shape");
  }
  if (!std::isfinite(sigma_a) || sigma_a < 0.0) {
    throw ParameterError("sample_gaussian_matrix: sigma_a must be finite and "
                         ">= 0, got " + std::to_string(sigma_a));
  }
  DenseMatrix a(rows, cols);
  if (sigma_a == 0.0) return a;
  RandomEngine eng = stream.engine();
  for (double& v : a.values()) v = sigma_a * eng.normal();
  return a;
}

DenseVector sample_unit_folded_gaussian(std::size_t dim,
                                        const RngStream& stream) {
  if (dim == 0) throw ParameterError("sample_unit_folded_gaussian: dim = 0");
  RandomEngine eng = stream.engine();
  DenseVector x(dim);
  double sq = 0.0;
  // A zero draw for every coordinate has probability zero but would leave
  // nothing to normalize; redraw in that case.
  do {
    sq = 0.0;
    for (double& v : x.values()) {
      v = std::abs(eng.normal());
      sq += v * v;
    }
  } while (sq == 0.0);
  const double inv = 1.0 / std::sqrt(sq);
  for (double& v : x.values()) v *= inv;
  return x;
}

DenseVector sample_laplace_vector(double location, double scale,
                                  std::size_t dim, const RngStream& stream) {
  if (!std::isfinite(scale) || scale <= 0.0) {
    throw ParameterError("sample_laplace_vector: scale must be > 0, got " +
                         std::to_string(scale));
  }
  if (!std::isfinite(location)) {
    throw ParameterError("sample_laplace_vector: non-finite location");
  }
  RandomEngine eng = stream.engine();
  DenseVector out(dim);
  for (double& v : out.values()) v = eng.laplace(location, scale);
  return out;
}

}  // namespace prunepriv
