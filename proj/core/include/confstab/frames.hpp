#pragma once

#include "confstab/types.hpp"

#include <vector>

namespace confstab {

/// g-orthonormal frame from Gram-Schmidt of the coordinate basis, in axis
/// order. Column A holds the coordinate components of e_A, so that
/// E^T g E = I and E is upper triangular.
Matrix orthonormal_frame(const Matrix& g);

/// Gram-Schmidt of the given vectors under g, in order. Throws
/// degenerate-span when a vector is (numerically) in the span of the previous.
std::vector<Vector> gram_schmidt(const std::vector<Vector>& vectors, const Matrix& g,
                                 double tolerance = 1e-12);

/// Components E^T B E of a bilinear form in the frame E.
inline Matrix in_frame(const Matrix& bilinear, const Matrix& frame) {
  return frame.transpose() * bilinear * frame;
}

/// Inverse of a symmetric positive-definite matrix with a condition-number
/// guard (metric-singular above `max_condition`).
Matrix spd_inverse(const Matrix& g, double max_condition = 1e10);

}  // namespace confstab
