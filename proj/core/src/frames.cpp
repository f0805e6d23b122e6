#include "confstab/frames.hpp"

#include "confstab/error.hpp"

#include <cmath>
#include <sstream>

namespace confstab {

namespace {

double inner(const Matrix& g, const Vector& x, const Vector& y) { return x.dot(g * y); }

}  // namespace

Matrix orthonormal_frame(const Matrix& g) {
  const auto n = g.rows();
  std::vector<Vector> basis;
  basis.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) basis.push_back(Vector::Unit(n, k));
  const auto frame = gram_schmidt(basis, g);
  Matrix E(n, n);
  for (Eigen::Index k = 0; k < n; ++k) E.col(k) = frame[static_cast<std::size_t>(k)];
  return E;
}

std::vector<Vector> gram_schmidt(const std::vector<Vector>& vectors, const Matrix& g,
                                 double tolerance) {
  std::vector<Vector> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) {
    Vector w = v;
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& e : out) w -= inner(g, e, w) * e;
    }
    const double norm_sq = inner(g, w, w);
    if (!(norm_sq > tolerance * std::max(1.0, inner(g, v, v)))) {
      throw Error(ErrorKind::kDegenerateSpan, "vectors are linearly dependent under g");
    }
    out.push_back(w / std::sqrt(norm_sq));
  }
  return out;
}

Matrix spd_inverse(const Matrix& g, double max_condition) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()));
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::kMetricSingular, "eigen-decomposition of the metric failed");
  }
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(lo > 0.0) || hi / lo > max_condition) {
    std::ostringstream os;
    os << "metric eigenvalues [" << lo << ", " << hi << "] exceed condition " << max_condition;
    throw Error(ErrorKind::kMetricSingular, os.str());
  }
  const Matrix inv =
      eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();
  return 0.5 * (inv + inv.transpose());
}

}  // namespace confstab
