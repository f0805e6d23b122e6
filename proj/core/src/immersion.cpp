#include "confstab/immersion.hpp"

#include "confstab/error.hpp"
#include "confstab/frames.hpp"

#include <algorithm>
#include <cmath>

namespace confstab {

namespace {

void check_sign(int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorKind::kInvalidArgument, "normal_sign must be +1 or -1");
}

}  // namespace

FundamentalForms fundamental_forms(const GraphImmersion& immersion, const Point& x, double step) {
  check_sign(immersion.normal_sign);
  const int n = immersion.dim();
  const Vector df = diff1(immersion.height, x, step);
  const Matrix d2f = diff2(immersion.height, x, step);

  FundamentalForms out;
  out.w = std::sqrt(1.0 + df.squaredNorm());
  out.g = Matrix::Identity(n, n) + df * df.transpose();
  // Sherman-Morrison; a graph metric is always invertible
  out.g_inv = Matrix::Identity(n, n) - df * df.transpose() / (out.w * out.w);
  if (!((out.g * out.g_inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-8)) {
    throw Error(ErrorKind::kGInversionFailure, "induced metric inverse check failed");
  }
  out.h = -static_cast<double>(immersion.normal_sign) * d2f / out.w;
  out.frame = orthonormal_frame(out.g);
  out.h_frame = in_frame(out.h, out.frame);
  const Matrix shape = out.g_inv * out.h;
  out.mean_h = shape.trace() / n;
  out.norm_sq_h = (shape * shape).trace();
  return out;
}

MetricField induced_metric(const GraphImmersion& immersion, double step) {
  const ScalarField f = immersion.height;
  return MetricField(f.chart(), [f, step](const Point& x) {
    const Vector df = diff1(f, x, step);
    const auto n = df.size();
    return Matrix(Matrix::Identity(n, n) + df * df.transpose());
  });
}

double gauss_residual(const GraphImmersion& immersion, const Point& x, double step,
                      double connection_step) {
  const FundamentalForms ff = fundamental_forms(immersion, x, step);
  const MetricField metric = induced_metric(immersion, step);
  const Riemann4 R = riemann(metric, x, step, connection_step).in_frame(ff.frame);
  const Matrix& h = ff.h_frame;
  const int n = immersion.dim();
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          const double gauss = h(i, k) * h(j, l) - h(i, l) * h(j, k);
          worst = std::max(worst, std::abs(R(i, j, k, l) - gauss));
        }
  return worst;
}

}  // namespace confstab
