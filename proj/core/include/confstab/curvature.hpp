#pragma once

#include "confstab/fields.hpp"
#include "confstab/types.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace confstab {

inline constexpr double kConnectionStep = 1e-3;
inline constexpr double kMaxMetricCondition = 1e10;

/// Levi-Civita connection coefficients Gamma^a_{bc} at one point.
class Christoffel {
 public:
  explicit Christoffel(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

  int dim() const { return dim_; }
  double& operator()(int a, int b, int c) { return data_[index(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[index(a, b, c)]; }
  double max_abs() const;

 private:
  std::size_t index(int a, int b, int c) const {
    return static_cast<std::size_t>((a * dim_ + b) * dim_ + c);
  }
  int dim_;
  std::vector<double> data_;
};

/// Fully lowered curvature R_{ABCD} = <R(e_A, e_B) e_D, e_C>, so that the
/// sectional curvature of the plane {X, Y} is R(X, Y, X, Y) / |X ^ Y|^2.
///
/// Construction projects the raw components onto the algebraic curvature
/// tensors (pair antisymmetry, pair exchange, first Bianchi identity). The
/// size of that correction is kept as symmetrization_defect(), which measures
/// how far the numerical route was from an exact curvature tensor.
class Riemann4 {
 public:
  Riemann4(int dim, std::vector<double> raw_components, Point basepoint);

  int dim() const { return dim_; }
  const Point& basepoint() const { return basepoint_; }
  double operator()(int a, int b, int c, int d) const { return data_[index(a, b, c, d)]; }

  /// R(X, Y, Z, W) = R_{ABCD} X^A Y^B Z^C W^D.
  double evaluate(const Vector& x, const Vector& y, const Vector& z, const Vector& w) const;

  /// Components R(e_A, e_B, e_C, e_D) for the frame whose columns are e_A.
  Riemann4 in_frame(const Matrix& frame) const;

  /// max |R_ABCD + R_BACD|, |R_ABCD + R_ABDC|, |R_ABCD - R_CDAB|.
  double symmetry_residual() const;
  /// max |R_ABCD + R_ACDB + R_ADBC|.
  double bianchi_residual() const;
  double symmetrization_defect() const { return defect_; }
  double max_abs() const;

 private:
  std::size_t index(int a, int b, int c, int d) const {
    return static_cast<std::size_t>(((a * dim_ + b) * dim_ + c) * dim_ + d);
  }
  int dim_;
  std::vector<double> data_;
  Point basepoint_;
  double defect_ = 0.0;
};

struct PinchReport {
  double k_min = 0.0;
  double k_max = 0.0;
  double delta = 0.0;  // k_min / k_max when k_max > 0, NaN otherwise
  std::size_t planes_sampled = 0;
  std::uint64_t seed = 0;
};

/// Central-difference partial derivatives d_k g, one matrix per axis.
std::vector<Matrix> metric_partials(const MetricField& metric, const Point& x, double step);

Christoffel christoffel(const MetricField& metric, const Point& x, double step = kDefaultStep);

/// Curvature from Gamma and its central-differenced first derivatives
/// (Gamma itself differenced with `step`, then Gamma differenced with
/// `connection_step`). Requires margin connection_step + 2*step.
Riemann4 riemann(const MetricField& metric, const Point& x, double step = kDefaultStep,
                 double connection_step = kConnectionStep);

double sectional(const Riemann4& curvature, const Matrix& g, const Vector& x, const Vector& y);

/// Sectional curvature extremes over a seeded sample of points and
/// g-orthonormalized Gaussian 2-planes.
PinchReport pinch_scan(const MetricField& metric, const ChartBox& chart, int n_points,
                       int n_planes, std::uint64_t seed, double step = kDefaultStep,
                       double connection_step = kConnectionStep);

}  // namespace confstab
