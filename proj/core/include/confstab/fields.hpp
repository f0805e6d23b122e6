#pragma once

#include "confstab/types.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace confstab {

inline constexpr double kDefaultStep = 1e-4;
inline constexpr double kDefaultRichardsonStep = 1e-2;

/// Axis-aligned coordinate box [lower, upper] with a lattice resolution per
/// axis. All field evaluation and differencing happens inside one of these.
class ChartBox {
 public:
  ChartBox(Vector lower, Vector upper, std::vector<int> resolution);

  /// Cube [lo, hi]^dim with `resolution` lattice points per axis.
  static ChartBox cube(int dim, double lo, double hi, int resolution = 2);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  const std::vector<int>& resolution() const { return resolution_; }

  std::size_t grid_point_count() const { return grid_count_; }
  /// Lattice point with row-major index (last axis fastest).
  Point grid_point(std::size_t index) const;

  bool contains(const Point& x) const;
  /// Smallest axis distance from x to a face; negative outside.
  double margin(const Point& x) const;
  /// Throws point-outside-chart or step-too-large-for-margin.
  void require_interior(const Point& x, double required_margin) const;

  /// Same box shrunk by `by` on every face.
  ChartBox shrunk(double by) const;

 private:
  Vector lower_;
  Vector upper_;
  std::vector<int> resolution_;
  std::size_t grid_count_ = 0;
};

using ScalarRule = std::function<double(const Point&)>;
using GradientRule = std::function<Vector(const Point&)>;
using HessianRule = std::function<Matrix(const Point&)>;
using MetricRule = std::function<Matrix(const Point&)>;

/// A real-valued field on a chart given by a pure evaluation rule, with
/// optional analytic first and second derivative rules.
class ScalarField {
 public:
  ScalarField(ChartBox chart, ScalarRule eval, GradientRule gradient = {},
              HessianRule hessian = {});

  const ChartBox& chart() const { return chart_; }
  double operator()(const Point& x) const { return eval_(x); }

  bool has_gradient() const { return static_cast<bool>(gradient_); }
  bool has_hessian() const { return static_cast<bool>(hessian_); }
  Vector analytic_gradient(const Point& x) const { return gradient_(x); }
  Matrix analytic_hessian(const Point& x) const { return hessian_(x); }

  /// Copy that forgets the analytic derivative rules.
  ScalarField values_only() const { return ScalarField(chart_, eval_); }

 private:
  ChartBox chart_;
  ScalarRule eval_;
  GradientRule gradient_;
  HessianRule hessian_;
};

/// Position-dependent symmetric positive-definite bilinear form.
class MetricField {
 public:
  MetricField(ChartBox chart, MetricRule eval);

  const ChartBox& chart() const { return chart_; }
  int dim() const { return chart_.dim(); }
  Matrix operator()(const Point& x) const { return eval_(x); }

 private:
  ChartBox chart_;
  MetricRule eval_;
};

enum class DiffMode {
  kPreferAnalytic,
  kFiniteDifference,
};

/// Gradient by central differences; analytic rule wins when present unless
/// mode forces differencing. Requires an axis margin of 2*step around x.
Vector diff1(const ScalarField& field, const Point& x, double step = kDefaultStep,
             DiffMode mode = DiffMode::kPreferAnalytic);

/// Symmetrized central-difference Hessian, same precondition as diff1.
Matrix diff2(const ScalarField& field, const Point& x, double step = kDefaultStep,
             DiffMode mode = DiffMode::kPreferAnalytic);

struct RichardsonResult {
  Vector derivative;
  Vector error_estimate;  // per axis, non-negative

  double max_error() const { return error_estimate.maxCoeff(); }
};

/// Two-level Richardson extrapolation of the central-difference gradient
/// using steps h, h/2 and h/4. The error estimate is the difference between
/// the (h, h/2) and (h/2, h/4) extrapolants, so it vanishes (up to rounding)
/// on polynomials of degree <= 4. Always differences, ignoring analytic rules.
RichardsonResult richardson_diff(const ScalarField& field, const Point& x,
                                 double step = kDefaultRichardsonStep);

/// Seeded uniform sample of points at least `margin` away from every face.
std::vector<Point> sample_interior(const ChartBox& chart, std::size_t count, double margin,
                                   std::uint64_t seed);

}  // namespace confstab
