#pragma once

#include "confstab/curvature.hpp"
#include "confstab/fields.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace confstab {

inline constexpr double kFirstOrderTolerance = 1e-6;
inline constexpr double kSecondOrderTolerance = 1e-5;
inline constexpr double kCurvedBaseTolerance = 1e-4;

/// Conformal factor u on the chart of a base metric g; the rescaled metric
/// is e^{2u} g.
struct ConformalData {
  ScalarField u;
  MetricField base_metric;
};

struct ResidualReport {
  std::string identity_name;
  double max_abs_residual = 0.0;
  std::size_t points = 0;
  double step = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Builds a report; pass is max_abs_residual <= tolerance (NaN fails).
ResidualReport make_report(std::string name, const std::vector<double>& residuals, double step,
                           double tolerance);

MetricField rescaled_metric(const ConformalData& data);

/// |grad F|^2 under e^{2u}g against e^{-2u}|grad F|^2 under g, each side
/// contracted in its own Gram-Schmidt orthonormal frame.
ResidualReport check_grad_law(const ConformalData& data, const ScalarField& f,
                              const std::vector<Point>& points, double step = kDefaultStep,
                              double tolerance = kFirstOrderTolerance);

/// e^{2u} F~_AB = F_AB + (sum_C u_C F_C) delta_AB - F_A u_B - F_B u_A, with
/// e~_A = e^{-u} e_A and F~_AB taken from the rescaled metric's connection.
ResidualReport check_hessian_law(const ConformalData& data, const ScalarField& f,
                                 const std::vector<Point>& points, double step = kDefaultStep,
                                 double tolerance = kSecondOrderTolerance);

/// Componentwise transformation law of the lowered curvature tensor under
/// e^{2u}g, both sides from independent numerical curvature computations.
ResidualReport check_curvature_law(const ConformalData& data, const std::vector<Point>& points,
                                   double step = kDefaultStep,
                                   double tolerance = kSecondOrderTolerance,
                                   double connection_step = kConnectionStep);

/// Traced forms of the curvature law for a split of the frame into the first
/// `tangent_dim` and the remaining p directions:
///   sum_{i,a} e^{-2u} R_iaia,   sum_{a!=b} e^{-2u} R_abab,   sum_{i!=j} e^{-2u} R_ijij
/// against the rescaled curvature plus derivatives of u taken with respect to
/// the rescaled metric. Tolerance is dim^2 times `componentwise_tolerance`.
std::vector<ResidualReport> check_summed_curvature_laws(
    const ConformalData& data, const std::vector<Point>& points, int tangent_dim,
    double step = kDefaultStep, double componentwise_tolerance = kSecondOrderTolerance,
    double connection_step = kConnectionStep);

/// max |K - expected| over the coordinate planes and `random_planes` seeded
/// Gaussian planes at each point.
ResidualReport check_constant_curvature(const MetricField& metric,
                                        const std::vector<Point>& points, double expected,
                                        int random_planes, std::uint64_t seed,
                                        double step = kDefaultStep,
                                        double tolerance = kCurvedBaseTolerance,
                                        double connection_step = kConnectionStep);

/// Euclidean metric on a chart.
MetricField flat_metric(const ChartBox& chart);

/// Stereographic conformal factor u = ln(2 / (1 + |x|^2)) with analytic
/// derivatives; e^{2u} delta is the round unit-sphere metric.
ScalarField stereographic_factor(const ChartBox& chart);

/// (4 / (1 + |x|^2)^2) delta.
MetricField round_sphere_metric(const ChartBox& chart);

struct SecondFormTransform {
  Matrix h;              // components in the rescaled orthonormal frame
  double mean_h = 0.0;
  double norm_sq = 0.0;  // sum of squared components
};

/// h~ = e^{-u}(h - u_normal I), H~ = e^{-u}(H - u_normal). `h` must be given in
/// a g-orthonormal frame and u_normal is the derivative of u along the same
/// unit normal that defines h.
SecondFormTransform transform_second_form(const Matrix& h, double mean_h, double u_normal,
                                          double u_value);

/// Factor and normal derivative that undo transform_second_form(., u_normal, u_value):
/// returns {-e^{-u} u_normal, -u}.
struct ConformalShift {
  double u_normal = 0.0;
  double u_value = 0.0;

  ConformalShift inverse() const;
};

}  // namespace confstab
