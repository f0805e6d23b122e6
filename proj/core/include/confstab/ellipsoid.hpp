#pragma once

#include "confstab/conformal.hpp"
#include "confstab/immersion.hpp"

#include <optional>
#include <string_view>
#include <utility>

namespace confstab {

/// n-ellipsoid (x^1)^2 + ... + (x^n)^2 + (x^{n+1})^2 / a^2 = 1 in R^{n+1},
/// handled through the upper-hemisphere graph chart x^{n+1} = a sqrt(1 - |x|^2).
struct EllipsoidSpec {
  double a = 1.0;
  int n = 4;
};

/// Closed-form geometry of the ellipsoid at one graph-chart point, together
/// with the squared norm of its second fundamental form after stereographic
/// rescaling of the ambient space.
struct EllipsoidPointData {
  Point x;
  double f = 0.0;
  double w = 1.0;
  double gradf_sq = 0.0;
  Matrix g;
  Matrix h;
  double n_mean_h = 0.0;  // n H = g^{ij} h_ij
  double norm_sq_h = 0.0;
  double e_u = 1.0;       // 2 / (1 + |X|^2) at the ambient point
  double u_normal = 0.0;  // derivative of u along the unit normal
  double htilde_sq = 0.0;
};

/// Throws point-outside-unit-ball unless |x| < 1.
EllipsoidPointData point_data(const EllipsoidSpec& spec, const Point& x);

/// Chart point (sqrt(1 - t/a^2), 0, ..., 0) at height (x^{n+1})^2 = t.
Point point_at_height_sq(const EllipsoidSpec& spec, double t);

/// Rational function G_n(t) on [0, a^2]; throws t-out-of-range outside.
double g_poly(const EllipsoidSpec& spec, double t);

/// (a^2 - 1)^2 / 4 * G_n(t).
double closed_form_htilde_sq(const EllipsoidSpec& spec, double t);

/// Relative gap between the closed form and point_data over a t-grid on
/// [a^2 1e-6, a^2] (absolute gap when a = 1). Tolerance 1e-8.
ResidualReport closed_vs_oracle(const EllipsoidSpec& spec, int grid_size);

struct ConformalMaximum {
  double max_value = 0.0;
  double argmax_t = 0.0;
  std::optional<double> paper_value;  // n = 4 only
  bool agrees = false;
};

/// Piecewise maximum as stated for n = 4: (1/a - a)^2 for a <= 1 and
/// (a^2 - 1)^2 a^2 for a > 1.
double stated_max_conf_ii(double a);

/// Measured maximum of the rescaled |h~|^2 over t in [0, a^2]: dense grid
/// (endpoints from the closed form) refined by golden-section search.
ConformalMaximum max_conf_ii(const EllipsoidSpec& spec, int grid_points = 10001);

enum class RangeBasis {
  kPaperClosedForm,
  kMeasuredMax,
};

std::string_view to_string(RangeBasis basis);

struct AdmissibleRange {
  double a1 = 0.0;
  double a2 = 0.0;
  RangeBasis basis = RangeBasis::kPaperClosedForm;
};

/// Roots a1 < 1 < a2 of max|II|^2(a) = threshold for the 4-ellipsoid, by
/// bisection to 1e-10 after checking monotonicity on each bracket.
AdmissibleRange admissible_range(double threshold, RangeBasis basis);

/// a^6 for a <= 1, a^-6 for a > 1.
double pinching_delta(const EllipsoidSpec& spec);

/// Semi-axis interval [delta^{1/6}, delta^{-1/6}] on which pinching_delta >= delta.
std::pair<double, double> pinching_admissible_interval(double delta);

/// Sectional-curvature interval [min(a^2, a^-4), max(a^2, a^-4)] cited for
/// the ellipsoid.
std::pair<double, double> stated_sectional_bounds(double a);

/// Graph chart cube used for numerical work; corners stay at radius 0.9.
ChartBox ellipsoid_chart(int n);

/// Height function with analytic derivatives on ellipsoid_chart(n); normal
/// sign +1 gives a positive-definite second fundamental form.
GraphImmersion ellipsoid_graph(const EllipsoidSpec& spec);

/// Stereographic factor ln(2 / (1 + |x|^2 + f(x)^2)) restricted to the graph.
ScalarField ellipsoid_stereographic_factor(const EllipsoidSpec& spec);

}  // namespace confstab
