#include "confstab/ellipsoid.hpp"

#include "confstab/error.hpp"
#include "confstab/frames.hpp"
#include "confstab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <vector>

namespace confstab {

namespace {

constexpr double kRootTolerance = 1e-10;
constexpr double kMinSemiAxis = 1e-6;
constexpr double kMaxSemiAxis = 1e3;
constexpr double kOracleTolerance = 1e-8;
constexpr double kTMinFraction = 1e-6;
constexpr double kAgreementTolerance = 1e-6;

void check_spec(const EllipsoidSpec& spec) {
  if (!(spec.a > 0.0) || !std::isfinite(spec.a)) {
    throw Error(ErrorKind::kInvalidArgument, "semi-axis a must be positive and finite");
  }
  if (spec.n < 2) throw Error(ErrorKind::kInvalidDimensions, "ellipsoid dimension n must be >= 2");
}

double square(double v) { return v * v; }

}  // namespace

EllipsoidPointData point_data(const EllipsoidSpec& spec, const Point& x) {
  check_spec(spec);
  if (x.size() != spec.n) throw Error(ErrorKind::kInvalidDimensions, "point must have n coordinates");
  const double r_sq = x.squaredNorm();
  if (!(r_sq < 1.0)) throw Error(ErrorKind::kPointOutsideUnitBall, "graph chart needs |x| < 1");
  const double a = spec.a;
  const double a2 = a * a;
  const int n = spec.n;

  EllipsoidPointData d;
  d.x = x;
  d.f = a * std::sqrt(1.0 - r_sq);
  const Vector df = -a2 / d.f * x;
  d.gradf_sq = df.squaredNorm();
  d.w = std::sqrt(1.0 + d.gradf_sq);
  d.g = Matrix::Identity(n, n) + df * df.transpose();
  d.h = (a2 * Matrix::Identity(n, n) + df * df.transpose()) / (d.w * d.f);

  const double wf = d.w * d.f;
  const double q = (1.0 - a2) / (d.w * d.w);
  d.n_mean_h = (n * a2 + q * d.gradf_sq) / wf;
  d.norm_sq_h =
      (n * a2 * a2 + q * q * d.gradf_sq * d.gradf_sq + 2.0 * a2 * q * d.gradf_sq) / (wf * wf);

  d.e_u = 2.0 / (2.0 + (1.0 - 1.0 / a2) * d.f * d.f);
  d.u_normal = d.e_u * a2 / wf;

  // the rescaled norm goes through the componentwise transformation law
  const Matrix E = orthonormal_frame(d.g);
  const Matrix h_frame = in_frame(d.h, E);
  d.htilde_sq =
      transform_second_form(h_frame, h_frame.trace() / n, d.u_normal, std::log(d.e_u)).norm_sq;
  return d;
}

Point point_at_height_sq(const EllipsoidSpec& spec, double t) {
  check_spec(spec);
  const double a2 = spec.a * spec.a;
  if (!(t >= 0.0 && t <= a2)) throw Error(ErrorKind::kTOutOfRange, "t must lie in [0, a^2]");
  Point x = Point::Zero(spec.n);
  x[0] = std::sqrt(std::max(0.0, 1.0 - t / a2));
  return x;
}

double g_poly(const EllipsoidSpec& spec, double t) {
  check_spec(spec);
  const double a = spec.a;
  const double a2 = a * a;
  const double a4 = a2 * a2;
  if (!(t >= 0.0 && t <= a2)) {
    std::ostringstream os;
    os << "t = " << t << " outside [0, " << a2 << "]";
    throw Error(ErrorKind::kTOutOfRange, os.str());
  }
  const double k = spec.n - 1.0;
  const double s = a2 - 1.0;
  const double t2 = t * t;
  const double numerator = k * s * s * t2 * t2 - 2.0 * k * a4 * s * t2 * t +
                           a4 * (k * a4 + 9.0) * t2 - 12.0 * a4 * a2 * t + 4.0 * a4 * a4;
  const double base = a4 + (1.0 - a2) * t;
  return numerator / (base * base * base);
}

double closed_form_htilde_sq(const EllipsoidSpec& spec, double t) {
  return square(spec.a * spec.a - 1.0) / 4.0 * g_poly(spec, t);
}

ResidualReport closed_vs_oracle(const EllipsoidSpec& spec, int grid_size) {
  check_spec(spec);
  if (grid_size < 2) throw Error(ErrorKind::kInvalidArgument, "grid_size must be >= 2");
  const double a2 = spec.a * spec.a;
  const double t_min = a2 * kTMinFraction;
  const bool absolute = spec.a == 1.0;
  std::vector<double> gaps(static_cast<std::size_t>(grid_size));
  detail::parallel_for(gaps.size(), [&](std::size_t k) {
    const double t = t_min + (a2 - t_min) * static_cast<double>(k) / (grid_size - 1.0);
    const double closed = closed_form_htilde_sq(spec, t);
    const double oracle = point_data(spec, point_at_height_sq(spec, t)).htilde_sq;
    gaps[k] = absolute ? closed - oracle
                       : (closed - oracle) / std::max(std::abs(oracle),
                                                      std::numeric_limits<double>::min());
  });
  return make_report(absolute ? "closed_vs_oracle_absolute" : "closed_vs_oracle_relative", gaps,
                     0.0, absolute ? 1e-12 : kOracleTolerance);
}

double stated_max_conf_ii(double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::kInvalidArgument, "semi-axis a must be positive");
  return a <= 1.0 ? square(1.0 / a - a) : square(a * a - 1.0) * a * a;
}

ConformalMaximum max_conf_ii(const EllipsoidSpec& spec, int grid_points) {
  check_spec(spec);
  if (grid_points < 3) throw Error(ErrorKind::kInvalidArgument, "grid needs at least 3 points");
  const double a2 = spec.a * spec.a;
  const auto count = static_cast<std::size_t>(grid_points);
  auto t_at = [&](std::size_t k) { return a2 * static_cast<double>(k) / (grid_points - 1.0); };
  auto oracle = [&](double t) { return point_data(spec, point_at_height_sq(spec, t)).htilde_sq; };

  std::vector<double> values(count);
  values.front() = closed_form_htilde_sq(spec, 0.0);
  values.back() = closed_form_htilde_sq(spec, a2);
  detail::parallel_for(count - 2, [&](std::size_t k) { values[k + 1] = oracle(t_at(k + 1)); });

  const auto best = static_cast<std::size_t>(
      std::distance(values.begin(), std::max_element(values.begin(), values.end())));
  ConformalMaximum out;
  out.max_value = values[best];
  out.argmax_t = t_at(best);

  if (best > 0 && best + 1 < count) {
    // golden-section on the bracketing cells
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = t_at(best - 1);
    double hi = t_at(best + 1);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = oracle(x1);
    double f2 = oracle(x2);
    while (hi - lo > 1e-14 * std::max(1.0, a2)) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = oracle(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = oracle(x1);
      }
    }
    const double t = 0.5 * (lo + hi);
    const double v = oracle(t);
    if (v > out.max_value) {
      out.max_value = v;
      out.argmax_t = t;
    }
  }

  if (spec.n == 4) {
    out.paper_value = stated_max_conf_ii(spec.a);
    out.agrees = std::abs(out.max_value - *out.paper_value) <=
                 kAgreementTolerance * std::max(1.0, *out.paper_value);
  }
  return out;
}

std::string_view to_string(RangeBasis basis) {
  switch (basis) {
    case RangeBasis::kPaperClosedForm: return "paper_closed_form";
    case RangeBasis::kMeasuredMax: return "measured_max";
  }
  return "unknown";
}

namespace {

// Root of extremum(a) = threshold on [lo, hi], where extremum is monotone
// with sign(extremum(lo) - threshold) != sign(extremum(hi) - threshold).
double bisect(const std::function<double(double)>& extremum, double threshold, double lo,
              double hi) {
  double f_lo = extremum(lo) - threshold;
  while (hi - lo > kRootTolerance) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = extremum(mid) - threshold;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void require_monotone(const std::function<double(double)>& extremum, double lo, double hi,
                      bool increasing) {
  constexpr int kSamples = 16;
  double prev = extremum(lo);
  for (int k = 1; k <= kSamples; ++k) {
    const double a = lo + (hi - lo) * k / kSamples;
    const double v = extremum(a);
    const double slack = 1e-12 * std::max(1.0, std::abs(prev));
    if (increasing ? v < prev - slack : v > prev + slack) {
      std::ostringstream os;
      os << "extremum is not monotone on [" << lo << ", " << hi << "]";
      throw Error(ErrorKind::kInvalidBracket, os.str());
    }
    prev = v;
  }
}

}  // namespace

AdmissibleRange admissible_range(double threshold, RangeBasis basis) {
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorKind::kInvalidArgument, "threshold must be positive and finite");
  }
  std::function<double(double)> extremum;
  if (basis == RangeBasis::kPaperClosedForm) {
    extremum = [](double a) { return stated_max_conf_ii(a); };
  } else {
    extremum = [](double a) { return max_conf_ii(EllipsoidSpec{a, 4}).max_value; };
  }

  // lower root: extremum falls to 0 at a = 1
  double a_lo = 0.5;
  while (extremum(a_lo) < threshold) {
    a_lo *= 0.5;
    if (a_lo < kMinSemiAxis) {
      throw Error(ErrorKind::kThresholdUnreachable, "no crossing below a = 1");
    }
  }
  // upper root
  double a_hi = 2.0;
  while (extremum(a_hi) < threshold) {
    a_hi *= 2.0;
    if (a_hi > kMaxSemiAxis) {
      throw Error(ErrorKind::kThresholdUnreachable, "no crossing above a = 1");
    }
  }
  require_monotone(extremum, a_lo, 1.0, /*increasing=*/false);
  require_monotone(extremum, 1.0, a_hi, /*increasing=*/true);

  AdmissibleRange range;
  range.basis = basis;
  range.a1 = bisect(extremum, threshold, a_lo, 1.0);
  range.a2 = bisect(extremum, threshold, 1.0, a_hi);
  return range;
}

double pinching_delta(const EllipsoidSpec& spec) {
  check_spec(spec);
  const double a3 = spec.a * spec.a * spec.a;
  return spec.a <= 1.0 ? a3 * a3 : 1.0 / (a3 * a3);
}

std::pair<double, double> pinching_admissible_interval(double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "delta must lie in (0, 1]");
  }
  return {std::pow(delta, 1.0 / 6.0), std::pow(delta, -1.0 / 6.0)};
}

std::pair<double, double> stated_sectional_bounds(double a) {
  if (!(a > 0.0)) throw Error(ErrorKind::kInvalidArgument, "semi-axis a must be positive");
  const double lo = a * a;
  const double hi = 1.0 / (lo * lo);
  return {std::min(lo, hi), std::max(lo, hi)};
}

ChartBox ellipsoid_chart(int n) {
  if (n < 2) throw Error(ErrorKind::kInvalidDimensions, "ellipsoid dimension n must be >= 2");
  const double half_width = 0.9 / std::sqrt(static_cast<double>(n));
  return ChartBox::cube(n, -half_width, half_width, 2);
}

GraphImmersion ellipsoid_graph(const EllipsoidSpec& spec) {
  check_spec(spec);
  const double a = spec.a;
  const double a2 = a * a;
  ScalarField height(
      ellipsoid_chart(spec.n), [a](const Point& x) { return a * std::sqrt(1.0 - x.squaredNorm()); },
      [a, a2](const Point& x) {
        const double f = a * std::sqrt(1.0 - x.squaredNorm());
        return Vector(-a2 / f * x);
      },
      [a, a2](const Point& x) {
        const double f = a * std::sqrt(1.0 - x.squaredNorm());
        const Vector df = -a2 / f * x;
        const auto n = x.size();
        return Matrix(-(a2 * Matrix::Identity(n, n) + df * df.transpose()) / f);
      });
  return GraphImmersion{std::move(height), 1};
}

ScalarField ellipsoid_stereographic_factor(const EllipsoidSpec& spec) {
  check_spec(spec);
  // 1 + |x|^2 + f^2 = 1 + a^2 + (1 - a^2)|x|^2
  const double a2 = spec.a * spec.a;
  const double c = 1.0 - a2;
  return ScalarField(
      ellipsoid_chart(spec.n),
      [a2, c](const Point& x) { return std::log(2.0 / (1.0 + a2 + c * x.squaredNorm())); },
      [a2, c](const Point& x) {
        const double d = 1.0 + a2 + c * x.squaredNorm();
        return Vector(-2.0 * c / d * x);
      },
      [a2, c](const Point& x) {
        const double d = 1.0 + a2 + c * x.squaredNorm();
        const auto n = x.size();
        return Matrix(-2.0 * c / d * Matrix::Identity(n, n) +
                      4.0 * c * c / (d * d) * x * x.transpose());
      });
}

}  // namespace confstab
