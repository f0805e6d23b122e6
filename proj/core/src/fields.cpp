#include "confstab/fields.hpp"

#include "confstab/error.hpp"

#include <limits>
#include <random>
#include <sstream>
#include <utility>

namespace confstab {

ChartBox::ChartBox(Vector lower, Vector upper, std::vector<int> resolution)
    : lower_(std::move(lower)), upper_(std::move(upper)), resolution_(std::move(resolution)) {
  const auto dim = lower_.size();
  if (dim == 0 || upper_.size() != dim || resolution_.size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::kInvalidChart, "lower/upper/resolution must share a positive length");
  }
  std::size_t count = 1;
  for (Eigen::Index k = 0; k < dim; ++k) {
    if (!(lower_[k] < upper_[k])) {
      std::ostringstream os;
      os << "axis " << k << " has lower >= upper";
      throw Error(ErrorKind::kInvalidChart, os.str());
    }
    const int r = resolution_[static_cast<std::size_t>(k)];
    if (r < 2) throw Error(ErrorKind::kInvalidChart, "resolution must be >= 2 on every axis");
    if (count > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(r)) {
      throw Error(ErrorKind::kInvalidChart, "grid point count overflows");
    }
    count *= static_cast<std::size_t>(r);
  }
  grid_count_ = count;
}

ChartBox ChartBox::cube(int dim, double lo, double hi, int resolution) {
  return ChartBox(Vector::Constant(dim, lo), Vector::Constant(dim, hi),
                  std::vector<int>(static_cast<std::size_t>(dim), resolution));
}

Point ChartBox::grid_point(std::size_t index) const {
  if (index >= grid_count_) throw Error(ErrorKind::kInvalidArgument, "grid index out of range");
  Point x(dim());
  for (int k = dim() - 1; k >= 0; --k) {
    const auto r = static_cast<std::size_t>(resolution_[static_cast<std::size_t>(k)]);
    const auto i = index % r;
    index /= r;
    x[k] = lower_[k] + (upper_[k] - lower_[k]) * static_cast<double>(i) / static_cast<double>(r - 1);
  }
  return x;
}

bool ChartBox::contains(const Point& x) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lower_[k] && x[k] <= upper_[k])) return false;
  }
  return true;
}

double ChartBox::margin(const Point& x) const {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    m = std::min({m, x[k] - lower_[k], upper_[k] - x[k]});
  }
  return m;
}

void ChartBox::require_interior(const Point& x, double required_margin) const {
  if (x.size() != lower_.size()) {
    throw Error(ErrorKind::kPointOutsideChart, "point dimension does not match chart");
  }
  if (!contains(x)) throw Error(ErrorKind::kPointOutsideChart, "point lies outside the chart box");
  if (margin(x) < required_margin) {
    std::ostringstream os;
    os << "margin " << margin(x) << " is below the required " << required_margin;
    throw Error(ErrorKind::kStepTooLargeForMargin, os.str());
  }
}

ChartBox ChartBox::shrunk(double by) const {
  return ChartBox(lower_.array() + by, upper_.array() - by, resolution_);
}

ScalarField::ScalarField(ChartBox chart, ScalarRule eval, GradientRule gradient,
                         HessianRule hessian)
    : chart_(std::move(chart)),
      eval_(std::move(eval)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {
  if (!eval_) throw Error(ErrorKind::kInvalidArgument, "scalar field needs an evaluation rule");
}

MetricField::MetricField(ChartBox chart, MetricRule eval)
    : chart_(std::move(chart)), eval_(std::move(eval)) {
  if (!eval_) throw Error(ErrorKind::kInvalidArgument, "metric field needs an evaluation rule");
}

namespace {

void check_step(double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::kInvalidArgument, "step must be positive");
}

Vector central_gradient(const ScalarField& field, const Point& x, double h) {
  const int n = field.chart().dim();
  Vector g(n);
  Point xp = x;
  Point xm = x;
  for (int k = 0; k < n; ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    g[k] = (field(xp) - field(xm)) / (2.0 * h);
    xp[k] = x[k];
    xm[k] = x[k];
  }
  return g;
}

}  // namespace

Vector diff1(const ScalarField& field, const Point& x, double step, DiffMode mode) {
  check_step(step);
  field.chart().require_interior(x, 2.0 * step);
  if (mode == DiffMode::kPreferAnalytic && field.has_gradient()) {
    return field.analytic_gradient(x);
  }
  return central_gradient(field, x, step);
}

Matrix diff2(const ScalarField& field, const Point& x, double step, DiffMode mode) {
  check_step(step);
  field.chart().require_interior(x, 2.0 * step);
  if (mode == DiffMode::kPreferAnalytic && field.has_hessian()) {
    return field.analytic_hessian(x);
  }
  const int n = field.chart().dim();
  const double h = step;
  const double f0 = field(x);
  Matrix H(n, n);
  Point y = x;
  for (int i = 0; i < n; ++i) {
    y[i] = x[i] + h;
    const double fp = field(y);
    y[i] = x[i] - h;
    const double fm = field(y);
    y[i] = x[i];
    H(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
    for (int j = i + 1; j < n; ++j) {
      auto at = [&](double si, double sj) {
        y[i] = x[i] + si * h;
        y[j] = x[j] + sj * h;
        const double v = field(y);
        y[i] = x[i];
        y[j] = x[j];
        return v;
      };
      const double pp = at(1, 1);
      const double pm = at(1, -1);
      const double mp = at(-1, 1);
      const double mm = at(-1, -1);
      H(i, j) = ((pp - pm) - (mp - mm)) / (4.0 * h * h);
      H(j, i) = H(i, j);
    }
  }
  return 0.5 * (H + H.transpose());
}

RichardsonResult richardson_diff(const ScalarField& field, const Point& x, double step) {
  check_step(step);
  field.chart().require_interior(x, 2.0 * step);
  const Vector d1 = central_gradient(field, x, step);
  const Vector d2 = central_gradient(field, x, step / 2.0);
  const Vector d4 = central_gradient(field, x, step / 4.0);
  const Vector coarse = (4.0 * d2 - d1) / 3.0;
  const Vector fine = (4.0 * d4 - d2) / 3.0;
  return {fine, (fine - coarse).cwiseAbs()};
}

std::vector<Point> sample_interior(const ChartBox& chart, std::size_t count, double margin,
                                   std::uint64_t seed) {
  const ChartBox inner = chart.shrunk(margin);
  std::mt19937_64 rng(seed);
  std::vector<Point> points;
  points.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Point x(chart.dim());
    for (int k = 0; k < chart.dim(); ++k) {
      std::uniform_real_distribution<double> u(inner.lower()[k], inner.upper()[k]);
      x[k] = u(rng);
    }
    points.push_back(std::move(x));
  }
  return points;
}

}  // namespace confstab
