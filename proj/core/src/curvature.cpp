#include "confstab/curvature.hpp"

#include "confstab/error.hpp"
#include "confstab/frames.hpp"
#include "confstab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace confstab {

double Christoffel::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

Riemann4::Riemann4(int dim, std::vector<double> raw, Point basepoint)
    : dim_(dim), data_(raw.size(), 0.0), basepoint_(std::move(basepoint)) {
  const auto n = static_cast<std::size_t>(dim);
  if (dim <= 0 || raw.size() != n * n * n * n) {
    throw Error(ErrorKind::kInvalidDimensions, "curvature component count does not match dim^4");
  }
  auto r = [&](int a, int b, int c, int d) { return raw[index(a, b, c, d)]; };
  std::vector<double> pairs(raw.size());
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          pairs[index(a, b, c, d)] = (r(a, b, c, d) - r(b, a, c, d) - r(a, b, d, c) +
                                      r(b, a, d, c) + r(c, d, a, b) - r(d, c, a, b) -
                                      r(c, d, b, a) + r(d, c, b, a)) /
                                     8.0;
        }
  auto s = [&](int a, int b, int c, int d) { return pairs[index(a, b, c, d)]; };
  for (int a = 0; a < dim; ++a)
    for (int b = 0; b < dim; ++b)
      for (int c = 0; c < dim; ++c)
        for (int d = 0; d < dim; ++d) {
          const double cyclic = (s(a, b, c, d) + s(a, c, d, b) + s(a, d, b, c)) / 3.0;
          const auto i = index(a, b, c, d);
          data_[i] = s(a, b, c, d) - cyclic;
          defect_ = std::max(defect_, std::abs(data_[i] - raw[i]));
        }
}

double Riemann4::evaluate(const Vector& x, const Vector& y, const Vector& z,
                          const Vector& w) const {
  CompensatedSum acc;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int d = 0; d < dim_; ++d) acc.add((*this)(a, b, c, d) * x[a] * y[b] * z[c] * w[d]);
  return acc.value();
}

Riemann4 Riemann4::in_frame(const Matrix& frame) const {
  // contract one index at a time
  std::vector<double> cur = data_;
  std::vector<double> next(cur.size());
  const int n = dim_;
  for (int slot = 0; slot < 4; ++slot) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            int idx[4] = {a, b, c, d};
            const int out = idx[slot];
            CompensatedSum acc;
            for (int k = 0; k < n; ++k) {
              idx[slot] = k;
              acc.add(frame(k, out) * cur[index(idx[0], idx[1], idx[2], idx[3])]);
            }
            next[index(a, b, c, d)] = acc.value();
          }
    std::swap(cur, next);
  }
  Riemann4 framed(n, std::move(cur), basepoint_);
  framed.defect_ = std::max(framed.defect_, defect_);
  return framed;
}

double Riemann4::symmetry_residual() const {
  double m = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int d = 0; d < dim_; ++d) {
          const double v = (*this)(a, b, c, d);
          m = std::max({m, std::abs(v + (*this)(b, a, c, d)), std::abs(v + (*this)(a, b, d, c)),
                        std::abs(v - (*this)(c, d, a, b))});
        }
  return m;
}

double Riemann4::bianchi_residual() const {
  double m = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int c = 0; c < dim_; ++c)
        for (int d = 0; d < dim_; ++d) {
          m = std::max(m, std::abs((*this)(a, b, c, d) + (*this)(a, c, d, b) + (*this)(a, d, b, c)));
        }
  return m;
}

double Riemann4::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<Matrix> metric_partials(const MetricField& metric, const Point& x, double step) {
  if (!(step > 0.0)) throw Error(ErrorKind::kInvalidArgument, "step must be positive");
  metric.chart().require_interior(x, 2.0 * step);
  const int n = metric.dim();
  std::vector<Matrix> partials;
  partials.reserve(static_cast<std::size_t>(n));
  Point y = x;
  for (int k = 0; k < n; ++k) {
    y[k] = x[k] + step;
    const Matrix gp = metric(y);
    y[k] = x[k] - step;
    const Matrix gm = metric(y);
    y[k] = x[k];
    const Matrix dg = (gp - gm) / (2.0 * step);
    partials.push_back(0.5 * (dg + dg.transpose()));
  }
  return partials;
}

Christoffel christoffel(const MetricField& metric, const Point& x, double step) {
  const int n = metric.dim();
  const auto dg = metric_partials(metric, x, step);
  const Matrix g_inv = spd_inverse(metric(x), kMaxMetricCondition);
  // lowered Gamma_{d,bc} = (d_b g_dc + d_c g_db - d_d g_bc) / 2
  Christoffel gamma(n);
  for (int b = 0; b < n; ++b) {
    for (int c = b; c < n; ++c) {
      Vector lowered(n);
      for (int d = 0; d < n; ++d) {
        lowered[d] = 0.5 * (dg[static_cast<std::size_t>(b)](d, c) +
                            dg[static_cast<std::size_t>(c)](d, b) -
                            dg[static_cast<std::size_t>(d)](b, c));
      }
      for (int a = 0; a < n; ++a) {
        CompensatedSum acc;
        for (int d = 0; d < n; ++d) acc.add(g_inv(a, d) * lowered[d]);
        gamma(a, b, c) = acc.value();
        gamma(a, c, b) = gamma(a, b, c);
      }
    }
  }
  return gamma;
}

Riemann4 riemann(const MetricField& metric, const Point& x, double step, double connection_step) {
  if (!(step > 0.0) || !(connection_step > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "steps must be positive");
  }
  metric.chart().require_interior(x, connection_step + 2.0 * step);
  const int n = metric.dim();
  const Matrix g = metric(x);
  const Christoffel gamma = christoffel(metric, x, step);

  // dgamma[k](a,b,c) = d_k Gamma^a_{bc}
  std::vector<Christoffel> dgamma;
  dgamma.reserve(static_cast<std::size_t>(n));
  Point y = x;
  for (int k = 0; k < n; ++k) {
    y[k] = x[k] + connection_step;
    const Christoffel gp = christoffel(metric, y, step);
    y[k] = x[k] - connection_step;
    const Christoffel gm = christoffel(metric, y, step);
    y[k] = x[k];
    Christoffel d(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) d(a, b, c) = (gp(a, b, c) - gm(a, b, c)) / (2.0 * connection_step);
    dgamma.push_back(std::move(d));
  }

  // Rm^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb}
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> mixed(nn * nn * nn * nn);
  auto mixed_at = [&](int a, int b, int c, int d) -> double& {
    return mixed[static_cast<std::size_t>(((a * n + b) * n + c) * n + d)];
  };
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          CompensatedSum acc;
          acc.add(dgamma[static_cast<std::size_t>(c)](a, d, b));
          acc.add(-dgamma[static_cast<std::size_t>(d)](a, c, b));
          for (int e = 0; e < n; ++e) {
            acc.add(gamma(a, c, e) * gamma(e, d, b));
            acc.add(-gamma(a, d, e) * gamma(e, c, b));
          }
          mixed_at(a, b, c, d) = acc.value();
        }

  // R_{ABCD} = g_{Ce} Rm^e_{DAB}
  std::vector<double> lowered(mixed.size());
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B)
      for (int C = 0; C < n; ++C)
        for (int D = 0; D < n; ++D) {
          CompensatedSum acc;
          for (int e = 0; e < n; ++e) acc.add(g(C, e) * mixed_at(e, D, A, B));
          lowered[static_cast<std::size_t>(((A * n + B) * n + C) * n + D)] = acc.value();
        }
  return Riemann4(n, std::move(lowered), x);
}

double sectional(const Riemann4& curvature, const Matrix& g, const Vector& x, const Vector& y) {
  const double gxx = x.dot(g * x);
  const double gyy = y.dot(g * y);
  const double gxy = x.dot(g * y);
  const double area_sq = gxx * gyy - gxy * gxy;
  if (!(area_sq > 1e-12)) throw Error(ErrorKind::kDegenerateSpan, "span vectors are degenerate");
  return curvature.evaluate(x, y, x, y) / area_sq;
}

PinchReport pinch_scan(const MetricField& metric, const ChartBox& chart, int n_points,
                       int n_planes, std::uint64_t seed, double step, double connection_step) {
  if (n_points < 1 || n_planes < 1) {
    throw Error(ErrorKind::kInvalidArgument, "pinch_scan needs at least one point and one plane");
  }
  const int n = metric.dim();
  if (n < 2) throw Error(ErrorKind::kInvalidDimensions, "sectional curvature needs dim >= 2");
  const double margin = connection_step + 2.0 * step;
  const auto points =
      sample_interior(chart, static_cast<std::size_t>(n_points), margin, seed);

  // all random planes are drawn up front so the sample does not depend on threading
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<std::pair<Vector, Vector>>> planes(points.size());
  for (auto& per_point : planes) {
    per_point.reserve(static_cast<std::size_t>(n_planes));
    for (int s = 0; s < n_planes; ++s) {
      Vector x(n);
      Vector y(n);
      for (int k = 0; k < n; ++k) x[k] = normal(rng);
      for (int k = 0; k < n; ++k) y[k] = normal(rng);
      per_point.emplace_back(std::move(x), std::move(y));
    }
  }

  std::vector<std::pair<double, double>> extremes(points.size());
  detail::parallel_for(points.size(), [&](std::size_t i) {
    const Matrix g = metric(points[i]);
    const Riemann4 R = riemann(metric, points[i], step, connection_step);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& [x, y] : planes[i]) {
      const auto frame = gram_schmidt({x, y}, g);
      const double k = sectional(R, g, frame[0], frame[1]);
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
    extremes[i] = {lo, hi};
  });

  PinchReport report;
  report.k_min = std::numeric_limits<double>::infinity();
  report.k_max = -std::numeric_limits<double>::infinity();
  for (const auto& [lo, hi] : extremes) {
    report.k_min = std::min(report.k_min, lo);
    report.k_max = std::max(report.k_max, hi);
  }
  report.delta = report.k_max > 0.0 ? report.k_min / report.k_max
                                    : std::numeric_limits<double>::quiet_NaN();
  report.planes_sampled = points.size() * static_cast<std::size_t>(n_planes);
  report.seed = seed;
  return report;
}

}  // namespace confstab
