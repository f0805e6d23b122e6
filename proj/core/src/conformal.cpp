#include "confstab/conformal.hpp"

#include "confstab/error.hpp"
#include "confstab/frames.hpp"
#include "confstab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>

namespace confstab {

ResidualReport make_report(std::string name, const std::vector<double>& residuals, double step,
                           double tolerance) {
  ResidualReport r;
  r.identity_name = std::move(name);
  r.points = residuals.size();
  r.step = step;
  r.tolerance = tolerance;
  double worst = 0.0;
  bool finite = true;
  for (double v : residuals) {
    if (!std::isfinite(v)) finite = false;
    worst = std::max(worst, std::abs(v));
  }
  r.max_abs_residual = finite ? worst : std::numeric_limits<double>::quiet_NaN();
  r.pass = finite && worst <= tolerance;
  return r;
}

MetricField rescaled_metric(const ConformalData& data) {
  const ScalarField u = data.u;
  const MetricField g = data.base_metric;
  return MetricField(g.chart(), [u, g](const Point& x) {
    return Matrix(std::exp(2.0 * u(x)) * g(x));
  });
}

namespace {

// Covariant Hessian d^2F - Gamma^c d_c F in coordinates.
Matrix covariant_hessian(const Matrix& d2f, const Vector& df, const Christoffel& gamma) {
  const auto n = df.size();
  Matrix H = d2f;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      CompensatedSum acc;
      acc.add(d2f(a, b));
      for (Eigen::Index c = 0; c < n; ++c) {
        acc.add(-gamma(static_cast<int>(c), static_cast<int>(a), static_cast<int>(b)) * df[c]);
      }
      H(a, b) = acc.value();
    }
  return 0.5 * (H + H.transpose());
}

template <typename PerPoint>
std::vector<double> per_point(const std::vector<Point>& points, PerPoint&& fn) {
  std::vector<double> out(points.size());
  detail::parallel_for(points.size(), [&](std::size_t i) { out[i] = fn(points[i]); });
  return out;
}

// Frame-side pieces shared by the curvature identities.
struct CurvaturePieces {
  double e2u = 1.0;     // e^{2u}
  Vector du_frame;      // u_A in the g-frame
  Matrix hess_u_frame;  // u_AB in the g-frame (Levi-Civita of g)
  Riemann4 base;        // R in the g-frame
  Riemann4 rescaled;    // R~ components in the g-frame (not yet rescaled to e~)
  Matrix frame;
  Vector du_coord;
  Matrix d2u_coord;
};

CurvaturePieces curvature_pieces(const ConformalData& data, const MetricField& rescaled,
                                 const Point& x, double step, double connection_step) {
  const Matrix g = data.base_metric(x);
  const Matrix E = orthonormal_frame(g);
  const Vector du = diff1(data.u, x, step);
  const Matrix d2u = diff2(data.u, x, step);
  const Christoffel gamma = christoffel(data.base_metric, x, step);
  return CurvaturePieces{
      std::exp(2.0 * data.u(x)),
      E.transpose() * du,
      in_frame(covariant_hessian(d2u, du, gamma), E),
      riemann(data.base_metric, x, step, connection_step).in_frame(E),
      riemann(rescaled, x, step, connection_step).in_frame(E),
      E,
      du,
      d2u,
  };
}

double kron(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

ResidualReport check_grad_law(const ConformalData& data, const ScalarField& f,
                              const std::vector<Point>& points, double step, double tolerance) {
  const MetricField rescaled = rescaled_metric(data);
  auto residuals = per_point(points, [&](const Point& x) {
    const Vector df = diff1(f, x, step);
    const Matrix E = orthonormal_frame(data.base_metric(x));
    const Matrix E_tilde = orthonormal_frame(rescaled(x));
    const double base = (E.transpose() * df).squaredNorm();
    const double tilde = (E_tilde.transpose() * df).squaredNorm();
    return tilde - std::exp(-2.0 * data.u(x)) * base;
  });
  return make_report("grad_law", residuals, step, tolerance);
}

ResidualReport check_hessian_law(const ConformalData& data, const ScalarField& f,
                                 const std::vector<Point>& points, double step, double tolerance) {
  const MetricField rescaled = rescaled_metric(data);
  auto residuals = per_point(points, [&](const Point& x) {
    const Matrix E = orthonormal_frame(data.base_metric(x));
    const Vector df = diff1(f, x, step);
    const Matrix d2f = diff2(f, x, step);
    const Vector du = diff1(data.u, x, step);

    // e^{2u} F~_AB with e~_A = e^{-u} e_A is just E^T Hess~ F E
    const Matrix lhs = in_frame(covariant_hessian(d2f, df, christoffel(rescaled, x, step)), E);

    const Matrix f_ab = in_frame(covariant_hessian(d2f, df, christoffel(data.base_metric, x, step)), E);
    const Vector f_a = E.transpose() * df;
    const Vector u_a = E.transpose() * du;
    const auto n = f_a.size();
    const Matrix rhs = f_ab + u_a.dot(f_a) * Matrix::Identity(n, n) - f_a * u_a.transpose() -
                       u_a * f_a.transpose();
    return (lhs - rhs).cwiseAbs().maxCoeff();
  });
  return make_report("hessian_law", residuals, step, tolerance);
}

ResidualReport check_curvature_law(const ConformalData& data, const std::vector<Point>& points,
                                   double step, double tolerance, double connection_step) {
  const MetricField rescaled = rescaled_metric(data);
  auto residuals = per_point(points, [&](const Point& x) {
    const CurvaturePieces p = curvature_pieces(data, rescaled, x, step, connection_step);
    const int n = p.base.dim();
    const Vector& u = p.du_frame;
    const Matrix& uu = p.hess_u_frame;
    const double grad_sq = u.squaredNorm();
    double worst = 0.0;
    for (int A = 0; A < n; ++A)
      for (int B = 0; B < n; ++B)
        for (int C = 0; C < n; ++C)
          for (int D = 0; D < n; ++D) {
            // e^{2u} R~(e~_A, ...) = e^{-2u} R~(e_A, ...)
            const double lhs = p.rescaled(A, B, C, D) / p.e2u;
            const double rhs =
                p.base(A, B, C, D) -
                (uu(A, C) * kron(B, D) + uu(B, D) * kron(A, C) - uu(A, D) * kron(B, C) -
                 uu(B, C) * kron(A, D)) +
                (u[A] * u[C] * kron(B, D) + u[B] * u[D] * kron(A, C) -
                 u[B] * u[C] * kron(A, D) - u[A] * u[D] * kron(B, C)) -
                grad_sq * (kron(A, C) * kron(B, D) - kron(A, D) * kron(B, C));
            worst = std::max(worst, std::abs(lhs - rhs));
          }
    return worst;
  });
  return make_report("curvature_law", residuals, step, tolerance);
}

std::vector<ResidualReport> check_summed_curvature_laws(const ConformalData& data,
                                                        const std::vector<Point>& points,
                                                        int tangent_dim, double step,
                                                        double componentwise_tolerance,
                                                        double connection_step) {
  const int dim = data.base_metric.dim();
  if (tangent_dim < 1 || tangent_dim >= dim) {
    throw Error(ErrorKind::kInvalidDimensions, "tangent split must leave both parts non-empty");
  }
  const int n = tangent_dim;
  const int p = dim - n;
  const MetricField rescaled = rescaled_metric(data);
  std::vector<std::vector<double>> residuals(3, std::vector<double>(points.size()));

  detail::parallel_for(points.size(), [&](std::size_t s) {
    const Point& x = points[s];
    const CurvaturePieces pc = curvature_pieces(data, rescaled, x, step, connection_step);
    const double eu = std::sqrt(pc.e2u);
    // derivatives of u with respect to the rescaled metric, in e~_A = e^{-u} e_A
    const Vector ut = pc.du_frame / eu;
    const Matrix hess_tilde = covariant_hessian(pc.d2u_coord, pc.du_coord, christoffel(rescaled, x, step));
    const Matrix utt = in_frame(hess_tilde, pc.frame) / pc.e2u;
    const double grad_tilde_sq = ut.squaredNorm();
    auto base = [&](int A, int B) { return pc.base(A, B, A, B) / pc.e2u; };
    auto tilde = [&](int A, int B) { return pc.rescaled(A, B, A, B) / (pc.e2u * pc.e2u); };

    // tangent-normal
    CompensatedSum lhs;
    CompensatedSum rhs;
    for (int i = 0; i < n; ++i)
      for (int a = n; a < dim; ++a) {
        lhs.add(base(i, a));
        rhs.add(tilde(i, a));
      }
    for (int i = 0; i < n; ++i) rhs.add(p * (utt(i, i) + ut[i] * ut[i]));
    for (int a = n; a < dim; ++a) rhs.add(n * (utt(a, a) + ut[a] * ut[a]));
    rhs.add(-static_cast<double>(n * p) * grad_tilde_sq);
    residuals[0][s] = lhs.value() - rhs.value();

    // normal-normal
    CompensatedSum lhs_nn;
    CompensatedSum rhs_nn;
    for (int a = n; a < dim; ++a)
      for (int b = n; b < dim; ++b) {
        if (a == b) continue;
        lhs_nn.add(base(a, b));
        rhs_nn.add(tilde(a, b));
      }
    for (int a = n; a < dim; ++a) rhs_nn.add(2.0 * (p - 1) * (utt(a, a) + ut[a] * ut[a]));
    rhs_nn.add(-static_cast<double>(p * (p - 1)) * grad_tilde_sq);
    residuals[1][s] = lhs_nn.value() - rhs_nn.value();

    // tangent-tangent
    CompensatedSum lhs_tt;
    CompensatedSum rhs_tt;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        lhs_tt.add(base(i, j));
        rhs_tt.add(tilde(i, j));
      }
    for (int i = 0; i < n; ++i) rhs_tt.add(2.0 * (n - 1) * (utt(i, i) + ut[i] * ut[i]));
    rhs_tt.add(-static_cast<double>(n * (n - 1)) * grad_tilde_sq);
    residuals[2][s] = lhs_tt.value() - rhs_tt.value();
  });

  const double tol = static_cast<double>(dim * dim) * componentwise_tolerance;
  return {make_report("summed_curvature_tangent_normal", residuals[0], step, tol),
          make_report("summed_curvature_normal_normal", residuals[1], step, tol),
          make_report("summed_curvature_tangent_tangent", residuals[2], step, tol)};
}

ResidualReport check_constant_curvature(const MetricField& metric,
                                        const std::vector<Point>& points, double expected,
                                        int random_planes, std::uint64_t seed, double step,
                                        double tolerance, double connection_step) {
  const int n = metric.dim();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<std::pair<Vector, Vector>>> planes(points.size());
  for (auto& per : planes) {
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b) per.emplace_back(Vector::Unit(n, a), Vector::Unit(n, b));
    for (int s = 0; s < random_planes; ++s) {
      Vector x(n);
      Vector y(n);
      for (int k = 0; k < n; ++k) x[k] = normal(rng);
      for (int k = 0; k < n; ++k) y[k] = normal(rng);
      per.emplace_back(std::move(x), std::move(y));
    }
  }
  std::vector<double> residuals(points.size());
  detail::parallel_for(points.size(), [&](std::size_t i) {
    const Matrix g = metric(points[i]);
    const Riemann4 R = riemann(metric, points[i], step, connection_step);
    double worst = 0.0;
    for (const auto& [x, y] : planes[i]) {
      worst = std::max(worst, std::abs(sectional(R, g, x, y) - expected));
    }
    residuals[i] = worst;
  });
  return make_report("constant_sectional_curvature", residuals, step, tolerance);
}

MetricField flat_metric(const ChartBox& chart) {
  const int n = chart.dim();
  return MetricField(chart, [n](const Point&) { return Matrix(Matrix::Identity(n, n)); });
}

ScalarField stereographic_factor(const ChartBox& chart) {
  return ScalarField(
      chart, [](const Point& x) { return std::log(2.0 / (1.0 + x.squaredNorm())); },
      [](const Point& x) { return Vector(-2.0 * x / (1.0 + x.squaredNorm())); },
      [](const Point& x) {
        const double s = 1.0 + x.squaredNorm();
        const auto n = x.size();
        return Matrix(-2.0 / s * Matrix::Identity(n, n) + 4.0 / (s * s) * x * x.transpose());
      });
}

MetricField round_sphere_metric(const ChartBox& chart) {
  const int n = chart.dim();
  return MetricField(chart, [n](const Point& x) {
    const double s = 1.0 + x.squaredNorm();
    return Matrix(4.0 / (s * s) * Matrix::Identity(n, n));
  });
}

SecondFormTransform transform_second_form(const Matrix& h, double mean_h, double u_normal,
                                          double u_value) {
  const double scale = std::exp(-u_value);
  SecondFormTransform out;
  out.h = scale * (h - u_normal * Matrix::Identity(h.rows(), h.cols()));
  out.mean_h = scale * (mean_h - u_normal);
  CompensatedSum acc;
  for (Eigen::Index i = 0; i < out.h.rows(); ++i)
    for (Eigen::Index j = 0; j < out.h.cols(); ++j) acc.add(out.h(i, j) * out.h(i, j));
  out.norm_sq = acc.value();
  return out;
}

ConformalShift ConformalShift::inverse() const {
  return {-std::exp(-u_value) * u_normal, -u_value};
}

}  // namespace confstab
