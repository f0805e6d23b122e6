#include "confstab/stability.hpp"

#include "confstab/error.hpp"
#include "confstab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace confstab {

namespace {

constexpr double kViolationSlack = 1e-10;
constexpr double kDegenerateNormSq = 1e-12;
constexpr std::size_t kAuditBlock = 4096;

void check_dimensions(int m, int n) {
  if (m < 3 || n < 1 || n > m - 2) {
    std::ostringstream os;
    os << "need m >= 3 and 1 <= n <= m-2, got m=" << m << ", n=" << n;
    throw Error(ErrorKind::kInvalidDimensions, os.str());
  }
}

double sharp_c(int n, int p, double c2, bool gradient_branch) {
  // with c2 = 1 + p/2, n*p/c2 = 2n - 4n/(p+2); written this way it coincides
  // bit-for-bit with the fixed-epsilon value 2 - 4/(m+1) when n = 1
  if (gradient_branch) return 2.0 * n - 4.0 * n / (p + 2.0);
  return n * static_cast<double>(p) / c2;
}

}  // namespace

int xi(int m) {
  if (m < 3) throw Error(ErrorKind::kInvalidDimensions, "m must be >= 3");
  return m <= 5 ? 1 : 2;
}

StabilityConstants constants(int m, int n) {
  check_dimensions(m, n);
  StabilityConstants c;
  c.m = m;
  c.n = n;
  c.p = m - n;
  c.xi = xi(m);
  const double p = c.p;
  c.eps0 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * p / n));
  const double mixed = 1.0 + p / 2.0;
  const double split = n * c.eps0;
  const bool mixed_branch = mixed >= split;
  c.c2 = mixed_branch ? mixed : split;
  c.c1 = c.c2 / p;
  c.c_sharp = sharp_c(n, c.p, c.c2, mixed_branch);
  c.c_rough = n == 1 ? 2.0 - 4.0 / (m + 1.0) : n * p / m;
  c.c_prime_sharp = c_prime(m);
  c.c_prime_rough = 2.0 - 4.0 / m;
  return c;
}

double c_prime(int m) {
  const int lo = xi(m);
  double best = std::numeric_limits<double>::infinity();
  for (int n = lo; n <= m - 2; ++n) {
    const double p = m - n;
    const double eps0 = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * p / n));
    const double mixed = 1.0 + p / 2.0;
    const bool mixed_branch = mixed >= n * eps0;
    best = std::min(best, sharp_c(n, m - n, mixed_branch ? mixed : n * eps0, mixed_branch));
  }
  return best;
}

double curvature_term_coefficient(int n, int p, double a) {
  if (n < 1 || p < 2) throw Error(ErrorKind::kInvalidDimensions, "need n >= 1 and p >= 2");
  return 4.0 * a - 2.0 - n + p * (a - 1.0) * (a - 1.0);
}

AlgII::AlgII(int n, int p, int q) : n_(n), p_(p), q_(q) {
  if (n < 1 || p < 1 || q < 1) {
    throw Error(ErrorKind::kInvalidDimensions, "n, p and q must be positive");
  }
  data_.assign(static_cast<std::size_t>(q) * static_cast<std::size_t>(m() * m()), 0.0);
}

void AlgII::set(int mu, int a, int b, double value) {
  data_[index(mu, a, b)] = value;
  data_[index(mu, b, a)] = value;
}

AlgII AlgII::scaled(double t) const {
  AlgII out = *this;
  for (double& v : out.data_) v *= t;
  return out;
}

AlgII AlgII::rotated_normals(const Matrix& rotation) const {
  if (rotation.rows() != q_ || rotation.cols() != q_) {
    throw Error(ErrorKind::kInvalidDimensions, "rotation must be q x q");
  }
  AlgII out(n_, p_, q_);
  for (int nu = 0; nu < q_; ++nu)
    for (int a = 0; a < m(); ++a)
      for (int b = 0; b < m(); ++b) {
        CompensatedSum acc;
        for (int mu = 0; mu < q_; ++mu) acc.add(rotation(nu, mu) * (*this)(mu, a, b));
        out.data_[out.index(nu, a, b)] = acc.value();
      }
  return out;
}

double f_functional(const AlgII& b) {
  const int n = b.n();
  const int p = b.p();
  if (p < 2) throw Error(ErrorKind::kPLessThanTwo, "the functional needs codimension p >= 2");
  const int m = b.m();
  CompensatedSum mixed;
  CompensatedSum cross;
  CompensatedSum normal;
  for (int mu = 0; mu < b.q(); ++mu) {
    for (int i = 0; i < n; ++i)
      for (int a = n; a < m; ++a) mixed.add(b(mu, i, a) * b(mu, i, a));
    CompensatedSum tan_trace;
    CompensatedSum nor_trace;
    for (int i = 0; i < n; ++i) tan_trace.add(b(mu, i, i));
    for (int a = n; a < m; ++a) nor_trace.add(b(mu, a, a));
    cross.add(tan_trace.value() * nor_trace.value());
    normal.add(nor_trace.value() * nor_trace.value());
    for (int a = n; a < m; ++a)
      for (int c = n; c < m; ++c) normal.add(-b(mu, a, c) * b(mu, a, c));
  }
  const double pd = p;
  return (1.0 + 2.0 / pd) * mixed.value() - (2.0 / pd) * cross.value() +
         n / (pd * (pd - 1.0)) * normal.value();
}

double norm_sq(const AlgII& b) {
  CompensatedSum acc;
  for (int mu = 0; mu < b.q(); ++mu)
    for (int a = 0; a < b.m(); ++a)
      for (int c = 0; c < b.m(); ++c) acc.add(b(mu, a, c) * b(mu, a, c));
  return acc.value();
}

AuditResult bound_audit(int n, int p, int q, std::size_t iterations, std::uint64_t seed) {
  if (iterations < 1) throw Error(ErrorKind::kInvalidArgument, "iterations must be >= 1");
  if (p < 2) throw Error(ErrorKind::kPLessThanTwo, "the functional needs codimension p >= 2");
  if (q < 1) throw Error(ErrorKind::kInvalidDimensions, "q must be >= 1");
  const double c1 = constants(n + p, n).c1;
  const std::size_t blocks = (iterations + kAuditBlock - 1) / kAuditBlock;

  struct BlockResult {
    double max_ratio = -std::numeric_limits<double>::infinity();
    std::size_t violations = 0;
    std::size_t resampled = 0;
  };
  std::vector<BlockResult> results(blocks);

  detail::parallel_for(blocks, [&](std::size_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const std::size_t begin = block * kAuditBlock;
    const std::size_t count = std::min(kAuditBlock, iterations - begin);
    const int m = n + p;
    BlockResult& r = results[block];
    AlgII sample(n, p, q);
    for (std::size_t s = 0; s < count; ++s) {
      double nsq = 0.0;
      for (;;) {
        for (int mu = 0; mu < q; ++mu)
          for (int a = 0; a < m; ++a)
            for (int c = a; c < m; ++c) {
              const double x = normal(rng);
              const double y = normal(rng);
              sample.set(mu, a, c, a == c ? x : 0.5 * (x + y));
            }
        nsq = norm_sq(sample);
        if (nsq >= kDegenerateNormSq) break;
        ++r.resampled;
      }
      const double ratio = f_functional(sample) / nsq;
      r.max_ratio = std::max(r.max_ratio, ratio);
      if (ratio > c1 + kViolationSlack) ++r.violations;
    }
  });

  AuditResult out;
  out.c1 = c1;
  out.samples = iterations;
  out.max_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    out.max_ratio = std::max(out.max_ratio, r.max_ratio);
    out.violations += r.violations;
    out.resampled += r.resampled;
  }
  return out;
}

RatioSupremum ratio_supremum(int n, int p) {
  if (p < 2) throw Error(ErrorKind::kPLessThanTwo, "the functional needs codimension p >= 2");
  const int m = n + p;
  // orthonormal coordinates on symmetric matrices under |II|^2:
  // y_AA = b_AA, y_AB = sqrt(2) b_AB for A < B
  std::vector<std::pair<int, int>> slots;
  for (int a = 0; a < m; ++a)
    for (int c = a; c < m; ++c) slots.emplace_back(a, c);
  const auto k = static_cast<Eigen::Index>(slots.size());
  auto basis_tensor = [&](const Vector& y) {
    AlgII b(n, p, 1);
    for (Eigen::Index s = 0; s < k; ++s) {
      const auto [a, c] = slots[static_cast<std::size_t>(s)];
      b.set(0, a, c, a == c ? y[s] : y[s] / std::sqrt(2.0));
    }
    return b;
  };
  Matrix Q(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = i; j < k; ++j) {
      const Vector ei = Vector::Unit(k, i);
      const Vector ej = Vector::Unit(k, j);
      const double v =
          0.25 * (f_functional(basis_tensor(ei + ej)) - f_functional(basis_tensor(ei - ej)));
      Q(i, j) = v;
      Q(j, i) = v;
    }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Q);
  return {eig.eigenvalues().maxCoeff(), constants(m, n).c1};
}

double prop33_rhs(double ii_mixed_sq, double u_tan_sq, double u_norm_sq, double ricci_mixed_sum,
                  int n, int p, double a) {
  if (ii_mixed_sq < 0.0 || u_tan_sq < 0.0 || u_norm_sq < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "squared norms must be non-negative");
  }
  return ii_mixed_sq + p * (a - 1.0) * (a - 1.0) * u_tan_sq + n * u_norm_sq - ricci_mixed_sum;
}

double curvature_sum_term(double mixed_sectional_sum, double normal_sectional_sum, int n, int p) {
  if (p < 2) throw Error(ErrorKind::kPLessThanTwo, "the curvature term needs p >= 2");
  const double pd = p;
  return (2.0 - pd) / pd * mixed_sectional_sum - n / (pd * (pd - 1.0)) * normal_sectional_sum;
}

double test_section_parameter(int n) { return n >= 2 ? 1.0 : 0.5; }

SignConditions sign_conditions(int m, int n, double a, double mixed_sectional_sum,
                               double normal_sectional_sum, double max_ii_sq) {
  const StabilityConstants c = constants(m, n);
  SignConditions s;
  s.curvature_term_nonpositive =
      curvature_sum_term(mixed_sectional_sum, normal_sectional_sum, n, c.p) <= 0.0;
  s.gradient_coefficient_nonpositive = curvature_term_coefficient(n, c.p, a) <= 0.0;
  s.functional_below_n = c.c1 * max_ii_sq < n;
  return s;
}

}  // namespace confstab
