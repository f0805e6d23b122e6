#pragma once

#include "confstab/types.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace confstab {

/// Constants for the nonexistence criterion in ambient dimension m and
/// submanifold dimension n (codimension p = m - n).
struct StabilityConstants {
  int m = 0;
  int n = 0;
  int p = 0;
  int xi = 0;             // smallest admissible n for this m
  double eps0 = 0.0;      // positive root of n*eps = n + p/eps
  double c2 = 0.0;        // max(1 + p/2, n*eps0)
  double c1 = 0.0;        // c2 / p, the sharp constant in F(II) <= c1 |II|^2
  double c_sharp = 0.0;   // n / c1
  double c_rough = 0.0;   // fixed-epsilon bound
  double c_prime_sharp = 0.0;  // min over admissible n of c_sharp(m, n)
  double c_prime_rough = 0.0;  // 2 - 4/m
};

/// 1 for 3 <= m <= 5, 2 for m >= 6. Throws invalid-dimensions for m < 3.
int xi(int m);

/// Requires m >= 3 and 1 <= n <= m - 2.
StabilityConstants constants(int m, int n);

/// min over xi(m) <= n <= m - 2 of constants(m, n).c_sharp.
double c_prime(int m);

/// Coefficient 4a - 2 - n + p(a-1)^2 of the tangential gradient term.
double curvature_term_coefficient(int n, int p, double a);

/// Second fundamental form components b[mu][A][B] of an (n+p)-dimensional
/// tangent space with q normal directions. The first n tangent indices are
/// the submanifold directions, the remaining p its normal directions.
class AlgII {
 public:
  AlgII(int n, int p, int q);

  int n() const { return n_; }
  int p() const { return p_; }
  int q() const { return q_; }
  int m() const { return n_ + p_; }

  double operator()(int mu, int a, int b) const { return data_[index(mu, a, b)]; }
  /// Writes both (a, b) and (b, a).
  void set(int mu, int a, int b, double value);

  AlgII scaled(double t) const;
  /// Applies an orthogonal q x q matrix to the normal index.
  AlgII rotated_normals(const Matrix& rotation) const;

 private:
  std::size_t index(int mu, int a, int b) const {
    return static_cast<std::size_t>((mu * m() + a) * m() + b);
  }
  int n_;
  int p_;
  int q_;
  std::vector<double> data_;
};

/// F(II) = (1 + 2/p) sum_{i,a,mu} b_ia^2 - (2/p) sum_mu (sum_i b_ii)(sum_a b_aa)
///       + n/(p(p-1)) sum_mu [ (sum_a b_aa)^2 - sum_{a,b} b_ab^2 ].
/// Throws p-less-than-2.
double f_functional(const AlgII& b);

/// Sum of squares over ordered index pairs.
double norm_sq(const AlgII& b);

struct AuditResult {
  double max_ratio = 0.0;
  std::size_t violations = 0;
  std::size_t samples = 0;
  std::size_t resampled = 0;
  double c1 = 0.0;
};

/// Seeded standard-normal symmetric samples; counts F/|II|^2 > c1 + 1e-10.
/// Samples come in fixed-size blocks, each seeded from (seed, block index),
/// so the result does not depend on the number of worker threads.
AuditResult bound_audit(int n, int p, int q, std::size_t iterations, std::uint64_t seed);

/// Exact supremum of F(II)/|II|^2 as the top eigenvalue of F on the space of
/// symmetric tensors with the |II|^2 inner product (independent of q).
/// Informational: it shows how close c1 is to being attained.
struct RatioSupremum {
  double value = 0.0;
  double c1 = 0.0;
};
RatioSupremum ratio_supremum(int n, int p);

/// sum|II(e_i, e_a)|^2 + p(a-1)^2 |grad^T u|^2 + n |grad^N u|^2 - sum R_iaia.
double prop33_rhs(double ii_mixed_sq, double u_tan_sq, double u_norm_sq, double ricci_mixed_sum,
                  int n, int p, double a);

/// (2-p)/p sum R_iaia - n/(p(p-1)) sum_{a!=b} R_abab: the ambient curvature
/// integrand, non-positive whenever sectional curvatures are non-negative.
double curvature_sum_term(double mixed_sectional_sum, double normal_sectional_sum, int n, int p);

/// The three sign conditions that make the summed second variation negative.
struct SignConditions {
  bool curvature_term_nonpositive = false;
  bool gradient_coefficient_nonpositive = false;
  bool functional_below_n = false;  // F(II) - n < 0, checked as c1 |II|^2 < n

  bool all() const {
    return curvature_term_nonpositive && gradient_coefficient_nonpositive && functional_below_n;
  }
};

/// Evaluates the sign conditions for a given parameter a, pointwise curvature
/// sums and the maximum of |II|^2 over the ambient manifold.
SignConditions sign_conditions(int m, int n, double a, double mixed_sectional_sum,
                               double normal_sectional_sum, double max_ii_sq);

/// Parameter a used for the test sections: 1 for n >= 2, 1/2 for n = 1.
double test_section_parameter(int n);

}  // namespace confstab
