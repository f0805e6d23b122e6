#pragma once

#include "confstab/curvature.hpp"
#include "confstab/fields.hpp"

namespace confstab {

/// Hypersurface x^{n+1} = f(x^1..x^n) in flat R^{n+1}. The unit normal is
/// normal_sign * (grad f, -1) / w with w = sqrt(1 + |grad f|^2); with sign +1
/// a graph that is concave in every direction (the upper half of an
/// ellipsoid) gets a positive-definite second fundamental form.
struct GraphImmersion {
  ScalarField height;
  int normal_sign = 1;

  int dim() const { return height.chart().dim(); }
};

struct FundamentalForms {
  Matrix g;        // induced metric, delta + grad f grad f^T
  Matrix g_inv;
  Matrix h;        // second fundamental form, coordinate components
  Matrix frame;    // g-orthonormal frame (columns), Gram-Schmidt in axis order
  Matrix h_frame;  // h in that frame
  double w = 1.0;
  double mean_h = 0.0;   // trace(g^-1 h) / n
  double norm_sq_h = 0.0;  // trace((g^-1 h)^2)
};

FundamentalForms fundamental_forms(const GraphImmersion& immersion, const Point& x,
                                   double step = kDefaultStep);

/// Induced metric as a MetricField on the graph chart.
MetricField induced_metric(const GraphImmersion& immersion, double step = kDefaultStep);

/// max over (i,j,k,l) of |R_ijkl - (h_ik h_jl - h_il h_jk)| in a g-orthonormal
/// frame, with R computed numerically from the induced metric.
double gauss_residual(const GraphImmersion& immersion, const Point& x,
                      double step = kDefaultStep, double connection_step = kConnectionStep);

}  // namespace confstab
