// Acceptance run: one PASS/FAIL line per criterion, exit code 1 if any fails.

#include "app.hpp"
#include "confstab/conformal.hpp"
#include "confstab/curvature.hpp"
#include "confstab/ellipsoid.hpp"
#include "confstab/error.hpp"
#include "confstab/immersion.hpp"
#include "confstab/stability.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace confstab;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

// criterion 1
constexpr double kConstantsTol = 1e-12;
// criterion 2
constexpr double kQuadraticTol = 1e-12;
// criterion 4
constexpr std::size_t kAuditSamples = 100000;
constexpr double kMixedRatioTol = 1e-12;
// criterion 5
constexpr double kGaussTol = 1e-5;
constexpr double kGaussStep = 1e-4;
// criterion 6
constexpr double kCurvatureLawTol = 1e-5;
constexpr double kSectionalTol = 1e-4;
constexpr double kGradLawTol = 1e-6;
// criterion 7
constexpr double kEndpointRelTol = 1e-10;
constexpr double kOracleRelTol = 1e-8;
constexpr int kOracleGrid = 1000;
// criterion 8
constexpr double kSpotRelTol = 1e-10;
constexpr double kRoundSphereTol = 1e-12;
// criterion 9
constexpr double kRangeTol = 1e-3;
// criterion 10
constexpr double kDeltaTol = 1e-12;
constexpr double kPinchTol = 1e-5;

const std::vector<double> kSemiAxes{0.5, 0.8, 1.25, 2.0};

Outcome constants_example() {
  Outcome o;
  const double c41 = constants(4, 1).c_sharp;
  const double c42 = constants(4, 2).c_sharp;
  o.require(std::abs(c41 - 1.2) <= kConstantsTol, "c(4,1) = " + fmt(c41));
  o.require(std::abs(c42 - (std::sqrt(5.0) - 1.0)) <= kConstantsTol, "c(4,2) = " + fmt(c42));
  o.require(std::abs(c_prime(4) - 1.2) <= kConstantsTol, "c'(4) = " + fmt(c_prime(4)));
  if (o.pass) o.detail = "c(4,1)=" + fmt(c41) + " c(4,2)=" + fmt(c42);
  return o;
}

Outcome constants_table() {
  Outcome o;
  int checked = 0;
  for (int m = 3; m <= 12; ++m) {
    for (int n = 1; n <= m - 2; ++n) {
      const int p = m - n;
      const StabilityConstants c = constants(m, n);
      const double quad = c.eps0 * c.eps0 - c.eps0 - static_cast<double>(p) / n;
      o.require(std::abs(quad) <= kQuadraticTol, "eps0 quadratic at (" + std::to_string(m) + "," +
                                                      std::to_string(n) + ")");
      o.require(c.c_sharp >= c.c_rough, "c_sharp < c_rough at m=" + std::to_string(m));
      const double rough = n == 1 ? 2.0 - 4.0 / (m + 1.0) : static_cast<double>(n * p) / m;
      o.require(c.c_rough == rough, "rough value at (" + std::to_string(m) + "," + std::to_string(n) + ")");
      ++checked;
    }
    o.require(constants(m, 1).c_sharp == 2.0 - 4.0 / (m + 1.0), "c_sharp(m,1) at m=" + std::to_string(m));
    const StabilityConstants c = constants(m, m - 2);
    o.require(c.c_prime_rough == 2.0 - 4.0 / m, "c'_rough at m=" + std::to_string(m));
    o.require(c.c_prime_sharp >= c.c_prime_rough, "c'_sharp < c'_rough at m=" + std::to_string(m));
  }
  if (o.pass) o.detail = std::to_string(checked) + " (m,n) pairs";
  return o;
}

Outcome curvature_coefficient() {
  Outcome o;
  const double a = curvature_term_coefficient(2, 2, 1.0);
  const double b = curvature_term_coefficient(1, 4, 0.5);
  const double c = curvature_term_coefficient(1, 5, 0.5);
  o.require(a == 0.0, "(n=2,a=1) gave " + fmt(a));
  o.require(b == 0.0, "(n=1,p=4,a=1/2) gave " + fmt(b));
  o.require(c == 0.25, "(n=1,p=5,a=1/2) gave " + fmt(c));
  o.require(xi(6) == 2, "xi(6) != 2");
  if (o.pass) o.detail = "0, 0, 0.25";
  return o;
}

Outcome audit() {
  Outcome o;
  const std::vector<std::array<int, 3>> triples{{1, 2, 1}, {1, 4, 2}, {2, 2, 1}, {2, 3, 2}, {3, 2, 2}};
  double worst = 0.0;
  for (const auto& [n, p, q] : triples) {
    const AuditResult r = bound_audit(n, p, q, kAuditSamples, 0);
    o.require(r.violations == 0 && r.samples == kAuditSamples,
              std::to_string(r.violations) + " violations at (" + std::to_string(n) + "," +
                  std::to_string(p) + "," + std::to_string(q) + ")");
    worst = std::max(worst, r.max_ratio / r.c1);

    AlgII b(n, p, q);
    for (int mu = 0; mu < q; ++mu)
      for (int i = 0; i < n; ++i)
        for (int al = n; al < n + p; ++al) b.set(mu, i, al, 0.3 + 0.1 * (mu + 2 * i) - 0.05 * al);
    const double ratio = f_functional(b) / norm_sq(b);
    o.require(std::abs(ratio - (p + 2.0) / (2.0 * p)) <= kMixedRatioTol, "mixed-only ratio " + fmt(ratio));
  }
  if (o.pass) o.detail = "max ratio/c1 = " + fmt(worst);
  return o;
}

Outcome gauss() {
  Outcome o;
  const GraphImmersion imm = ellipsoid_graph({0.8, 4});
  const auto points = sample_interior(imm.height.chart(), 100, 0.01, 0);
  std::vector<double> res;
  for (const auto& x : points) res.push_back(gauss_residual(imm, x, kGaussStep));
  const ResidualReport r = make_report("gauss_equation", res, kGaussStep, kGaussTol);
  o.require(r.pass && r.points == 100, "residual " + fmt(r.max_abs_residual));
  if (o.pass) o.detail = "max residual " + fmt(r.max_abs_residual);
  return o;
}

Outcome conformal_laws() {
  Outcome o;
  const ChartBox chart = ChartBox::cube(4, -1.0, 1.0);
  const ConformalData data{stereographic_factor(chart), flat_metric(chart)};
  const auto points25 = sample_interior(chart, 25, 0.05, 0);
  const ResidualReport law = check_curvature_law(data, points25, kDefaultStep, kCurvatureLawTol);
  o.require(law.pass, "curvature law " + fmt(law.max_abs_residual));
  const ResidualReport k1 =
      check_constant_curvature(rescaled_metric(data), points25, 1.0, 10, 0, kDefaultStep, kSectionalTol);
  o.require(k1.pass, "sectional " + fmt(k1.max_abs_residual));
  const auto points50 = sample_interior(chart, 50, 0.05, 1);
  const ScalarField f(chart, [](const Point& x) { return x[0]; });
  const ResidualReport grad = check_grad_law(data, f, points50, kDefaultStep, kGradLawTol);
  o.require(grad.pass, "grad law " + fmt(grad.max_abs_residual));
  if (o.pass) {
    o.detail = "law " + fmt(law.max_abs_residual) + ", |K-1| " + fmt(k1.max_abs_residual) + ", grad " +
               fmt(grad.max_abs_residual);
  }
  return o;
}

Outcome g_poly_checks() {
  Outcome o;
  double worst = 0.0;
  for (double a : kSemiAxes) {
    const EllipsoidSpec spec{a, 4};
    const double a2 = a * a;
    o.require(rel(g_poly(spec, 0.0), 4.0 / (a2 * a2)) <= kEndpointRelTol, "G_4(0) at a=" + fmt(a));
    o.require(rel(g_poly(spec, a2), 4.0 * a2) <= kEndpointRelTol, "G_4(a^2) at a=" + fmt(a));
    const ResidualReport r = closed_vs_oracle(spec, kOracleGrid);
    o.require(r.pass && r.points == static_cast<std::size_t>(kOracleGrid) && r.tolerance <= kOracleRelTol,
              "closed vs oracle " + fmt(r.max_abs_residual) + " at a=" + fmt(a));
    worst = std::max(worst, r.max_abs_residual);
  }
  if (o.pass) o.detail = "worst relative gap " + fmt(worst);
  return o;
}

// The equator is not in the graph chart, so the limit is taken by linear
// extrapolation in t = f^2 from two points just above it.
double equator_limit(const EllipsoidSpec& spec) {
  const double t = 1e-7 * spec.a * spec.a;
  const double h1 = point_data(spec, point_at_height_sq(spec, t)).htilde_sq;
  const double h2 = point_data(spec, point_at_height_sq(spec, 2.0 * t)).htilde_sq;
  return 2.0 * h1 - h2;
}

Outcome spot_values() {
  Outcome o;
  double worst_rel = 0.0;
  for (double a : kSemiAxes) {
    for (int n : {2, 3, 4, 6}) {
      const EllipsoidSpec spec{a, n};
      const double a2 = a * a;
      const double tip = point_data(spec, Point::Zero(n)).htilde_sq;
      o.require(rel(tip, n * a2 * (a2 - 1.0) * (a2 - 1.0) / 4.0) <= kSpotRelTol,
                "tip at a=" + fmt(a) + " n=" + std::to_string(n));
      const double eq = equator_limit(spec);
      worst_rel = std::max({worst_rel, rel(eq, (1.0 - a2) * (1.0 - a2) / (a2 * a2)),
                            rel(tip, n * a2 * (a2 - 1.0) * (a2 - 1.0) / 4.0)});
      o.require(rel(eq, (1.0 - a2) * (1.0 - a2) / (a2 * a2)) <= kSpotRelTol,
                "equator at a=" + fmt(a) + " n=" + std::to_string(n) + " rel " +
                    fmt(rel(eq, (1.0 - a2) * (1.0 - a2) / (a2 * a2))));
    }
  }
  const EllipsoidSpec sphere{1.0, 4};
  double worst = 0.0;
  for (const auto& x : sample_interior(ChartBox::cube(4, -0.49, 0.49), 1000, 0.0, 3)) {
    worst = std::max(worst, point_data(sphere, x).htilde_sq);
  }
  for (int k = 1; k < 1000; ++k) {
    worst = std::max(worst, point_data(sphere, point_at_height_sq(sphere, k / 1000.0)).htilde_sq);
  }
  o.require(worst <= kRoundSphereTol, "a=1 max " + fmt(worst));
  if (o.pass) o.detail = "worst relative gap " + fmt(worst_rel) + ", a=1 max " + fmt(worst);
  return o;
}

Outcome ranges() {
  Outcome o;
  const double threshold = 1.2;
  const AdmissibleRange paper = admissible_range(threshold, RangeBasis::kPaperClosedForm);
  o.require(std::abs(paper.a1 - 0.593) <= kRangeTol, "paper a1 " + fmt(paper.a1));
  o.require(std::abs(paper.a2 - 1.346) <= kRangeTol, "paper a2 " + fmt(paper.a2));

  std::ostringstream out;
  std::ostringstream err;
  const char* argv[] = {"confstab", "range", "--threshold", "1.2", "--basis", "measured"};
  const int code = cli::run(6, argv, out, err);
  o.require(code == cli::kExitOk, "measured range exit " + std::to_string(code));
  const AdmissibleRange measured = admissible_range(threshold, RangeBasis::kMeasuredMax);
  const bool differs = std::abs(measured.a1 - paper.a1) > kRangeTol;
  const bool warned =
      err.str().find("warning: measured_a1_differs_from_paper_closed_form") != std::string::npos;
  o.require(differs == warned, "reconciliation warning mismatch");
  if (o.pass) {
    o.detail = "paper (" + fmt(paper.a1) + ", " + fmt(paper.a2) + "), measured (" + fmt(measured.a1) +
               ", " + fmt(measured.a2) + ")" + (warned ? ", warned" : "");
  }
  return o;
}

Outcome pinching() {
  Outcome o;
  const double delta = pinching_delta({std::pow(0.2, 1.0 / 12.0), 4});
  o.require(std::abs(delta - 1.0 / std::sqrt(5.0)) <= kDeltaTol, "delta " + fmt(delta));
  const EllipsoidSpec sphere{1.0, 4};
  const PinchReport pr =
      pinch_scan(induced_metric(ellipsoid_graph(sphere)), ellipsoid_chart(4), 25, 20, 0);
  o.require(std::abs(pr.delta - 1.0) <= kPinchTol, "scan delta " + fmt(pr.delta));
  if (o.pass) o.detail = "scan |delta-1| " + fmt(std::abs(pr.delta - 1.0));
  return o;
}

Outcome determinism() {
  Outcome o;
  const std::vector<std::vector<const char*>> commands{
      {"confstab", "constants", "--m", "3..12"},
      {"confstab", "ellipsoid", "--a", "0.8", "--n", "4"},
      {"confstab", "verify", "--case", "curvature:sphere", "--points", "5", "--seed", "7"},
      {"confstab", "verify", "--case", "pinch:ellipsoid", "--points", "5", "--seed", "7"},
      {"confstab", "range", "--threshold", "auto"},
      {"confstab", "audit", "--n", "2", "--p", "3", "--q", "2", "--iters", "20000", "--seed", "7"}};
  for (const auto& argv : commands) {
    std::string first;
    for (int rep = 0; rep < 2; ++rep) {
      std::ostringstream out;
      std::ostringstream err;
      cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
      if (rep == 0) {
        first = out.str();
      } else {
        o.require(!first.empty() && first == out.str(), std::string(argv[1]) + " output differs");
      }
    }
  }
  if (o.pass) o.detail = std::to_string(commands.size()) + " commands";
  return o;
}

struct Criterion {
  int id;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, 1.0, constants_example}, {2, 1.0, constants_table},  {3, 1.0, curvature_coefficient},
      {4, 30.0, audit},            {5, 120.0, gauss},          {6, 120.0, conformal_laws},
      {7, 60.0, g_poly_checks},    {8, 60.0, spot_values},     {9, 60.0, ranges},
      {10, 120.0, pinching},       {11, 60.0, determinism}};
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) o.require(false, "over budget " + fmt(c.budget_s) + " s");
    if (!o.pass) ++failures;
    std::printf("criterion %2d: %s  %.2fs  %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
