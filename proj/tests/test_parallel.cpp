#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "quasicurv/parallel.hpp"
#include "quasicurv/zoo.hpp"

using namespace qcv;

namespace {

SymTensor2Field scaled_metric(const MetricField& g, double c) {
  SymTensor2Field a(g.dim);
  for (int i = 0; i < g.dim; ++i)
    for (int j = i; j < g.dim; ++j) a.set(i, j, constant(c) * g.at(i, j));
  return a;
}

}  // namespace

TEST_CASE("parallel residual separates parallel from non-parallel tensors") {
  ZooEntry e = zoo_entry("sphere", 3);
  MetricDerivs md(e.chart, e.metric);
  CHECK(parallel_residual(md, scaled_metric(e.metric, 5.0)) <= 1e-12);
  CHECK(parallel_residual(md, md.metric()) <= 1e-12);

  // constant components are parallel only when the connection is flat
  SymTensor2Field dx1(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) dx1.set(i, j, constant(i == 0 && j == 0 ? 1.0 : 0.0));
  CHECK(parallel_residual(md, dx1) > 1e-2);

  ZooEntry flat = zoo_entry("flat", 3);
  MetricDerivs fmd(flat.chart, flat.metric);
  CHECK(parallel_residual(fmd, dx1) == 0.0);

  // eta (x) eta on the sphere chart is not parallel
  auto known = e.chart.known_names();
  Expr conf = parse("4/(1 + x1^2 + x2^2 + x3^2)^2", known);  // eta_i = g_i1 scaled
  SymTensor2Field ee(3);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) ee.set(i, j, constant(0.0));
  // eta = g(xi, .) with xi the scaled first frame vector: eta_i = conf * xi^1 delta_i1
  Expr eta1 = conf * parse("(1 + x1^2 + x2^2 + x3^2)/2", known);
  ee.set(0, 0, eta1 * eta1);
  CHECK(parallel_residual(md, ee) > 1e-2);
}

TEST_CASE("curvature commutes with parallel tensors") {
  ZooEntry e = zoo_entry("sphere", 3);
  MetricDerivs md(e.chart, e.metric);
  Vec p = {0.25, -0.15, 0.1};
  CurvatureAtPoint pt(md, p);

  Mat g = pt.g();
  CHECK(commutation_residual(pt, g) <= 1e-12);

  Mat notg(3, 3);
  notg(0, 0) = 2.0;
  notg(1, 1) = 1.0;
  notg(2, 2) = 1.0;  // g + dx1 (x) dx1 components do not commute with sphere curvature
  CHECK(commutation_residual(pt, notg) > 1e-3);
}

TEST_CASE("proportionality conclusion on a regular manifold") {
  for (const char* name : {"sphere", "hyperbolic-ball", "warped-exp-flat"}) {
    ZooEntry e = zoo_entry(name, 3);
    MetricDerivs md(e.chart, e.metric);
    Tolerances tol;
    QCCFit fit = analyze_qcc(md, *e.xi, tol);
    REQUIRE(fit.qcc_verified);
    ParallelReport rep =
        verify_parallel_proportionality(md, *e.xi, scaled_metric(e.metric, 3.5), fit, tol);
    CHECK(rep.is_parallel);
    CHECK(rep.regular);
    CHECK(rep.conclusion_guaranteed);
    CHECK(rep.proportional);
    CHECK(rep.parallel_residual <= 1e-8);
    CHECK(rep.alpha_xi_xi_mean == doctest::Approx(3.5).epsilon(1e-9));
    CHECK(rep.alpha_xi_xi_spread <= 1e-8);
    CHECK(rep.generator_alignment_residual <= 1e-8);
    CHECK(rep.proportionality_residual <= 1e-8);
    CHECK(rep.commutation_residual <= 1e-8);
    CHECK(rep.xi_orthogonality_residual <= 1e-8);
  }
}

TEST_CASE("flat counterexample: parallel but not proportional") {
  ZooEntry e = zoo_entry("flat-counterexample", 3);
  MetricDerivs md(e.chart, e.metric);
  Tolerances tol;
  QCCFit fit = analyze_qcc(md, *e.xi, tol);
  ParallelReport rep = verify_parallel_proportionality(md, *e.xi, *e.alpha, fit, tol);
  CHECK(rep.is_parallel);
  CHECK(rep.parallel_residual <= 1e-12);
  CHECK_FALSE(rep.regular);
  CHECK_FALSE(rep.conclusion_guaranteed);
  CHECK_FALSE(rep.proportional);
  // alpha = g + dx1 (x) dx1: off by a full unit in the (1,1) slot
  CHECK(rep.proportionality_residual >= 0.5);
}

TEST_CASE("non-parallel input: no conclusion is claimed") {
  ZooEntry e = zoo_entry("sphere", 3);
  MetricDerivs md(e.chart, e.metric);
  Tolerances tol;
  QCCFit fit = analyze_qcc(md, *e.xi, tol);
  SymTensor2Field a(3);
  auto known = e.chart.known_names();
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) a.set(i, j, constant(0.0));
  a.set(0, 0, parse("1 + x1^2", known));
  a.set(1, 1, constant(1.0));
  a.set(2, 2, constant(1.0));
  ParallelReport rep = verify_parallel_proportionality(md, *e.xi, a, fit, tol);
  CHECK_FALSE(rep.is_parallel);
  CHECK_FALSE(rep.conclusion_guaranteed);
}
