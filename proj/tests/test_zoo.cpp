#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "quasicurv/zoo.hpp"

using namespace qcv;

TEST_CASE("catalog lists every example and both dimensions construct") {
  auto names = zoo_names();
  CHECK(names.size() >= 7);
  for (const auto& name : names)
    for (int dim : {3, 4}) {
      ZooEntry e = zoo_entry(name, dim);
      CHECK(e.name == name);
      CHECK(e.chart.dim == dim);
      CHECK_NOTHROW(e.chart.validate());
      CHECK(e.metric.dim == dim);
    }
  CHECK_THROWS_AS(zoo_entry("nonsense", 3), ChartError);
  CHECK_THROWS_AS(zoo_entry("flat", 5), ChartError);
}

TEST_CASE("engine-fitted coefficients match every catalog closed form") {
  Tolerances tol;
  for (const auto& name : zoo_names())
    for (int dim : {3, 4}) {
      ZooEntry e = zoo_entry(name, dim);
      if (!e.expected.a) continue;
      MetricDerivs md(e.chart, e.metric);
      QCCFit fit = analyze_qcc(md, *e.xi, tol);
      CHECK(fit.qcc_verified);
      for (const auto& qp : fit.points) {
        Env env = md.chart().bind(qp.point);
        CHECK(std::abs(qp.a - eval(*e.expected.a, env)) <= 1e-7);
        CHECK(std::abs(qp.b - eval(*e.expected.b, env)) <= 1e-7);
      }
      if (e.expected.regular) {
        Regularity want = *e.expected.regular ? Regularity::Regular : Regularity::NotRegular;
        CHECK(fit.regular == want);
      }
    }
}

TEST_CASE("catalog soliton expectations hold") {
  Tolerances tol;
  for (const auto& name : zoo_names())
    for (int dim : {3, 4}) {
      ZooEntry e = zoo_entry(name, dim);
      if (!e.expected.soliton) continue;
      MetricDerivs md(e.chart, e.metric);
      auto [lambda, residual] = best_lambda(md, *e.xi);
      CHECK(classify(lambda, residual, tol) == *e.expected.soliton);
      if (e.expected.lambda) CHECK(lambda == doctest::Approx(*e.expected.lambda).epsilon(1e-10));
    }
}

TEST_CASE("para-contact calculator: balanced case and general r") {
  // balance pins r = -n; for n = 4 that gives a = 1/3, b = -4/3, lambda = 3
  ParaSasakianValues v = para_sasakian_values(4);
  CHECK(v.r == -4.0);
  CHECK(v.a == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(v.b == doctest::Approx(-4.0 / 3.0).epsilon(1e-15));
  CHECK(v.lambda == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(v.cls == SolitonClass::Expanding);

  // a+b = -1 identically, so the verdict is expanding for every r and n
  for (int n : {3, 4, 5, 7})
    for (double r : {-20.0, -3.0, 0.0, 11.0}) {
      ParaSasakianValues w = para_sasakian_values(n, r);
      CHECK(w.a + w.b == doctest::Approx(-1.0).epsilon(1e-14));
      CHECK(w.lambda == doctest::Approx(static_cast<double>(n - 1)).epsilon(1e-14));
      CHECK(w.cls == SolitonClass::Expanding);
    }
  CHECK_THROWS_AS(para_sasakian_values(2), GeometryError);
}

TEST_CASE("hypersurface calculator: sign map in c + alpha^2 + alpha beta") {
  // shrinking iff c + alpha^2 + alpha*beta > 0
  QuasiUmbilicalValues v = quasi_umbilical_values({1.0, 2.0, 3.0, 3});
  CHECK(v.a == 5.0);
  CHECK(v.b == 6.0);
  CHECK(v.lambda == -22.0);
  CHECK(v.regular);
  CHECK(v.cls == SolitonClass::Shrinking);

  QuasiUmbilicalValues exp = quasi_umbilical_values({-2.0, 1.0, 0.5, 4});
  CHECK(exp.a + exp.b == doctest::Approx(-0.5));
  CHECK(exp.lambda == doctest::Approx(1.5));
  CHECK(exp.cls == SolitonClass::Expanding);

  // alpha*beta = -(c + alpha^2): not regular, no soliton verdict
  QuasiUmbilicalValues deg = quasi_umbilical_values({1.0, 1.0, -2.0, 3});
  CHECK_FALSE(deg.regular);
  CHECK(deg.cls == SolitonClass::NotASoliton);
}

TEST_CASE("submanifold calculator: regular iff the form norm differs from 1") {
  // a = (|omega0|/2)^2, b = -1/4: shrinking for |omega0| > 1, expanding below
  HopfValues big = hopf_submanifold_values({2.0, 3});
  CHECK(big.a == 1.0);
  CHECK(big.b == -0.25);
  CHECK(big.regular);
  CHECK(big.lambda == doctest::Approx(-1.5));
  CHECK(big.cls == SolitonClass::Shrinking);

  HopfValues small = hopf_submanifold_values({0.5, 3});
  CHECK(small.a == doctest::Approx(1.0 / 16.0));
  CHECK(small.regular);
  CHECK(small.lambda == doctest::Approx(2.0 * 3.0 / 16.0));
  CHECK(small.cls == SolitonClass::Expanding);

  HopfValues unit = hopf_submanifold_values({1.0, 3});
  CHECK_FALSE(unit.regular);
  CHECK(unit.cls == SolitonClass::NotASoliton);
}

TEST_CASE("counterexample entry ships the non-proportional parallel tensor") {
  ZooEntry e = zoo_entry("flat-counterexample", 3);
  REQUIRE(e.alpha);
  Env env = e.chart.bind({0.1, 0.2, 0.3});
  Mat a = e.alpha->eval_at(env);
  CHECK(a(0, 0) == 2.0);  // delta + dx1 (x) dx1
  CHECK(a(1, 1) == 1.0);
  CHECK(a(2, 2) == 1.0);
  CHECK(a(0, 1) == 0.0);
  CHECK(e.expected.regular.has_value());
  CHECK_FALSE(*e.expected.regular);
}
