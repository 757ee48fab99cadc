#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "quasicurv/qcc.hpp"
#include "quasicurv/zoo.hpp"

using namespace qcv;

namespace {

struct Setup {
  MetricDerivs md;
  VectorField xi;
  explicit Setup(ZooEntry e) : md(e.chart, e.metric), xi(*e.xi) {}
};

Setup setup(const std::string& name, int dim = 3) { return Setup(zoo_entry(name, dim)); }

}  // namespace

TEST_CASE("algebraic (a, b) recovery from scalar invariants") {
  // hand-checked: n=4, r=42, S(xi,xi)=15 gives a = (42-30)/6 = 2, b = (60-42)/6 = 3
  auto [a, b] = fit_ab(42.0, 15.0, 4);
  CHECK(a == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(b == doctest::Approx(3.0).epsilon(1e-14));
  // and forward: r = (n-1)(na + 2b), S(xi,xi) = (a+b)(n-1)
  auto [r, sxx] = ab_to_curvatures(2.0, 3.0, 4);
  CHECK(r == doctest::Approx(42.0).epsilon(1e-14));
  CHECK(sxx == doctest::Approx(15.0).epsilon(1e-14));
}

TEST_CASE("recovery round-trip is exact on random triples") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> un(3, 8);
  for (int trial = 0; trial < 1000; ++trial) {
    double a = u(rng), b = u(rng);
    int n = un(rng);
    auto [r, sxx] = ab_to_curvatures(a, b, n);
    auto [a2, b2] = fit_ab(r, sxx, n);
    CHECK(std::abs(a2 - a) <= 1e-12 * (1.0 + std::abs(a)));
    CHECK(std::abs(b2 - b) <= 1e-12 * (1.0 + std::abs(b)));
  }
}

TEST_CASE("model spaces fit their known (a, b)") {
  struct Case {
    const char* name;
    int n;
    double a, b;
  } cases[] = {{"flat", 3, 0, 0},    {"sphere", 3, 1, 0},         {"sphere", 4, 1, 0},
               {"hyperbolic-ball", 3, -1, 0}, {"warped-exp-flat", 3, -1, 0}};
  Tolerances tol;
  for (const auto& c : cases) {
    Setup s = setup(c.name, c.n);
    QCCFit fit = analyze_qcc(s.md, s.xi, tol);
    CHECK(fit.qcc_verified);
    CHECK(fit.constant_ab);
    CHECK(fit.mean_a == doctest::Approx(c.a).epsilon(1e-9).scale(1.0));
    CHECK(fit.mean_b == doctest::Approx(c.b).epsilon(1e-9).scale(1.0));
    CHECK(fit.max_qcc_residual <= 1e-9);
    CHECK(fit.max_identity_residual <= 1e-9);
    CHECK(fit.max_unit_residual <= 1e-9);
  }
}

TEST_CASE("warped metric over a round fiber: position-dependent (a, b)") {
  Setup s = setup("warped-exp-sphere", 3);
  ZooEntry e = zoo_entry("warped-exp-sphere", 3);
  Tolerances tol;
  QCCFit fit = analyze_qcc(s.md, s.xi, tol);
  CHECK(fit.qcc_verified);
  CHECK_FALSE(fit.constant_ab);
  CHECK_FALSE(fit.b_degenerate);
  for (const auto& qp : fit.points) {
    Env env = s.md.chart().bind(qp.point);
    CHECK(std::abs(qp.a - eval(*e.expected.a, env)) <= 1e-7);
    CHECK(std::abs(qp.b - eval(*e.expected.b, env)) <= 1e-7);
    // a + b = -1 for this family, independent of position
    CHECK(qp.a + qp.b == doctest::Approx(-1.0).epsilon(1e-9));
  }
  CHECK(fit.max_qcc_residual <= 1e-9);
  CHECK(fit.max_identity_residual <= 1e-9);
}

TEST_CASE("curvature-form residual rejects wrong coefficients") {
  Setup s = setup("sphere", 3);
  Vec p = {0.2, -0.1, 0.3};
  CurvatureAtPoint pt(s.md, p);
  VectorDerivs vd(s.md, s.xi);
  XiEval xe = eval_xi(pt, vd);
  CHECK(qcc_residual(pt, xe, 1.0, 0.0) <= 1e-12);
  CHECK(qcc_residual(pt, xe, 2.0, 0.0) >= 0.5);   // double the curvature
  CHECK(qcc_residual(pt, xe, 0.0, 0.0) >= 0.5);   // pretend it is flat
  CHECK(qcc_residual(pt, xe, 1.0, 0.5) > 1e-2);   // spurious generator term
}

TEST_CASE("derived identity residuals are reported per family") {
  Setup s = setup("warped-exp-sphere", 3);
  Vec p = {0.2, -0.1, 0.3};
  CurvatureAtPoint pt(s.md, p);
  VectorDerivs vd(s.md, s.xi);
  XiEval xe = eval_xi(pt, vd);
  auto [a, b] = fit_ab(pt, xe);
  IdentityResiduals res = check_derived_identities(pt, xe, a, b);
  CHECK(res.generator_curvature <= 1e-10);
  CHECK(res.generator_slot <= 1e-10);
  CHECK(res.eta_einstein <= 1e-10);
  CHECK(res.ricci_operator <= 1e-10);
  CHECK(res.generator_eigen <= 1e-10);
  CHECK(res.max() <= 1e-10);
  // wrong coefficients break the identities
  IdentityResiduals bad = check_derived_identities(pt, xe, a + 1.0, b);
  CHECK(bad.max() > 1e-2);
}

TEST_CASE("non-unit generator is rejected") {
  Setup s = setup("gaussian-shrinker", 3);  // position field, |V| != 1
  Tolerances tol;
  CHECK_THROWS_AS(analyze_qcc(s.md, s.xi, tol), NonUnitGenerator);
}

TEST_CASE("regularity classification") {
  Tolerances tol;
  CHECK(to_string(Regularity::Regular) == std::string("regular"));

  QCCFit fit;
  fit.min_abs_a_plus_b = 0.0;
  CHECK(regularity(fit, tol) == Regularity::NotRegular);
  fit.min_abs_a_plus_b = 0.5;
  CHECK(regularity(fit, tol) == Regularity::Regular);
  fit.min_abs_a_plus_b = 3e-6;  // inside the buffer band above tol_reg
  CHECK(regularity(fit, tol) == Regularity::Indeterminate);

  Setup flat = setup("flat", 3);
  CHECK(analyze_qcc(flat.md, flat.xi, tol).regular == Regularity::NotRegular);
  Setup sph = setup("sphere", 3);
  CHECK(analyze_qcc(sph.md, sph.xi, tol).regular == Regularity::Regular);
}

TEST_CASE("four equivalent regularity formulations agree") {
  Tolerances tol;
  for (const char* name : {"flat", "sphere", "hyperbolic-ball", "warped-exp-flat",
                           "warped-exp-sphere"}) {
    Setup s = setup(name, 3);
    QCCFit fit = analyze_qcc(s.md, s.xi, tol);
    RegularityEquivalents eq = regularity_equivalents(s.md, s.xi, fit, tol);
    CHECK(eq.all_agree());
    bool expect = std::string(name) != "flat";
    CHECK(eq.nonzero_a_plus_b == expect);
    CHECK(eq.not_semi_torse_forming == expect);
    CHECK(eq.ricci_nondegenerate == expect);
    CHECK(eq.q_xi_nonzero == expect);
  }
}

TEST_CASE("flat space with a parallel generator: every formulation is false") {
  // the generator d/dx1 is parallel, hence semi-torse-forming, and a+b = 0
  Setup s = setup("flat", 3);
  Tolerances tol;
  QCCFit fit = analyze_qcc(s.md, s.xi, tol);
  RegularityEquivalents eq = regularity_equivalents(s.md, s.xi, fit, tol);
  CHECK_FALSE(eq.nonzero_a_plus_b);
  CHECK_FALSE(eq.not_semi_torse_forming);
  CHECK_FALSE(eq.ricci_nondegenerate);
  CHECK_FALSE(eq.q_xi_nonzero);
  CHECK(eq.semi_torse_max <= 1e-12);
  CHECK(eq.min_abs_s_xi_xi <= 1e-12);
  CHECK(eq.q_xi_min_norm <= 1e-12);
}

TEST_CASE("curvature-derivative symmetry classes") {
  // constant curvature: locally symmetric, hence Ricci semi-symmetric
  MetricDerivs sph = MetricDerivs(zoo_entry("sphere", 3).chart, zoo_entry("sphere", 3).metric);
  Vec p = {0.15, 0.22, -0.31};
  CHECK(local_symmetry_residual(sph, p) <= 1e-10);
  CHECK(ricci_semisym_residual(sph, p) <= 1e-10);
  // warped over a round fiber: neither
  ZooEntry w = zoo_entry("warped-exp-sphere", 3);
  MetricDerivs wmd(w.chart, w.metric);
  CHECK(local_symmetry_residual(wmd, p) > 1e-3);
  CHECK(ricci_semisym_residual(wmd, p) > 1e-3);
}
