#pragma once

#include "quasicurv/soliton.hpp"

namespace qcv {

/// Built-in example manifolds; each is available in dimensions 3 and 4 and
/// doubles as the acceptance-test corpus. Expected values carry a note
/// saying how they were derived; the test suite re-verifies them against the
/// engine.
struct ZooExpected {
  std::optional<Expr> a, b;  // closed forms over the chart coordinates
  std::optional<bool> regular;
  std::optional<SolitonClass> soliton;
  std::optional<double> lambda;
  std::string note;
};

struct ZooEntry {
  std::string name;
  Chart chart;
  MetricField metric;
  std::optional<VectorField> xi;       // generator, or soliton field V
  std::optional<SymTensor2Field> alpha;
  ZooExpected expected;
};

std::vector<std::string> zoo_names();
ZooEntry zoo_entry(const std::string& name, int dim = 3);

// parameter-level example calculators ---------------------------------------

/// Para-contact example with constant scalar curvature: (a, b) from r, and
/// the always-expanding soliton verdict. Passing no r applies the balance
/// constraint, which pins r = -n.
struct ParaSasakianValues {
  double r = 0.0, a = 0.0, b = 0.0, lambda = 0.0;
  SolitonClass cls = SolitonClass::NotASoliton;
};
ParaSasakianValues para_sasakian_values(int n, std::optional<double> r = std::nullopt);

/// Quasi-umbilical hypersurface of a space form of curvature c with shape
/// coefficients alpha, beta.
struct QuasiUmbilicalParams {
  double c = 0.0, alpha = 0.0, beta = 0.0;
  int n = 3;
};
struct QuasiUmbilicalValues {
  double a = 0.0, b = 0.0, lambda = 0.0;
  bool regular = false;
  SolitonClass cls = SolitonClass::NotASoliton;
};
QuasiUmbilicalValues quasi_umbilical_values(const QuasiUmbilicalParams& p);

/// Totally geodesic anti-invariant submanifold of a generalized Hopf
/// manifold with Lee form omega0.
struct HopfParams {
  double omega0_norm = 0.0;
  int n = 3;
};
struct HopfValues {
  double a = 0.0, b = 0.0, lambda = 0.0;
  bool regular = false;
  SolitonClass cls = SolitonClass::NotASoliton;
};
HopfValues hopf_submanifold_values(const HopfParams& p);

}  // namespace qcv
