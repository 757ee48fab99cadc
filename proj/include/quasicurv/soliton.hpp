#pragma once

#include <optional>

#include "quasicurv/qcc.hpp"

namespace qcv {

enum class SolitonClass { Shrinking, Steady, Expanding, NotASoliton };

const char* to_string(SolitonClass c);

struct SolitonReport {
  double lambda = 0.0;
  std::optional<double> mu;
  double residual = 0.0;
  SolitonClass cls = SolitonClass::NotASoliton;
  double s_xi_xi = 0.0;
  std::optional<double> lambda_theorem;  // -S(xi,xi) when V is the unit generator
};

/// max over samples of the normalized inf-norm of L_V g + 2S + 2 lambda g.
double soliton_residual(const MetricDerivs& md, const VectorField& v, double lambda);

/// Same with the extra 2 mu eta (x) eta term; xi must be unit.
double eta_soliton_residual(const MetricDerivs& md, const VectorField& v,
                            const VectorField& xi, double lambda, double mu);

/// Sum over samples of the squared g-norm of the defect tensor; the quadratic
/// objective that best_lambda minimizes in closed form.
double soliton_quadratic_objective(const MetricDerivs& md, const VectorField& v, double lambda);

/// Closed-form least-squares lambda and the residual it achieves.
std::pair<double, double> best_lambda(const MetricDerivs& md, const VectorField& v);

SolitonClass classify(double lambda, double residual, const Tolerances& tol);

/// Geodesic-generator condition and the scalar balance constraint that a
/// soliton with V = xi must satisfy when n >= 4 and b != 0. a and b are
/// supplied as expressions so their derivative along xi is exact.
struct GeneratorBalanceReport {
  double geodesic_norm = 0.0;     // max |nabla_xi xi|
  double balance_defect = 0.0;    // xi(a+b)/4b + a(n-1) + b - (a+b)/(n-1)
  double lambda_defect = 0.0;     // same expression with lambda = -S(xi,xi) added
  double lambda_mean = 0.0;
};

GeneratorBalanceReport geodesic_generator_check(const MetricDerivs& md, const VectorField& xi,
                                                const Expr& a_expr, const Expr& b_expr,
                                                const Tolerances& tol);

// torse-forming analysis ----------------------------------------------------

enum class TorseClass { Generic, ConcircularCandidate, KenmotsuType, Geodesic, NotTorseForming };

const char* to_string(TorseClass c);

struct TorseFormingFit {
  std::vector<double> f;          // per sample
  double f_mean = 0.0, f_spread = 0.0;
  std::vector<Vec> omega;         // covariant components per sample
  double fit_residual = 0.0;      // defect of nabla xi = f I + xi (x) omega
  double geodesic_norm = 0.0;     // max |nabla_xi xi|
  double omega_plus_f_eta_max = 0.0;
  double closedness_residual = 0.0;  // max |d omega| from the symbolic reconstruction
  TorseClass subclass = TorseClass::Generic;
  bool geodesic = false;
};

/// Pointwise least-squares fit of (f, omega) against the gradient matrix
/// A_i^j = (nabla_i xi)^j. Exposed so planted inputs can be fed directly.
std::pair<double, Vec> fit_torse_matrix(const std::vector<double>& grad, const Vec& xi_up, int n);

TorseFormingFit torse_forming_detect(const MetricDerivs& md, const VectorField& xi,
                                     const Tolerances& tol);

/// Checks the consequences of the omega = -f eta subclass: a+b = -f^2 with f
/// a nonzero constant on regular inputs, forcing any soliton to be expanding.
struct KenmotsuReport {
  double ab_plus_f2_max = 0.0;
  double f_spread = 0.0;
  bool regular = false;
  bool theorem_applies = false;  // regular and |f| above threshold
  double lambda_theorem = 0.0;   // (n-1) f^2
  SolitonClass cls = SolitonClass::NotASoliton;
};

KenmotsuReport kenmotsu_type_check(const MetricDerivs& md, const VectorField& xi,
                                   const TorseFormingFit& torse, const QCCFit& fit,
                                   const Tolerances& tol);

}  // namespace qcv
