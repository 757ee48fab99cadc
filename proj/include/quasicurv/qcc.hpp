#pragma once

#include <limits>

#include "quasicurv/curvature.hpp"

namespace qcv {

struct NonUnitGenerator : GeometryError {
  using GeometryError::GeometryError;
};

struct InternalConsistencyError : GeometryError {
  using GeometryError::GeometryError;
};

/// Generator field evaluated at a point: contravariant and lowered
/// components, unit-norm defect, and S(xi,xi).
struct XiEval {
  Vec up, down;
  double unit_residual = 0.0;
  double s_xi_xi = 0.0;
};

XiEval eval_xi(const CurvatureAtPoint& pt, const VectorDerivs& xi);

/// Pointwise algebraic recovery of (a, b) from the scalar curvature and
/// S(xi,xi). Valid whether or not the manifold actually carries the
/// quasi-constant-curvature form; the residual check is separate.
std::pair<double, double> fit_ab(double r, double s_xi_xi, int n);
std::pair<double, double> fit_ab(const CurvatureAtPoint& pt, const XiEval& xi);

/// Forward direction of the same algebra: (a, b, n) -> (r, S(xi,xi)).
std::pair<double, double> ab_to_curvatures(double a, double b, int n);

/// Defect of the quasi-constant-curvature form of R against the fitted
/// (a, b), max over coordinate-frame slots, relative to curvature scale.
double qcc_residual(const CurvatureAtPoint& pt, const XiEval& xi, double a, double b);

/// Residuals of the identities that follow from the curvature form:
/// R(X,Y)xi, R(X,xi)Z, the eta-Einstein shape of S, the Ricci operator,
/// and Q xi = (a+b)(n-1) xi. All relative.
struct IdentityResiduals {
  double generator_curvature = 0.0;  // R(X,Y)xi
  double generator_slot = 0.0;       // R(X,xi)Z
  double eta_einstein = 0.0;         // shape of S
  double ricci_operator = 0.0;       // shape of Q
  double generator_eigen = 0.0;      // Q xi
  double max() const;
};

IdentityResiduals check_derived_identities(const CurvatureAtPoint& pt, const XiEval& xi,
                                           double a, double b);

enum class Regularity { Regular, NotRegular, Indeterminate };

const char* to_string(Regularity r);

struct QCCPoint {
  Vec point;
  double a = 0.0, b = 0.0;
  double s_xi_xi = 0.0;
  double unit_residual = 0.0;
  double qcc_residual = 0.0;
  IdentityResiduals identities;
};

struct QCCFit {
  int n = 0;
  std::vector<QCCPoint> points;
  double max_qcc_residual = 0.0;
  double max_identity_residual = 0.0;
  double max_unit_residual = 0.0;
  double min_abs_a_plus_b = std::numeric_limits<double>::infinity();
  double mean_a = 0.0, mean_b = 0.0;
  double a_spread = 0.0, b_spread = 0.0;
  bool qcc_verified = false;
  bool constant_ab = false;
  /// |b| < tol_reg everywhere: constant curvature, the generator is not
  /// identifiable from curvature alone.
  bool b_degenerate = false;
  Regularity regular = Regularity::Indeterminate;
};

QCCFit analyze_qcc(const MetricDerivs& md, const VectorField& xi, const Tolerances& tol);

/// Classification of an already-computed fit; the strict a+b threshold with
/// an indeterminate band around it.
Regularity regularity(const QCCFit& fit, const Tolerances& tol);

/// The four equivalent formulations of regularity, evaluated independently;
/// throws InternalConsistencyError if they disagree.
struct RegularityEquivalents {
  bool nonzero_a_plus_b = false;
  bool not_semi_torse_forming = false;
  bool ricci_nondegenerate = false;
  bool q_xi_nonzero = false;
  double min_abs_a_plus_b = 0.0;
  double semi_torse_max = 0.0;    // max over frame and samples of |R(X,xi)xi|
  double min_abs_s_xi_xi = 0.0;
  double q_xi_min_norm = 0.0;
  bool all_agree() const {
    return nonzero_a_plus_b == not_semi_torse_forming &&
           nonzero_a_plus_b == ricci_nondegenerate && nonzero_a_plus_b == q_xi_nonzero;
  }
};

RegularityEquivalents regularity_equivalents(const MetricDerivs& md, const VectorField& xi,
                                             const QCCFit& fit, const Tolerances& tol);

}  // namespace qcv
