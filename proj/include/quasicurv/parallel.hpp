#pragma once

#include "quasicurv/qcc.hpp"

namespace qcv {

/// Result of checking a candidate parallel symmetric tensor against the
/// proportionality conclusion (alpha = alpha(xi,xi) g on regular inputs).
struct ParallelReport {
  double parallel_residual = 0.0;        // max |nabla alpha| / |alpha|
  double alpha_xi_xi_mean = 0.0;
  double alpha_xi_xi_spread = 0.0;       // max-min over samples
  double generator_alignment_residual = 0.0;  // alpha(Y,xi) - eta(Y) alpha(xi,xi)
  double proportionality_residual = 0.0;      // max |alpha - alpha(xi,xi) g|
  double commutation_residual = 0.0;
  double xi_orthogonality_residual = 0.0;     // max |g(nabla_X xi, xi)|
  bool is_parallel = false;
  bool regular = false;
  bool conclusion_guaranteed = false;    // parallel on a regular verified input
  bool proportional = false;
};

/// max over samples and indices of |nabla_k alpha_ij|, normalized by the
/// largest component of alpha.
double parallel_residual(const MetricDerivs& md, const SymTensor2Field& alpha);

/// max over frame slots of |alpha(R(X,Y)Z, W) + alpha(Z, R(X,Y)W)| at a
/// point; vanishes for parallel alpha.
double commutation_residual(const CurvatureAtPoint& pt, const Mat& alpha_vals);

/// Full check of the "parallel implies constant multiple of g" conclusion on
/// a candidate tensor. Runs regardless of regularity; when the input is not
/// regular the conclusion is reported as not guaranteed rather than asserted.
ParallelReport verify_parallel_proportionality(const MetricDerivs& md, const VectorField& xi,
                                               const SymTensor2Field& alpha, const QCCFit& fit,
                                               const Tolerances& tol);

}  // namespace qcv
