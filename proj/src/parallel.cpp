#include "quasicurv/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace qcv {

double parallel_residual(const MetricDerivs& md, const SymTensor2Field& alpha) {
  SymTensorDerivs ad(md.chart(), alpha);
  const int n = md.dim();
  double num = 0.0, scale = 0.0;
  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    Mat av = ad.eval_at(pt.env());
    scale = std::max(scale, inf_norm(av));
    std::vector<double> cd = cov_deriv_sym2(pt, ad);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          num = std::max(num, std::abs(cd[(k * n + i) * n + j]));
  }
  return scale > 1e-14 ? num / scale : num;
}

double commutation_residual(const CurvatureAtPoint& pt, const Mat& alpha_vals) {
  const int n = pt.dim();
  double num = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int m = 0; m < n; ++m)
            v += pt.riem(m, k, i, j) * alpha_vals(m, l) + pt.riem(m, l, i, j) * alpha_vals(k, m);
          num = std::max(num, std::abs(v));
        }
  double scale = pt.curvature_scale() * inf_norm(alpha_vals);
  return num / (1.0 + scale);
}

ParallelReport verify_parallel_proportionality(const MetricDerivs& md, const VectorField& xi,
                                               const SymTensor2Field& alpha, const QCCFit& fit,
                                               const Tolerances& tol) {
  ParallelReport rep;
  rep.regular = fit.regular == Regularity::Regular;

  const int n = md.dim();
  SymTensorDerivs ad(md.chart(), alpha);
  VectorDerivs xid(md, xi);

  double num_par = 0.0, scale = 0.0;
  double axx_min = std::numeric_limits<double>::infinity(), axx_max = -axx_min, axx_sum = 0.0;
  std::size_t npts = 0;

  struct PtData {
    Mat av;
    XiEval xe;
  };
  std::vector<PtData> pds;

  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    Mat av = ad.eval_at(pt.env());
    XiEval xe = eval_xi(pt, xid);
    scale = std::max(scale, inf_norm(av));

    std::vector<double> cd = cov_deriv_sym2(pt, ad);
    for (double v : cd) num_par = std::max(num_par, std::abs(v));

    double axx = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) axx += av(i, j) * xe.up[i] * xe.up[j];
    axx_min = std::min(axx_min, axx);
    axx_max = std::max(axx_max, axx);
    axx_sum += axx;
    ++npts;

    rep.commutation_residual = std::max(rep.commutation_residual, commutation_residual(pt, av));

    // alpha(Y, xi) = eta(Y) alpha(xi,xi) per frame direction
    for (int i = 0; i < n; ++i) {
      double ayx = 0.0;
      for (int j = 0; j < n; ++j) ayx += av(i, j) * xe.up[j];
      rep.generator_alignment_residual = std::max(
          rep.generator_alignment_residual, std::abs(ayx - xe.down[i] * axx));
    }

    // proportionality defect alpha - alpha(xi,xi) g
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rep.proportionality_residual =
            std::max(rep.proportionality_residual, std::abs(av(i, j) - axx * pt.g()(i, j)));

    // g(nabla_X xi, xi) must vanish for unit xi
    std::vector<double> gx = grad_vector(pt, xid);
    for (int i = 0; i < n; ++i) {
      double v = 0.0;
      for (int j = 0; j < n; ++j) v += gx[i * n + j] * xe.down[j];
      rep.xi_orthogonality_residual = std::max(rep.xi_orthogonality_residual, std::abs(v));
    }
  }

  rep.parallel_residual = scale > 1e-14 ? num_par / scale : num_par;
  rep.alpha_xi_xi_mean = axx_sum / static_cast<double>(npts);
  rep.alpha_xi_xi_spread = axx_max - axx_min;
  rep.is_parallel = rep.parallel_residual <= tol.tol_claim;
  rep.proportional =
      rep.proportionality_residual <= tol.tol_claim * (1.0 + std::abs(rep.alpha_xi_xi_mean));
  rep.conclusion_guaranteed = rep.is_parallel && rep.regular && fit.qcc_verified;
  return rep;
}

}  // namespace qcv
