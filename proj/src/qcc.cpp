#include "quasicurv/qcc.hpp"

#include <algorithm>
#include <cmath>

namespace qcv {

XiEval eval_xi(const CurvatureAtPoint& pt, const VectorDerivs& xi) {
  const int n = pt.dim();
  XiEval out;
  out.up.resize(n);
  out.down.assign(n, 0.0);
  for (int i = 0; i < n; ++i) out.up[i] = eval(xi.up().c(i), pt.env());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.down[i] += pt.g()(i, j) * out.up[j];
  double norm = 0.0;
  for (int i = 0; i < n; ++i) norm += out.up[i] * out.down[i];
  out.unit_residual = std::abs(norm - 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.s_xi_xi += pt.ricci()(i, j) * out.up[i] * out.up[j];
  return out;
}

std::pair<double, double> fit_ab(double r, double s_xi_xi, int n) {
  if (n < 3) throw GeometryError("(a,b) recovery needs dimension >= 3");
  double denom = static_cast<double>(n - 1) * (n - 2);
  double a = (r - 2.0 * s_xi_xi) / denom;
  double b = (n * s_xi_xi - r) / denom;
  return {a, b};
}

std::pair<double, double> ab_to_curvatures(double a, double b, int n) {
  double r = (n - 1) * (n * a + 2.0 * b);
  double s_xi_xi = (a + b) * (n - 1);
  return {r, s_xi_xi};
}

std::pair<double, double> fit_ab(const CurvatureAtPoint& pt, const XiEval& xi) {
  if (xi.unit_residual > 1e-8)
    throw NonUnitGenerator("generator field is not unit at sample point");
  return fit_ab(pt.scalar(), xi.s_xi_xi, pt.dim());
}

double qcc_residual(const CurvatureAtPoint& pt, const XiEval& xi, double a, double b) {
  if (xi.unit_residual > 1e-8)
    throw NonUnitGenerator("generator field is not unit at sample point");
  const int n = pt.dim();
  const Mat& g = pt.g();
  double num = 0.0, denom = pt.curvature_scale();
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double model = a * (g(j, k) * (l == i) - g(i, k) * (l == j)) +
                         b * (g(j, k) * xi.down[i] - g(i, k) * xi.down[j]) * xi.up[l] +
                         b * xi.down[k] * (xi.down[j] * (l == i) - xi.down[i] * (l == j));
          num = std::max(num, std::abs(pt.riem(l, k, i, j) - model));
        }
  return denom > 1e-14 ? num / denom : num;
}

double IdentityResiduals::max() const {
  return std::max({generator_curvature, generator_slot, eta_einstein, ricci_operator,
                   generator_eigen});
}

IdentityResiduals check_derived_identities(const CurvatureAtPoint& pt, const XiEval& xi,
                                           double a, double b) {
  const int n = pt.dim();
  const Mat& g = pt.g();
  const Mat& s = pt.ricci();
  const double ab = a + b;
  IdentityResiduals out;

  auto rel = [](double num, double scale) { return num / (1.0 + scale); };

  // R(e_i, e_j) xi
  {
    double num = 0.0, scale = 0.0;
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double lhs = 0.0;
          for (int k = 0; k < n; ++k) lhs += pt.riem(l, k, i, j) * xi.up[k];
          double rhs = ab * (xi.down[j] * (l == i) - xi.down[i] * (l == j));
          num = std::max(num, std::abs(lhs - rhs));
          scale = std::max(scale, std::abs(lhs));
        }
    out.generator_curvature = rel(num, scale);
  }

  // R(e_i, xi) e_k
  {
    double num = 0.0, scale = 0.0;
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          double lhs = 0.0;
          for (int m = 0; m < n; ++m) lhs += pt.riem(l, k, i, m) * xi.up[m];
          double rhs = ab * (xi.down[k] * (l == i) - g(i, k) * xi.up[l]);
          num = std::max(num, std::abs(lhs - rhs));
          scale = std::max(scale, std::abs(lhs));
        }
    out.generator_slot = rel(num, scale);
  }

  // S = [a(n-1)+b] g + b(n-2) eta (x) eta
  {
    double num = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double rhs = (a * (n - 1) + b) * g(i, j) + b * (n - 2) * xi.down[i] * xi.down[j];
        num = std::max(num, std::abs(s(i, j) - rhs));
        scale = std::max(scale, std::abs(s(i, j)));
      }
    out.eta_einstein = rel(num, scale);
  }

  // Q X = [a(n-1)+b] X + b(n-2) eta(X) xi
  {
    double num = 0.0, scale = 0.0;
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i) {
        double q = 0.0;
        for (int m = 0; m < n; ++m) q += pt.ginv()(l, m) * s(m, i);
        double rhs = (a * (n - 1) + b) * (l == i) + b * (n - 2) * xi.down[i] * xi.up[l];
        num = std::max(num, std::abs(q - rhs));
        scale = std::max(scale, std::abs(q));
      }
    out.ricci_operator = rel(num, scale);
  }

  // Q xi = (a+b)(n-1) xi
  {
    double num = 0.0, scale = 0.0;
    for (int l = 0; l < n; ++l) {
      double q = 0.0;
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) q += pt.ginv()(l, m) * s(m, k) * xi.up[k];
      double rhs = ab * (n - 1) * xi.up[l];
      num = std::max(num, std::abs(q - rhs));
      scale = std::max(scale, std::abs(q));
    }
    out.generator_eigen = rel(num, scale);
  }

  return out;
}

const char* to_string(Regularity r) {
  switch (r) {
    case Regularity::Regular: return "regular";
    case Regularity::NotRegular: return "not-regular";
    case Regularity::Indeterminate: return "indeterminate";
  }
  return "?";
}

Regularity regularity(const QCCFit& fit, const Tolerances& tol) {
  // strict threshold with an indeterminate band just above it
  if (fit.min_abs_a_plus_b <= tol.tol_reg) return Regularity::NotRegular;
  if (fit.min_abs_a_plus_b > 10.0 * tol.tol_reg) return Regularity::Regular;
  return Regularity::Indeterminate;
}

QCCFit analyze_qcc(const MetricDerivs& md, const VectorField& xi, const Tolerances& tol) {
  QCCFit fit;
  fit.n = md.dim();
  VectorDerivs xid(md, xi);

  double min_a = std::numeric_limits<double>::infinity(), max_a = -min_a;
  double min_b = min_a, max_b = -min_a;
  double max_abs_b = 0.0;
  double sum_a = 0.0, sum_b = 0.0;

  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    XiEval xe = eval_xi(pt, xid);
    auto [a, b] = fit_ab(pt, xe);

    QCCPoint qp;
    qp.point = p;
    qp.a = a;
    qp.b = b;
    qp.s_xi_xi = xe.s_xi_xi;
    qp.unit_residual = xe.unit_residual;
    qp.qcc_residual = qcc_residual(pt, xe, a, b);
    qp.identities = check_derived_identities(pt, xe, a, b);

    fit.max_qcc_residual = std::max(fit.max_qcc_residual, qp.qcc_residual);
    fit.max_identity_residual = std::max(fit.max_identity_residual, qp.identities.max());
    fit.max_unit_residual = std::max(fit.max_unit_residual, xe.unit_residual);
    fit.min_abs_a_plus_b = std::min(fit.min_abs_a_plus_b, std::abs(a + b));
    min_a = std::min(min_a, a);
    max_a = std::max(max_a, a);
    min_b = std::min(min_b, b);
    max_b = std::max(max_b, b);
    max_abs_b = std::max(max_abs_b, std::abs(b));
    sum_a += a;
    sum_b += b;
    fit.points.push_back(std::move(qp));
  }

  const std::size_t npts = fit.points.size();
  fit.mean_a = sum_a / npts;
  fit.mean_b = sum_b / npts;
  fit.a_spread = max_a - min_a;
  fit.b_spread = max_b - min_b;
  fit.qcc_verified = fit.max_qcc_residual <= tol.tol_claim;
  fit.constant_ab = fit.a_spread <= tol.tol_claim * (1.0 + std::abs(fit.mean_a)) &&
                    fit.b_spread <= tol.tol_claim * (1.0 + std::abs(fit.mean_b));
  fit.b_degenerate = max_abs_b < tol.tol_reg;
  fit.regular = regularity(fit, tol);
  return fit;
}

RegularityEquivalents regularity_equivalents(const MetricDerivs& md, const VectorField& xi,
                                             const QCCFit& fit, const Tolerances& tol) {
  RegularityEquivalents out;
  out.min_abs_a_plus_b = fit.min_abs_a_plus_b;

  VectorDerivs xid(md, xi);
  const int n = md.dim();
  double semi_torse = 0.0;
  double min_sxx = std::numeric_limits<double>::infinity();
  double min_qxi = min_sxx;
  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    XiEval xe = eval_xi(pt, xid);
    // R(e_i, xi) xi
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        double v = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) v += pt.riem(l, k, i, j) * xe.up[j] * xe.up[k];
        semi_torse = std::max(semi_torse, std::abs(v));
      }
    min_sxx = std::min(min_sxx, std::abs(xe.s_xi_xi));
    double qxi = 0.0;
    for (int l = 0; l < n; ++l) {
      double v = 0.0;
      for (int m = 0; m < n; ++m)
        for (int k = 0; k < n; ++k) v += pt.ginv()(l, m) * pt.ricci()(m, k) * xe.up[k];
      qxi = std::max(qxi, std::abs(v));
    }
    min_qxi = std::min(min_qxi, qxi);
  }
  out.semi_torse_max = semi_torse;
  out.min_abs_s_xi_xi = min_sxx;
  out.q_xi_min_norm = min_qxi;

  out.nonzero_a_plus_b = fit.min_abs_a_plus_b > tol.tol_reg;
  out.not_semi_torse_forming = semi_torse > tol.tol_reg;
  out.ricci_nondegenerate = min_sxx > tol.tol_reg;
  out.q_xi_nonzero = min_qxi > tol.tol_reg;

  if (!out.all_agree())
    throw InternalConsistencyError(
        "regularity equivalents disagree; engine bug or input is not of "
        "quasi-constant curvature");
  return out;
}

}  // namespace qcv
