#include "quasicurv/soliton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qcv {

const char* to_string(SolitonClass c) {
  switch (c) {
    case SolitonClass::Shrinking: return "shrinking";
    case SolitonClass::Steady: return "steady";
    case SolitonClass::Expanding: return "expanding";
    case SolitonClass::NotASoliton: return "not-a-soliton";
  }
  return "?";
}

const char* to_string(TorseClass c) {
  switch (c) {
    case TorseClass::Generic: return "generic";
    case TorseClass::ConcircularCandidate: return "concircular-candidate";
    case TorseClass::KenmotsuType: return "kenmotsu-type";
    case TorseClass::Geodesic: return "geodesic";
    case TorseClass::NotTorseForming: return "not-torse-forming";
  }
  return "?";
}

namespace {

/// defect tensor L_V g + 2S + 2 lambda g (+ 2 mu eta (x) eta) and the scale
/// of its constituent terms at one point
struct Defect {
  Mat t;
  double scale = 0.0;
};

Defect defect_at(const CurvatureAtPoint& pt, const VectorDerivs& vd, double lambda,
                 const XiEval* xi, double mu) {
  const int n = pt.dim();
  Mat lie = lie_derivative_metric(pt, vd);
  Defect d;
  d.t = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double l2s = 2.0 * pt.ricci()(i, j);
      double l2g = 2.0 * lambda * pt.g()(i, j);
      double eta2 = xi ? 2.0 * mu * xi->down[i] * xi->down[j] : 0.0;
      d.t(i, j) = lie(i, j) + l2s + l2g + eta2;
      d.scale = std::max({d.scale, std::abs(lie(i, j)), std::abs(l2s), std::abs(l2g),
                          std::abs(eta2)});
    }
  return d;
}

}  // namespace

double soliton_residual(const MetricDerivs& md, const VectorField& v, double lambda) {
  VectorDerivs vd(md, v);
  double num = 0.0, scale = 0.0;
  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    Defect d = defect_at(pt, vd, lambda, nullptr, 0.0);
    num = std::max(num, inf_norm(d.t));
    scale = std::max(scale, d.scale);
  }
  return scale > 1e-14 ? num / scale : num;
}

double eta_soliton_residual(const MetricDerivs& md, const VectorField& v,
                            const VectorField& xi, double lambda, double mu) {
  VectorDerivs vd(md, v);
  VectorDerivs xid(md, xi);
  double num = 0.0, scale = 0.0;
  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    XiEval xe = eval_xi(pt, xid);
    if (xe.unit_residual > 1e-8)
      throw NonUnitGenerator("eta-soliton residual needs a unit generator");
    Defect d = defect_at(pt, vd, lambda, &xe, mu);
    num = std::max(num, inf_norm(d.t));
    scale = std::max(scale, d.scale);
  }
  return scale > 1e-14 ? num / scale : num;
}

double soliton_quadratic_objective(const MetricDerivs& md, const VectorField& v, double lambda) {
  VectorDerivs vd(md, v);
  double sum = 0.0;
  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    Defect d = defect_at(pt, vd, lambda, nullptr, 0.0);
    const int n = pt.dim();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l)
            sum += pt.ginv()(i, k) * pt.ginv()(j, l) * d.t(i, j) * d.t(k, l);
  }
  return sum;
}

std::pair<double, double> best_lambda(const MetricDerivs& md, const VectorField& v) {
  VectorDerivs vd(md, v);
  const int n = md.dim();
  double trace_sum = 0.0;
  std::size_t npts = 0;
  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    Mat lie = lie_derivative_metric(pt, vd);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        trace_sum += pt.ginv()(i, j) * (lie(i, j) + 2.0 * pt.ricci()(i, j));
    ++npts;
  }
  double lambda = -trace_sum / (2.0 * n * static_cast<double>(npts));
  return {lambda, soliton_residual(md, v, lambda)};
}

SolitonClass classify(double lambda, double residual, const Tolerances& tol) {
  if (residual > tol.tol_claim) return SolitonClass::NotASoliton;
  if (std::abs(lambda) <= tol.tol_claim) return SolitonClass::Steady;
  return lambda < 0.0 ? SolitonClass::Shrinking : SolitonClass::Expanding;
}

GeneratorBalanceReport geodesic_generator_check(const MetricDerivs& md, const VectorField& xi,
                                                const Expr& a_expr, const Expr& b_expr,
                                                const Tolerances& tol) {
  const int n = md.dim();
  if (n < 4) throw GeometryError("balance constraint needs dimension >= 4");
  VectorDerivs xid(md, xi);

  Expr apb = simplify(a_expr + b_expr);
  std::vector<Expr> dapb(n);
  for (int k = 0; k < n; ++k) dapb[k] = simplify(diff(apb, md.chart().coords[k]));

  GeneratorBalanceReport rep;
  double lambda_sum = 0.0;
  std::size_t npts = 0;
  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    XiEval xe = eval_xi(pt, xid);
    double a = eval(a_expr, pt.env());
    double b = eval(b_expr, pt.env());
    if (std::abs(b) <= tol.tol_reg)
      throw GeometryError("balance constraint singular: division by 4b with b ~ 0");

    double xi_apb = 0.0;
    for (int k = 0; k < n; ++k) xi_apb += xe.up[k] * eval(dapb[k], pt.env());
    double term = xi_apb / (4.0 * b) + a * (n - 1) + b;
    rep.balance_defect = std::max(rep.balance_defect, std::abs(term - (a + b) / (n - 1)));
    double lambda = -xe.s_xi_xi;
    rep.lambda_defect = std::max(rep.lambda_defect, std::abs(term + lambda));
    lambda_sum += lambda;
    ++npts;

    std::vector<double> gx = grad_vector(pt, xid);
    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += xe.up[i] * gx[i * n + j];
      rep.geodesic_norm = std::max(rep.geodesic_norm, std::abs(v));
    }
  }
  rep.lambda_mean = lambda_sum / static_cast<double>(npts);
  return rep;
}

// ---------------------------------------------------------------------------
// torse-forming analysis

std::pair<double, Vec> fit_torse_matrix(const std::vector<double>& grad, const Vec& xi_up,
                                        int n) {
  // rows: one equation per (i,j); unknowns (f, omega_0 .. omega_{n-1})
  Mat a(n * n, n + 1);
  Vec b(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int row = i * n + j;
      a(row, 0) = (i == j) ? 1.0 : 0.0;
      a(row, 1 + i) = xi_up[j];
      b[row] = grad[i * n + j];
    }
  Vec x = lstsq(a, b);
  double f = x[0];
  Vec omega(x.begin() + 1, x.end());
  return {f, omega};
}

namespace {

/// det(g) as an expression (Leibniz expansion; n <= 4 here so this stays small)
Expr metric_det_sym(const MetricField& g) {
  const int n = g.dim;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Expr det = constant(0.0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Expr term = constant(inversions % 2 == 0 ? 1.0 : -1.0);
    for (int i = 0; i < n; ++i) term = term * g.at(i, perm[i]);
    det = det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return simplify(det);
}

}  // namespace

TorseFormingFit torse_forming_detect(const MetricDerivs& md, const VectorField& xi,
                                     const Tolerances& tol) {
  const int n = md.dim();
  VectorDerivs xid(md, xi);
  TorseFormingFit out;

  // symbolic reconstruction of f and omega, valid on the torse-forming locus:
  // f = div(xi)/(n-1) with div(xi) = d_i xi^i + xi^m d_m log sqrt(det g),
  // omega = -f eta. Used for the closedness (d omega) check.
  Expr det = metric_det_sym(md.metric());
  Expr div_xi = constant(0.0);
  for (int i = 0; i < n; ++i) div_xi = div_xi + diff(xi.comp[i], md.chart().coords[i]);
  for (int m = 0; m < n; ++m)
    div_xi = div_xi + xi.comp[m] * diff(det, md.chart().coords[m]) / (constant(2.0) * det);
  Expr f_sym = simplify(div_xi / constant(static_cast<double>(n - 1)));
  std::vector<Expr> omega_sym(n);
  for (int i = 0; i < n; ++i) {
    Expr eta_i = constant(0.0);
    for (int j = 0; j < n; ++j) eta_i = eta_i + md.g_sym(i, j) * xi.comp[j];
    omega_sym[i] = simplify(-(f_sym * eta_i));
  }
  std::vector<Expr> domega;  // (i,j) -> d_i omega_j - d_j omega_i
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      domega.push_back(simplify(diff(omega_sym[j], md.chart().coords[i]) -
                                diff(omega_sym[i], md.chart().coords[j])));

  double f_min = std::numeric_limits<double>::infinity(), f_max = -f_min, f_sum = 0.0;
  double fit_num = 0.0, fit_scale = 0.0;
  double omega_scale = 0.0;

  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    XiEval xe = eval_xi(pt, xid);
    if (xe.unit_residual > 1e-8)
      throw NonUnitGenerator("torse-forming detection needs a unit generator");

    std::vector<double> grad = grad_vector(pt, xid);
    auto [f, omega] = fit_torse_matrix(grad, xe.up, n);
    out.f.push_back(f);
    f_min = std::min(f_min, f);
    f_max = std::max(f_max, f);
    f_sum += f;

    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double model = f * (i == j) + omega[i] * xe.up[j];
        fit_num = std::max(fit_num, std::abs(grad[i * n + j] - model));
        fit_scale = std::max(fit_scale, std::abs(grad[i * n + j]));
      }

    for (int i = 0; i < n; ++i) {
      out.omega_plus_f_eta_max =
          std::max(out.omega_plus_f_eta_max, std::abs(omega[i] + f * xe.down[i]));
      omega_scale = std::max(omega_scale, std::abs(omega[i]));
    }

    for (int j = 0; j < n; ++j) {
      double v = 0.0;
      for (int i = 0; i < n; ++i) v += xe.up[i] * grad[i * n + j];
      out.geodesic_norm = std::max(out.geodesic_norm, std::abs(v));
    }

    for (const Expr& e : domega)
      out.closedness_residual = std::max(out.closedness_residual, std::abs(eval(e, pt.env())));

    out.omega.push_back(std::move(omega));
  }

  const std::size_t npts = out.f.size();
  out.f_mean = f_sum / static_cast<double>(npts);
  out.f_spread = f_max - f_min;
  out.fit_residual = fit_num / (1.0 + fit_scale);
  out.geodesic = out.geodesic_norm <= tol.tol_claim;

  double fscale = std::max(std::abs(out.f_mean), 1.0);
  if (out.fit_residual > tol.tol_claim)
    out.subclass = TorseClass::NotTorseForming;
  else if (std::abs(out.f_mean) + out.f_spread <= tol.tol_claim && omega_scale <= tol.tol_claim)
    out.subclass = TorseClass::Geodesic;  // parallel generator
  else if (out.omega_plus_f_eta_max <= tol.tol_claim * fscale)
    out.subclass = TorseClass::KenmotsuType;
  else if (out.closedness_residual <= tol.tol_claim * fscale)
    out.subclass = TorseClass::ConcircularCandidate;
  else
    out.subclass = TorseClass::Generic;
  return out;
}

KenmotsuReport kenmotsu_type_check(const MetricDerivs& md, const VectorField& xi,
                                   const TorseFormingFit& torse, const QCCFit& fit,
                                   const Tolerances& tol) {
  if (torse.subclass != TorseClass::KenmotsuType)
    throw GeometryError("kenmotsu-type check requires a kenmotsu-type torse-forming fit");
  if (!fit.qcc_verified)
    throw GeometryError("kenmotsu-type check requires a verified quasi-constant-curvature fit");
  if (torse.f.size() != fit.points.size())
    throw GeometryError("torse fit and curvature fit use different sample sets");

  KenmotsuReport rep;
  rep.f_spread = torse.f_spread;
  rep.regular = fit.regular == Regularity::Regular;
  const int n = md.dim();
  for (std::size_t i = 0; i < torse.f.size(); ++i) {
    double f = torse.f[i];
    double ab = fit.points[i].a + fit.points[i].b;
    rep.ab_plus_f2_max = std::max(rep.ab_plus_f2_max, std::abs(ab + f * f));
  }
  rep.theorem_applies = rep.regular && std::abs(torse.f_mean) > tol.tol_reg;
  rep.lambda_theorem = (n - 1) * torse.f_mean * torse.f_mean;
  rep.cls = rep.theorem_applies ? SolitonClass::Expanding : SolitonClass::NotASoliton;
  return rep;
}

}  // namespace qcv
