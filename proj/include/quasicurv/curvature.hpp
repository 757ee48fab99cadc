#pragma once

#include <optional>
#include <utility>

#include "quasicurv/chart.hpp"

namespace qcv {

struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double tol_curv = 1e-9;   // algebraic curvature identities
  double tol_claim = 1e-6;  // identities involving 2nd/3rd derivatives
  double tol_reg = 1e-6;    // strict threshold for a+b != 0
};

/// Cache of simplified symbolic derivatives for a list of component
/// expressions, up to third order. Derivative trees are built once and
/// reused at every sample point.
class FieldDerivs {
public:
  FieldDerivs(std::vector<std::string> coords, std::vector<Expr> comps);

  int ncomp() const { return static_cast<int>(c_.size()); }
  int ncoord() const { return static_cast<int>(coords_.size()); }

  const Expr& c(int i) const { return c_[i]; }
  const Expr& d1(int i, int k) const;
  const Expr& d2(int i, int k, int l) const;
  const Expr& d3(int i, int k, int l, int m) const;

private:
  std::vector<std::string> coords_;
  std::vector<Expr> c_;
  mutable std::vector<Expr> d1_, d2_, d3_;  // built lazily per order
  void build1() const;
  void build2() const;
  void build3() const;
};

/// A metric on a chart plus its symbolic derivative caches. All curvature
/// quantities downstream are evaluated from these exact derivative trees;
/// finite differences appear only in test oracles.
class MetricDerivs {
public:
  MetricDerivs(Chart chart, MetricField g);

  const Chart& chart() const { return chart_; }
  const MetricField& metric() const { return g_; }
  int dim() const { return chart_.dim; }

  const Expr& g_sym(int i, int j) const { return g_.at(i, j); }
  const Expr& d1_sym(int i, int j, int k) const;      // d g_ij / d x_k
  const Expr& d2_sym(int i, int j, int k, int l) const;
  const Expr& d3_sym(int i, int j, int k, int l, int m) const;

private:
  Chart chart_;
  MetricField g_;
  FieldDerivs fd_;
};

/// Everything the engine knows about the geometry at one sample point.
/// Construction computes through curvature; third-derivative data (for the
/// covariant derivative of the curvature tensor) is filled in on demand.
///
/// Sign convention: R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
///                             + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik},
/// i.e. R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_{[X,Y]}Z with
/// R(e_i,e_j)e_k = R^l_{kij} e_l. The round unit sphere then has sectional
/// curvature +1.
class CurvatureAtPoint {
public:
  CurvatureAtPoint(const MetricDerivs& md, Vec p);

  int dim() const { return n_; }
  const Vec& point() const { return p_; }
  const Env& env() const { return env_; }

  const Mat& g() const { return g_; }
  const Mat& ginv() const { return ginv_; }

  double dg(int k, int i, int j) const { return dg_[(k * n_ + i) * n_ + j]; }
  double gamma(int k, int i, int j) const { return gamma_[(k * n_ + i) * n_ + j]; }
  double dgamma(int m, int k, int i, int j) const {
    return dgamma_[((m * n_ + k) * n_ + i) * n_ + j];
  }
  double riem(int l, int k, int i, int j) const {
    return riem_[((l * n_ + k) * n_ + i) * n_ + j];
  }
  double riem_low(int l, int k, int i, int j) const {
    return riemlow_[((l * n_ + k) * n_ + i) * n_ + j];
  }
  const Mat& ricci() const { return ric_; }
  double scalar() const { return scalar_; }

  /// max |R^l_{kij}| -- the scale used for relative residuals.
  double curvature_scale() const { return scale_; }

  /// nabla_m R^l_{kij}; triggers the third-derivative level.
  double nabla_riem(int m, int l, int k, int i, int j) const;

  // engine self-tests, relative to curvature scale
  double antisymmetry_residual() const;
  double bianchi_residual() const;
  double ricci_symmetry_residual() const;

private:
  const MetricDerivs* md_;
  int n_;
  Vec p_;
  Env env_;
  Mat g_, ginv_, ric_;
  double scalar_ = 0.0, scale_ = 0.0;
  std::vector<double> dg_, d2g_, dginv_, gamma_, dgamma_, riem_, riemlow_;
  mutable bool l3_ = false;
  mutable std::vector<double> nablariem_;
  void ensure_level3() const;
};

// free-function operations --------------------------------------------------

/// (G, G^{-1}) at p; throws GeometryError if not positive definite.
std::pair<Mat, Mat> metric_at(const MetricDerivs& md, const Vec& p);

/// Gamma^k_{ij}, layout [k][i][j].
std::vector<double> christoffel(const MetricDerivs& md, const Vec& p);

inline CurvatureAtPoint riemann(const MetricDerivs& md, Vec p) {
  return CurvatureAtPoint(md, std::move(p));
}

Mat ricci(const MetricDerivs& md, const Vec& p);
double scalar_curvature(const MetricDerivs& md, const Vec& p);

// tensor fields -------------------------------------------------------------

/// Dense expression tensor of rank (nup, ndown), nup <= 1, ndown <= 3.
/// Component layout is row-major with upper indices first.
struct TensorField {
  int dim = 0, nup = 0, ndown = 0;
  std::vector<Expr> comp;

  TensorField() = default;
  TensorField(int n, int up, int down);
  int rank() const { return nup + ndown; }
  std::size_t flat(const std::vector<int>& idx) const;
  const Expr& at(const std::vector<int>& idx) const { return comp[flat(idx)]; }
  void set(const std::vector<int>& idx, Expr e) { comp[flat(idx)] = std::move(e); }
};

TensorField tensor_from_metric(const MetricField& g);
TensorField tensor_from_sym2(const SymTensor2Field& a);
TensorField tensor_from_vector(const VectorField& v, int dim);

/// Tensor field bundled with its derivative cache.
class TensorDerivs {
public:
  TensorDerivs(const Chart& chart, TensorField tf);
  const TensorField& field() const { return tf_; }
  const FieldDerivs& derivs() const { return fd_; }

private:
  TensorField tf_;
  FieldDerivs fd_;
};

/// nabla T at a point; layout [k][original component layout] with the new
/// covariant index leading. Throws GeometryError for unsupported rank.
std::vector<double> covariant_derivative(const CurvatureAtPoint& pt, const TensorDerivs& T);

// symmetric (0,2) fields ----------------------------------------------------

class SymTensorDerivs {
public:
  SymTensorDerivs(const Chart& chart, SymTensor2Field a);
  const SymTensor2Field& field() const { return a_; }
  Mat eval_at(const Env& env) const { return a_.eval_at(env); }
  const FieldDerivs& derivs() const { return fd_; }
  int dim() const { return a_.dim; }

private:
  SymTensor2Field a_;
  FieldDerivs fd_;  // over upper-triangle components
};

/// nabla_k alpha_ij, layout [k][i][j].
std::vector<double> cov_deriv_sym2(const CurvatureAtPoint& pt, const SymTensorDerivs& a);

/// nabla_l nabla_k alpha_ij, layout [l][k][i][j] (outer derivative first).
std::vector<double> second_cov_deriv_sym2(const CurvatureAtPoint& pt, const SymTensorDerivs& a);

/// Commutator-of-second-derivatives defect against the curvature terms,
/// relative to the size of the participating terms.
double ricci_identity_residual(const CurvatureAtPoint& pt, const SymTensorDerivs& a);

// vector fields -------------------------------------------------------------

class VectorDerivs {
public:
  VectorDerivs(const MetricDerivs& md, VectorField v);
  const VectorField& field() const { return v_; }
  const FieldDerivs& up() const { return up_; }
  const FieldDerivs& low() const { return low_; }

private:
  VectorField v_;
  FieldDerivs up_;   // contravariant components
  FieldDerivs low_;  // metric-lowered components (symbolic products)
};

/// A_i^j = (nabla_{e_i} V)^j.
std::vector<double> grad_vector(const CurvatureAtPoint& pt, const VectorDerivs& v);

/// (L_V g)_ij = nabla_i V_j + nabla_j V_i with V lowered.
Mat lie_derivative_metric(const CurvatureAtPoint& pt, const VectorDerivs& v);

// curvature-derivative residuals --------------------------------------------

/// max |nabla_m R^l_{kij}| at p.
double local_symmetry_residual(const MetricDerivs& md, const Vec& p);

/// max over frame indices of |(R(X,Y).S)(Z,W)| at p.
double ricci_semisym_residual(const MetricDerivs& md, const Vec& p);

}  // namespace qcv
