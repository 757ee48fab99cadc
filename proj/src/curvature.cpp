#include "quasicurv/curvature.hpp"

#include <cmath>
#include <sstream>

namespace qcv {

// ---------------------------------------------------------------------------
// FieldDerivs

FieldDerivs::FieldDerivs(std::vector<std::string> coords, std::vector<Expr> comps)
    : coords_(std::move(coords)), c_(std::move(comps)) {
  for (auto& e : c_) e = simplify(e);
}

void FieldDerivs::build1() const {
  if (!d1_.empty()) return;
  const int nc = ncoord(), m = ncomp();
  d1_.resize(static_cast<std::size_t>(m) * nc);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < nc; ++k) d1_[i * nc + k] = simplify(diff(c_[i], coords_[k]));
}

void FieldDerivs::build2() const {
  if (!d2_.empty()) return;
  build1();
  const int nc = ncoord(), m = ncomp();
  d2_.resize(static_cast<std::size_t>(m) * nc * nc);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < nc; ++k)
      for (int l = 0; l < nc; ++l)
        d2_[(i * nc + k) * nc + l] = simplify(diff(d1_[i * nc + k], coords_[l]));
}

void FieldDerivs::build3() const {
  if (!d3_.empty()) return;
  build2();
  const int nc = ncoord(), m = ncomp();
  d3_.resize(static_cast<std::size_t>(m) * nc * nc * nc);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < nc; ++k)
      for (int l = 0; l < nc; ++l)
        for (int mm = 0; mm < nc; ++mm)
          d3_[((i * nc + k) * nc + l) * nc + mm] =
              simplify(diff(d2_[(i * nc + k) * nc + l], coords_[mm]));
}

const Expr& FieldDerivs::d1(int i, int k) const {
  build1();
  return d1_[i * ncoord() + k];
}
const Expr& FieldDerivs::d2(int i, int k, int l) const {
  build2();
  return d2_[(i * ncoord() + k) * ncoord() + l];
}
const Expr& FieldDerivs::d3(int i, int k, int l, int m) const {
  build3();
  return d3_[((i * ncoord() + k) * ncoord() + l) * ncoord() + m];
}

// ---------------------------------------------------------------------------
// MetricDerivs

namespace {
std::vector<Expr> upper_comps(const MetricField& g) { return g.upper; }
}  // namespace

MetricDerivs::MetricDerivs(Chart chart, MetricField g)
    : chart_(std::move(chart)), g_(std::move(g)), fd_(chart_.coords, upper_comps(g_)) {
  chart_.validate();
  if (g_.dim != chart_.dim) throw GeometryError("metric dimension does not match chart");
}

const Expr& MetricDerivs::d1_sym(int i, int j, int k) const {
  return fd_.d1(MetricField::tri_index(i, j, dim()), k);
}
const Expr& MetricDerivs::d2_sym(int i, int j, int k, int l) const {
  return fd_.d2(MetricField::tri_index(i, j, dim()), k, l);
}
const Expr& MetricDerivs::d3_sym(int i, int j, int k, int l, int m) const {
  return fd_.d3(MetricField::tri_index(i, j, dim()), k, l, m);
}

// ---------------------------------------------------------------------------
// CurvatureAtPoint

namespace {

std::string point_str(const Vec& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace

CurvatureAtPoint::CurvatureAtPoint(const MetricDerivs& md, Vec p)
    : md_(&md), n_(md.dim()), p_(std::move(p)), env_(md.chart().bind(p_)) {
  const int n = n_;
  g_ = md.metric().eval_at(env_);
  if (!is_spd(g_))
    throw GeometryError("metric not positive definite at " + point_str(p_));
  ginv_ = inverse(g_);
  // one Newton polish step on the inverse
  ginv_ = ginv_ * (2.0 * Mat::identity(n) - g_ * ginv_);

  auto idx3 = [n](int a, int b, int c) { return (a * n + b) * n + c; };
  auto idx4 = [n](int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; };

  dg_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        dg_[idx3(k, i, j)] = dg_[idx3(k, j, i)] = eval(md.d1_sym(i, j, k), env_);

  d2g_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
          d2g_[idx4(k, l, i, j)] = d2g_[idx4(k, l, j, i)] = eval(md.d2_sym(i, j, k, l), env_);

  // d_m g^{ij} = -(ginv dg_m ginv)^{ij}
  dginv_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int m = 0; m < n; ++m) {
    Mat dgm(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dgm(i, j) = dg_[idx3(m, i, j)];
    Mat r = ginv_ * dgm * ginv_;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dginv_[idx3(m, i, j)] = -r(i, j);
  }

  // Gamma^k_{ij} = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)
  auto C = [&](int l, int i, int j) {
    return dg_[idx3(i, j, l)] + dg_[idx3(j, i, l)] - dg_[idx3(l, i, j)];
  };
  gamma_.assign(static_cast<std::size_t>(n) * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv_(k, l) * C(l, i, j);
        gamma_[idx3(k, i, j)] = gamma_[idx3(k, j, i)] = 0.5 * s;
      }

  // d_m Gamma^k_{ij}
  auto dC = [&](int m, int l, int i, int j) {
    return d2g_[idx4(m, i, j, l)] + d2g_[idx4(m, j, i, l)] - d2g_[idx4(m, l, i, j)];
  };
  dgamma_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l)
            s += dginv_[idx3(m, k, l)] * C(l, i, j) + ginv_(k, l) * dC(m, l, i, j);
          dgamma_[idx4(m, k, i, j)] = dgamma_[idx4(m, k, j, i)] = 0.5 * s;
        }

  // R^l_{kij}
  riem_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = dgamma_[idx4(i, l, j, k)] - dgamma_[idx4(j, l, i, k)];
          for (int m = 0; m < n; ++m)
            s += gamma_[idx3(l, i, m)] * gamma_[idx3(m, j, k)] -
                 gamma_[idx3(l, j, m)] * gamma_[idx3(m, i, k)];
          riem_[idx4(l, k, i, j)] = s;
          scale_ = std::max(scale_, std::abs(s));
        }

  riemlow_.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int m = 0; m < n; ++m) s += g_(l, m) * riem_[idx4(m, k, i, j)];
          riemlow_[idx4(l, k, i, j)] = s;
        }

  // S_kj = R^i_{kij}
  ric_ = Mat(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += riem_[idx4(i, k, i, j)];
      ric_(k, j) = s;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) scalar_ += ginv_(i, j) * ric_(i, j);
}

void CurvatureAtPoint::ensure_level3() const {
  if (l3_) return;
  const MetricDerivs& md = *md_;
  const int n = n_;
  auto idx3 = [n](int a, int b, int c) { return (a * n + b) * n + c; };
  auto idx4 = [n](int a, int b, int c, int d) { return ((a * n + b) * n + c) * n + d; };
  auto idx5 = [n](int a, int b, int c, int d, int e) {
    return (((a * n + b) * n + c) * n + d) * n + e;
  };

  std::vector<double> d3g(static_cast<std::size_t>(n) * n * n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j)
            d3g[idx5(k, l, m, i, j)] = d3g[idx5(k, l, m, j, i)] =
                eval(md.d3_sym(i, j, k, l, m), env_);

  // d_a d_b g^{ij}
  std::vector<double> d2ginv(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Mat dgb(n, n), d2gab(n, n), dgia(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          dgb(i, j) = dg_[idx3(b, i, j)];
          d2gab(i, j) = d2g_[idx4(a, b, i, j)];
          dgia(i, j) = dginv_[idx3(a, i, j)];
        }
      // d_a (ginv dg_b ginv) by the product rule
      Mat term1 = dgia * dgb * ginv_;
      Mat term2 = ginv_ * d2gab * ginv_;
      Mat term3 = ginv_ * dgb * dgia;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d2ginv[idx4(a, b, i, j)] = -(term1(i, j) + term2(i, j) + term3(i, j));
    }

  auto C = [&](int l, int i, int j) {
    return dg_[idx3(i, j, l)] + dg_[idx3(j, i, l)] - dg_[idx3(l, i, j)];
  };
  auto dC = [&](int m, int l, int i, int j) {
    return d2g_[idx4(m, i, j, l)] + d2g_[idx4(m, j, i, l)] - d2g_[idx4(m, l, i, j)];
  };
  auto d2C = [&](int a, int b, int l, int i, int j) {
    return d3g[idx5(a, b, i, j, l)] + d3g[idx5(a, b, j, i, l)] - d3g[idx5(a, b, l, i, j)];
  };

  // d_a d_b Gamma^k_{ij}
  std::vector<double> d2gamma(static_cast<std::size_t>(n) * n * n * n * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int l = 0; l < n; ++l)
              s += d2ginv[idx4(a, b, k, l)] * C(l, i, j) +
                   dginv_[idx3(b, k, l)] * dC(a, l, i, j) +
                   dginv_[idx3(a, k, l)] * dC(b, l, i, j) +
                   ginv_(k, l) * d2C(a, b, l, i, j);
            d2gamma[idx5(a, b, k, i, j)] = d2gamma[idx5(a, b, k, j, i)] = 0.5 * s;
          }

  // d_m R^l_{kij}
  std::vector<double> driem(static_cast<std::size_t>(n) * n * n * n * n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double s = d2gamma[idx5(m, i, l, j, k)] - d2gamma[idx5(m, j, l, i, k)];
            for (int mm = 0; mm < n; ++mm)
              s += dgamma_[idx4(m, l, i, mm)] * gamma_[idx3(mm, j, k)] +
                   gamma_[idx3(l, i, mm)] * dgamma_[idx4(m, mm, j, k)] -
                   dgamma_[idx4(m, l, j, mm)] * gamma_[idx3(mm, i, k)] -
                   gamma_[idx3(l, j, mm)] * dgamma_[idx4(m, mm, i, k)];
            driem[idx5(m, l, k, i, j)] = s;
          }

  // nabla_m R^l_{kij}
  nablariem_.assign(static_cast<std::size_t>(n) * n * n * n * n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            double s = driem[idx5(m, l, k, i, j)];
            for (int t = 0; t < n; ++t)
              s += gamma_[idx3(l, m, t)] * riem_[idx4(t, k, i, j)] -
                   gamma_[idx3(t, m, k)] * riem_[idx4(l, t, i, j)] -
                   gamma_[idx3(t, m, i)] * riem_[idx4(l, k, t, j)] -
                   gamma_[idx3(t, m, j)] * riem_[idx4(l, k, i, t)];
            nablariem_[idx5(m, l, k, i, j)] = s;
          }
  l3_ = true;
}

double CurvatureAtPoint::nabla_riem(int m, int l, int k, int i, int j) const {
  ensure_level3();
  const int n = n_;
  return nablariem_[(((m * n + l) * n + k) * n + i) * n + j];
}

double CurvatureAtPoint::antisymmetry_residual() const {
  const int n = n_;
  double num = 0.0;
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          num = std::max(num, std::abs(riem_low(l, k, i, j) + riem_low(l, k, j, i)));
          num = std::max(num, std::abs(riem_low(l, k, i, j) + riem_low(k, l, i, j)));
        }
  double denom = 0.0;
  for (double v : riemlow_) denom = std::max(denom, std::abs(v));
  return denom > 1e-14 ? num / denom : num;
}

double CurvatureAtPoint::bianchi_residual() const {
  const int n = n_;
  double num = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          num = std::max(num, std::abs(riem(l, k, i, j) + riem(l, i, j, k) + riem(l, j, k, i)));
  return scale_ > 1e-14 ? num / scale_ : num;
}

double CurvatureAtPoint::ricci_symmetry_residual() const {
  double num = 0.0, denom = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      num = std::max(num, std::abs(ric_(i, j) - ric_(j, i)));
      denom = std::max(denom, std::abs(ric_(i, j)));
    }
  return denom > 1e-14 ? num / denom : num;
}

// ---------------------------------------------------------------------------
// free-function operations

std::pair<Mat, Mat> metric_at(const MetricDerivs& md, const Vec& p) {
  Env env = md.chart().bind(p);
  Mat g = md.metric().eval_at(env);
  if (!is_spd(g)) throw GeometryError("metric not positive definite at " + point_str(p));
  Mat gi = inverse(g);
  gi = gi * (2.0 * Mat::identity(md.dim()) - g * gi);
  return {g, gi};
}

std::vector<double> christoffel(const MetricDerivs& md, const Vec& p) {
  CurvatureAtPoint c(md, p);
  const int n = md.dim();
  std::vector<double> out(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out[(k * n + i) * n + j] = c.gamma(k, i, j);
  return out;
}

Mat ricci(const MetricDerivs& md, const Vec& p) { return CurvatureAtPoint(md, p).ricci(); }

double scalar_curvature(const MetricDerivs& md, const Vec& p) {
  return CurvatureAtPoint(md, p).scalar();
}

// ---------------------------------------------------------------------------
// TensorField

TensorField::TensorField(int n, int up, int down) : dim(n), nup(up), ndown(down) {
  if (up > 1 || down > 3 || up < 0 || down < 0)
    throw GeometryError("unsupported tensor rank");
  std::size_t sz = 1;
  for (int r = 0; r < up + down; ++r) sz *= static_cast<std::size_t>(n);
  comp.assign(sz, constant(0.0));
}

std::size_t TensorField::flat(const std::vector<int>& idx) const {
  std::size_t f = 0;
  for (int v : idx) f = f * dim + v;
  return f;
}

TensorField tensor_from_metric(const MetricField& g) {
  TensorField t(g.dim, 0, 2);
  for (int i = 0; i < g.dim; ++i)
    for (int j = 0; j < g.dim; ++j) t.set({i, j}, g.at(i, j));
  return t;
}

TensorField tensor_from_sym2(const SymTensor2Field& a) { return tensor_from_metric(a); }

TensorField tensor_from_vector(const VectorField& v, int dim) {
  TensorField t(dim, 1, 0);
  for (int i = 0; i < dim; ++i) t.set({i}, v.comp[i]);
  return t;
}

TensorDerivs::TensorDerivs(const Chart& chart, TensorField tf)
    : tf_(std::move(tf)), fd_(chart.coords, tf_.comp) {}

std::vector<double> covariant_derivative(const CurvatureAtPoint& pt, const TensorDerivs& T) {
  const TensorField& tf = T.field();
  const int n = tf.dim;
  const int rank = tf.rank();
  if (tf.nup > 1 || tf.ndown > 3) throw GeometryError("unsupported tensor rank");
  const std::size_t ncomp = tf.comp.size();
  std::vector<double> vals(ncomp), out(static_cast<std::size_t>(n) * ncomp, 0.0);
  for (std::size_t c = 0; c < ncomp; ++c) vals[c] = eval(T.derivs().c(static_cast<int>(c)), pt.env());

  std::vector<int> idx(rank, 0);
  for (std::size_t c = 0; c < ncomp; ++c) {
    // decode multi-index
    std::size_t rem = c;
    for (int r = rank - 1; r >= 0; --r) {
      idx[r] = static_cast<int>(rem % n);
      rem /= n;
    }
    for (int k = 0; k < n; ++k) {
      double s = eval(T.derivs().d1(static_cast<int>(c), k), pt.env());
      std::vector<int> jdx = idx;
      for (int r = 0; r < rank; ++r) {
        const bool up = r < tf.nup;
        for (int m = 0; m < n; ++m) {
          jdx[r] = m;
          double tv = vals[tf.flat(jdx)];
          if (tv == 0.0) continue;
          if (up)
            s += pt.gamma(idx[r], k, m) * tv;
          else
            s -= pt.gamma(m, k, idx[r]) * tv;
        }
        jdx[r] = idx[r];
      }
      out[k * ncomp + c] = s;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// symmetric (0,2) fields

SymTensorDerivs::SymTensorDerivs(const Chart& chart, SymTensor2Field a)
    : a_(std::move(a)), fd_(chart.coords, a_.upper) {}

std::vector<double> cov_deriv_sym2(const CurvatureAtPoint& pt, const SymTensorDerivs& a) {
  const int n = a.dim();
  Mat av = a.eval_at(pt.env());
  std::vector<double> out(static_cast<std::size_t>(n) * n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = eval(a.derivs().d1(SymTensor2Field::tri_index(i, j, n), k), pt.env());
        for (int m = 0; m < n; ++m)
          s -= pt.gamma(m, k, i) * av(m, j) + pt.gamma(m, k, j) * av(i, m);
        out[(k * n + i) * n + j] = s;
      }
  return out;
}

std::vector<double> second_cov_deriv_sym2(const CurvatureAtPoint& pt, const SymTensorDerivs& a) {
  const int n = a.dim();
  Mat av = a.eval_at(pt.env());
  auto tri = [n](int i, int j) { return SymTensor2Field::tri_index(i, j, n); };

  // first derivatives d_k alpha_ij and nabla_k alpha_ij
  std::vector<double> d1a(static_cast<std::size_t>(n) * n * n), d2a;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        d1a[(k * n + i) * n + j] = eval(a.derivs().d1(tri(i, j), k), pt.env());
  d2a.assign(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          d2a[((l * n + k) * n + i) * n + j] = eval(a.derivs().d2(tri(i, j), k, l), pt.env());

  std::vector<double> cda = cov_deriv_sym2(pt, a);
  auto cd = [&](int k, int i, int j) { return cda[(k * n + i) * n + j]; };

  std::vector<double> out(static_cast<std::size_t>(n) * n * n * n, 0.0);
  for (int l = 0; l < n; ++l)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          // d_l (nabla_k alpha_ij)
          double s = d2a[((l * n + k) * n + i) * n + j];
          for (int m = 0; m < n; ++m)
            s -= pt.dgamma(l, m, k, i) * av(m, j) + pt.gamma(m, k, i) * d1a[(l * n + m) * n + j] +
                 pt.dgamma(l, m, k, j) * av(i, m) + pt.gamma(m, k, j) * d1a[(l * n + i) * n + m];
          // Christoffel corrections for the three covariant slots of nabla alpha
          for (int m = 0; m < n; ++m)
            s -= pt.gamma(m, l, k) * cd(m, i, j) + pt.gamma(m, l, i) * cd(k, m, j) +
                 pt.gamma(m, l, j) * cd(k, i, m);
          out[((l * n + k) * n + i) * n + j] = s;
        }
  return out;
}

double ricci_identity_residual(const CurvatureAtPoint& pt, const SymTensorDerivs& a) {
  const int n = a.dim();
  Mat av = a.eval_at(pt.env());
  std::vector<double> d2 = second_cov_deriv_sym2(pt, a);
  auto D2 = [&](int l, int k, int i, int j) { return d2[((l * n + k) * n + i) * n + j]; };
  double num = 0.0, scale = 0.0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double curv = 0.0;
          for (int m = 0; m < n; ++m)
            curv += pt.riem(m, i, k, l) * av(m, j) + pt.riem(m, j, k, l) * av(i, m);
          double r = D2(k, l, i, j) - D2(l, k, i, j) + curv;
          num = std::max(num, std::abs(r));
          scale = std::max({scale, std::abs(D2(k, l, i, j)), std::abs(curv)});
        }
  return num / (1.0 + scale);
}

// ---------------------------------------------------------------------------
// vector fields

namespace {

std::vector<Expr> lower_components(const MetricDerivs& md, const VectorField& v) {
  const int n = md.dim();
  std::vector<Expr> low(n);
  for (int j = 0; j < n; ++j) {
    Expr s = constant(0.0);
    for (int k = 0; k < n; ++k) s = s + md.g_sym(j, k) * v.comp[k];
    low[j] = simplify(s);
  }
  return low;
}

}  // namespace

VectorDerivs::VectorDerivs(const MetricDerivs& md, VectorField v)
    : v_(std::move(v)),
      up_(md.chart().coords, v_.comp),
      low_(md.chart().coords, lower_components(md, v_)) {
  if (static_cast<int>(v_.comp.size()) != md.dim())
    throw GeometryError("vector field dimension mismatch");
}

std::vector<double> grad_vector(const CurvatureAtPoint& pt, const VectorDerivs& v) {
  const int n = pt.dim();
  Vec up(n);
  for (int j = 0; j < n; ++j) up[j] = eval(v.up().c(j), pt.env());
  std::vector<double> out(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = eval(v.up().d1(j, i), pt.env());
      for (int m = 0; m < n; ++m) s += pt.gamma(j, i, m) * up[m];
      out[i * n + j] = s;
    }
  return out;
}

Mat lie_derivative_metric(const CurvatureAtPoint& pt, const VectorDerivs& v) {
  const int n = pt.dim();
  Vec low(n);
  for (int j = 0; j < n; ++j) low[j] = eval(v.low().c(j), pt.env());
  // nabla_i V_j
  Mat nv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = eval(v.low().d1(j, i), pt.env());
      for (int m = 0; m < n; ++m) s -= pt.gamma(m, i, j) * low[m];
      nv(i, j) = s;
    }
  Mat lie(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) lie(i, j) = nv(i, j) + nv(j, i);
  return lie;
}

// ---------------------------------------------------------------------------
// curvature-derivative residuals

double local_symmetry_residual(const MetricDerivs& md, const Vec& p) {
  CurvatureAtPoint pt(md, p);
  const int n = md.dim();
  double m = 0.0;
  for (int a = 0; a < n; ++a)
    for (int l = 0; l < n; ++l)
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) m = std::max(m, std::abs(pt.nabla_riem(a, l, k, i, j)));
  return m;
}

double ricci_semisym_residual(const MetricDerivs& md, const Vec& p) {
  CurvatureAtPoint pt(md, p);
  const int n = md.dim();
  const Mat& s = pt.ricci();
  double m = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double v = 0.0;
          for (int t = 0; t < n; ++t)
            v += pt.riem(t, k, i, j) * s(t, l) + pt.riem(t, l, i, j) * s(k, t);
          m = std::max(m, std::abs(v));
        }
  return m;
}

}  // namespace qcv
