#include "quasicurv/linalg.hpp"

#include <cmath>

namespace qcv {

Mat operator*(const Mat& a, const Mat& b) {
  Mat r(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

Mat operator+(const Mat& a, const Mat& b) {
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

Mat operator-(const Mat& a, const Mat& b) {
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

Mat operator*(double s, const Mat& a) {
  Mat r(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

Vec solve(Mat a, Vec b) {
  const int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (a(piv, col) == 0.0) throw SingularMatrix("singular system");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(piv, j));
      std::swap(b[col], b[piv]);
    }
    for (int i = col + 1; i < n; ++i) {
      double f = a(i, col) / a(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
      b[i] -= f * b[col];
    }
  }
  Vec x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

Mat inverse(const Mat& a) {
  const int n = a.rows();
  Mat m = a;
  Mat inv = Mat::identity(n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int i = col + 1; i < n; ++i)
      if (std::abs(m(i, col)) > std::abs(m(piv, col))) piv = i;
    if (m(piv, col) == 0.0) throw SingularMatrix("singular matrix");
    if (piv != col)
      for (int j = 0; j < n; ++j) {
        std::swap(m(col, j), m(piv, j));
        std::swap(inv(col, j), inv(piv, j));
      }
    double d = m(col, col);
    for (int j = 0; j < n; ++j) {
      m(col, j) /= d;
      inv(col, j) /= d;
    }
    for (int i = 0; i < n; ++i) {
      if (i == col) continue;
      double f = m(i, col);
      if (f == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        m(i, j) -= f * m(col, j);
        inv(i, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

bool is_spd(const Mat& a) {
  const int n = a.rows();
  Mat l(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0 || !std::isfinite(s)) return false;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return true;
}

double inf_norm(const Mat& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

Vec lstsq(const Mat& a, const Vec& b) {
  const int m = a.rows(), n = a.cols();
  Mat ata(n, n);
  Vec atb(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < m; ++k) s += a(k, i) * a(k, j);
      ata(i, j) = s;
    }
    for (int k = 0; k < m; ++k) atb[i] += a(k, i) * b[k];
  }
  return solve(ata, atb);
}

}  // namespace qcv
