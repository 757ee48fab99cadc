#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qcv {

using Vec = std::vector<double>;

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix; dimensions here are tiny (n <= 8), so everything
/// is direct elimination with partial pivoting.
class Mat {
public:
  Mat() = default;
  Mat(int rows, int cols) : r_(rows), c_(cols), d_(static_cast<std::size_t>(rows) * cols, 0.0) {}

  int rows() const { return r_; }
  int cols() const { return c_; }

  double& operator()(int i, int j) { return d_[static_cast<std::size_t>(i) * c_ + j]; }
  double operator()(int i, int j) const { return d_[static_cast<std::size_t>(i) * c_ + j]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

private:
  int r_ = 0, c_ = 0;
  std::vector<double> d_;
};

Mat operator*(const Mat& a, const Mat& b);
Mat operator+(const Mat& a, const Mat& b);
Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double s, const Mat& a);

/// Gauss-Jordan inverse with partial pivoting; throws SingularMatrix.
Mat inverse(const Mat& a);

/// Plain Cholesky attempt; returns false if the symmetric matrix is not
/// positive definite.
bool is_spd(const Mat& a);

/// max_i,j |a(i,j)|
double inf_norm(const Mat& a);

/// Least-squares solution of A x = b via normal equations (A is m x n, m >= n).
Vec lstsq(const Mat& a, const Vec& b);

/// Solve the square system A x = b with partial pivoting.
Vec solve(Mat a, Vec b);

}  // namespace qcv
