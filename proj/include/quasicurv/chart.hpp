#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quasicurv/expr.hpp"
#include "quasicurv/linalg.hpp"

namespace qcv {

struct ChartError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = -1.0, hi = 1.0;
};

/// Deterministic sampling plan: a stratified grid of cell centers plus seeded
/// uniform samples. random_count < 0 means "fill up to 64 total points".
struct SamplePlan {
  int grid_per_axis = 2;
  int random_count = -1;
  std::uint64_t seed = 20110214;
};

/// A single coordinate patch: names, per-axis sampling domain, sampling plan,
/// and fixed parameter bindings that are in scope for every expression.
struct Chart {
  int dim = 0;
  std::vector<std::string> coords;
  std::vector<Interval> domain;
  SamplePlan plan;
  std::map<std::string, double> params;

  void validate() const;  // dim >= 3, unique names, lo < hi

  /// All identifiers expressions over this chart may reference.
  std::set<std::string> known_names() const;

  /// Deterministic for a fixed plan; identical across platforms.
  std::vector<Vec> sample_points() const;

  Env bind(const Vec& p) const;
};

/// Symmetric (0,2) expression field; only the upper triangle is stored, so
/// symmetry is exact by construction.
struct SymExprMatrix {
  int dim = 0;
  std::vector<Expr> upper;  // index i <= j

  SymExprMatrix() = default;
  explicit SymExprMatrix(int n) : dim(n), upper(static_cast<std::size_t>(n) * (n + 1) / 2) {}

  static int tri_index(int i, int j, int n) {
    if (i > j) std::swap(i, j);
    return i * n - i * (i - 1) / 2 + (j - i);
  }
  const Expr& at(int i, int j) const { return upper[tri_index(i, j, dim)]; }
  void set(int i, int j, Expr e) { upper[tri_index(i, j, dim)] = std::move(e); }

  Mat eval_at(const Env& env) const;
};

using MetricField = SymExprMatrix;
using SymTensor2Field = SymExprMatrix;

struct VectorField {
  std::vector<Expr> comp;  // contravariant
};

struct OneForm {
  std::vector<Expr> comp;  // covariant
};

/// Euclidean delta metric.
MetricField flat_metric(int n);

/// Conformal metric factor * delta with a shared scalar factor expression.
MetricField conformal_metric(int n, const Expr& factor, const std::vector<std::string>& coords);

}  // namespace qcv
