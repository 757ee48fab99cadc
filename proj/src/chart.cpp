#include "quasicurv/chart.hpp"

#include <random>
#include <set>

namespace qcv {

void Chart::validate() const {
  if (dim < 3) throw ChartError("chart dimension must be >= 3");
  if (static_cast<int>(coords.size()) != dim || static_cast<int>(domain.size()) != dim)
    throw ChartError("coords/domain size must match dim");
  std::set<std::string> seen;
  for (const auto& c : coords)
    if (!seen.insert(c).second) throw ChartError("duplicate coordinate name '" + c + "'");
  for (const auto& iv : domain)
    if (!(iv.lo < iv.hi)) throw ChartError("empty sampling interval");
  for (const auto& [name, _] : params)
    if (seen.count(name)) throw ChartError("parameter shadows coordinate '" + name + "'");
}

std::set<std::string> Chart::known_names() const {
  std::set<std::string> names(coords.begin(), coords.end());
  for (const auto& [name, _] : params) names.insert(name);
  return names;
}

std::vector<Vec> Chart::sample_points() const {
  validate();
  std::vector<Vec> pts;

  // stratified grid of cell centers
  const int g = std::max(1, plan.grid_per_axis);
  long total = 1;
  for (int a = 0; a < dim; ++a) total *= g;
  for (long idx = 0; idx < total; ++idx) {
    Vec p(dim);
    long rem = idx;
    for (int a = 0; a < dim; ++a) {
      int cell = static_cast<int>(rem % g);
      rem /= g;
      const auto& iv = domain[a];
      p[a] = iv.lo + (cell + 0.5) * (iv.hi - iv.lo) / g;
    }
    pts.push_back(std::move(p));
  }

  int rnd = plan.random_count;
  if (rnd < 0) rnd = std::max<long>(0, 64 - total);

  // mt19937_64 output mapped to [0,1) explicitly so the stream is
  // platform-independent (uniform_real_distribution is not)
  std::mt19937_64 rng(plan.seed);
  auto unit = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
  for (int k = 0; k < rnd; ++k) {
    Vec p(dim);
    for (int a = 0; a < dim; ++a) {
      const auto& iv = domain[a];
      p[a] = iv.lo + unit() * (iv.hi - iv.lo);
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

Env Chart::bind(const Vec& p) const {
  Env env(params.begin(), params.end());
  for (int a = 0; a < dim; ++a) env[coords[a]] = p[a];
  return env;
}

Mat SymExprMatrix::eval_at(const Env& env) const {
  Mat m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) m(i, j) = m(j, i) = eval(at(i, j), env);
  return m;
}

MetricField flat_metric(int n) {
  MetricField g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g.set(i, j, constant(i == j ? 1.0 : 0.0));
  return g;
}

MetricField conformal_metric(int n, const Expr& factor, const std::vector<std::string>&) {
  MetricField g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) g.set(i, j, i == j ? factor : constant(0.0));
  return g;
}

}  // namespace qcv
