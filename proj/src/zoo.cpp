#include "quasicurv/zoo.hpp"

namespace qcv {

namespace {

Expr P(const Chart& c, const std::string& s) { return parse(s, c.known_names()); }

Chart box_chart(std::vector<std::string> coords, double lo, double hi) {
  Chart c;
  c.dim = static_cast<int>(coords.size());
  c.coords = std::move(coords);
  c.domain.assign(c.dim, Interval{lo, hi});
  return c;
}

std::vector<std::string> xnames(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("x" + std::to_string(i));
  return v;
}

std::vector<std::string> warped_coords(int n) {
  std::vector<std::string> v = {"t"};
  auto rest = xnames(n - 1);
  v.insert(v.end(), rest.begin(), rest.end());
  return v;
}

std::string norm_sq(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& nm : names) {
    if (!s.empty()) s += " + ";
    s += nm + "^2";
  }
  return s;
}

VectorField axis_field(const Chart& c, int axis, const std::string& scale = "1") {
  VectorField v;
  for (int i = 0; i < c.dim; ++i) v.comp.push_back(P(c, i == axis ? scale : "0"));
  return v;
}

ZooEntry make_flat(int n) {
  ZooEntry e;
  e.name = "flat";
  e.chart = box_chart(xnames(n), -1.0, 1.0);
  e.metric = flat_metric(n);
  e.xi = axis_field(e.chart, 0);
  e.expected.a = constant(0.0);
  e.expected.b = constant(0.0);
  e.expected.regular = false;
  e.expected.note = "all curvature vanishes; the generator is parallel";
  return e;
}

ZooEntry make_sphere(int n) {
  ZooEntry e;
  e.name = "sphere";
  e.chart = box_chart(xnames(n), -0.7, 0.7);
  std::string r2 = norm_sq(e.chart.coords);
  e.metric = conformal_metric(n, P(e.chart, "4/(1 + " + r2 + ")^2"), e.chart.coords);
  e.xi = axis_field(e.chart, 0, "(1 + " + r2 + ")/2");
  e.expected.a = constant(1.0);
  e.expected.b = constant(0.0);
  e.expected.regular = true;
  e.expected.note = "round unit sphere in a stereographic chart; constant curvature +1";
  return e;
}

ZooEntry make_hyperbolic(int n) {
  ZooEntry e;
  e.name = "hyperbolic-ball";
  double half = n == 3 ? 0.5 : 0.45;  // keep the box inside the unit ball
  e.chart = box_chart(xnames(n), -half, half);
  std::string r2 = norm_sq(e.chart.coords);
  e.metric = conformal_metric(n, P(e.chart, "4/(1 - (" + r2 + "))^2"), e.chart.coords);
  e.xi = axis_field(e.chart, 0, "(1 - (" + r2 + "))/2");
  e.expected.a = constant(-1.0);
  e.expected.b = constant(0.0);
  e.expected.regular = true;
  e.expected.note = "ball model of hyperbolic space; constant curvature -1";
  return e;
}

ZooEntry make_warped_exp_flat(int n) {
  ZooEntry e;
  e.name = "warped-exp-flat";
  e.chart = box_chart(warped_coords(n), -0.5, 0.5);
  e.metric = MetricField(n);
  e.metric.set(0, 0, P(e.chart, "1"));
  for (int i = 1; i < n; ++i) e.metric.set(i, i, P(e.chart, "exp(2*t)"));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.metric.set(i, j, constant(0.0));
  e.xi = axis_field(e.chart, 0);
  e.expected.a = constant(-1.0);
  e.expected.b = constant(0.0);
  e.expected.regular = true;
  e.expected.note = "exponential warping over a flat fiber; hyperbolic space in horospherical coordinates";
  return e;
}

ZooEntry make_warped_exp_sphere(int n) {
  ZooEntry e;
  e.name = "warped-exp-sphere";
  e.chart = box_chart(warped_coords(n), -0.7, 0.7);
  e.chart.domain[0] = Interval{-0.5, 0.5};
  std::vector<std::string> fiber(e.chart.coords.begin() + 1, e.chart.coords.end());
  std::string r2 = norm_sq(fiber);
  e.metric = MetricField(n);
  e.metric.set(0, 0, P(e.chart, "1"));
  for (int i = 1; i < n; ++i)
    e.metric.set(i, i, P(e.chart, "exp(2*t) * 4/(1 + " + r2 + ")^2"));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) e.metric.set(i, j, constant(0.0));
  e.xi = axis_field(e.chart, 0);
  e.expected.a = P(e.chart, "exp(-2*t) - 1");
  e.expected.b = P(e.chart, "-exp(-2*t)");
  e.expected.regular = true;  // a+b = -1 everywhere
  e.expected.note =
      "exponential warping over a round fiber; warped-product sectional curvatures "
      "(1 - f'^2)/f^2 on fiber planes and -f''/f on mixed planes with f = exp(t)";
  return e;
}

ZooEntry make_gaussian(int n) {
  ZooEntry e;
  e.name = "gaussian-shrinker";
  e.chart = box_chart(xnames(n), -1.0, 1.0);
  e.metric = flat_metric(n);
  VectorField v;
  for (int i = 0; i < n; ++i) v.comp.push_back(P(e.chart, e.chart.coords[i]));
  e.xi = v;  // position field; not unit, used as the soliton field V
  e.expected.soliton = SolitonClass::Shrinking;
  e.expected.lambda = -1.0;
  e.expected.note = "position field on flat space: L_V g = 2g, S = 0, lambda = -1";
  return e;
}

ZooEntry make_counterexample(int n) {
  ZooEntry e;
  e.name = "flat-counterexample";
  e.chart = box_chart(xnames(n), -1.0, 1.0);
  e.metric = flat_metric(n);
  e.xi = axis_field(e.chart, 0);
  SymTensor2Field a(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a.set(i, j, constant(i == j ? (i == 0 ? 2.0 : 1.0) : 0.0));
  e.alpha = a;
  e.expected.regular = false;
  e.expected.note =
      "g + dx1 (x) dx1 has constant components, hence is parallel, but is not a "
      "multiple of g: the proportionality conclusion needs regularity";
  return e;
}

}  // namespace

std::vector<std::string> zoo_names() {
  return {"flat",         "sphere",           "hyperbolic-ball",  "warped-exp-flat",
          "warped-exp-sphere", "gaussian-shrinker", "flat-counterexample"};
}

ZooEntry zoo_entry(const std::string& name, int dim) {
  if (dim != 3 && dim != 4) throw ChartError("zoo entries exist for dimensions 3 and 4");
  if (name == "flat") return make_flat(dim);
  if (name == "sphere") return make_sphere(dim);
  if (name == "hyperbolic-ball") return make_hyperbolic(dim);
  if (name == "warped-exp-flat") return make_warped_exp_flat(dim);
  if (name == "warped-exp-sphere") return make_warped_exp_sphere(dim);
  if (name == "gaussian-shrinker") return make_gaussian(dim);
  if (name == "flat-counterexample") return make_counterexample(dim);
  throw ChartError("unknown zoo entry '" + name + "'");
}

// ---------------------------------------------------------------------------
// parameter-level calculators

namespace {

SolitonClass class_of_lambda(double lambda) {
  if (lambda == 0.0) return SolitonClass::Steady;
  return lambda < 0.0 ? SolitonClass::Shrinking : SolitonClass::Expanding;
}

}  // namespace

ParaSasakianValues para_sasakian_values(int n, std::optional<double> r) {
  if (n < 3) throw GeometryError("needs dimension >= 3");
  ParaSasakianValues v;
  v.r = r.value_or(static_cast<double>(-n));  // balance constraint pins r = -n
  double denom = static_cast<double>(n - 1) * (n - 2);
  v.a = (v.r + 2.0 * (n - 1)) / denom;
  v.b = (-v.r - static_cast<double>(n) * (n - 1)) / denom;
  // a + b = -1 identically, so lambda = -(a+b)(n-1) = n-1 regardless of r
  v.lambda = -(v.a + v.b) * (n - 1);
  v.cls = class_of_lambda(v.lambda);
  return v;
}

QuasiUmbilicalValues quasi_umbilical_values(const QuasiUmbilicalParams& p) {
  QuasiUmbilicalValues v;
  v.a = p.c + p.alpha * p.alpha;
  v.b = p.alpha * p.beta;
  double sum = v.a + v.b;  // c + alpha^2 + alpha beta
  v.regular = sum != 0.0;
  v.lambda = -(p.n - 1) * sum;
  v.cls = v.regular ? class_of_lambda(v.lambda) : SolitonClass::NotASoliton;
  return v;
}

HopfValues hopf_submanifold_values(const HopfParams& p) {
  HopfValues v;
  double c = p.omega0_norm / 2.0;
  v.a = c * c;
  v.b = -0.25;
  double sum = v.a + v.b;  // (|omega0|^2 - 1)/4
  v.regular = p.omega0_norm != 1.0;
  v.lambda = -(p.n - 1) * sum;
  v.cls = v.regular ? class_of_lambda(v.lambda) : SolitonClass::NotASoliton;
  return v;
}

}  // namespace qcv
