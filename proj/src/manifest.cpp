#include "quasicurv/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "quasicurv/parallel.hpp"

namespace qcv {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// manifest <-> json

namespace {

SymExprMatrix sym_from_json(const ordered_json& j, const Chart& chart, const char* what) {
  SymExprMatrix m(chart.dim);
  for (int i = 0; i < chart.dim; ++i)
    for (int k = i; k < chart.dim; ++k) m.set(i, k, constant(0.0));
  if (!j.is_object()) throw ManifestError(std::string(what) + " must be an object");
  auto known = chart.known_names();
  for (const auto& [key, val] : j.items()) {
    int i = -1, k = -1;
    if (std::sscanf(key.c_str(), "%d,%d", &i, &k) != 2 || i < 0 || k < 0 ||
        i >= chart.dim || k >= chart.dim)
      throw ManifestError(std::string(what) + " key '" + key + "' is not a valid index pair");
    if (i > k)
      throw ManifestError(std::string(what) + " stores the upper triangle only; got '" + key + "'");
    try {
      m.set(i, k, parse(val.get<std::string>(), known));
    } catch (const ParseError& e) {
      throw ManifestError(std::string(what) + "[" + key + "]: " + e.what());
    }
  }
  for (int i = 0; i < chart.dim; ++i)
    if (!j.contains(std::to_string(i) + "," + std::to_string(i)))
      throw ManifestError(std::string(what) + " is missing diagonal entry " +
                          std::to_string(i) + "," + std::to_string(i));
  return m;
}

ordered_json sym_to_json(const SymExprMatrix& m) {
  ordered_json j = ordered_json::object();
  for (int i = 0; i < m.dim; ++i)
    for (int k = i; k < m.dim; ++k) {
      std::string key = std::to_string(i) + "," + std::to_string(k);
      // keep the emitted manifest readable: skip exact-zero off-diagonals
      const Expr& e = m.at(i, k);
      if (i != k && e->kind == ExprNode::Kind::Constant && e->value == 0.0) continue;
      j[key] = render(e);
    }
  return j;
}

}  // namespace

Manifest manifest_from_json(const ordered_json& j) {
  if (!j.is_object()) throw ManifestError("manifest must be a JSON object");
  if (j.contains("schema_version") && j["schema_version"].get<int>() > kSchemaVersion)
    throw ManifestError("manifest schema_version is newer than this engine supports");

  Manifest m;
  if (j.contains("name")) m.name = j["name"].get<std::string>();
  Chart& c = m.chart;
  try {
    c.dim = j.at("dim").get<int>();
    c.coords = j.at("coords").get<std::vector<std::string>>();
    const auto& dom = j.at("domain");
    for (const auto& name : c.coords) {
      if (!dom.contains(name))
        throw ManifestError("domain is missing coordinate '" + name + "'");
      auto iv = dom[name].get<std::vector<double>>();
      if (iv.size() != 2) throw ManifestError("domain['" + name + "'] must be [lo, hi]");
      c.domain.push_back(Interval{iv[0], iv[1]});
    }
  } catch (const ordered_json::exception& e) {
    throw ManifestError(std::string("manifest structure: ") + e.what());
  }
  if (j.contains("params"))
    for (const auto& [name, val] : j["params"].items()) c.params[name] = val.get<double>();
  if (j.contains("sampling")) {
    const auto& s = j["sampling"];
    if (s.contains("grid_per_axis")) c.plan.grid_per_axis = s["grid_per_axis"].get<int>();
    if (s.contains("random_count")) c.plan.random_count = s["random_count"].get<int>();
    if (s.contains("seed")) c.plan.seed = s["seed"].get<std::uint64_t>();
  }
  try {
    c.validate();
  } catch (const ChartError& e) {
    throw ManifestError(e.what());
  }

  m.metric = sym_from_json(j.at("metric"), c, "metric");
  if (j.contains("xi")) {
    auto comps = j["xi"].get<std::vector<std::string>>();
    if (static_cast<int>(comps.size()) != c.dim)
      throw ManifestError("xi must have one component per coordinate");
    VectorField v;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      try {
        v.comp.push_back(parse(comps[i], c.known_names()));
      } catch (const ParseError& e) {
        throw ManifestError("xi[" + std::to_string(i) + "]: " + e.what());
      }
    }
    m.xi = std::move(v);
  }
  if (j.contains("alpha")) m.alpha = sym_from_json(j["alpha"], c, "alpha");
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (t.contains("tol_curv")) m.tol.tol_curv = t["tol_curv"].get<double>();
    if (t.contains("tol_claim")) m.tol.tol_claim = t["tol_claim"].get<double>();
    if (t.contains("tol_reg")) m.tol.tol_reg = t["tol_reg"].get<double>();
  }
  return m;
}

ordered_json manifest_to_json(const Manifest& m) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  if (!m.name.empty()) j["name"] = m.name;
  j["dim"] = m.chart.dim;
  j["coords"] = m.chart.coords;
  ordered_json dom = ordered_json::object();
  for (int i = 0; i < m.chart.dim; ++i)
    dom[m.chart.coords[i]] = {m.chart.domain[i].lo, m.chart.domain[i].hi};
  j["domain"] = dom;
  j["metric"] = sym_to_json(m.metric);
  if (m.xi) {
    std::vector<std::string> comps;
    for (const auto& e : m.xi->comp) comps.push_back(render(e));
    j["xi"] = comps;
  }
  if (m.alpha) j["alpha"] = sym_to_json(*m.alpha);
  if (!m.chart.params.empty()) {
    ordered_json p = ordered_json::object();
    for (const auto& [k, v] : m.chart.params) p[k] = v;
    j["params"] = p;
  }
  j["sampling"] = {{"grid_per_axis", m.chart.plan.grid_per_axis},
                   {"random_count", m.chart.plan.random_count},
                   {"seed", m.chart.plan.seed}};
  return j;
}

Manifest manifest_from_zoo(const ZooEntry& entry) {
  Manifest m;
  m.name = entry.name + "-" + std::to_string(entry.chart.dim);
  m.chart = entry.chart;
  m.metric = entry.metric;
  m.xi = entry.xi;
  m.alpha = entry.alpha;
  return m;
}

Manifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest file '" + path + "'");
  ordered_json j;
  try {
    in >> j;
  } catch (const ordered_json::exception& e) {
    throw ManifestError("JSON parse error in '" + path + "': " + e.what());
  }
  return manifest_from_json(j);
}

// ---------------------------------------------------------------------------
// deterministic serialization

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

void dump_rec(const ordered_json& j, std::string& out, int indent, int depth) {
  auto pad = [&](int d) { out.append(static_cast<std::size_t>(d) * indent, ' '); };
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += ordered_json(key).dump();
        out += ": ";
        dump_rec(val, out, indent, depth + 1);
      }
      out += '\n';
      pad(depth);
      out += '}';
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& val : j) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        dump_rec(val, out, indent, depth + 1);
      }
      out += '\n';
      pad(depth);
      out += ']';
      return;
    }
    case ordered_json::value_t::number_float: {
      char buf[40];
      double v = j.get<double>();
      if (std::isfinite(v))
        std::snprintf(buf, sizeof buf, "%.17g", v);
      else
        std::snprintf(buf, sizeof buf, "null");  // JSON has no inf/nan
      out += buf;
      return;
    }
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_deterministic(const ordered_json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += '\n';
  return out;
}

// ---------------------------------------------------------------------------
// analysis runner

namespace {

const char* kPass = "pass";
const char* kFail = "fail";
const char* kIndeterminate = "indeterminate";
const char* kSkipped = "skipped";

ordered_json skipped(const std::string& reason) {
  ordered_json b;
  b["status"] = kSkipped;
  b["reason"] = reason;
  return b;
}

ordered_json curvature_block(const MetricDerivs& md, const Manifest& m) {
  ordered_json b;
  double antisym = 0.0, bianchi = 0.0, ricsym = 0.0;
  double scal_min = std::numeric_limits<double>::infinity(), scal_max = -scal_min;
  std::size_t count = 0;
  for (const Vec& p : md.chart().sample_points()) {
    CurvatureAtPoint pt(md, p);
    antisym = std::max(antisym, pt.antisymmetry_residual());
    bianchi = std::max(bianchi, pt.bianchi_residual());
    ricsym = std::max(ricsym, pt.ricci_symmetry_residual());
    scal_min = std::min(scal_min, pt.scalar());
    scal_max = std::max(scal_max, pt.scalar());
    ++count;
  }
  double metricity = parallel_residual(md, md.metric());
  bool ok = antisym <= m.tol.tol_curv && bianchi <= m.tol.tol_curv &&
            ricsym <= m.tol.tol_curv && metricity <= 1e-10;
  b["status"] = ok ? kPass : kFail;
  b["samples"] = count;
  b["antisymmetry_residual"] = antisym;
  b["bianchi_residual"] = bianchi;
  b["ricci_symmetry_residual"] = ricsym;
  b["metricity_residual"] = metricity;
  b["scalar_curvature_min"] = scal_min;
  b["scalar_curvature_max"] = scal_max;
  return b;
}

ordered_json qcc_block(const QCCFit& fit, const MetricDerivs& md, const Manifest& m) {
  ordered_json b;
  b["status"] = fit.qcc_verified ? kPass : kFail;
  b["qcc_residual"] = fit.max_qcc_residual;
  b["identity_residual"] = fit.max_identity_residual;
  b["a_mean"] = fit.mean_a;
  b["b_mean"] = fit.mean_b;
  b["a_spread"] = fit.a_spread;
  b["b_spread"] = fit.b_spread;
  b["constant_ab"] = fit.constant_ab;
  b["min_abs_a_plus_b"] = fit.min_abs_a_plus_b;
  b["regular"] = to_string(fit.regular);
  b["constant_curvature_degenerate"] = fit.b_degenerate;
  if (fit.qcc_verified && m.xi) {
    try {
      RegularityEquivalents eq = regularity_equivalents(md, *m.xi, fit, m.tol);
      ordered_json ej;
      ej["nonzero_a_plus_b"] = eq.nonzero_a_plus_b;
      ej["not_semi_torse_forming"] = eq.not_semi_torse_forming;
      ej["ricci_nondegenerate"] = eq.ricci_nondegenerate;
      ej["q_xi_nonzero"] = eq.q_xi_nonzero;
      b["regularity_equivalents"] = ej;
    } catch (const InternalConsistencyError& e) {
      b["status"] = kFail;
      b["consistency_error"] = e.what();
    }
  }
  // informational residuals (external-theorem checks, never pass/fail)
  double locsym = 0.0, semisym = 0.0;
  for (const Vec& p : md.chart().sample_points()) {
    locsym = std::max(locsym, local_symmetry_residual(md, p));
    semisym = std::max(semisym, ricci_semisym_residual(md, p));
  }
  b["local_symmetry_residual"] = locsym;
  b["ricci_semisymmetry_residual"] = semisym;
  return b;
}

ordered_json parallel_block(const ParallelReport& rep) {
  ordered_json b;
  if (rep.is_parallel && rep.conclusion_guaranteed)
    b["status"] = rep.proportional ? kPass : kFail;
  else
    b["status"] = kIndeterminate;
  b["parallel_residual"] = rep.parallel_residual;
  b["alpha_xi_xi_mean"] = rep.alpha_xi_xi_mean;
  b["alpha_xi_xi_spread"] = rep.alpha_xi_xi_spread;
  b["generator_alignment_residual"] = rep.generator_alignment_residual;
  b["proportionality_residual"] = rep.proportionality_residual;
  b["commutation_residual"] = rep.commutation_residual;
  b["xi_orthogonality_residual"] = rep.xi_orthogonality_residual;
  b["is_parallel"] = rep.is_parallel;
  b["regular"] = rep.regular;
  b["conclusion_guaranteed"] = rep.conclusion_guaranteed;
  if (!rep.conclusion_guaranteed)
    b["note"] = rep.is_parallel ? "proportionality not guaranteed: input not regular or not verified"
                                : "alpha is not parallel; nothing to conclude";
  return b;
}

}  // namespace

ordered_json run(const Manifest& m, const std::set<std::string>& analyses) {
  for (const auto& a : analyses)
    if (a != "curvature" && a != "qcc" && a != "parallel" && a != "soliton" && a != "torse")
      throw ManifestError("unknown analysis '" + a + "'");

  ordered_json report;
  report["schema_version"] = kSchemaVersion;
  report["engine_version"] = kEngineVersion;
  if (!m.name.empty()) report["name"] = m.name;
  {
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(dump_deterministic(manifest_to_json(m)))));
    report["manifest_hash"] = buf;
  }
  report["seed"] = m.chart.plan.seed;

  MetricDerivs md(m.chart, m.metric);
  ordered_json blocks;
  blocks["curvature"] = curvature_block(md, m);

  std::optional<QCCFit> fit;
  bool want = analyses.empty();
  auto wants = [&](const char* name) { return want || analyses.count(name); };

  if (wants("qcc") || wants("parallel") || wants("soliton") || wants("torse")) {
    if (!m.xi) {
      if (wants("qcc")) blocks["qcc"] = skipped("xi required");
    } else {
      try {
        fit = analyze_qcc(md, *m.xi, m.tol);
      } catch (const NonUnitGenerator& e) {
        if (wants("qcc")) blocks["qcc"] = skipped(e.what());
      }
      if (fit && wants("qcc")) blocks["qcc"] = qcc_block(*fit, md, m);
    }
  }

  if (wants("parallel")) {
    if (!m.alpha)
      blocks["parallel"] = skipped("alpha required");
    else if (!m.xi)
      blocks["parallel"] = skipped("xi required");
    else if (!fit)
      blocks["parallel"] = skipped("qcc fit unavailable (non-unit xi?)");
    else
      blocks["parallel"] =
          parallel_block(verify_parallel_proportionality(md, *m.xi, *m.alpha, *fit, m.tol));
  }

  if (wants("soliton")) {
    if (!m.xi) {
      blocks["soliton"] = skipped("xi required");
    } else {
      auto [lambda, residual] = best_lambda(md, *m.xi);
      SolitonClass cls = classify(lambda, residual, m.tol);
      ordered_json b;
      b["status"] = cls == SolitonClass::NotASoliton ? kFail : kPass;
      b["lambda"] = lambda;
      b["residual"] = residual;
      b["class"] = to_string(cls);
      if (fit && fit->qcc_verified && fit->regular == Regularity::Regular) {
        // with V = xi on a verified regular manifold the soliton constant is
        // pinned to -S(xi,xi)
        double sxx = 0.0;
        for (const auto& qp : fit->points) sxx += qp.s_xi_xi;
        sxx /= static_cast<double>(fit->points.size());
        b["s_xi_xi"] = sxx;
        b["lambda_theorem"] = -sxx;
      }
      blocks["soliton"] = b;
    }
  }

  if (wants("torse")) {
    if (!m.xi) {
      blocks["torse"] = skipped("xi required");
    } else {
      try {
        TorseFormingFit tf = torse_forming_detect(md, *m.xi, m.tol);
        ordered_json b;
        b["status"] = tf.subclass == TorseClass::NotTorseForming ? kFail : kPass;
        b["subclass"] = to_string(tf.subclass);
        b["fit_residual"] = tf.fit_residual;
        b["f_mean"] = tf.f_mean;
        b["f_spread"] = tf.f_spread;
        b["geodesic"] = tf.geodesic;
        b["geodesic_norm"] = tf.geodesic_norm;
        b["omega_plus_f_eta_max"] = tf.omega_plus_f_eta_max;
        b["closedness_residual"] = tf.closedness_residual;
        if (tf.subclass == TorseClass::KenmotsuType && fit && fit->qcc_verified) {
          KenmotsuReport kr = kenmotsu_type_check(md, *m.xi, tf, *fit, m.tol);
          ordered_json kj;
          kj["ab_plus_f2_max"] = kr.ab_plus_f2_max;
          kj["f_spread"] = kr.f_spread;
          kj["regular"] = kr.regular;
          kj["theorem_applies"] = kr.theorem_applies;
          kj["lambda_theorem"] = kr.lambda_theorem;
          kj["class"] = to_string(kr.cls);
          b["kenmotsu"] = kj;
        }
        blocks["torse"] = b;
      } catch (const NonUnitGenerator& e) {
        blocks["torse"] = skipped(e.what());
      }
    }
  }

  report["analyses"] = blocks;
  return report;
}

int report_exit_code(const ordered_json& report) {
  for (const auto& [name, block] : report.at("analyses").items())
    if (block.at("status").get<std::string>() == kFail) return 1;
  return 0;
}

}  // namespace qcv
