#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "quasicurv/manifest.hpp"

namespace {

constexpr int kExitInputError = 2;

std::set<std::string> parse_analyses(const std::string& csv) {
  std::set<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.insert(item);
  return out;
}

void apply_tol(qcv::Manifest& m, const std::vector<std::string>& tols) {
  for (const auto& t : tols) {
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw qcv::ManifestError("--tol expects name=value, got '" + t + "'");
    std::string name = t.substr(0, eq);
    double value = 0.0;
    try {
      value = std::stod(t.substr(eq + 1));
    } catch (const std::exception&) {
      throw qcv::ManifestError("--tol " + name + ": value is not a number");
    }
    if (name == "tol_curv")
      m.tol.tol_curv = value;
    else if (name == "tol_claim")
      m.tol.tol_claim = value;
    else if (name == "tol_reg")
      m.tol.tol_reg = value;
    else
      throw qcv::ManifestError("--tol: unknown tolerance '" + name +
                               "' (expected tol_curv, tol_claim, or tol_reg)");
  }
}

void write_out(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw qcv::ManifestError("cannot write to '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curvature analysis engine for metrics given in closed form on a chart"};
  app.require_subcommand(1);

  // analyze ------------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "Run analyses from a JSON manifest");
  std::string manifest_path, analyses_csv, out_path;
  std::vector<std::string> tol_args;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int samples = 0;
  bool samples_set = false;
  analyze->add_option("manifest", manifest_path, "Path to the manifest file")->required();
  analyze->add_option("--analyses", analyses_csv,
                      "Comma-separated subset of qcc,soliton,parallel,torse (default: all)");
  analyze->add_option("--out", out_path, "Write the report here instead of stdout");
  analyze->add_option("--seed", seed, "Override the sampling seed")
      ->each([&](const std::string&) { seed_set = true; });
  analyze->add_option("--samples", samples, "Override the total sample count")
      ->each([&](const std::string&) { samples_set = true; })
      ->check(CLI::PositiveNumber);
  analyze->add_option("--tol", tol_args, "Override a tolerance, e.g. --tol tol_claim=1e-8");

  // zoo ----------------------------------------------------------------------
  auto* zoo = app.add_subcommand("zoo", "Built-in example manifolds");
  zoo->require_subcommand(1);
  auto* zoo_list = zoo->add_subcommand("list", "List example names");
  auto* zoo_emit = zoo->add_subcommand("emit", "Write the manifest for one example");
  std::string zoo_name, zoo_out;
  int zoo_dim = 3;
  zoo_emit->add_option("name", zoo_name, "Example name (see 'zoo list')")->required();
  zoo_emit->add_option("--dim", zoo_dim, "Dimension, 3 or 4");
  zoo_emit->add_option("--out", zoo_out, "Write the manifest here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  try {
    if (*zoo_list) {
      for (const auto& name : qcv::zoo_names()) std::cout << name << "\n";
      return 0;
    }
    if (*zoo_emit) {
      qcv::Manifest m = qcv::manifest_from_zoo(qcv::zoo_entry(zoo_name, zoo_dim));
      write_out(qcv::dump_deterministic(qcv::manifest_to_json(m)), zoo_out);
      return 0;
    }

    qcv::Manifest m = qcv::load_manifest(manifest_path);
    if (seed_set) m.chart.plan.seed = seed;
    if (samples_set) {
      int grid = 1;
      for (int i = 0; i < m.chart.dim; ++i) grid *= m.chart.plan.grid_per_axis;
      if (samples < grid)
        throw qcv::ManifestError("--samples must be at least the grid size (" +
                                 std::to_string(grid) + ")");
      m.chart.plan.random_count = samples - grid;
    }
    apply_tol(m, tol_args);

    nlohmann::ordered_json report = qcv::run(m, parse_analyses(analyses_csv));
    write_out(qcv::dump_deterministic(report), out_path);
    return qcv::report_exit_code(report);
  } catch (const qcv::ManifestError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const qcv::ChartError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const qcv::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const qcv::GeometryError& e) {
    // bad metric data (not positive definite, evaluation domain errors)
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const qcv::EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInputError;
  }
}
