#pragma once

#include <set>

// single-header nlohmann/json from vendor/
#include "json.hpp"

#include "quasicurv/zoo.hpp"

namespace qcv {

inline constexpr const char* kEngineVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct ManifestError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Everything needed to run the engine on one manifold, as read from a JSON
/// manifest file.
struct Manifest {
  std::string name;
  Chart chart;
  MetricField metric;
  std::optional<VectorField> xi;
  std::optional<SymTensor2Field> alpha;
  Tolerances tol;
};

Manifest manifest_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json manifest_to_json(const Manifest& m);
Manifest manifest_from_zoo(const ZooEntry& entry);

Manifest load_manifest(const std::string& path);

/// Known analysis names: curvature, qcc, parallel, soliton, torse.
/// curvature always runs; the rest run when requested and their inputs are
/// present, otherwise their block is marked skipped with a reason.
nlohmann::ordered_json run(const Manifest& m, const std::set<std::string>& analyses);

/// 0 if no analysis failed, 1 otherwise.
int report_exit_code(const nlohmann::ordered_json& report);

/// Deterministic serialization: keys in insertion order, floating point
/// numbers printed with 17 significant digits.
std::string dump_deterministic(const nlohmann::ordered_json& j, int indent = 2);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace qcv
