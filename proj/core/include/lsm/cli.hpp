#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lsm/benchmark_cases.hpp"
#include "lsm/material.hpp"

namespace lsm::cli {

/// Flat key=value settings. Recognised keys:
///   material.E, material.thickness, material.regime (stress|strain|both),
///   run.model (born|modified|both), run.nu, run.mesh, run.case, run.out,
///   stiffness.kn1, stiffness.ks1, stiffness.kn2,
///   case.load, case.length, case.height
using KeyValues = std::map<std::string, std::string>;

/// Parses "key = value" lines; '#' starts a comment. Unknown keys are
/// rejected later by make_config, duplicate keys here.
KeyValues parse_key_values(std::string_view text);

/// Comma-separated Poisson ratios. "grid" expands to 0, 0.05, ..., 0.45, 0.49.
std::vector<double> parse_nu_list(std::string_view text);
/// "8x2,16x4"
std::vector<MeshSize> parse_mesh_list(std::string_view text);

std::vector<double> poisson_grid();

struct RunConfig {
  double young_modulus = 2e11;
  double thickness = 0.01;
  std::vector<PlaneRegime> regimes = {PlaneRegime::plane_stress};
  std::vector<BondModel> models = {BondModel::born, BondModel::modified};
  std::optional<std::vector<double>> nu;
  std::vector<MeshSize> meshes;  // empty: case defaults
  std::optional<CaseKind> case_kind;
  std::string out_dir = "lsm_out";
  std::optional<double> k_n1, k_s1, k_n2;
  std::optional<double> load;
  std::optional<double> length;
  std::optional<double> height;

  /// Poisson ratios to run: explicit list, otherwise `fallback`.
  std::vector<double> nu_or(const std::vector<double>& fallback) const {
    return nu ? *nu : fallback;
  }
};

/// Validates every key; throws UsageError on unknown keys or bad values.
RunConfig make_config(const KeyValues& values);

struct ResultFile {
  std::string name;
  std::string content;
};

/// Output files of one command plus a run manifest (inputs, tool version,
/// timestamp). Only the manifest varies between identical runs.
struct ResultBundle {
  std::vector<ResultFile> files;
  std::string manifest;
  /// Numerical failures (indefinite systems) found while producing the
  /// files. The files are still complete; the tool exits with code 3.
  std::vector<std::string> failures;

  const ResultFile* find(std::string_view name) const;
};

ResultBundle cmd_calibrate(const RunConfig& config);
ResultBundle cmd_eigen(const RunConfig& config);
ResultBundle cmd_benchmark(const RunConfig& config);
ResultBundle cmd_convergence(const RunConfig& config);

/// Creates `dir` if needed and writes every file plus manifest.txt.
/// Throws IoError.
void write_bundle(const ResultBundle& bundle, const std::string& dir);

std::string_view version();

}  // namespace lsm::cli
