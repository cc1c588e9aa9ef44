#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "lsm/lattice.hpp"
#include "lsm/material.hpp"

namespace lsm {

/// Plate problems with closed-form plane-stress displacement fields.
enum class CaseKind { uniaxial, pure_shear, pure_bending, cantilever };

std::string_view to_string(CaseKind kind);
/// Accepts uniaxial, shear|pure_shear, bending|pure_bending, cantilever.
CaseKind parse_case(std::string_view text);

struct MeshSize {
  int nx = 1;
  int ny = 1;
  friend bool operator==(const MeshSize&, const MeshSize&) = default;
};

/// Plate extent. Uniaxial/shear plates are square (length = height = l) with
/// the origin at the bottom-left corner; bending/cantilever plates have
/// length a and height h = 2b with the origin at mid-height of the left edge.
struct PlateGeometry {
  double length = 0.0;
  double height = 0.0;
  double half_height() const { return 0.5 * height; }
};

struct BenchmarkCase {
  CaseKind kind = CaseKind::uniaxial;
  PlateGeometry geometry;
  MaterialParams material;
  /// sigma_xx (Pa) | tau0 (Pa) | bending moment M (N m) | end load F per
  /// unit thickness (N/m), depending on kind.
  double load = 0.0;
  std::vector<MeshSize> mesh_sizes;

  void validate() const;
};

/// E = 2e11 Pa, t = 0.01 m, plane stress. Square plates are 0.2 m with the
/// meshes 2x2..16x16; beams are 0.5 x 0.125 m with meshes 8x2..64x16.
BenchmarkCase default_case(CaseKind kind, double poisson_ratio);

/// The printed cantilever u-field repeats the term -3Fa^2y/(4Eb^3). The
/// single-term reading is the one compatible with the end-loaded stress
/// field; the literal one is kept for comparison.
enum class CantileverReading { single_term, as_printed };

class AnalyticalField {
 public:
  AnalyticalField(BenchmarkCase c, CantileverReading reading);
  /// Displacement (u, v) in m at a position in the case frame.
  Eigen::Vector2d operator()(const Eigen::Vector2d& position) const;

 private:
  BenchmarkCase case_;
  CantileverReading reading_;
};

AnalyticalField analytical_field(const BenchmarkCase& c,
                                 CantileverReading reading = CantileverReading::single_term);

/// Corner magnitude of sigma(y) = sigma0 * y / b whose moment over the edge
/// of height 2b and thickness t equals M: sigma0 = 3M / (2 t b^2).
double moment_to_linear_traction(double moment, double half_height, double thickness);

/// Square-cell lattice for one mesh of the case. Throws UsageError when the
/// cells would not be square, or when a bending/cantilever mesh has odd nx/ny.
LatticeMesh case_mesh(const BenchmarkCase& c, MeshSize size);
ConstraintSet case_supports(const BenchmarkCase& c, const LatticeMesh& mesh);
LoadSpec case_loads(const BenchmarkCase& c);

/// Displacement component sampled along a line of particles.
struct Profile {
  std::string name;
  std::vector<Index> particles;
  std::vector<double> coordinate;  // position along the line (m)
  std::vector<double> numerical;
  std::vector<double> analytical;
  double relative_error = 0.0;  // relative L2
};

struct MeshRun {
  MeshSize mesh;
  LatticeMesh lattice;
  SolutionField field;
  std::vector<Eigen::Vector2d> analytical;
  /// Relative L2 error over compared particles (the clamped column of the
  /// cantilever is excluded).
  double field_error = 0.0;
  double max_error = 0.0;  // m
  Profile u_profile;
  Profile v_profile;
  int negative_pivots = 0;
  bool indefinite = false;
};

struct ErrorReport {
  CaseKind kind = CaseKind::uniaxial;
  BondModel model = BondModel::born;
  double poisson_ratio = 0.0;
  bool negative_shear_advisory = false;
  std::vector<MeshRun> runs;

  /// Any mesh produced an indefinite reduced stiffness.
  bool unstable() const;
};

/// Calibrate, mesh, assemble, support, load, solve and compare for every
/// mesh of the case. Solver failures are rethrown with the case context.
ErrorReport run_case(const BenchmarkCase& c, BondModel model);

struct ConvergenceRow {
  MeshSize mesh;
  double field_error = 0.0;
  double u_profile_error = 0.0;
  double v_profile_error = 0.0;
  int negative_pivots = 0;
};

struct ConvergenceTable {
  CaseKind kind = CaseKind::uniaxial;
  BondModel model = BondModel::born;
  double poisson_ratio = 0.0;
  std::vector<ConvergenceRow> rows;
  /// Both profile errors strictly decrease from one mesh to the next.
  bool strictly_decreasing = false;
};

ConvergenceTable convergence_study(const BenchmarkCase& c, BondModel model);
ConvergenceTable convergence_table(const ErrorReport& report);

}  // namespace lsm
