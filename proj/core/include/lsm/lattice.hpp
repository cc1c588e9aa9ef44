#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "lsm/unit_cell.hpp"

namespace lsm {

using Index = std::int64_t;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

struct LatticeSpec {
  int nx = 1;
  int ny = 1;
  double cell_size = 1.0;  // particle spacing l (m)
  Eigen::Vector2d origin = Eigen::Vector2d::Zero();

  /// Neighbouring particles touch: spacing = 2r.
  double particle_radius() const { return cell_size / 2.0; }
};

enum class Edge { left, right, top, bottom };

std::string_view to_string(Edge edge);
Edge parse_edge(std::string_view text);

/// Regular particle grid, row-major from the bottom-left particle.
/// DOFs are particle-major with x before y: particle p owns (2p, 2p+1).
struct LatticeMesh {
  LatticeSpec spec;
  std::vector<Eigen::Vector2d> positions;
  /// Corner particles (A lower-left, B lower-right, C upper-right, D upper-left).
  std::vector<std::array<Index, 4>> cells;

  Index particle_count() const { return static_cast<Index>(positions.size()); }
  Index dof_count() const { return 2 * particle_count(); }
  Index particle(int i, int j) const { return static_cast<Index>(j) * (spec.nx + 1) + i; }
  static Index dof_x(Index p) { return 2 * p; }
  static Index dof_y(Index p) { return 2 * p + 1; }

  /// Particles on an edge, ordered by increasing x (bottom/top) or y (left/right).
  std::vector<Index> edge_particles(Edge edge) const;
  Eigen::Vector2d centroid() const;
};

/// Throws UsageError for nx, ny < 1 or a non-positive cell size.
LatticeMesh build_mesh(const LatticeSpec& spec);

struct PrescribedDof {
  Index dof = 0;
  double value = 0.0;  // m
};

/// Dirichlet data; a DOF may be prescribed at most once.
class ConstraintSet {
 public:
  void add(Index dof, double value = 0.0);
  void fix_particle(Index particle, double u = 0.0, double v = 0.0);
  bool contains(Index dof) const;
  const std::vector<PrescribedDof>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<PrescribedDof> entries_;
};

enum class TractionProfile {
  uniform,  // sigma
  linear,   // sigma0 * s / half_length, s measured from the edge midpoint
};

struct EdgeTraction {
  Edge edge = Edge::right;
  TractionProfile profile = TractionProfile::uniform;
  double magnitude = 0.0;  // Pa
  Eigen::Vector2d direction = Eigen::Vector2d::UnitX();
};

struct PointForce {
  Index particle = 0;
  Eigen::Vector2d force = Eigen::Vector2d::Zero();  // N
};

struct LoadSpec {
  std::vector<PointForce> point_forces;
  std::vector<EdgeTraction> edge_tractions;
};

struct GlobalSystem {
  SparseMatrix stiffness;
  Eigen::VectorXd forces;
};

/// Scatters the same cell matrix into every cell. Edge bonds shared by two
/// cells pick up both half contributions; boundary bonds keep a single one.
GlobalSystem assemble(const LatticeMesh& mesh, const UnitCellMatrix& cell);

/// Tractions are lumped with the trapezoidal rule on nodal values: a
/// particle receives sigma(s_i) * t * l, end particles half of that.
GlobalSystem apply_loads(GlobalSystem system, const LatticeMesh& mesh, const LoadSpec& loads,
                         double thickness);

/// System with prescribed DOFs eliminated.
struct ReducedSystem {
  SparseMatrix stiffness;
  Eigen::VectorXd forces;  // corrected for inhomogeneous prescribed values
  std::vector<Index> free_dofs;  // reduced index -> full DOF
  Eigen::VectorXd prescribed;  // full-length, prescribed values (0 elsewhere)
  Index full_dimension = 0;
};

ReducedSystem apply_constraints(const GlobalSystem& system, const ConstraintSet& constraints);

struct SolutionField {
  std::vector<Eigen::Vector2d> displacements;  // per particle (u, v), m

  Eigen::VectorXd as_dofs() const;
  static SolutionField from_dofs(const Eigen::VectorXd& dofs);
};

struct SolveResult {
  SolutionField field;
  int negative_pivots = 0;  // inertia of the reduced stiffness
  bool indefinite = false;
  double relative_residual = 0.0;
};

/// Signed LDL^T solve. Indefinite systems are solved and flagged; a zero
/// pivot or an unreachable residual target throws SingularSystemError.
SolveResult solve(const ReducedSystem& system);

/// Inertia (number of negative pivots) of the reduced stiffness.
int negative_inertia(const ReducedSystem& system);

/// Complete ascending spectrum of the reduced stiffness (dense solve, meant
/// for small constrained systems).
std::vector<double> constrained_spectrum(const ReducedSystem& system);

}  // namespace lsm
