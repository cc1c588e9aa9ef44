#include "lsm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "lsm/errors.hpp"

namespace lsm {

std::string_view to_string(Edge edge) {
  switch (edge) {
    case Edge::left: return "left";
    case Edge::right: return "right";
    case Edge::top: return "top";
    case Edge::bottom: return "bottom";
  }
  return "unknown";
}

Edge parse_edge(std::string_view text) {
  if (text == "left") return Edge::left;
  if (text == "right") return Edge::right;
  if (text == "top") return Edge::top;
  if (text == "bottom") return Edge::bottom;
  throw UsageError("unknown edge '" + std::string(text) + "'");
}

std::vector<Index> LatticeMesh::edge_particles(Edge edge) const {
  std::vector<Index> out;
  const int nx = spec.nx;
  const int ny = spec.ny;
  switch (edge) {
    case Edge::bottom:
      for (int i = 0; i <= nx; ++i) out.push_back(particle(i, 0));
      break;
    case Edge::top:
      for (int i = 0; i <= nx; ++i) out.push_back(particle(i, ny));
      break;
    case Edge::left:
      for (int j = 0; j <= ny; ++j) out.push_back(particle(0, j));
      break;
    case Edge::right:
      for (int j = 0; j <= ny; ++j) out.push_back(particle(nx, j));
      break;
  }
  return out;
}

Eigen::Vector2d LatticeMesh::centroid() const {
  return spec.origin + 0.5 * spec.cell_size * Eigen::Vector2d(spec.nx, spec.ny);
}

LatticeMesh build_mesh(const LatticeSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) {
    throw UsageError("lattice needs at least one cell per direction, got " +
                     std::to_string(spec.nx) + "x" + std::to_string(spec.ny));
  }
  if (!(spec.cell_size > 0.0) || !std::isfinite(spec.cell_size)) {
    throw UsageError("cell size must be positive");
  }
  LatticeMesh mesh;
  mesh.spec = spec;
  mesh.positions.reserve(static_cast<std::size_t>(spec.nx + 1) * (spec.ny + 1));
  for (int j = 0; j <= spec.ny; ++j) {
    for (int i = 0; i <= spec.nx; ++i) {
      mesh.positions.push_back(spec.origin + spec.cell_size * Eigen::Vector2d(i, j));
    }
  }
  mesh.cells.reserve(static_cast<std::size_t>(spec.nx) * spec.ny);
  for (int j = 0; j < spec.ny; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      mesh.cells.push_back({mesh.particle(i, j), mesh.particle(i + 1, j),
                            mesh.particle(i + 1, j + 1), mesh.particle(i, j + 1)});
    }
  }
  return mesh;
}

void ConstraintSet::add(Index dof, double value) {
  if (dof < 0) throw UsageError("negative DOF index " + std::to_string(dof));
  if (contains(dof)) throw UsageError("DOF " + std::to_string(dof) + " prescribed twice");
  entries_.push_back({dof, value});
}

void ConstraintSet::fix_particle(Index particle, double u, double v) {
  add(LatticeMesh::dof_x(particle), u);
  add(LatticeMesh::dof_y(particle), v);
}

bool ConstraintSet::contains(Index dof) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [dof](const PrescribedDof& p) { return p.dof == dof; });
}

GlobalSystem assemble(const LatticeMesh& mesh, const UnitCellMatrix& cell) {
  const Index n = mesh.dof_count();
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(mesh.cells.size() * 64);
  for (const auto& corners : mesh.cells) {
    std::array<int, 8> dofs{};
    for (int c = 0; c < 4; ++c) {
      if (corners[c] < 0 || corners[c] >= mesh.particle_count()) {
        throw std::out_of_range("cell references particle " + std::to_string(corners[c]));
      }
      dofs[2 * c] = static_cast<int>(LatticeMesh::dof_x(corners[c]));
      dofs[2 * c + 1] = static_cast<int>(LatticeMesh::dof_y(corners[c]));
    }
    for (int a = 0; a < 8; ++a) {
      for (int b = 0; b < 8; ++b) {
        const double v = cell.entries(a, b);
        if (v != 0.0) triplets.emplace_back(dofs[a], dofs[b], v);
      }
    }
  }
  GlobalSystem system;
  system.stiffness.resize(static_cast<int>(n), static_cast<int>(n));
  // setFromTriplets sums duplicates in insertion order, so the result is
  // bitwise reproducible for a fixed cell ordering.
  system.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  system.forces = Eigen::VectorXd::Zero(n);
  return system;
}

GlobalSystem apply_loads(GlobalSystem system, const LatticeMesh& mesh, const LoadSpec& loads,
                         double thickness) {
  for (const auto& pf : loads.point_forces) {
    if (pf.particle < 0 || pf.particle >= mesh.particle_count()) {
      throw UsageError("point force on nonexistent particle " + std::to_string(pf.particle));
    }
    system.forces(LatticeMesh::dof_x(pf.particle)) += pf.force.x();
    system.forces(LatticeMesh::dof_y(pf.particle)) += pf.force.y();
  }

  const double l = mesh.spec.cell_size;
  for (const auto& tr : loads.edge_tractions) {
    if (!std::isfinite(tr.magnitude)) throw UsageError("traction magnitude must be finite");
    const auto particles = mesh.edge_particles(tr.edge);
    const bool vertical = tr.edge == Edge::left || tr.edge == Edge::right;
    const Eigen::Vector2d first = mesh.positions[particles.front()];
    const Eigen::Vector2d last = mesh.positions[particles.back()];
    const double mid = vertical ? 0.5 * (first.y() + last.y()) : 0.5 * (first.x() + last.x());
    const double half_length = 0.5 * (vertical ? last.y() - first.y() : last.x() - first.x());

    for (std::size_t k = 0; k < particles.size(); ++k) {
      const Index p = particles[k];
      double sigma = tr.magnitude;
      if (tr.profile == TractionProfile::linear) {
        const double s = (vertical ? mesh.positions[p].y() : mesh.positions[p].x()) - mid;
        sigma = tr.magnitude * s / half_length;
      }
      const double weight = (k == 0 || k + 1 == particles.size()) ? 0.5 : 1.0;
      const Eigen::Vector2d f = weight * sigma * thickness * l * tr.direction;
      system.forces(LatticeMesh::dof_x(p)) += f.x();
      system.forces(LatticeMesh::dof_y(p)) += f.y();
    }
  }
  return system;
}

ReducedSystem apply_constraints(const GlobalSystem& system, const ConstraintSet& constraints) {
  const Index n = system.stiffness.rows();
  ReducedSystem out;
  out.full_dimension = n;
  out.prescribed = Eigen::VectorXd::Zero(n);

  std::vector<Index> reduced_of(n, 0);
  std::vector<bool> fixed(n, false);
  for (const auto& c : constraints.entries()) {
    if (c.dof < 0 || c.dof >= n) {
      throw UsageError("constraint on nonexistent DOF " + std::to_string(c.dof));
    }
    fixed[c.dof] = true;
    out.prescribed(c.dof) = c.value;
  }
  for (Index i = 0; i < n; ++i) {
    if (fixed[i]) {
      reduced_of[i] = -1;
    } else {
      reduced_of[i] = static_cast<Index>(out.free_dofs.size());
      out.free_dofs.push_back(i);
    }
  }

  const Index m = static_cast<Index>(out.free_dofs.size());
  out.forces.resize(m);
  for (Index r = 0; r < m; ++r) out.forces(r) = system.forces(out.free_dofs[r]);

  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(system.stiffness.nonZeros());
  for (int col = 0; col < system.stiffness.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(system.stiffness, col); it; ++it) {
      const Index ri = reduced_of[it.row()];
      const Index rj = reduced_of[it.col()];
      if (ri >= 0 && rj >= 0) {
        triplets.emplace_back(static_cast<int>(ri), static_cast<int>(rj), it.value());
      } else if (ri >= 0) {
        out.forces(ri) -= it.value() * out.prescribed(it.col());
      }
    }
  }
  out.stiffness.resize(static_cast<int>(m), static_cast<int>(m));
  out.stiffness.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

Eigen::VectorXd SolutionField::as_dofs() const {
  Eigen::VectorXd d(2 * static_cast<Index>(displacements.size()));
  for (std::size_t p = 0; p < displacements.size(); ++p) {
    d(2 * p) = displacements[p].x();
    d(2 * p + 1) = displacements[p].y();
  }
  return d;
}

SolutionField SolutionField::from_dofs(const Eigen::VectorXd& dofs) {
  SolutionField f;
  f.displacements.resize(static_cast<std::size_t>(dofs.size() / 2));
  for (std::size_t p = 0; p < f.displacements.size(); ++p) {
    f.displacements[p] = Eigen::Vector2d(dofs(2 * p), dofs(2 * p + 1));
  }
  return f;
}

namespace {

using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

constexpr double kPivotTol = 1e-13;
constexpr double kResidualTarget = 1e-10;

// Factorizes and validates pivots; returns the number of negative pivots.
int factorize(Ldlt& ldlt, const SparseMatrix& k) {
  ldlt.compute(k);
  if (ldlt.info() != Eigen::Success) {
    throw SingularSystemError(
        "LDL^T factorization hit an exact zero pivot: the constraints leave a rigid-body "
        "mode (singular stiffness)");
  }
  const Eigen::VectorXd d = ldlt.vectorD();
  const double max_pivot = d.cwiseAbs().maxCoeff();
  int negative = 0;
  for (Index i = 0; i < d.size(); ++i) {
    if (std::abs(d(i)) <= kPivotTol * max_pivot) {
      std::ostringstream msg;
      msg << "near-zero pivot " << d(i) << " (max " << max_pivot
          << "): stiffness is singular, the constraints leave a zero-energy mode";
      throw SingularSystemError(msg.str());
    }
    if (d(i) < 0.0) ++negative;
  }
  return negative;
}

}  // namespace

int negative_inertia(const ReducedSystem& system) {
  if (system.stiffness.rows() == 0) return 0;
  Ldlt ldlt;
  return factorize(ldlt, system.stiffness);
}

SolveResult solve(const ReducedSystem& system) {
  SolveResult result;
  Eigen::VectorXd full = system.prescribed;
  const Index m = system.stiffness.rows();

  if (m > 0) {
    Ldlt ldlt;
    result.negative_pivots = factorize(ldlt, system.stiffness);
    result.indefinite = result.negative_pivots > 0;

    Eigen::VectorXd u = ldlt.solve(system.forces);
    const double f_norm = system.forces.norm();
    auto residual_ratio = [&](const Eigen::VectorXd& x) {
      const double r = (system.stiffness * x - system.forces).norm();
      return f_norm > 0.0 ? r / f_norm : r;
    };
    double ratio = residual_ratio(u);
    // A few steps of iterative refinement for badly scaled indefinite systems.
    for (int step = 0; step < 3 && ratio > kResidualTarget; ++step) {
      u += ldlt.solve(system.forces - system.stiffness * u);
      ratio = residual_ratio(u);
    }
    if (!u.allFinite() || ratio > kResidualTarget) {
      std::ostringstream msg;
      msg << "solve did not reach residual target: |Ku - f|/|f| = " << ratio
          << (result.indefinite ? " (indefinite system, " : " (")
          << result.negative_pivots << " negative pivots)";
      throw SingularSystemError(msg.str());
    }
    result.relative_residual = ratio;
    for (Index r = 0; r < m; ++r) full(system.free_dofs[r]) = u(r);
  }

  result.field = SolutionField::from_dofs(full);
  return result;
}

std::vector<double> constrained_spectrum(const ReducedSystem& system) {
  const Eigen::MatrixXd dense(system.stiffness);
  if (dense.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

}  // namespace lsm
