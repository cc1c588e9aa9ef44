#include "lsm/benchmark_cases.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lsm/errors.hpp"
#include "lsm/unit_cell.hpp"

namespace lsm {

std::string_view to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::uniaxial: return "uniaxial";
    case CaseKind::pure_shear: return "shear";
    case CaseKind::pure_bending: return "bending";
    case CaseKind::cantilever: return "cantilever";
  }
  return "unknown";
}

CaseKind parse_case(std::string_view text) {
  if (text == "uniaxial") return CaseKind::uniaxial;
  if (text == "shear" || text == "pure_shear") return CaseKind::pure_shear;
  if (text == "bending" || text == "pure_bending") return CaseKind::pure_bending;
  if (text == "cantilever") return CaseKind::cantilever;
  throw UsageError("unknown case '" + std::string(text) +
                   "' (expected uniaxial|shear|bending|cantilever)");
}

void BenchmarkCase::validate() const {
  material.validate();
  if (!(geometry.length > 0.0) || !(geometry.height > 0.0)) {
    throw UsageError("plate geometry must be positive");
  }
  if (mesh_sizes.empty()) throw UsageError("benchmark case needs at least one mesh");
  if (!std::isfinite(load)) throw UsageError("load magnitude must be finite");
}

BenchmarkCase default_case(CaseKind kind, double poisson_ratio) {
  BenchmarkCase c;
  c.kind = kind;
  c.material = {2e11, poisson_ratio, 0.01, PlaneRegime::plane_stress};
  switch (kind) {
    case CaseKind::uniaxial:
    case CaseKind::pure_shear:
      c.geometry = {0.2, 0.2};
      c.load = 1e8;
      c.mesh_sizes = {{2, 2}, {4, 4}, {8, 8}, {16, 16}};
      break;
    case CaseKind::pure_bending:
      c.geometry = {0.5, 0.125};
      c.load = 2604.17;
      c.mesh_sizes = {{8, 2}, {16, 4}, {32, 8}, {64, 16}};
      break;
    case CaseKind::cantilever:
      c.geometry = {0.5, 0.125};
      c.load = 1.25e7;
      c.mesh_sizes = {{8, 2}, {16, 4}, {32, 8}, {64, 16}};
      break;
  }
  return c;
}

AnalyticalField::AnalyticalField(BenchmarkCase c, CantileverReading reading)
    : case_(std::move(c)), reading_(reading) {}

Eigen::Vector2d AnalyticalField::operator()(const Eigen::Vector2d& p) const {
  const double e = case_.material.young_modulus;
  const double nu = case_.material.poisson_ratio;
  const double x = p.x();
  const double y = p.y();
  switch (case_.kind) {
    case CaseKind::uniaxial: {
      const double s = case_.load;
      return {s * x / e, -nu * s * y / e};
    }
    case CaseKind::pure_shear: {
      return {case_.load * y / shear_modulus(case_.material), 0.0};
    }
    case CaseKind::pure_bending: {
      const double m = case_.load;
      const double lx = case_.geometry.length;
      const double h = case_.geometry.height;
      const double ei = e * case_.material.thickness * h * h * h / 12.0;
      return {m * y * (-x + lx / 2.0) / ei, m / (2.0 * ei) * (nu * y * y + x * x - x * lx)};
    }
    case CaseKind::cantilever: {
      const double f = case_.load;
      const double a = case_.geometry.length;
      const double b = case_.geometry.half_height();
      const double b3 = b * b * b;
      const double slope = 3.0 * f * a * a / (4.0 * e * b3) *
                           (1.0 + (8.0 + 9.0 * nu) * b * b / (5.0 * a * a));
      double u = 3.0 * f * x * x * y / (4.0 * e * b3) + 3.0 * f * (1.0 + nu) * y / (2.0 * e * b) -
                 f * (2.0 + nu) * y * y * y / (4.0 * e * b3) - slope * y;
      if (reading_ == CantileverReading::as_printed) u -= 3.0 * f * a * a * y / (4.0 * e * b3);
      const double v = -3.0 * f * nu * x * y * y / (4.0 * e * b3) - f * x * x * x / (4.0 * e * b3) -
                       f * a * a * a / (2.0 * e * b3) *
                           (1.0 + (12.0 + 11.0 * nu) * b * b / (5.0 * a * a)) +
                       slope * x;
      return {u, v};
    }
  }
  return Eigen::Vector2d::Zero();
}

AnalyticalField analytical_field(const BenchmarkCase& c, CantileverReading reading) {
  return AnalyticalField(c, reading);
}

double moment_to_linear_traction(double moment, double half_height, double thickness) {
  if (!(half_height > 0.0) || !(thickness > 0.0)) {
    throw UsageError("half-height and thickness must be positive");
  }
  return 3.0 * moment / (2.0 * thickness * half_height * half_height);
}

LatticeMesh case_mesh(const BenchmarkCase& c, MeshSize size) {
  if (size.nx < 1 || size.ny < 1) throw UsageError("mesh needs at least one cell per direction");
  const double lx = c.geometry.length / size.nx;
  const double ly = c.geometry.height / size.ny;
  if (std::abs(lx - ly) > 1e-12 * std::max(lx, ly)) {
    std::ostringstream msg;
    msg << "mesh " << size.nx << "x" << size.ny << " gives non-square cells (" << lx << " x "
        << ly << ") for a " << c.geometry.length << " x " << c.geometry.height << " plate";
    throw UsageError(msg.str());
  }
  const bool beam = c.kind == CaseKind::pure_bending || c.kind == CaseKind::cantilever;
  if (beam && (size.nx % 2 != 0 || size.ny % 2 != 0)) {
    throw UsageError("bending and cantilever supports need even nx and ny");
  }
  LatticeSpec spec;
  spec.nx = size.nx;
  spec.ny = size.ny;
  spec.cell_size = lx;
  spec.origin = beam ? Eigen::Vector2d(0.0, -c.geometry.half_height()) : Eigen::Vector2d::Zero();
  return build_mesh(spec);
}

ConstraintSet case_supports(const BenchmarkCase& c, const LatticeMesh& mesh) {
  ConstraintSet cs;
  const int nx = mesh.spec.nx;
  const int ny = mesh.spec.ny;
  switch (c.kind) {
    case CaseKind::uniaxial:
      for (Index p : mesh.edge_particles(Edge::bottom)) cs.add(LatticeMesh::dof_y(p));
      for (Index p : mesh.edge_particles(Edge::left)) cs.add(LatticeMesh::dof_x(p));
      break;
    case CaseKind::pure_shear:
      for (Index p : mesh.edge_particles(Edge::bottom)) cs.fix_particle(p);
      break;
    case CaseKind::pure_bending:
      cs.add(LatticeMesh::dof_y(mesh.particle(0, ny / 2)));
      cs.add(LatticeMesh::dof_y(mesh.particle(nx, ny / 2)));
      cs.add(LatticeMesh::dof_x(mesh.particle(nx / 2, ny / 2)));
      break;
    case CaseKind::cantilever:
      for (Index p : mesh.edge_particles(Edge::right)) cs.fix_particle(p);
      break;
  }
  return cs;
}

LoadSpec case_loads(const BenchmarkCase& c) {
  LoadSpec loads;
  const Eigen::Vector2d ex = Eigen::Vector2d::UnitX();
  const Eigen::Vector2d ey = Eigen::Vector2d::UnitY();
  switch (c.kind) {
    case CaseKind::uniaxial:
      loads.edge_tractions.push_back({Edge::right, TractionProfile::uniform, c.load, ex});
      break;
    case CaseKind::pure_shear:
      loads.edge_tractions.push_back({Edge::right, TractionProfile::uniform, c.load, ey});
      loads.edge_tractions.push_back({Edge::left, TractionProfile::uniform, c.load, -ey});
      loads.edge_tractions.push_back({Edge::top, TractionProfile::uniform, c.load, ex});
      break;
    case CaseKind::pure_bending: {
      // sigma_xx = -M y / I: compressive on top at the right edge.
      const double sigma0 = moment_to_linear_traction(c.load, c.geometry.half_height(),
                                                      c.material.thickness);
      loads.edge_tractions.push_back({Edge::right, TractionProfile::linear, sigma0, -ex});
      loads.edge_tractions.push_back({Edge::left, TractionProfile::linear, sigma0, ex});
      break;
    }
    case CaseKind::cantilever:
      // Total end load F * t spread uniformly over the edge height 2b.
      loads.edge_tractions.push_back(
          {Edge::left, TractionProfile::uniform, c.load / c.geometry.height, -ey});
      break;
  }
  return loads;
}

bool ErrorReport::unstable() const {
  return std::any_of(runs.begin(), runs.end(), [](const MeshRun& r) { return r.indefinite; });
}

namespace {

double relative_l2(const std::vector<double>& num, const std::vector<double>& ana,
                   double fallback_scale) {
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < num.size(); ++i) {
    diff += (num[i] - ana[i]) * (num[i] - ana[i]);
    ref += ana[i] * ana[i];
  }
  // Profiles whose analytical values vanish (v = 0 in shear) are measured
  // against the field scale instead.
  if (ref == 0.0) ref = fallback_scale * fallback_scale * static_cast<double>(num.size());
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

Profile sample_profile(std::string name, const std::vector<Index>& particles, int component,
                       const LatticeMesh& mesh, const SolutionField& field,
                       const std::vector<Eigen::Vector2d>& analytical, bool along_x,
                       double fallback_scale) {
  Profile prof;
  prof.name = std::move(name);
  prof.particles = particles;
  for (Index p : particles) {
    const auto& pos = mesh.positions[p];
    prof.coordinate.push_back(along_x ? pos.x() : pos.y());
    prof.numerical.push_back(field.displacements[p](component));
    prof.analytical.push_back(analytical[p](component));
  }
  prof.relative_error = relative_l2(prof.numerical, prof.analytical, fallback_scale);
  return prof;
}

MeshRun run_mesh(const BenchmarkCase& c, const UnitCellMatrix& cell, MeshSize size) {
  MeshRun run;
  run.mesh = size;
  run.lattice = case_mesh(c, size);
  const auto& mesh = run.lattice;

  GlobalSystem system = assemble(mesh, cell);
  system = apply_loads(std::move(system), mesh, case_loads(c), c.material.thickness);
  const ReducedSystem reduced = apply_constraints(system, case_supports(c, mesh));
  SolveResult solved = solve(reduced);
  run.field = std::move(solved.field);
  run.negative_pivots = solved.negative_pivots;
  run.indefinite = solved.indefinite;

  const AnalyticalField exact = analytical_field(c);
  run.analytical.reserve(mesh.positions.size());
  for (const auto& pos : mesh.positions) run.analytical.push_back(exact(pos));

  // The cantilever clamp is strong in the lattice but weak in the analytical
  // field; its column is left out of every comparison.
  const bool clamp = c.kind == CaseKind::cantilever;
  double diff2 = 0.0;
  double ref2 = 0.0;
  double scale = 0.0;
  for (Index p = 0; p < mesh.particle_count(); ++p) {
    if (clamp && p % (mesh.spec.nx + 1) == mesh.spec.nx) continue;
    const Eigen::Vector2d d = run.field.displacements[p] - run.analytical[p];
    diff2 += d.squaredNorm();
    ref2 += run.analytical[p].squaredNorm();
    run.max_error = std::max(run.max_error, d.cwiseAbs().maxCoeff());
    scale = std::max(scale, run.analytical[p].cwiseAbs().maxCoeff());
  }
  run.field_error = ref2 > 0.0 ? std::sqrt(diff2 / ref2) : std::sqrt(diff2);

  switch (c.kind) {
    case CaseKind::uniaxial:
    case CaseKind::pure_shear:
      run.u_profile = sample_profile("u_right_edge", mesh.edge_particles(Edge::right), 0, mesh,
                                     run.field, run.analytical, false, scale);
      run.v_profile = sample_profile("v_top_edge", mesh.edge_particles(Edge::top), 1, mesh,
                                     run.field, run.analytical, true, scale);
      break;
    case CaseKind::pure_bending:
    case CaseKind::cantilever: {
      std::vector<Index> axis;
      const int last = clamp ? mesh.spec.nx - 1 : mesh.spec.nx;
      for (int i = 0; i <= last; ++i) axis.push_back(mesh.particle(i, mesh.spec.ny / 2));
      run.u_profile = sample_profile("u_left_edge", mesh.edge_particles(Edge::left), 0, mesh,
                                     run.field, run.analytical, false, scale);
      run.v_profile =
          sample_profile("v_axis", axis, 1, mesh, run.field, run.analytical, true, scale);
      break;
    }
  }
  return run;
}

}  // namespace

ErrorReport run_case(const BenchmarkCase& c, BondModel model) {
  c.validate();
  const Calibration cal = calibrate(c.material, model);
  const UnitCellMatrix cell = cell_matrix(cal.stiffness);

  ErrorReport report;
  report.kind = c.kind;
  report.model = model;
  report.poisson_ratio = c.material.poisson_ratio;
  report.negative_shear_advisory = cal.negative_shear_advisory;
  for (const MeshSize& size : c.mesh_sizes) {
    try {
      report.runs.push_back(run_mesh(c, cell, size));
    } catch (const SingularSystemError& err) {
      std::ostringstream msg;
      msg << to_string(c.kind) << " case, " << to_string(model) << " model, nu = "
          << c.material.poisson_ratio << ", mesh " << size.nx << "x" << size.ny << ": "
          << err.what();
      throw SingularSystemError(msg.str());
    }
  }
  return report;
}

ConvergenceTable convergence_table(const ErrorReport& report) {
  ConvergenceTable table;
  table.kind = report.kind;
  table.model = report.model;
  table.poisson_ratio = report.poisson_ratio;
  for (const auto& run : report.runs) {
    table.rows.push_back({run.mesh, run.field_error, run.u_profile.relative_error,
                          run.v_profile.relative_error, run.negative_pivots});
  }
  table.strictly_decreasing = !table.rows.empty();
  for (std::size_t i = 1; i < table.rows.size(); ++i) {
    if (!(table.rows[i].u_profile_error < table.rows[i - 1].u_profile_error) ||
        !(table.rows[i].v_profile_error < table.rows[i - 1].v_profile_error)) {
      table.strictly_decreasing = false;
    }
  }
  return table;
}

ConvergenceTable convergence_study(const BenchmarkCase& c, BondModel model) {
  return convergence_table(run_case(c, model));
}

}  // namespace lsm
