#include <gtest/gtest.h>

#include <array>

#include "lsm/benchmark_cases.hpp"
#include "lsm/errors.hpp"

namespace lsm {
namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

TEST(ParseCase, Aliases) {
  EXPECT_EQ(parse_case("shear"), CaseKind::pure_shear);
  EXPECT_EQ(parse_case("pure_bending"), CaseKind::pure_bending);
  EXPECT_EQ(parse_case(to_string(CaseKind::cantilever)), CaseKind::cantilever);
  EXPECT_THROW(parse_case("torsion"), UsageError);
}

TEST(Analytical, UniaxialCorner) {
  const auto f = analytical_field(default_case(CaseKind::uniaxial, 0.3));
  const Eigen::Vector2d d = f({0.2, 0.2});
  EXPECT_NEAR(d.x(), 1.0e-4, 1e-18);
  EXPECT_NEAR(d.y(), -3.0e-5, 1e-18);
}

TEST(Analytical, ShearVanishesAtBase) {
  const auto f = analytical_field(default_case(CaseKind::pure_shear, 0.3));
  EXPECT_EQ(f({0.13, 0.0}), Eigen::Vector2d::Zero());
  EXPECT_EQ(f({0.1, 0.2}).y(), 0.0);
}

TEST(Analytical, BendingMidSpanDeflection) {
  const auto c = default_case(CaseKind::pure_bending, 0.3);
  const double a = c.geometry.length;
  const double inertia = c.material.thickness * std::pow(c.geometry.height, 3) / 12.0;
  const double want = -c.load * a * a / (8 * c.material.young_modulus * inertia);
  EXPECT_NEAR(analytical_field(c)({a / 2, 0.0}).y(), want, 1e-15);
}

TEST(MomentToTraction, Examples) {
  EXPECT_NEAR(moment_to_linear_traction(2604.17, 0.0625, 0.01), 1.0e8, 1e3);
  EXPECT_EQ(moment_to_linear_traction(0.0, 0.0625, 0.01), 0.0);
  EXPECT_DOUBLE_EQ(moment_to_linear_traction(10.0, 0.2, 0.01),
                   moment_to_linear_traction(10.0, 0.1, 0.01) / 4);
}

// Equilibrium and compatibility of the cantilever field: with
// sigma_xy = 3F(b^2 - y^2)/(4b^3) the engineering shear strain
// du/dy + dv/dx must equal sigma_xy / G everywhere.
double shear_residual(const BenchmarkCase& c, CantileverReading reading) {
  const auto f = analytical_field(c, reading);
  const double b = c.geometry.half_height();
  const double g = c.material.young_modulus / (2 * (1 + c.material.poisson_ratio));
  const double h = 1e-6;
  double worst = 0.0;
  for (double x : {0.1, 0.25, 0.4}) {
    for (double y : {-0.05, 0.0, 0.03}) {
      const double dudy = (f({x, y + h}).x() - f({x, y - h}).x()) / (2 * h);
      const double dvdx = (f({x + h, y}).y() - f({x - h, y}).y()) / (2 * h);
      const double tau = 3 * c.load * (b * b - y * y) / (4 * b * b * b);
      worst = std::max(worst, std::abs((dudy + dvdx) - tau / g) / std::abs(tau / g));
    }
  }
  return worst;
}

TEST(Analytical, CantileverSingleTermReadingIsCompatible) {
  const auto c = default_case(CaseKind::cantilever, 0.3);
  EXPECT_LT(shear_residual(c, CantileverReading::single_term), 1e-6);
  EXPECT_GT(shear_residual(c, CantileverReading::as_printed), 1e-2);
}

// Clamp conditions of the analytical field at x = a:
// int u dy = 0, int v dy = 0, int y u dy = 0 (three-point Gauss is exact
// for these polynomials).
std::array<double, 3> clamp_integrals(const BenchmarkCase& c, CantileverReading reading) {
  const auto f = analytical_field(c, reading);
  const double a = c.geometry.length, b = c.geometry.half_height();
  const double g = std::sqrt(0.6);
  std::array<double, 3> out{};
  for (auto [xi, w] : {std::pair{-g, 5.0 / 9}, std::pair{0.0, 8.0 / 9}, std::pair{g, 5.0 / 9}}) {
    const double y = b * xi;
    const Eigen::Vector2d d = f({a, y});
    out[0] += w * b * d.x();
    out[1] += w * b * d.y();
    out[2] += w * b * y * d.x();
  }
  return out;
}

TEST(Analytical, CantileverWeakClampConditions) {
  for (double nu : {0.0, 0.3, 0.49}) {
    const auto c = default_case(CaseKind::cantilever, nu);
    const double b = c.geometry.half_height();
    // Scale: tip deflection times edge height.
    const double scale = std::abs(analytical_field(c)({0.0, 0.0}).y()) * 2 * b;
    const auto single = clamp_integrals(c, CantileverReading::single_term);
    EXPECT_LE(std::abs(single[0]), 1e-12 * scale);
    EXPECT_LE(std::abs(single[1]), 1e-12 * scale);
    EXPECT_LE(std::abs(single[2]), 1e-12 * scale * b);
    const auto printed = clamp_integrals(c, CantileverReading::as_printed);
    EXPECT_GT(std::abs(printed[2]), 1e-3 * scale * b);
  }
}

TEST(CaseMesh, RejectsNonSquareCellsAndOddBeams) {
  const auto sq = default_case(CaseKind::uniaxial, 0.3);
  EXPECT_THROW(case_mesh(sq, {4, 2}), UsageError);
  const auto beam = default_case(CaseKind::pure_bending, 0.3);
  EXPECT_NO_THROW(case_mesh(beam, {8, 2}));
  BenchmarkCase odd = beam;
  odd.geometry = {0.375, 0.125};
  EXPECT_THROW(case_mesh(odd, {3, 1}), UsageError);
}

TEST(BenchmarkCase, ValidateRejectsEmptyMeshes) {
  auto c = default_case(CaseKind::uniaxial, 0.3);
  c.mesh_sizes.clear();
  EXPECT_ANY_THROW(c.validate());
  c = default_case(CaseKind::uniaxial, 0.3);
  c.geometry.length = -1;
  EXPECT_ANY_THROW(c.validate());
}

TEST(RunCase, UniaxialExactForBothModels) {
  for (auto model : {BondModel::born, BondModel::modified}) {
    for (double nu : {0.0, 0.3, 0.49}) {
      const auto rep = run_case(default_case(CaseKind::uniaxial, nu), model);
      ASSERT_EQ(rep.runs.size(), 4u);
      for (const auto& run : rep.runs) {
        EXPECT_LE(run.field_error, 1e-9);
        EXPECT_NEAR(run.u_profile.numerical.back(), 1e-4, 1e-13);
        EXPECT_NEAR(run.v_profile.numerical.back(), -nu * 1e-4, 1e-13);
      }
    }
  }
}

TEST(RunCase, ShearExactForModified) {
  for (double nu : {0.0, 0.3, 0.49}) {
    const auto rep = run_case(default_case(CaseKind::pure_shear, nu), BondModel::modified);
    for (const auto& run : rep.runs) {
      EXPECT_LE(run.field_error, 1e-9);
      double vmax = 0.0;
      for (const auto& d : run.field.displacements) vmax = std::max(vmax, std::abs(d.y()));
      EXPECT_LE(vmax, 1e-12);
      EXPECT_FALSE(run.indefinite);
    }
  }
}

TEST(RunCase, ShearBornIsStiffer) {
  const auto rep = run_case(default_case(CaseKind::pure_shear, 0.3), BondModel::born);
  for (const auto& run : rep.runs) EXPECT_GT(run.field_error, 1e-3);
}

TEST(RunCase, BornUnderestimatesBendingAndCantilever) {
  for (auto kind : {CaseKind::pure_bending, CaseKind::cantilever}) {
    for (double nu : {0.0, 0.3}) {
      const auto rep = run_case(default_case(kind, nu), BondModel::born);
      for (const auto& run : rep.runs) {
        EXPECT_LT(norm(run.u_profile.numerical), norm(run.u_profile.analytical));
        EXPECT_LT(norm(run.v_profile.numerical), norm(run.v_profile.analytical));
      }
    }
  }
}

TEST(RunCase, BornUnstableAtHighPoisson) {
  for (auto kind : {CaseKind::pure_shear, CaseKind::pure_bending, CaseKind::cantilever}) {
    const auto born = run_case(default_case(kind, 0.49), BondModel::born);
    EXPECT_TRUE(born.unstable()) << to_string(kind);
    EXPECT_TRUE(born.negative_shear_advisory);
    EXPECT_FALSE(run_case(default_case(kind, 0.49), BondModel::modified).unstable());
  }
}

TEST(RunCase, BornCantileverSoftensWithPoisson) {
  const auto r0 = run_case(default_case(CaseKind::cantilever, 0.0), BondModel::born);
  const auto r3 = run_case(default_case(CaseKind::cantilever, 0.3), BondModel::born);
  for (std::size_t i = 0; i < r0.runs.size(); ++i) {
    EXPECT_LT(r3.runs[i].field_error, r0.runs[i].field_error);
  }
}

TEST(Convergence, ModifiedBendingAndCantileverDecrease) {
  for (auto kind : {CaseKind::pure_bending, CaseKind::cantilever}) {
    for (double nu : {0.0, 0.3, 0.49}) {
      const auto table = convergence_study(default_case(kind, nu), BondModel::modified);
      ASSERT_EQ(table.rows.size(), 4u);
      EXPECT_TRUE(table.strictly_decreasing) << to_string(kind) << " " << nu;
      EXPECT_LE(table.rows.back().v_profile_error, 0.05);
    }
  }
}

TEST(Convergence, UniaxialFlatAtRoundoff) {
  const auto table = convergence_study(default_case(CaseKind::uniaxial, 0.3), BondModel::born);
  for (const auto& row : table.rows) EXPECT_LE(row.field_error, 1e-9);
}

TEST(Convergence, BornBendingDoesNotConverge) {
  for (double nu : {0.0, 0.3}) {
    const auto table = convergence_study(default_case(CaseKind::pure_bending, nu), BondModel::born);
    EXPECT_GT(table.rows.back().u_profile_error, 0.1);
    EXPECT_GT(table.rows.back().v_profile_error, 0.1);
  }
}

}  // namespace
}  // namespace lsm
