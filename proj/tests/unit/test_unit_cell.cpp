#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include "bond_energy.hpp"
#include "lsm/errors.hpp"
#include "lsm/unit_cell.hpp"

namespace lsm {
namespace {

std::vector<double> nu_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 9; ++i) g.push_back(0.05 * i);
  g.push_back(0.49);
  return g;
}

StiffnessSet random_set(std::mt19937_64& rng, BondModel model) {
  std::uniform_real_distribution<double> pos(0.5, 2.0);
  std::uniform_real_distribution<double> shear(-0.2, 1.0);
  return {model, pos(rng), shear(rng), pos(rng)};
}

CellVector tx() { return canonical_eigenform(Eigenform::trans_x); }
CellVector ty() { return canonical_eigenform(Eigenform::trans_y); }
CellVector rot() { return canonical_eigenform(Eigenform::rotation); }

TEST(BornMatrix, EntryExample) {
  const auto k = born_matrix({BondModel::born, 2.0, 2.0, 2.0}).entries;
  EXPECT_DOUBLE_EQ(k(0, 0), 4.0);   // K1
  EXPECT_DOUBLE_EQ(k(1, 0), 0.0);   // K2
  EXPECT_DOUBLE_EQ(k(2, 0), -1.0);  // K3
  EXPECT_DOUBLE_EQ(k(4, 0), -2.0);  // K4
  EXPECT_DOUBLE_EQ(k(6, 0), -1.0);  // K5
}

TEST(ModifiedMatrix, EntryExample) {
  const auto k = modified_matrix({BondModel::modified, 2.0, 4.0, 2.0}).entries;
  EXPECT_DOUBLE_EQ(k(0, 0), 6.0);
  EXPECT_DOUBLE_EQ(k(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(k(2, 0), -3.0);
  EXPECT_DOUBLE_EQ(k(3, 0), -3.0);
  EXPECT_DOUBLE_EQ(k(4, 0), -3.0);
}

TEST(CellMatrix, ZeroStiffnessGivesZeroMatrix) {
  EXPECT_TRUE(born_matrix({BondModel::born, 0, 0, 0}).entries.isZero(0.0));
  EXPECT_TRUE(modified_matrix({BondModel::modified, 0, 0, 0}).entries.isZero(0.0));
}

TEST(CellMatrix, WrongModelTagIsUsageError) {
  EXPECT_THROW(born_matrix({BondModel::modified, 1, 1, 1}), UsageError);
  EXPECT_THROW(modified_matrix({BondModel::born, 1, 1, 1}), UsageError);
}

TEST(CellMatrix, SymmetricWithTranslationNullSpace) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    for (auto model : {BondModel::born, BondModel::modified}) {
      const auto k = cell_matrix(random_set(rng, model)).entries;
      EXPECT_TRUE(k.isApprox(k.transpose(), 0.0));
      EXPECT_LE((k * tx()).norm(), 1e-14 * k.norm());
      EXPECT_LE((k * ty()).norm(), 1e-14 * k.norm());
    }
  }
}

TEST(CellMatrix, ModifiedAnnihilatesRotationBornDoesNot) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = cell_matrix(random_set(rng, BondModel::modified)).entries;
    EXPECT_LE((m * rot()).norm(), 1e-14 * m.norm());
    StiffnessSet b = random_set(rng, BondModel::born);
    b.k_s1 = std::abs(b.k_s1) + 0.1;
    const auto bk = cell_matrix(b).entries;
    EXPECT_NEAR(rot().dot(bk * rot()), 3.0 * b.k_s1, 1e-12);
  }
}

// Matrix-construction oracle: closed-form entries vs the finite-difference
// Hessian of the bond-by-bond energy.
TEST(CellMatrix, MatchesFiniteDifferenceHessianOfBondEnergies) {
  std::mt19937_64 rng(3);
  const double l = 0.05;
  for (int trial = 0; trial < 10; ++trial) {
    for (auto model : {BondModel::born, BondModel::modified}) {
      const StiffnessSet k = random_set(rng, model);
      const CellMatrix exact = cell_matrix(k).entries;
      const CellMatrix fd = oracle::fd_hessian(k, 1e-6 * l);
      EXPECT_LE((exact - fd).cwiseAbs().maxCoeff(), 1e-6 * exact.cwiseAbs().maxCoeff());
    }
  }
}

TEST(AffineEnergy, BornRotation) {
  const StiffnessSet k{BondModel::born, 1.3, 0.7, 1.1};
  const double omega = 1e-3;
  const double l = 0.2;
  EXPECT_NEAR(affine_energy(k, {0, -omega, omega, 0}, l), 3 * 0.7 * l * l * omega * omega, 1e-18);
}

TEST(AffineEnergy, ModifiedRotationIsFree) {
  const StiffnessSet k{BondModel::modified, 1.3, 0.7, 1.1};
  EXPECT_NEAR(affine_energy(k, {0, -1e-3, 1e-3, 0}, 0.2), 0.0, 1e-20);
}

TEST(AffineEnergy, ZeroGradient) {
  for (auto model : {BondModel::born, BondModel::modified}) {
    EXPECT_EQ(affine_energy({model, 1, 1, 1}, {}, 1.0), 0.0);
  }
}

TEST(QuadraticEnergy, TranslationCostsNothing) {
  const auto k = cell_matrix({BondModel::born, 1.0, 0.4, 0.9});
  EXPECT_NEAR(quadratic_energy(k, tx()), 0.0, 1e-15);
}

// Hessian consistency over random gradients and stiffness sets.
TEST(QuadraticEnergy, EqualsAffineClosedFormForRandomGradients) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> g(-1e-3, 1e-3);
  std::uniform_real_distribution<double> size(0.01, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const DisplacementGradient2D h{g(rng), g(rng), g(rng), g(rng)};
    const double l = size(rng);
    for (auto model : {BondModel::born, BondModel::modified}) {
      const StiffnessSet k = random_set(rng, model);
      const double closed = affine_energy(k, h, l);
      const double quad = quadratic_energy(cell_matrix(k), affine_corner_displacements(h, l));
      EXPECT_NEAR(quad, closed, 1e-9 * std::max(std::abs(closed), 1e-300));
    }
  }
}

TEST(QuadraticEnergy, AffineMatchesOracleOnAffineField) {
  const StiffnessSet k{BondModel::modified, 1.0, 0.3, 0.8};
  const DisplacementGradient2D h{1e-3, 2e-4, -5e-4, 3e-4};
  const CellVector u = affine_corner_displacements(h, 0.1);
  EXPECT_NEAR(oracle::bond_energy(k, u), quadratic_energy(cell_matrix(k), u), 1e-20);
}

double table_eigenvalue(const StiffnessSet& k, Eigenform f) {
  const bool born = k.model == BondModel::born;
  switch (f) {
    case Eigenform::trans_x:
    case Eigenform::trans_y: return 0.0;
    case Eigenform::rotation: return born ? 3 * k.k_s1 : 0.0;
    case Eigenform::bending_1:
    case Eigenform::bending_2: return k.k_n1 + k.k_s1;
    case Eigenform::shear_1: return born ? 2 * k.k_n2 + k.k_s1 : 2 * k.k_n2 + 2 * k.k_s1;
    case Eigenform::shear_2: return born ? k.k_n1 + 2 * k.k_s1 : k.k_n1 + 4 * k.k_s1;
    case Eigenform::volumetric: return k.k_n1 + 2 * k.k_n2;
  }
  return 0.0;
}

void expect_table(const StiffnessSet& k) {
  const EigenReport rep = eigen_analysis(cell_matrix(k));
  double scale = 0.0;
  for (auto f : kAllEigenforms) scale = std::max(scale, std::abs(table_eigenvalue(k, f)));
  EXPECT_TRUE(rep.classified) << rep.classification_note;
  for (auto f : kAllEigenforms) {
    EXPECT_NEAR(rep.eigenvalue(f), table_eigenvalue(k, f), 1e-9 * scale) << to_string(f);
  }
}

TEST(EigenAnalysis, MatchesClosedFormsForRandomSets) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    expect_table(random_set(rng, BondModel::born));
    expect_table(random_set(rng, BondModel::modified));
  }
}

TEST(EigenAnalysis, MatchesClosedFormsOnCalibratedGrid) {
  for (auto model : {BondModel::born, BondModel::modified}) {
    for (auto regime : {PlaneRegime::plane_stress, PlaneRegime::plane_strain}) {
      for (double nu : nu_grid()) expect_table(calibrate({2e11, nu, 0.01, regime}, model).stiffness);
    }
  }
}

TEST(EigenAnalysis, ZeroMatrix) {
  const EigenReport rep = eigen_analysis(cell_matrix({BondModel::born, 0, 0, 0}));
  for (double v : rep.eigenvalues) EXPECT_EQ(v, 0.0);
  for (auto f : kAllEigenforms) EXPECT_EQ(rep.eigenvalue(f), 0.0);
}

TEST(EigenAnalysis, EigenvaluesAscendingAndVectorsOrthonormal) {
  const EigenReport rep = eigen_analysis(cell_matrix({BondModel::modified, 1.2, 0.3, 0.7}));
  for (int i = 1; i < 8; ++i) EXPECT_LE(rep.eigenvalues[i - 1], rep.eigenvalues[i]);
  EXPECT_TRUE((rep.eigenvectors.transpose() * rep.eigenvectors).isIdentity(1e-12));
}

TEST(CanonicalEigenforms, OrthonormalBasis) {
  CellMatrix basis;
  for (std::size_t i = 0; i < 8; ++i) basis.col(i) = canonical_eigenform(kAllEigenforms[i]);
  EXPECT_TRUE((basis.transpose() * basis).isIdentity(1e-15));
}

TEST(Definiteness, ModifiedHasExactlyThreeZeros) {
  for (auto regime : {PlaneRegime::plane_stress, PlaneRegime::plane_strain}) {
    for (double nu : nu_grid()) {
      const auto rep = eigen_analysis(cell_matrix(calibrate({2e11, nu, 0.01, regime},
                                                            BondModel::modified).stiffness));
      const auto d = definiteness(rep);
      EXPECT_EQ(d.kind, Definiteness::positive_definite_on_deformations) << nu;
      EXPECT_EQ(d.zero_count, 3) << nu;
      EXPECT_EQ(d.negative_count, 0) << nu;
    }
  }
}

TEST(Definiteness, BornExamples) {
  const auto at = [](double nu) {
    return definiteness(eigen_analysis(cell_matrix(
        calibrate({2e11, nu, 0.01, PlaneRegime::plane_stress}, BondModel::born).stiffness)));
  };
  EXPECT_EQ(at(0.4).kind, Definiteness::indefinite);
  EXPECT_EQ(at(0.2).kind, Definiteness::positive_definite_on_deformations);
  EXPECT_EQ(at(0.2).zero_count, 2);
  EXPECT_EQ(at(1.0 / 3.0).kind, Definiteness::positive_definite_on_deformations);
  EXPECT_EQ(at(1.0 / 3.0).zero_count, 3);
}

TEST(Definiteness, ZeroMatrixIsDegenerate) {
  const auto d = definiteness(eigen_analysis(cell_matrix({BondModel::modified, 0, 0, 0})));
  EXPECT_EQ(d.kind, Definiteness::semidefinite_degenerate);
}

TEST(Definiteness, ExtraZeroModeIsDegenerate) {
  // k_n1 + k_s1 = 0 kills both bending modes.
  const auto d = definiteness(eigen_analysis(cell_matrix({BondModel::modified, 1.0, -1.0, 3.0})));
  EXPECT_NE(d.kind, Definiteness::positive_definite_on_deformations);
}

double born_rotation(double nu, PlaneRegime regime) {
  const auto k = calibrate({2e11, nu, 0.01, regime}, BondModel::born).stiffness;
  return eigen_analysis(cell_matrix(k)).eigenvalue(Eigenform::rotation);
}

double bisect(PlaneRegime regime) {
  double lo = 0.0, hi = 0.49;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (born_rotation(mid, regime) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

TEST(Definiteness, BornRotationSignFlip) {
  EXPECT_NEAR(bisect(PlaneRegime::plane_stress), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(bisect(PlaneRegime::plane_strain), 0.25, 1e-10);
}

}  // namespace
}  // namespace lsm
