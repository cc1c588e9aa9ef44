#pragma once

#include <cmath>
#include <string_view>

#include <Eigen/Core>

namespace lsm {

enum class PlaneRegime { plane_stress, plane_strain };

/// Born: independent normal/shear springs per bond. Modified: shear strains of
/// neighbouring bonds coupled through L-bonds (edges) and X-bonds (diagonals).
enum class BondModel { born, modified };

std::string_view to_string(PlaneRegime regime);
std::string_view to_string(BondModel model);
/// Accepts "stress"/"plane_stress" and "strain"/"plane_strain".
PlaneRegime parse_regime(std::string_view text);
BondModel parse_model(std::string_view text);

/// Macroscopic isotropic description of the plate.
struct MaterialParams {
  double young_modulus = 0.0;  // Pa
  double poisson_ratio = 0.0;
  double thickness = 0.0;  // m
  PlaneRegime regime = PlaneRegime::plane_stress;

  /// Throws DomainError unless E > 0, t > 0 and 0 <= nu < 0.5.
  void validate() const;
};

/// Spring stiffnesses of the square unit cell (N/m). k_n1/k_s1 act on the
/// four edge bonds, k_n2 on the two diagonals; diagonals share k_s1.
struct StiffnessSet {
  BondModel model = BondModel::born;
  double k_n1 = 0.0;
  double k_s1 = 0.0;
  double k_n2 = 0.0;
};

/// Voigt matrix [[c1, c2, 0], [c2, c1, 0], [0, 0, c3]] in Pa.
struct ElasticityTensor2D {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  Eigen::Matrix3d matrix() const;
  bool positive_definite() const { return c1 > std::abs(c2) && c3 > 0.0; }
};

struct Calibration {
  StiffnessSet stiffness;
  /// Set for the Born model when k_s1 < 0 (nu > 1/3 plane stress,
  /// nu > 1/4 plane strain): the unit cell is no longer stable.
  bool negative_shear_advisory = false;
};

/// Closed-form stiffnesses that make the unit cell reproduce the continuum
/// elasticity tensor of `material`.
Calibration calibrate(const MaterialParams& material, BondModel model);

/// Elasticity tensor of the tiled unit cell, in Pa (stiffness combinations
/// divided by the thickness).
ElasticityTensor2D elasticity_tensor(const StiffnessSet& stiffness, double thickness);

ElasticityTensor2D continuum_tensor(const MaterialParams& material);

double shear_modulus(const MaterialParams& material);

/// Lambda = 2 c3 / (c1 - c2); equals 1 for an isotropic lattice.
double anisotropy_factor(const StiffnessSet& stiffness);

}  // namespace lsm
