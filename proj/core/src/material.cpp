#include "lsm/material.hpp"

#include <cmath>
#include <sstream>

#include "lsm/errors.hpp"

namespace lsm {

std::string_view to_string(PlaneRegime regime) {
  return regime == PlaneRegime::plane_stress ? "plane_stress" : "plane_strain";
}

std::string_view to_string(BondModel model) {
  return model == BondModel::born ? "born" : "modified";
}

PlaneRegime parse_regime(std::string_view text) {
  if (text == "stress" || text == "plane_stress") return PlaneRegime::plane_stress;
  if (text == "strain" || text == "plane_strain") return PlaneRegime::plane_strain;
  throw UsageError("unknown plane regime '" + std::string(text) + "' (expected stress|strain)");
}

BondModel parse_model(std::string_view text) {
  if (text == "born") return BondModel::born;
  if (text == "modified") return BondModel::modified;
  throw UsageError("unknown bond model '" + std::string(text) + "' (expected born|modified)");
}

void MaterialParams::validate() const {
  std::ostringstream msg;
  if (!(young_modulus > 0.0) || !std::isfinite(young_modulus)) {
    msg << "Young's modulus must be positive, got " << young_modulus;
    throw DomainError(msg.str());
  }
  if (!(thickness > 0.0) || !std::isfinite(thickness)) {
    msg << "thickness must be positive, got " << thickness;
    throw DomainError(msg.str());
  }
  if (!(poisson_ratio >= 0.0 && poisson_ratio < 0.5)) {
    msg << "Poisson's ratio must lie in [0, 0.5), got " << poisson_ratio;
    throw DomainError(msg.str());
  }
}

Eigen::Matrix3d ElasticityTensor2D::matrix() const {
  Eigen::Matrix3d c;
  c << c1, c2, 0.0,
       c2, c1, 0.0,
       0.0, 0.0, c3;
  return c;
}

Calibration calibrate(const MaterialParams& material, BondModel model) {
  material.validate();
  const double e_t = material.young_modulus * material.thickness;
  const double nu = material.poisson_ratio;

  StiffnessSet k;
  k.model = model;
  // The modified model needs half the shear stiffness: its shear energy
  // counts (e_xy + e_yx)^2 where Born counts e_xy^2 + e_yx^2.
  const double shear_divisor = model == BondModel::born ? 3.0 : 6.0;
  if (material.regime == PlaneRegime::plane_stress) {
    const double d = (1.0 + nu) * (1.0 - nu);
    k.k_n1 = e_t * (1.0 + 3.0 * nu) / (3.0 * d);
    k.k_s1 = e_t * (1.0 - 3.0 * nu) / (shear_divisor * d);
    k.k_n2 = e_t / (3.0 * d);
  } else {
    const double d = (1.0 + nu) * (1.0 - 2.0 * nu);
    k.k_n1 = e_t * (1.0 + 2.0 * nu) / (3.0 * d);
    k.k_s1 = e_t * (1.0 - 4.0 * nu) / (shear_divisor * d);
    k.k_n2 = e_t * (1.0 - nu) / (3.0 * d);
  }

  return {k, model == BondModel::born && k.k_s1 < 0.0};
}

ElasticityTensor2D elasticity_tensor(const StiffnessSet& k, double thickness) {
  if (!(thickness > 0.0)) throw DomainError("thickness must be positive");
  if (k.model == BondModel::modified) {
    return {(k.k_n1 + 2.0 * k.k_s1 + k.k_n2) / thickness,
            (k.k_n2 - 2.0 * k.k_s1) / thickness,
            (k.k_n2 + k.k_s1) / thickness};
  }
  return {(k.k_n1 + k.k_s1 + k.k_n2) / thickness,
          (k.k_n2 - k.k_s1) / thickness,
          (k.k_n2 + 0.5 * k.k_s1) / thickness};
}

double shear_modulus(const MaterialParams& m) {
  return m.young_modulus / (2.0 * (1.0 + m.poisson_ratio));
}

ElasticityTensor2D continuum_tensor(const MaterialParams& m) {
  m.validate();
  const double e = m.young_modulus;
  const double nu = m.poisson_ratio;
  if (m.regime == PlaneRegime::plane_stress) {
    const double d = 1.0 - nu * nu;
    return {e / d, nu * e / d, shear_modulus(m)};
  }
  const double d = (1.0 + nu) * (1.0 - 2.0 * nu);
  return {e * (1.0 - nu) / d, e * nu / d, shear_modulus(m)};
}

double anisotropy_factor(const StiffnessSet& k) {
  double num = 0.0;
  double den = 0.0;
  if (k.model == BondModel::born) {
    num = 2.0 * k.k_n2 + k.k_s1;
    den = k.k_n1 + 2.0 * k.k_s1;
  } else {
    num = 2.0 * k.k_n2 + 2.0 * k.k_s1;
    den = k.k_n1 + 4.0 * k.k_s1;
  }
  if (den == 0.0) {
    throw DegenerateStiffnessError("anisotropy factor undefined: c1 - c2 vanishes");
  }
  return num / den;
}

}  // namespace lsm
