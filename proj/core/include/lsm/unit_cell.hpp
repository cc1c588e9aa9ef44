#pragma once

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Core>

#include "lsm/material.hpp"

namespace lsm {

/// Non-symmetrized displacement gradient: e_xy = du/dy, e_yx = dv/dx.
/// The antisymmetric part (e_yx - e_xy)/2 is the rigid rotation.
struct DisplacementGradient2D {
  double e_xx = 0.0;
  double e_xy = 0.0;
  double e_yx = 0.0;
  double e_yy = 0.0;
};

/// Corner displacements ordered [u_A, v_A, u_B, v_B, u_C, v_C, u_D, v_D]
/// with A lower-left, B lower-right, C upper-right, D upper-left.
using CellVector = Eigen::Matrix<double, 8, 1>;
using CellMatrix = Eigen::Matrix<double, 8, 8>;

struct UnitCellMatrix {
  BondModel model = BondModel::born;
  CellMatrix entries = CellMatrix::Zero();
};

UnitCellMatrix born_matrix(const StiffnessSet& stiffness);
UnitCellMatrix modified_matrix(const StiffnessSet& stiffness);
/// Dispatches on stiffness.model.
UnitCellMatrix cell_matrix(const StiffnessSet& stiffness);

/// Strain energy of one unit cell of edge `cell_size` under the homogeneous
/// gradient `grad`, from the closed-form first/second-neighbour expressions.
double affine_energy(const StiffnessSet& stiffness, const DisplacementGradient2D& grad,
                     double cell_size);

double quadratic_energy(const UnitCellMatrix& k, const CellVector& u);

/// Corner displacements u_i = grad * x_i for a cell with A at the origin.
CellVector affine_corner_displacements(const DisplacementGradient2D& grad, double cell_size);

enum class Eigenform {
  trans_x,
  trans_y,
  rotation,
  bending_1,
  bending_2,
  shear_1,
  shear_2,
  volumetric,
};

inline constexpr std::array<Eigenform, 8> kAllEigenforms = {
    Eigenform::trans_x,  Eigenform::trans_y, Eigenform::rotation, Eigenform::bending_1,
    Eigenform::bending_2, Eigenform::shear_1, Eigenform::shear_2,  Eigenform::volumetric};

std::string_view to_string(Eigenform form);

/// Unit-norm reference shape of each eigenform. Written as fields over the
/// centred corner coordinates (x, y) in {-1, 1}^2:
///   translations (1,0), (0,1); rotation (-y, x); bending (xy, 0), (0, xy);
///   shear (y, x), (x, -y); volumetric (x, y).
CellVector canonical_eigenform(Eigenform form);

struct EigenReport {
  std::array<double, 8> eigenvalues{};  // ascending
  CellMatrix eigenvectors = CellMatrix::Zero();  // columns match eigenvalues
  std::array<double, 8> by_form{};  // indexed by Eigenform
  bool classified = false;
  std::string classification_note;

  double eigenvalue(Eigenform form) const { return by_form[static_cast<std::size_t>(form)]; }
};

/// Full eigen-decomposition plus assignment of each eigenvalue to a
/// canonical eigenform. Clusters of (nearly) repeated eigenvalues are
/// classified as a subspace; a failed classification is reported through
/// `classified`/`classification_note`, not thrown.
EigenReport eigen_analysis(const UnitCellMatrix& k);

enum class Definiteness {
  positive_definite_on_deformations,
  semidefinite_degenerate,
  indefinite,
};

std::string_view to_string(Definiteness d);

struct DefinitenessReport {
  Definiteness kind = Definiteness::semidefinite_degenerate;
  int zero_count = 0;
  int negative_count = 0;
};

/// Eigenvalues with |lambda| < zero_tol * max|lambda| count as zero. The
/// cell is positive definite on deformations when the zero eigenvalues are
/// rigid-body modes only (both translations, optionally the rotation) and
/// every other eigenvalue is positive.
DefinitenessReport definiteness(const EigenReport& report, double zero_tol = 1e-9);

}  // namespace lsm
