#include "lsm/unit_cell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lsm/errors.hpp"

namespace lsm {
namespace {

// Lower-triangular entry patterns of the two cell matrices. A code of +n or
// -n selects +/-K_n from the five independent entries; 0 is a structural zero.
using Pattern = std::array<std::array<int, 8>, 8>;

constexpr Pattern kBornPattern = {{
    {1},
    {2, 1},
    {3, 0, 1},
    {0, 5, -2, 1},
    {4, -2, 5, 0, 1},
    {-2, 4, 0, 3, 2, 1},
    {5, 0, 4, 2, 3, 0, 1},
    {0, 3, 2, 4, 0, 5, -2, 1},
}};

constexpr Pattern kModifiedPattern = {{
    {1},
    {2, 1},
    {3, -4, 1},
    {4, 0, -2, 1},
    {5, -2, 0, -4, 1},
    {-2, 5, 4, 3, 2, 1},
    {0, 4, 5, 2, 3, -4, 1},
    {-4, 3, 2, 5, 4, 0, -2, 1},
}};

CellMatrix fill_pattern(const Pattern& pattern, const std::array<double, 5>& k_hat) {
  CellMatrix m = CellMatrix::Zero();
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j <= i; ++j) {
      const int code = pattern[i][j];
      if (code == 0) continue;
      const double v = code > 0 ? k_hat[code - 1] : -k_hat[-code - 1];
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

double sq(double x) { return x * x; }

}  // namespace

UnitCellMatrix born_matrix(const StiffnessSet& k) {
  if (k.model != BondModel::born) {
    throw UsageError("born_matrix requires a Born stiffness set");
  }
  const std::array<double, 5> k_hat = {
      0.5 * k.k_n1 + 0.5 * k.k_n2 + k.k_s1,
      0.5 * k.k_n2 - 0.5 * k.k_s1,
      -0.5 * k.k_n1,
      -0.5 * k.k_n2 - 0.5 * k.k_s1,
      -0.5 * k.k_s1,
  };
  return {BondModel::born, fill_pattern(kBornPattern, k_hat)};
}

UnitCellMatrix modified_matrix(const StiffnessSet& k) {
  if (k.model != BondModel::modified) {
    throw UsageError("modified_matrix requires a modified-model stiffness set");
  }
  const std::array<double, 5> k_hat = {
      0.5 * k.k_n1 + 0.5 * k.k_n2 + k.k_s1,
      0.5 * k.k_n2 - 0.25 * k.k_s1,
      -0.5 * k.k_n1 - 0.5 * k.k_s1,
      -0.75 * k.k_s1,
      -0.5 * k.k_n2 - 0.5 * k.k_s1,
  };
  return {BondModel::modified, fill_pattern(kModifiedPattern, k_hat)};
}

UnitCellMatrix cell_matrix(const StiffnessSet& k) {
  return k.model == BondModel::born ? born_matrix(k) : modified_matrix(k);
}

double affine_energy(const StiffnessSet& k, const DisplacementGradient2D& g, double l) {
  const double xx = g.e_xx;
  const double xy = g.e_xy;
  const double yx = g.e_yx;
  const double yy = g.e_yy;
  const double l2 = l * l;
  const double diag_l2 = 2.0 * l2;  // (sqrt(2) l)^2

  // Longitudinal strains of the 45 and 135 degree diagonals.
  const double nn_45 = xx / 2 + xy / 2 + yx / 2 + yy / 2;
  const double nn_135 = xx / 2 - xy / 2 - yx / 2 + yy / 2;
  // Shear strains of the same diagonals.
  const double sn_45 = yx / 2 - xy / 2 - xx / 2 + yy / 2;
  const double sn_135 = xx / 2 - xy / 2 + yx / 2 - yy / 2;

  if (k.model == BondModel::born) {
    // Edge bonds carry a contribution factor 1/2 (shared by two cells).
    const double first = k.k_n1 * l2 / 4 * (sq(xx) + sq(yy) + sq(xx) + sq(yy)) +
                         k.k_s1 * l2 / 4 * (sq(yx) + sq(-xy) + sq(yx) + sq(-xy));
    const double second = k.k_n2 * l2 * (sq(nn_45) + sq(nn_135)) +
                          k.k_s1 * diag_l2 / 2 * (sq(sn_45) + sq(sn_135));
    return first + second;
  }

  const double first =
      k.k_n1 * l2 / 2 * (sq(xx) + sq(yy)) + k.k_s1 * l2 / 2 * sq(xy + yx);
  const double second = k.k_n2 * diag_l2 / 2 * (sq(nn_45) + sq(nn_135)) +
                        k.k_s1 * diag_l2 / 2 * sq(sn_45 - sn_135);
  return first + second;
}

double quadratic_energy(const UnitCellMatrix& k, const CellVector& u) {
  return 0.5 * u.dot(k.entries * u);
}

CellVector affine_corner_displacements(const DisplacementGradient2D& g, double l) {
  const std::array<std::array<double, 2>, 4> corners = {{{0, 0}, {l, 0}, {l, l}, {0, l}}};
  CellVector u;
  for (int i = 0; i < 4; ++i) {
    const double x = corners[i][0];
    const double y = corners[i][1];
    u(2 * i) = g.e_xx * x + g.e_xy * y;
    u(2 * i + 1) = g.e_yx * x + g.e_yy * y;
  }
  return u;
}

std::string_view to_string(Eigenform form) {
  switch (form) {
    case Eigenform::trans_x: return "trans_x";
    case Eigenform::trans_y: return "trans_y";
    case Eigenform::rotation: return "rotation";
    case Eigenform::bending_1: return "bending_1";
    case Eigenform::bending_2: return "bending_2";
    case Eigenform::shear_1: return "shear_1";
    case Eigenform::shear_2: return "shear_2";
    case Eigenform::volumetric: return "volumetric";
  }
  return "unknown";
}

CellVector canonical_eigenform(Eigenform form) {
  // Centred corner coordinates in A, B, C, D order.
  constexpr std::array<std::array<double, 2>, 4> xy = {{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
  CellVector v;
  for (int i = 0; i < 4; ++i) {
    const double x = xy[i][0];
    const double y = xy[i][1];
    double u = 0.0;
    double w = 0.0;
    switch (form) {
      case Eigenform::trans_x: u = 1; break;
      case Eigenform::trans_y: w = 1; break;
      case Eigenform::rotation: u = -y; w = x; break;
      case Eigenform::bending_1: u = x * y; break;
      case Eigenform::bending_2: w = x * y; break;
      case Eigenform::shear_1: u = y; w = x; break;
      case Eigenform::shear_2: u = x; w = -y; break;
      case Eigenform::volumetric: u = x; w = y; break;
    }
    v(2 * i) = u;
    v(2 * i + 1) = w;
  }
  return v.normalized();
}

EigenReport eigen_analysis(const UnitCellMatrix& k) {
  EigenReport report;
  Eigen::SelfAdjointEigenSolver<CellMatrix> solver(k.entries);
  if (solver.info() != Eigen::Success) {
    report.classification_note = "symmetric eigen-solve did not converge";
    return report;
  }
  const auto& values = solver.eigenvalues();
  report.eigenvectors = solver.eigenvectors();
  for (int i = 0; i < 8; ++i) report.eigenvalues[i] = values(i);

  const double scale = values.cwiseAbs().maxCoeff();
  constexpr double kClusterTol = 1e-8;

  // Group ascending eigenvalues into clusters of near-equal values.
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < 8; ++i) {
    if (clusters.empty() || values(i) - values(clusters.back().back()) > kClusterTol * scale) {
      clusters.push_back({i});
    } else {
      clusters.back().push_back(i);
    }
  }

  std::vector<std::vector<Eigenform>> assigned(clusters.size());
  bool ok = true;
  std::ostringstream note;
  for (Eigenform form : kAllEigenforms) {
    const CellVector mode = canonical_eigenform(form);
    std::size_t best = 0;
    double best_weight = -1.0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      double weight = 0.0;
      for (int idx : clusters[c]) weight += sq(report.eigenvectors.col(idx).dot(mode));
      if (weight > best_weight) {
        best_weight = weight;
        best = c;
      }
    }
    if (best_weight < 0.5) {
      ok = false;
      note << to_string(form) << " has no dominant eigenspace (overlap " << best_weight << "); ";
    }
    assigned[best].push_back(form);
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    if (assigned[c].size() != clusters[c].size()) {
      ok = false;
      note << "cluster at " << values(clusters[c].front()) << " has dimension "
           << clusters[c].size() << " but " << assigned[c].size() << " eigenforms; ";
    }
  }

  if (!ok) {
    // Fall back to Rayleigh quotients so callers still get a value per form.
    for (Eigenform form : kAllEigenforms) {
      const CellVector mode = canonical_eigenform(form);
      report.by_form[static_cast<std::size_t>(form)] = mode.dot(k.entries * mode);
    }
    report.classification_note = note.str();
    return report;
  }

  for (std::size_t c = 0; c < clusters.size(); ++c) {
    auto forms = assigned[c];
    std::vector<double> rayleigh(forms.size());
    for (std::size_t f = 0; f < forms.size(); ++f) {
      const CellVector mode = canonical_eigenform(forms[f]);
      rayleigh[f] = mode.dot(k.entries * mode);
    }
    std::vector<std::size_t> order(forms.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rayleigh[a] < rayleigh[b]; });
    for (std::size_t r = 0; r < order.size(); ++r) {
      report.by_form[static_cast<std::size_t>(forms[order[r]])] = values(clusters[c][r]);
    }
  }
  report.classified = true;
  return report;
}

std::string_view to_string(Definiteness d) {
  switch (d) {
    case Definiteness::positive_definite_on_deformations: return "positive_definite_on_deformations";
    case Definiteness::semidefinite_degenerate: return "semidefinite_degenerate";
    case Definiteness::indefinite: return "indefinite";
  }
  return "unknown";
}

DefinitenessReport definiteness(const EigenReport& report, double zero_tol) {
  if (!(zero_tol > 0.0)) throw UsageError("zero_tol must be positive");
  double scale = 0.0;
  for (double v : report.eigenvalues) scale = std::max(scale, std::abs(v));
  const double cutoff = zero_tol * scale;

  DefinitenessReport out;
  for (double v : report.eigenvalues) {
    if (std::abs(v) <= cutoff) {
      ++out.zero_count;
    } else if (v < 0.0) {
      ++out.negative_count;
    }
  }
  if (out.negative_count > 0) {
    out.kind = Definiteness::indefinite;
    return out;
  }

  auto is_zero = [&](Eigenform f) { return std::abs(report.eigenvalue(f)) <= cutoff; };
  bool rigid_only = is_zero(Eigenform::trans_x) && is_zero(Eigenform::trans_y);
  for (Eigenform f : kAllEigenforms) {
    if (f == Eigenform::trans_x || f == Eigenform::trans_y || f == Eigenform::rotation) continue;
    if (is_zero(f)) rigid_only = false;
  }
  if (!report.classified) rigid_only = rigid_only && (out.zero_count == 2 || out.zero_count == 3);
  out.kind = (rigid_only && scale > 0.0) ? Definiteness::positive_definite_on_deformations
                                         : Definiteness::semidefinite_degenerate;
  return out;
}

}  // namespace lsm
