#include "sbl/structural_model.hpp"

#include "sbl/linalg.hpp"

#include <cmath>
#include <sstream>

namespace sbl {

namespace {

bool is_symmetric(const Mat& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
}

}  // namespace

void StructuralBasis::validate() const {
  if (n_dof <= 0) throw InvariantViolation("model: n_dof must be positive");
  if (n_sub <= 0) throw InvariantViolation("model: n_sub must be positive");
  if (mass.rows() != n_dof || mass.cols() != n_dof) throw InvariantViolation("model: mass has wrong shape");
  if (k0.rows() != n_dof || k0.cols() != n_dof) throw InvariantViolation("model: k0 has wrong shape");
  if (static_cast<int>(k_sub.size()) != n_sub) throw InvariantViolation("model: k_sub count differs from n_sub");
  if (static_cast<int>(labels.size()) != n_sub) throw InvariantViolation("model: labels count differs from n_sub");
  if (!is_symmetric(mass)) throw InvariantViolation("model: mass is not symmetric");
  if (!is_symmetric(k0)) throw InvariantViolation("model: k0 is not symmetric");
  if (Eigen::LLT<Mat>(mass).info() != Eigen::Success)
    throw InvariantViolation("model: mass is not positive definite");
  for (int j = 0; j < n_sub; ++j) {
    const Mat& k = k_sub[j];
    if (k.rows() != n_dof || k.cols() != n_dof)
      throw InvariantViolation("model: k_sub[" + std::to_string(j) + "] has wrong shape");
    if (!is_symmetric(k)) throw InvariantViolation("model: k_sub[" + std::to_string(j) + "] is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(k, Eigen::EigenvaluesOnly);
    const double tol = 1e-10 * std::max(1.0, k.cwiseAbs().maxCoeff());
    if (es.eigenvalues().minCoeff() < -tol)
      throw InvariantViolation("model: k_sub[" + std::to_string(j) + "] is not positive semidefinite");
  }
  for (int j = 0; j < n_sub; ++j)
    for (int l = j + 1; l < n_sub; ++l)
      if (labels[j] == labels[l]) throw InvariantViolation("model: duplicate label '" + labels[j] + "'");
  if (Eigen::LLT<Mat>(assemble_stiffness(*this, Vec::Ones(n_sub))).info() != Eigen::Success)
    throw InvariantViolation("model: nominal stiffness K(1) is not positive definite");
}

int StructuralBasis::index_of(const std::string& label) const {
  for (int j = 0; j < n_sub; ++j)
    if (labels[j] == label) return j;
  return -1;
}

Mat assemble_stiffness(const StructuralBasis& basis, const Vec& theta) {
  if (theta.size() != basis.n_sub) {
    std::ostringstream msg;
    msg << "assemble_stiffness: theta has length " << theta.size() << ", expected " << basis.n_sub;
    throw InvalidArgument(msg.str());
  }
  Mat k = basis.k0;
  for (int j = 0; j < basis.n_sub; ++j) k.noalias() += theta(j) * basis.k_sub[j];
  return symmetrize(k);
}

std::string face_name(Face f) {
  switch (f) {
    case Face::PlusX: return "+x";
    case Face::PlusY: return "+y";
    case Face::MinusX: return "-x";
    case Face::MinusY: return "-y";
  }
  return "?";
}

void ShearBuildingSpec::validate() const {
  if (n_stories <= 0) throw InvalidArgument("shear_building: n_stories must be positive");
  const auto n = static_cast<std::size_t>(n_stories);
  if (face_stiffness.size() != n || floor_mass.size() != n || floor_inertia.size() != n)
    throw InvalidArgument("shear_building: per-story arrays must have n_stories entries");
  for (std::size_t s = 0; s < n; ++s) {
    for (double k : face_stiffness[s])
      if (!(k > 0.0)) throw InvalidArgument("shear_building: face stiffness must be positive");
    if (!(floor_mass[s] > 0.0)) throw InvalidArgument("shear_building: floor mass must be positive");
    if (!(floor_inertia[s] > 0.0)) throw InvalidArgument("shear_building: floor inertia must be positive");
  }
  if (!(half_width_x > 0.0) || !(half_width_y > 0.0))
    throw InvalidArgument("shear_building: plan half-widths must be positive");
}

StructuralBasis build_shear_building(const ShearBuildingSpec& spec) {
  spec.validate();
  const int n = spec.n_stories;
  StructuralBasis basis;
  basis.n_dof = 3 * n;
  basis.n_sub = 4 * n;
  basis.mass = Mat::Zero(basis.n_dof, basis.n_dof);
  basis.k0 = Mat::Zero(basis.n_dof, basis.n_dof);
  for (int s = 0; s < n; ++s) {
    basis.mass(3 * s, 3 * s) = spec.floor_mass[s];
    basis.mass(3 * s + 1, 3 * s + 1) = spec.floor_mass[s];
    basis.mass(3 * s + 2, 3 * s + 2) = spec.floor_inertia[s];
  }
  const double a = spec.half_width_x;
  const double b = spec.half_width_y;
  for (Face f : kFaces) {
    // Shear direction carried by the face and rotational lever arm: a floor
    // rotation r moves the face at x = +a by +a r along y, and the face at
    // y = +b by -b r along x.
    int dir = 0;
    double lever = 0.0;
    switch (f) {
      case Face::PlusX: dir = 1; lever = a; break;
      case Face::MinusX: dir = 1; lever = -a; break;
      case Face::PlusY: dir = 0; lever = -b; break;
      case Face::MinusY: dir = 0; lever = b; break;
    }
    for (int s = 0; s < n; ++s) {
      Vec t = Vec::Zero(basis.n_dof);
      t(3 * s + dir) += 1.0;
      t(3 * s + 2) += lever;
      if (s > 0) {
        t(3 * (s - 1) + dir) -= 1.0;
        t(3 * (s - 1) + 2) -= lever;
      }
      basis.k_sub.push_back(spec.face_stiffness[s][static_cast<int>(f)] * t * t.transpose());
      basis.labels.push_back(std::to_string(s + 1) + "," + face_name(f));
    }
  }
  return basis;
}

ShearBuildingSpec benchmark_building_spec(double k_scale) {
  ShearBuildingSpec spec;
  spec.n_stories = 4;
  spec.half_width_x = 1.25;
  spec.half_width_y = 1.25;
  const std::array<double, 4> taper{1.0, 0.95, 0.9, 0.85};
  const std::array<double, 4> mass{1.0, 1.0, 1.0, 0.75};
  for (int s = 0; s < 4; ++s) {
    const double kx = k_scale * taper[s];  // faces carrying y shear
    const double ky = 1.2 * kx;            // faces carrying x shear
    spec.face_stiffness.push_back({kx, ky, kx, ky});
    spec.floor_mass.push_back(mass[s]);
    spec.floor_inertia.push_back(slab_inertia(mass[s], spec.half_width_x, spec.half_width_y));
  }
  return spec;
}

}  // namespace sbl
