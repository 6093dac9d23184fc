#pragma once

#include "sbl/common.hpp"

#include <array>
#include <string>
#include <vector>

namespace sbl {

// K(theta) = k0 + sum_j theta_j k_sub[j], with mass matrix `mass`.
struct StructuralBasis {
  int n_dof = 0;
  int n_sub = 0;
  Mat mass;
  Mat k0;
  std::vector<Mat> k_sub;
  std::vector<std::string> labels;

  // Throws InvariantViolation if dimensions, symmetry or definiteness fail.
  void validate() const;
  // Index of a substructure label, or -1.
  int index_of(const std::string& label) const;
};

Mat assemble_stiffness(const StructuralBasis& basis, const Vec& theta);

// Faces of a rectangular floor plan. A face at x = +a or x = -a carries
// shear along y; a face at y = +b or y = -b carries shear along x.
enum class Face { PlusX = 0, PlusY = 1, MinusX = 2, MinusY = 3 };
inline constexpr std::array<Face, 4> kFaces{Face::PlusX, Face::PlusY, Face::MinusX, Face::MinusY};
std::string face_name(Face f);

// Rigid-floor shear building with DOFs (x, y, rotation) per floor. Floor 1 is
// the lowest; story s connects floor s-1 (ground for s = 1) to floor s.
struct ShearBuildingSpec {
  int n_stories = 0;
  // face_stiffness[s][face] is the lateral stiffness of that face in story s+1.
  std::vector<std::array<double, 4>> face_stiffness;
  std::vector<double> floor_mass;
  std::vector<double> floor_inertia;  // rotational inertia about the vertical axis
  double half_width_x = 1.0;          // a
  double half_width_y = 1.0;          // b

  void validate() const;
};

// Rotational inertia of a uniform rectangular slab with half-widths (a, b).
inline double slab_inertia(double mass, double a, double b) { return mass * (a * a + b * b) / 3.0; }

// Substructure j = face_index * n_stories + (story - 1); labels "s,+x" etc.
StructuralBasis build_shear_building(const ShearBuildingSpec& spec);

// Four-story building used by the benchmark preset: floor masses
// (1, 1, 1, 0.75), x-carrying faces k_s * (1, .95, .9, .85), y-carrying faces 1.2x that,
// plan half-widths 1.25.
ShearBuildingSpec benchmark_building_spec(double k_scale = 1.0);

}  // namespace sbl
