#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "ricci/geometry.hpp"
#include "ricci/mesh.hpp"

namespace ricci {

// Derivative of the three corner angles w.r.t. the three conformal factors:
// H(a, b) = dtheta_a / du_b with corners ordered as in the face.
struct FaceHessian {
    int face = -1;
    Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
};

// Equal-power point of a Euclidean face in a local frame (corner 0 at the
// origin, corner 1 on +x, corner 2 in the upper half-plane).
struct PowerCircleData {
    Eigen::Vector2d center = Eigen::Vector2d::Zero();
    double radius_sq = 0;  // power of the center; negative means imaginary radius
    // Signed distance from the center to the edge opposite corner c
    // (positive when the center lies on the face's interior side).
    std::array<double, 3> h = {0, 0, 0};
    // Splits of the edge opposite corner c at the perpendicular foot:
    // d[c][0] measured from corner (c+1)%3, d[c][1] from corner (c+2)%3.
    std::array<std::array<double, 2>, 3> d = {};
    std::array<Eigen::Vector2d, 3> corner = {};  // local-frame layout
};

// Matrix formula route: -(1/2A) * L * Theta * L^-1 * D for E2/H2 and
// +(1/2A) * L * Theta * L^-1 * D for S2, with A = sin(theta_0) s(l_1) s(l_2) / 2.
// The S2 sign is fixed by the finite-difference oracle (see tests).
// l[c] is the length of the edge opposite corner c, theta[c]/gamma[c]/eps[c]
// belong to corner c. Throws DegenerateFaceError on zero-area input.
FaceHessian face_hessian_analytic(const std::array<double, 3>& l,
                                  const std::array<double, 3>& theta,
                                  const std::array<double, 3>& gamma,
                                  const std::array<int, 3>& eps, Background bg);

// Equal-power point, edge distances and splits of a Euclidean face.
PowerCircleData euclidean_power_circle(const std::array<double, 3>& l,
                                       const std::array<double, 3>& gamma,
                                       const std::array<int, 3>& eps);

// Power-circle route: off-diagonal (a, b) = h_c / l_c, diagonals by negative
// row sum (the E2 angle sum is constant in u).
FaceHessian face_hessian_geometric_e2(const PowerCircleData& pc,
                                      const std::array<double, 3>& l);

// d_ij = dl_ij/du_i read off the power-circle splits.
std::array<std::array<double, 2>, 3> length_derivative_splits(
    const PowerCircleData& pc);

// Hyperbolic closed form: off-diagonal (a, b) =
// tanh(h_c)/sinh^2(l_c) * sqrt(2 C_a C_b cosh l_c - C_a^2 - C_b^2) with
// C = cosh^eps(gamma); diagonals are filled from the analytic route (the
// H2 angle sum is not constant, so no row-sum shortcut exists). Throws
// PowerCircleUndefinedError when the power circle does not exist.
FaceHessian face_hessian_geometric_h2(const std::array<double, 3>& l,
                                      const std::array<double, 3>& gamma,
                                      const std::array<int, 3>& eps);

// Spherical analogue (sinh -> i sin, cosh -> cos substitution).
FaceHessian face_hessian_geometric_s2(const std::array<double, 3>& l,
                                      const std::array<double, 3>& gamma,
                                      const std::array<int, 3>& eps);

// Symmetric sparse dK/du with nonzeros on mesh edges and the diagonal.
using SparseHessian = Eigen::SparseMatrix<double>;

// Analytic per-face Hessians for the whole mesh (parallel over faces).
std::vector<FaceHessian> face_hessians(const Mesh& mesh,
                                       const CirclePackingMetric& metric,
                                       const ConformalState& state);

// Scatter-add with a sign flip (K = 2 pi - sum of angles):
// entry (i, j) = -sum over faces of dtheta_i/du_j.
SparseHessian assemble_global(const Mesh& mesh,
                              const std::vector<FaceHessian>& face);

// Matrix Market coordinate dump for external inspection.
std::string write_matrix_market(const SparseHessian& m);
void save_matrix_market(const SparseHessian& m, const std::string& path);

}  // namespace ricci
