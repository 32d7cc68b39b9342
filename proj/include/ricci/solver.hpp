#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace ricci {

// How the E2 gauge freedom (constant shifts of u) is removed. `none` assumes
// a genuinely positive definite system (H2 background).
enum class SolveConstraint { none, zero_mean, pinned_vertex };

struct LinearSystem {
    const Eigen::SparseMatrix<double>* H = nullptr;
    Eigen::VectorXd rhs;
    SolveConstraint constraint = SolveConstraint::none;
    int pinned_vertex = 0;
};

// Preconditioned conjugate gradient with a diagonal preconditioner.
// Under zero_mean the rhs and iterates are projected onto the mean-zero
// subspace; under pinned_vertex the pinned coordinate is held at zero.
// The returned solution satisfies ||H x - rhs|| <= tol * ||rhs|| (verified by
// an explicit residual recomputation before returning). Throws
// NotPositiveDefiniteError on a direction of nonpositive curvature and
// NoConvergenceError when the iteration cap (default 10 * dimension) is hit.
Eigen::VectorXd solve(const LinearSystem& sys, double tol = 1e-10,
                      int max_iter = 0);

}  // namespace ricci
