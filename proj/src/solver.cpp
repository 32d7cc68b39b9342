#include "ricci/solver.hpp"

#include <cmath>

#include "ricci/errors.hpp"

namespace ricci {

namespace {

void apply_constraint(Eigen::VectorXd& v, const LinearSystem& sys) {
    if (sys.constraint == SolveConstraint::zero_mean)
        v.array() -= v.mean();
    else if (sys.constraint == SolveConstraint::pinned_vertex)
        v[sys.pinned_vertex] = 0;
}

}  // namespace

Eigen::VectorXd solve(const LinearSystem& sys, double tol, int max_iter) {
    const auto& H = *sys.H;
    const int n = static_cast<int>(H.rows());
    if (sys.rhs.size() != n) throw Error("rhs dimension mismatch");
    if (max_iter <= 0) max_iter = 10 * n;

    Eigen::VectorXd b = sys.rhs;
    apply_constraint(b, sys);
    const double bnorm = b.norm();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (bnorm == 0) return x;

    Eigen::VectorXd dinv(n);
    for (int i = 0; i < n; ++i) {
        double d = H.coeff(i, i);
        dinv[i] = d > 1e-300 ? 1.0 / d : 1.0;
    }

    Eigen::VectorXd r = b;
    Eigen::VectorXd z = dinv.asDiagonal() * r;
    apply_constraint(z, sys);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);

    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd hp = H * p;
        if (sys.constraint == SolveConstraint::pinned_vertex) hp[sys.pinned_vertex] = 0;
        double php = p.dot(hp);
        if (!(php > 0)) {
            if (r.norm() <= tol * bnorm) break;
            throw NotPositiveDefiniteError(
                "conjugate gradient hit nonpositive curvature");
        }
        double alpha = rz / php;
        x += alpha * p;
        r -= alpha * hp;
        apply_constraint(r, sys);
        if (r.norm() <= tol * bnorm) break;
        if (it + 1 == max_iter)
            throw NoConvergenceError("conjugate gradient iteration cap reached");
        z = dinv.asDiagonal() * r;
        apply_constraint(z, sys);
        double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }

    apply_constraint(x, sys);
    Eigen::VectorXd residual = H * x - b;
    if (sys.constraint == SolveConstraint::pinned_vertex)
        residual[sys.pinned_vertex] = 0;
    if (!(residual.norm() <= tol * bnorm * 1.01))
        throw NoConvergenceError("residual check failed after solve");
    return x;
}

}  // namespace ricci
