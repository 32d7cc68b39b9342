#include "doctest.h"

#include <random>

#include <Eigen/Dense>

#include "fixtures.hpp"
#include "ricci/errors.hpp"
#include "ricci/hessian.hpp"
#include "ricci/solver.hpp"

using namespace ricci;

namespace {

SparseHessian metric_hessian(const Mesh& m, const CirclePackingMetric& metric) {
    auto state = compute_state(m, metric, conformal_factors(metric));
    return assemble_global(m, face_hessians(m, metric, state));
}

// Dense brute-force pseudoinverse solve for symmetric matrices: invert the
// spectrum above a rank cutoff.
Eigen::VectorXd pinv_solve(const Eigen::MatrixXd& D, const Eigen::VectorXd& rhs) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(D);
    double cutoff = 1e-10 * eig.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = eig.eigenvalues();
    for (int i = 0; i < inv.size(); ++i)
        inv[i] = std::abs(inv[i]) > cutoff ? 1.0 / inv[i] : 0.0;
    return eig.eigenvectors() * inv.asDiagonal() *
           (eig.eigenvectors().transpose() * rhs);
}

}  // namespace

TEST_CASE("diagonal system returns the rhs") {
    SparseHessian H(5, 5);
    for (int i = 0; i < 5; ++i) H.insert(i, i) = 1.0;
    H.makeCompressed();
    LinearSystem sys{&H, Eigen::VectorXd::LinSpaced(5, 1, 5), SolveConstraint::none};
    Eigen::VectorXd x = solve(sys);
    CHECK((x - sys.rhs).norm() < 1e-12);
}

TEST_CASE("tetra hessian solve matches the dense pseudoinverse") {
    Mesh m = fixtures::unit_tetra();
    auto metric = init_circle_packing(m, embedded_edge_lengths(m), Scheme::yamabe,
                                      Background::E2);
    SparseHessian H = metric_hessian(m, metric);

    Eigen::VectorXd rhs(4);
    rhs << 0.3, -0.1, -0.3, 0.1;  // already mean zero
    LinearSystem sys{&H, rhs, SolveConstraint::zero_mean};
    Eigen::VectorXd x = solve(sys);

    Eigen::MatrixXd D = Eigen::MatrixXd(H);
    Eigen::VectorXd ref = pinv_solve(D, rhs);
    CHECK((x - ref).norm() < 1e-9 * ref.norm());
    CHECK(std::abs(x.sum()) < 1e-12 * 4);
    CHECK((D * x - rhs).norm() < 1e-10 * rhs.norm());
}

TEST_CASE("rank-deficient system without a constraint fails") {
    Mesh m = fixtures::unit_tetra();
    auto metric = init_circle_packing(m, embedded_edge_lengths(m), Scheme::yamabe,
                                      Background::E2);
    SparseHessian H = metric_hessian(m, metric);
    Eigen::VectorXd rhs = Eigen::VectorXd::Ones(4);  // in the null space
    LinearSystem sys{&H, rhs, SolveConstraint::none};
    CHECK_THROWS(solve(sys));
}

TEST_CASE("zero-mean in, zero-mean out on a larger system") {
    Mesh m = fixtures::grid_disk(6);
    auto metric = init_circle_packing(m, embedded_edge_lengths(m), Scheme::yamabe,
                                      Background::E2);
    SparseHessian H = metric_hessian(m, metric);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd rhs(m.n_vertices());
    for (int i = 0; i < rhs.size(); ++i) rhs[i] = gauss(rng);
    rhs.array() -= rhs.mean();

    LinearSystem sys{&H, rhs, SolveConstraint::zero_mean};
    Eigen::VectorXd x = solve(sys);
    CHECK(std::abs(x.sum()) < 1e-12 * m.n_vertices());
    CHECK((Eigen::MatrixXd(H) * x - rhs).norm() < 1e-9 * rhs.norm());

    // dense reference on the mean-zero subspace
    Eigen::VectorXd ref = pinv_solve(Eigen::MatrixXd(H), rhs);
    CHECK((x - ref).norm() < 1e-9 * std::max(1.0, ref.norm()));
}

TEST_CASE("H2 hessian is positive definite and solves unconstrained") {
    Mesh m = fixtures::torus(6, 6);
    auto metric = fixtures::random_valid_metric(m, Background::H2, 123, Scheme::yamabe);
    SparseHessian H = metric_hessian(m, metric);

    Eigen::VectorXd ev =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(H))
            .eigenvalues();
    CHECK(ev.minCoeff() > 0);

    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd rhs(m.n_vertices());
    for (int i = 0; i < rhs.size(); ++i) rhs[i] = gauss(rng);
    LinearSystem sys{&H, rhs, SolveConstraint::none};
    Eigen::VectorXd x = solve(sys);
    CHECK((Eigen::MatrixXd(H) * x - rhs).norm() <= 1e-9 * rhs.norm());
}

TEST_CASE("nonpositive curvature is a typed breakdown") {
    SparseHessian H(3, 3);
    for (int i = 0; i < 3; ++i) H.insert(i, i) = -1.0;
    H.makeCompressed();
    LinearSystem sys{&H, Eigen::VectorXd::Ones(3), SolveConstraint::none};
    CHECK_THROWS_AS(solve(sys), NotPositiveDefiniteError);
}

TEST_CASE("pinned vertex constraint") {
    Mesh m = fixtures::grid_disk(4);
    auto metric = init_circle_packing(m, embedded_edge_lengths(m), Scheme::yamabe,
                                      Background::E2);
    SparseHessian H = metric_hessian(m, metric);
    Eigen::VectorXd rhs = Eigen::VectorXd::Random(m.n_vertices());
    LinearSystem sys{&H, rhs, SolveConstraint::pinned_vertex, 3};
    Eigen::VectorXd x = solve(sys);
    CHECK(x[3] == 0.0);
    Eigen::VectorXd res = Eigen::MatrixXd(H) * x - rhs;
    res[3] = 0;
    CHECK(res.norm() < 1e-9 * rhs.norm());
}
