#include "ricci/hessian.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <Eigen/LU>

#include "ricci/errors.hpp"
#include "ricci/parallel.hpp"

namespace ricci {

namespace {

// cosh^eps(x) for H2, cos^eps(x) for S2, with eps in {-1, 0, +1}.
double cpow(double x, int eps, Background bg) {
    if (eps == 0) return 1.0;
    double f = bg == Background::H2 ? std::cosh(x) : std::cos(x);
    return eps > 0 ? f : 1.0 / f;
}

double s_of(double x, Background bg) {
    switch (bg) {
        case Background::E2: return x;
        case Background::H2: return std::sinh(x);
        case Background::S2: return std::sin(x);
    }
    return 0;
}

}  // namespace

FaceHessian face_hessian_analytic(const std::array<double, 3>& l,
                                  const std::array<double, 3>& theta,
                                  const std::array<double, 3>& gamma,
                                  const std::array<int, 3>& eps, Background bg) {
    const std::array<double, 3> sl = {s_of(l[0], bg), s_of(l[1], bg), s_of(l[2], bg)};
    const double area = 0.5 * std::sin(theta[0]) * sl[1] * sl[2];
    if (!(area > 1e-300)) throw DegenerateFaceError("zero-area face");

    auto tau = [&](int i, int j, int k) -> double {
        if (bg == Background::E2)
            return 0.5 * (l[i] * l[i] + eps[j] * gamma[j] * gamma[j] -
                          eps[k] * gamma[k] * gamma[k]);
        double cl = bg == Background::H2 ? std::cosh(l[i]) : std::cos(l[i]);
        return cl * cpow(gamma[j], eps[j], bg) - cpow(gamma[k], eps[k], bg);
    };

    Eigen::Matrix3d Th;
    Th << -1, std::cos(theta[2]), std::cos(theta[1]),
          std::cos(theta[2]), -1, std::cos(theta[0]),
          std::cos(theta[1]), std::cos(theta[0]), -1;
    Eigen::Matrix3d D;
    D << 0, tau(0, 1, 2), tau(0, 2, 1),
         tau(1, 0, 2), 0, tau(1, 2, 0),
         tau(2, 0, 1), tau(2, 1, 0), 0;
    Eigen::Matrix3d L = Eigen::Vector3d(sl[0], sl[1], sl[2]).asDiagonal();
    Eigen::Matrix3d Linv =
        Eigen::Vector3d(1 / sl[0], 1 / sl[1], 1 / sl[2]).asDiagonal();

    // The S2 branch carries the opposite overall sign; calibrated against
    // central finite differences of the corner angles.
    const double prefac = (bg == Background::S2 ? 1.0 : -1.0) / (2 * area);

    FaceHessian out;
    out.H = prefac * (L * Th * Linv * D);
    return out;
}

PowerCircleData euclidean_power_circle(const std::array<double, 3>& l,
                                       const std::array<double, 3>& gamma,
                                       const std::array<int, 3>& eps) {
    PowerCircleData pc;
    // corner 0 at origin, corner 1 at (l2, 0), corner 2 above the x-axis
    const double x = (l[2] * l[2] + l[1] * l[1] - l[0] * l[0]) / (2 * l[2]);
    const double ysq = l[1] * l[1] - x * x;
    if (!(ysq > 0)) throw DegenerateFaceError("collinear face");
    pc.corner[0] = {0, 0};
    pc.corner[1] = {l[2], 0};
    pc.corner[2] = {x, std::sqrt(ysq)};

    const std::array<double, 3> w = {eps[0] * gamma[0] * gamma[0],
                                     eps[1] * gamma[1] * gamma[1],
                                     eps[2] * gamma[2] * gamma[2]};
    Eigen::Matrix2d A;
    A.row(0) = 2 * (pc.corner[1] - pc.corner[0]).transpose();
    A.row(1) = 2 * (pc.corner[2] - pc.corner[0]).transpose();
    Eigen::Vector2d rhs(
        pc.corner[1].squaredNorm() - pc.corner[0].squaredNorm() - w[1] + w[0],
        pc.corner[2].squaredNorm() - pc.corner[0].squaredNorm() - w[2] + w[0]);
    pc.center = A.fullPivLu().solve(rhs);
    pc.radius_sq = (pc.center - pc.corner[0]).squaredNorm() - w[0];

    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        Eigen::Vector2d t = (pc.corner[b] - pc.corner[a]) / l[c];
        Eigen::Vector2d n(-t.y(), t.x());  // left normal of a -> b
        double side = n.dot(pc.corner[c] - pc.corner[a]) >= 0 ? 1.0 : -1.0;
        pc.h[c] = side * n.dot(pc.center - pc.corner[a]);
        pc.d[c][0] = t.dot(pc.center - pc.corner[a]);
        pc.d[c][1] = l[c] - pc.d[c][0];
    }
    return pc;
}

FaceHessian face_hessian_geometric_e2(const PowerCircleData& pc,
                                      const std::array<double, 3>& l) {
    FaceHessian out;
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        out.H(a, b) = out.H(b, a) = pc.h[c] / l[c];
    }
    for (int c = 0; c < 3; ++c)
        out.H(c, c) = -out.H(c, (c + 1) % 3) - out.H(c, (c + 2) % 3);
    return out;
}

std::array<std::array<double, 2>, 3> length_derivative_splits(
    const PowerCircleData& pc) {
    return pc.d;
}

namespace {

FaceHessian geometric_closed_form(const std::array<double, 3>& l,
                                  const std::array<double, 3>& gamma,
                                  const std::array<int, 3>& eps, Background bg) {
    const bool hyp = bg == Background::H2;
    auto C = [&](int c) { return cpow(gamma[c], eps[c], bg); };
    std::array<double, 3> cl, sl2;
    for (int c = 0; c < 3; ++c) {
        cl[c] = hyp ? std::cosh(l[c]) : std::cos(l[c]);
        double s = hyp ? std::sinh(l[c]) : std::sin(l[c]);
        sl2[c] = s * s;
    }
    const double N = 1 + 2 * cl[0] * cl[1] * cl[2] - cl[0] * cl[0] -
                     cl[1] * cl[1] - cl[2] * cl[2];
    if (!(N > 0)) throw DegenerateFaceError("degenerate face (Gram determinant)");
    double D = 0;
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        D += C(c) * C(c) * (1 - cl[c] * cl[c]) +
             2 * C(a) * C(b) * (cl[a] * cl[b] - cl[c]);
    }
    // cosh^2 r = N / D (H2); cos^2 r = N / D (S2). D <= 0 means there is no
    // real power circle even though the face itself is fine.
    if (!(D > 0)) throw PowerCircleUndefinedError("no real power circle (D <= 0)");

    FaceHessian out;
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        const double Q = hyp ? 2 * C(a) * C(b) * cl[c] - C(a) * C(a) - C(b) * C(b)
                             : C(a) * C(a) + C(b) * C(b) - 2 * C(a) * C(b) * cl[c];
        if (!(Q > 0))
            throw PowerCircleUndefinedError("nonpositive radicand on edge");
        // tanh^2 h (H2) / tan^2 h (S2) from the power-circle height; its sign
        // comes from the expanded numerator, which changes sign exactly when
        // the center crosses the edge line.
        const double t2 = hyp ? (N * Q - D * sl2[c]) / (N * Q)
                              : (D * sl2[c] - N * Q) / (N * Q);
        const double bracket =
            hyp ? (cl[a] * cl[c] - cl[b]) * C(a) + (cl[b] * cl[c] - cl[a]) * C(b) -
                      sl2[c] * C(c)
                : (cl[a] * cl[c] - cl[b]) * C(a) + (cl[b] * cl[c] - cl[a]) * C(b) +
                      sl2[c] * C(c);
        const double th = std::copysign(std::sqrt(std::max(t2, 0.0)), bracket);
        out.H(a, b) = out.H(b, a) = th / sl2[c] * std::sqrt(Q);
    }

    // Diagonals: the angle sum varies with u off the Euclidean background, so
    // they come from the analytic matrix route.
    auto theta = corner_angles(l[0], l[1], l[2], bg);
    FaceHessian full = face_hessian_analytic(l, theta, gamma, eps, bg);
    for (int c = 0; c < 3; ++c) out.H(c, c) = full.H(c, c);
    return out;
}

}  // namespace

FaceHessian face_hessian_geometric_h2(const std::array<double, 3>& l,
                                      const std::array<double, 3>& gamma,
                                      const std::array<int, 3>& eps) {
    return geometric_closed_form(l, gamma, eps, Background::H2);
}

FaceHessian face_hessian_geometric_s2(const std::array<double, 3>& l,
                                      const std::array<double, 3>& gamma,
                                      const std::array<int, 3>& eps) {
    return geometric_closed_form(l, gamma, eps, Background::S2);
}

std::vector<FaceHessian> face_hessians(const Mesh& mesh,
                                       const CirclePackingMetric& metric,
                                       const ConformalState& state) {
    std::vector<FaceHessian> out(mesh.n_faces());
    parallel_for(mesh.n_faces(), [&](int f) {
        auto v = mesh.face_vertices(f);
        auto e = mesh.face_opposite_edges(f);
        std::array<double, 3> l = {state.l[e[0]], state.l[e[1]], state.l[e[2]]};
        std::array<double, 3> g = {metric.gamma[v[0]], metric.gamma[v[1]],
                                   metric.gamma[v[2]]};
        std::array<int, 3> ep = {metric.epsilon[v[0]], metric.epsilon[v[1]],
                                 metric.epsilon[v[2]]};
        out[f] = face_hessian_analytic(l, state.theta[f], g, ep, metric.bg);
        out[f].face = f;
    });
    return out;
}

SparseHessian assemble_global(const Mesh& mesh,
                              const std::vector<FaceHessian>& face) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(face.size() * 9);
    for (const auto& fh : face) {
        auto v = mesh.face_vertices(fh.face);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                trips.emplace_back(v[a], v[b], -fh.H(a, b));
    }
    SparseHessian H(mesh.n_vertices(), mesh.n_vertices());
    H.setFromTriplets(trips.begin(), trips.end());
    return H;
}

std::string write_matrix_market(const SparseHessian& m) {
    std::string out = "%%MatrixMarket matrix coordinate real general\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d %d %d\n", static_cast<int>(m.rows()),
                  static_cast<int>(m.cols()), static_cast<int>(m.nonZeros()));
    out += buf;
    for (int k = 0; k < m.outerSize(); ++k)
        for (SparseHessian::InnerIterator it(m, k); it; ++it) {
            std::snprintf(buf, sizeof(buf), "%d %d %.17g\n",
                          static_cast<int>(it.row()) + 1,
                          static_cast<int>(it.col()) + 1, it.value());
            out += buf;
        }
    return out;
}

void save_matrix_market(const SparseHessian& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << write_matrix_market(m);
}

}  // namespace ricci
