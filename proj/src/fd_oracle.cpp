#include "ricci/fd_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "ricci/errors.hpp"
#include "ricci/hessian.hpp"

namespace ricci {

std::array<double, 3> face_edge_lengths(const FaceSample& face) {
    std::array<double, 3> l;
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        l[c] = edge_length(face.u[a], face.u[b], face.eta[c], face.eps[a],
                           face.eps[b], face.bg);
    }
    return l;
}

std::array<double, 3> face_corner_angles(const FaceSample& face) {
    auto l = face_edge_lengths(face);
    return corner_angles(l[0], l[1], l[2], face.bg);
}

Eigen::Matrix3d fd_face_hessian(const FaceSample& face, double h) {
    Eigen::Matrix3d H;
    try {
        for (int b = 0; b < 3; ++b) {
            FaceSample plus = face, minus = face;
            plus.u[b] += h;
            minus.u[b] -= h;
            auto tp = face_corner_angles(plus);
            auto tm = face_corner_angles(minus);
            for (int a = 0; a < 3; ++a) H(a, b) = (tp[a] - tm[a]) / (2 * h);
        }
    } catch (const Error& e) {
        throw DegenerateNeighborhoodError(e.what());
    }
    return H;
}

std::pair<double, double> fd_edge_length_derivative(double u_i, double u_j,
                                                    double eta, int eps_i,
                                                    int eps_j, Background bg,
                                                    double h) {
    try {
        double di = (edge_length(u_i + h, u_j, eta, eps_i, eps_j, bg) -
                     edge_length(u_i - h, u_j, eta, eps_i, eps_j, bg)) /
                    (2 * h);
        double dj = (edge_length(u_i, u_j + h, eta, eps_i, eps_j, bg) -
                     edge_length(u_i, u_j - h, eta, eps_i, eps_j, bg)) /
                    (2 * h);
        return {di, dj};
    } catch (const Error& e) {
        throw DegenerateNeighborhoodError(e.what());
    }
}

FaceSample sample_face(std::mt19937_64& rng, Background bg, Scheme scheme,
                       int* rejected) {
    constexpr double kMinAngle = 0.15;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    const double gamma_hi = bg == Background::S2 ? 1.2 : 2.0;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        FaceSample face;
        face.bg = bg;
        std::array<double, 3> gamma;
        for (int c = 0; c < 3; ++c) {
            gamma[c] = uniform(0.2, gamma_hi);
            face.u[c] = u_from_gamma(gamma[c], bg);
        }
        switch (scheme) {
            case Scheme::tangential:
                face.eps = {1, 1, 1};
                face.eta = {1, 1, 1};
                break;
            case Scheme::thurston:
                face.eps = {1, 1, 1};
                for (auto& e : face.eta) e = uniform(0.0, 1.0);
                break;
            case Scheme::inversive:
                face.eps = {1, 1, 1};
                for (auto& e : face.eta) e = uniform(1.0, 3.0);
                break;
            case Scheme::yamabe:
                face.eps = {0, 0, 0};
                for (auto& e : face.eta) e = uniform(0.5, 3.0);
                break;
            case Scheme::virtual_radius:
                face.eps = {-1, -1, -1};
                if (bg == Background::E2) {
                    for (int c = 0; c < 3; ++c) {
                        int a = (c + 1) % 3, b = (c + 2) % 3;
                        double lo = (gamma[a] * gamma[a] + gamma[b] * gamma[b]) /
                                    (2 * gamma[a] * gamma[b]);
                        face.eta[c] = lo * uniform(1.05, 2.0);
                    }
                } else {
                    for (auto& e : face.eta) e = uniform(0.3, 3.0);
                }
                break;
            case Scheme::mixed:
                for (int c = 0; c < 3; ++c)
                    face.eps[c] = static_cast<int>(rng() % 3) - 1;
                for (auto& e : face.eta) e = uniform(0.8, 2.5);
                break;
        }
        try {
            auto l = face_edge_lengths(face);
            auto theta = corner_angles(l[0], l[1], l[2], bg);
            double lo = std::min({theta[0], theta[1], theta[2]});
            double hi = std::max({theta[0], theta[1], theta[2]});
            if (lo < kMinAngle || hi > std::numbers::pi - kMinAngle) {
                if (rejected) ++*rejected;
                continue;
            }
            if (bg == Background::S2) {
                double lmin = std::min({l[0], l[1], l[2]});
                double lmax = std::max({l[0], l[1], l[2]});
                if (lmin < 0.1 || lmax > std::numbers::pi - 0.1) {
                    if (rejected) ++*rejected;
                    continue;
                }
            }
        } catch (const Error&) {
            if (rejected) ++*rejected;
            continue;
        }
        return face;
    }
    throw DomainError("face sampler failed to find a valid face");
}

OracleReport run_face_hessian_oracle(Background bg, Scheme scheme, int n,
                                     std::uint64_t seed, double h) {
    std::mt19937_64 rng(seed);
    OracleReport report;
    for (int i = 0; i < n; ++i) {
        FaceSample face = sample_face(rng, bg, scheme, &report.rejected);
        auto l = face_edge_lengths(face);
        auto theta = corner_angles(l[0], l[1], l[2], bg);
        std::array<double, 3> gamma;
        for (int c = 0; c < 3; ++c) gamma[c] = gamma_from_u(face.u[c], bg);
        Eigen::Matrix3d analytic =
            face_hessian_analytic(l, theta, gamma, face.eps, bg).H;
        Eigen::Matrix3d fd = fd_face_hessian(face, h);
        double abs_err = (analytic - fd).cwiseAbs().maxCoeff();
        double rel_err = 0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                rel_err = std::max(rel_err, std::abs(analytic(a, b) - fd(a, b)) /
                                                std::max(1.0, std::abs(analytic(a, b))));
        if (rel_err > report.max_rel_error) {
            report.max_rel_error = rel_err;
            report.worst_case = face;
        }
        report.max_abs_error = std::max(report.max_abs_error, abs_err);
        ++report.samples;
    }
    return report;
}

std::string write_oracle_report_json(const OracleReport& report) {
    char buf[160];
    std::string out = "{";
    std::snprintf(buf, sizeof(buf),
                  "\"samples\": %d, \"rejected\": %d, \"max_abs_error\": %.17g, "
                  "\"max_rel_error\": %.17g, \"worst_case\": {\"bg\": \"%s\", ",
                  report.samples, report.rejected, report.max_abs_error,
                  report.max_rel_error, to_string(report.worst_case.bg).c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf), "\"u\": [%.17g, %.17g, %.17g], ",
                  report.worst_case.u[0], report.worst_case.u[1],
                  report.worst_case.u[2]);
    out += buf;
    std::snprintf(buf, sizeof(buf), "\"eta\": [%.17g, %.17g, %.17g], ",
                  report.worst_case.eta[0], report.worst_case.eta[1],
                  report.worst_case.eta[2]);
    out += buf;
    std::snprintf(buf, sizeof(buf), "\"eps\": [%d, %d, %d]}}",
                  report.worst_case.eps[0], report.worst_case.eps[1],
                  report.worst_case.eps[2]);
    out += buf;
    return out;
}

}  // namespace ricci
