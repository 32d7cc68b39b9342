#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Core>

#include "ricci/geometry.hpp"

namespace ricci {

// A single face given directly by conformal data: eta[c] lives on the edge
// opposite corner c.
struct FaceSample {
    std::array<double, 3> u = {0, 0, 0};
    std::array<double, 3> eta = {0, 0, 0};
    std::array<int, 3> eps = {0, 0, 0};
    Background bg = Background::E2;
};

// Forward path only: lengths via the unified formula, angles via cosine law.
std::array<double, 3> face_edge_lengths(const FaceSample& face);
std::array<double, 3> face_corner_angles(const FaceSample& face);

// Central-difference Jacobian (a, b) -> dtheta_a/du_b recomputed through
// edge_length + corner_angles; independent of every Hessian formula it
// certifies. Throws DegenerateNeighborhoodError when the +-h stencil leaves
// the valid metric region.
Eigen::Matrix3d fd_face_hessian(const FaceSample& face, double h = 1e-6);

// Central differences (dl/du_i, dl/du_j) of the unified edge length.
std::pair<double, double> fd_edge_length_derivative(double u_i, double u_j,
                                                    double eta, int eps_i,
                                                    int eps_j, Background bg,
                                                    double h = 1e-6);

struct OracleReport {
    double max_abs_error = 0;
    double max_rel_error = 0;
    FaceSample worst_case;
    int samples = 0;
    int rejected = 0;  // sampler rejections
};

// Random valid face: gamma in [0.2, 2] (E2/H2) or [0.2, 1.2] (S2), eta in the
// scheme-legal range. Rejects faces violating the triangle inequality, and
// near-degenerate ones (corner angle below 0.15 rad, spherical lengths
// outside [0.1, pi-0.1]) where an h=1e-6 stencil loses the digits the
// comparisons need. Rejections are counted into *rejected.
FaceSample sample_face(std::mt19937_64& rng, Background bg, Scheme scheme,
                       int* rejected = nullptr);

// Certifies the analytic face Hessian against the FD oracle on n seeded
// samples; the relative error is measured entrywise against max(1, |entry|).
OracleReport run_face_hessian_oracle(Background bg, Scheme scheme, int n,
                                     std::uint64_t seed, double h = 1e-6);

std::string write_oracle_report_json(const OracleReport& report);

}  // namespace ricci
