#pragma once

#include <array>
#include <string>
#include <vector>

#include "ricci/mesh.hpp"

namespace ricci {

// Constant-curvature model the mesh triangles live in.
enum class Background { E2, H2, S2 };

Background background_from_string(const std::string& s);
std::string to_string(Background bg);

// Circle packing scheme. The per-vertex indicator epsilon distinguishes the
// ones that matter for the formulas: +1 (tangential/thurston/inversive),
// 0 (yamabe), -1 (virtual radius); mixed allows any combination.
enum class Scheme { tangential, thurston, inversive, yamabe, virtual_radius, mixed };

Scheme scheme_from_string(const std::string& s);
std::string to_string(Scheme s);

// The discrete conformal structure: per-vertex radii gamma and indicators
// epsilon, per-edge coefficients eta. Together with the background geometry
// this determines every edge length.
struct CirclePackingMetric {
    Background bg = Background::E2;
    Scheme scheme = Scheme::yamabe;
    std::vector<double> gamma;  // per vertex, > 0 (and < pi for S2)
    std::vector<int> epsilon;   // per vertex, in {-1, 0, +1}
    std::vector<double> eta;    // per edge
};

// Derived quantities of a metric at a given conformal factor vector.
struct ConformalState {
    std::vector<double> u;                     // per vertex
    std::vector<double> l;                     // per edge
    std::vector<std::array<double, 3>> theta;  // per face; angle at corner c
};

struct CurvatureVector {
    std::vector<double> K;  // per vertex, radians of angle deficit
};

// Conformal factor <-> radius. E2: log g; H2: log tanh(g/2); S2: log tan(g/2).
double u_from_gamma(double gamma, Background bg);
double gamma_from_u(double u, Background bg);

// Unified edge length. Throws DegenerateLengthError when the radicand /
// cosh argument / cos argument leaves its valid range.
double edge_length(double u_i, double u_j, double eta, int eps_i, int eps_j,
                   Background bg);

// Corner angles from the three edge lengths; l_c is opposite corner c and
// theta_c sits at corner c. Throws TriangleInequalityError.
std::array<double, 3> corner_angles(double l0, double l1, double l2,
                                    Background bg);

// Per-edge lengths for the whole mesh at conformal factors u.
std::vector<double> edge_lengths(const Mesh& mesh, const CirclePackingMetric& metric,
                                 const std::vector<double>& u);

// Per-face corner angles from per-edge lengths.
std::vector<std::array<double, 3>> face_angles(const Mesh& mesh,
                                               const std::vector<double>& l,
                                               Background bg);

ConformalState compute_state(const Mesh& mesh, const CirclePackingMetric& metric,
                             const std::vector<double>& u);

// Angle deficit: 2*pi minus incident angles at interior vertices, pi minus
// at boundary vertices.
CurvatureVector vertex_curvatures(const Mesh& mesh, const ConformalState& state);

// Intrinsic face area: Heron (E2), angle defect (H2), angle excess (S2).
double face_area(double l0, double l1, double l2,
                 const std::array<double, 3>& theta, Background bg);
double total_area(const Mesh& mesh, const ConformalState& state, Background bg);

// Sum K + eps_geom * A - 2*pi*chi with eps_geom = {+1 S2, 0 E2, -1 H2};
// near zero certifies a consistent curvature/area bookkeeping.
double gauss_bonnet_residual(const Mesh& mesh, const CurvatureVector& K,
                             double total_area, Background bg);

// eta = (exp(lambda) + eps_i*eps_j*exp(-lambda)) / 2, and its inverse where
// monotone. Throws InverseUndefinedError when eta is out of range.
double eta_from_lambda(double lambda, int eps_i, int eps_j);
double lambda_from_eta(double eta, int eps_i, int eps_j);

// Solves the unified length formula for eta: the coefficient that gives the
// edge length target_l at the stated endpoint factors (the formula is linear
// in eta).
double eta_for_length(double target_l, double u_i, double u_j, int eps_i,
                      int eps_j, Background bg);

// Builds the initial packing that reproduces the given edge lengths:
// inversive uses gamma_i = min incident length / 3, yamabe and virtual use
// gamma = 1, and eta is solved per edge from the unified length formula.
// For tangential (eta = 1) and thurston, gamma comes from the per-face
// contact radii; these two schemes do not reproduce arbitrary lengths and
// thurston fails with InitializationInfeasibleError when the solved eta
// leaves [0, 1].
CirclePackingMetric init_circle_packing(const Mesh& mesh,
                                        const std::vector<double>& embedded_lengths,
                                        Scheme scheme, Background bg);

// u_i = u_from_gamma(gamma_i) for every vertex.
std::vector<double> conformal_factors(const CirclePackingMetric& metric);

// JSON serialization; numbers carry 17 significant digits. The eta map is
// keyed by the sorted vertex pair "i,j". An optional u vector is stored
// alongside the metric.
std::string write_metric_json(const Mesh& mesh, const CirclePackingMetric& metric,
                              const std::vector<double>* u = nullptr);
CirclePackingMetric read_metric_json(const std::string& text, const Mesh& mesh,
                                     std::vector<double>* u_out = nullptr);

}  // namespace ricci
