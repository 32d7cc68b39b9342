#pragma once

#include <string>
#include <vector>

#include "ricci/geometry.hpp"
#include "ricci/mesh.hpp"

namespace ricci {

enum class FlowMethod { newton, gradient };
enum class SurgeryMode { off, delaunay_e2 };
enum class FlowStatus { converged, max_iter, degenerate, solver_failure };

std::string to_string(FlowStatus s);

struct FlowConfig {
    double step_length = 0.5;
    double threshold = 1e-6;  // max-norm curvature error
    int max_iterations = 200;
    FlowMethod method = FlowMethod::newton;
    SurgeryMode surgery = SurgeryMode::off;
    bool backtracking = true;
    std::string log_path;  // per-iteration CSV when non-empty
};

struct TargetCurvature {
    std::vector<double> K;  // per vertex
};

struct TargetViolation {
    std::string kind;  // "sum" or "bound"
    int vertex = -1;   // -1 for the global sum constraint
    double value = 0;
    double limit = 0;
};

struct ValidationReport {
    bool ok = true;
    std::vector<TargetViolation> violations;
};

// Gauss-Bonnet compatibility and per-vertex bounds: every K_i < 2 pi
// (interior) or < pi (boundary); E2 requires sum K = 2 pi chi, H2 requires
// sum K > 2 pi chi and S2 sum K < 2 pi chi (positive total area).
ValidationReport validate_target(const Mesh& mesh, const TargetCurvature& target,
                                 Background bg);

struct FlowResult {
    std::vector<double> u_final;
    CirclePackingMetric metric_final;
    std::vector<double> lengths_final;
    Mesh mesh_final;  // differs from the input only when surgery ran
    int iterations = 0;
    std::vector<double> error_history;  // max |Kbar - K| per iteration
    FlowStatus status = FlowStatus::max_iter;
    int flips = 0;
};

// Newton (or gradient) iteration on the conformal factors until the max
// curvature error drops below cfg.threshold. The E2 gauge is fixed by
// re-centering u to mean zero each iteration. With backtracking on, a step
// that degenerates the metric or increases the error is halved (up to 20
// times); a step that still degenerates ends the run with status degenerate.
// A converged status is certified by an independent recomputation of the
// curvatures from u_final. Numeric failures become statuses; no exception
// escapes for in-contract inputs. Throws DomainError when the target fails
// validate_target (a precondition).
FlowResult run(const Mesh& mesh, const CirclePackingMetric& metric0,
               const TargetCurvature& target, const FlowConfig& cfg = {});

// max_i |Kbar_i - K_i|; 0 for empty input.
double curvature_error(const CurvatureVector& K, const TargetCurvature& target);

struct SurgeryResult {
    Mesh mesh;
    CirclePackingMetric metric;
    std::vector<double> lengths;
    int flips = 0;
    bool cap_exceeded = false;  // flip budget hit; reported, not fatal
};

// Flips interior edges whose opposite-angle sum exceeds pi until the
// triangulation is Delaunay. Every flip preserves the surviving edge lengths;
// the flipped diagonal gets its length from the planar layout of the quad and
// its eta is recomputed so the new metric reproduces that length. E2 yamabe
// only (throws DomainError otherwise).
SurgeryResult delaunay_surgery(const Mesh& mesh, const CirclePackingMetric& metric,
                               const std::vector<double>& u,
                               std::vector<double> lengths);

}  // namespace ricci
