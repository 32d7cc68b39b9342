#include "ricci/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <numbers>
#include <optional>

#include "ricci/errors.hpp"
#include "ricci/hessian.hpp"
#include "ricci/solver.hpp"

namespace ricci {

namespace {
constexpr double kPi = std::numbers::pi;
}

std::string to_string(FlowStatus s) {
    switch (s) {
        case FlowStatus::converged: return "converged";
        case FlowStatus::max_iter: return "max_iter";
        case FlowStatus::degenerate: return "degenerate";
        case FlowStatus::solver_failure: return "solver_failure";
    }
    return "?";
}

double curvature_error(const CurvatureVector& K, const TargetCurvature& target) {
    double err = 0;
    for (size_t i = 0; i < K.K.size(); ++i)
        err = std::max(err, std::abs(target.K[i] - K.K[i]));
    return err;
}

ValidationReport validate_target(const Mesh& mesh, const TargetCurvature& target,
                                 Background bg) {
    ValidationReport rep;
    if (static_cast<int>(target.K.size()) != mesh.n_vertices()) {
        rep.ok = false;
        rep.violations.push_back({"sum", -1,
                                  static_cast<double>(target.K.size()),
                                  static_cast<double>(mesh.n_vertices())});
        return rep;
    }
    double sum = 0;
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        sum += target.K[v];
        double limit = mesh.vertex_on_boundary(v) ? kPi : 2 * kPi;
        if (!(target.K[v] < limit)) {
            rep.ok = false;
            rep.violations.push_back({"bound", v, target.K[v], limit});
        }
    }
    const double total = 2 * kPi * topology(mesh).euler_characteristic;
    switch (bg) {
        case Background::E2:
            if (std::abs(sum - total) > 1e-9) {
                rep.ok = false;
                rep.violations.push_back({"sum", -1, sum, total});
            }
            break;
        case Background::H2:
            // positive hyperbolic area: sum K - A = 2 pi chi with A > 0
            if (!(sum > total)) {
                rep.ok = false;
                rep.violations.push_back({"sum", -1, sum, total});
            }
            break;
        case Background::S2:
            if (!(sum < total)) {
                rep.ok = false;
                rep.violations.push_back({"sum", -1, sum, total});
            }
            break;
    }
    return rep;
}

namespace {

// Plane layout of the quad around interior edge e; returns the length of the
// opposite diagonal (k, m), or nothing if the layout degenerates.
std::optional<double> flipped_diagonal_length(const Mesh& mesh, int e,
                                              const std::vector<double>& l,
                                              int* out_k = nullptr,
                                              int* out_m = nullptr) {
    int h = mesh.edge_halfedge[e];
    int t = mesh.he_twin[h];
    int i = mesh.he_origin[h];
    int j = mesh.he_origin[t];
    int k = mesh.he_origin[mesh.he_next[mesh.he_next[h]]];
    int m = mesh.he_origin[mesh.he_next[mesh.he_next[t]]];
    if (out_k) *out_k = k;
    if (out_m) *out_m = m;

    auto elen = [&](int a, int b) {
        for (int he : {mesh.he_next[h], mesh.he_next[mesh.he_next[h]],
                       mesh.he_next[t], mesh.he_next[mesh.he_next[t]]}) {
            int ea = mesh.he_origin[he];
            int eb = mesh.he_origin[mesh.he_next[he]];
            if ((ea == a && eb == b) || (ea == b && eb == a))
                return l[mesh.he_edge[he]];
        }
        return -1.0;
    };

    const double lij = l[e];
    const double lik = elen(i, k), ljk = elen(j, k);
    const double lim = elen(i, m), ljm = elen(j, m);
    if (lik < 0 || ljk < 0 || lim < 0 || ljm < 0) return std::nullopt;

    double xk = (lij * lij + lik * lik - ljk * ljk) / (2 * lij);
    double yk2 = lik * lik - xk * xk;
    double xm = (lij * lij + lim * lim - ljm * ljm) / (2 * lij);
    double ym2 = lim * lim - xm * xm;
    if (!(yk2 > 0) || !(ym2 > 0)) return std::nullopt;
    double dx = xk - xm;
    double dy = std::sqrt(yk2) + std::sqrt(ym2);  // k above, m below the diagonal
    double lkm = std::hypot(dx, dy);
    return lkm > 0 ? std::optional<double>(lkm) : std::nullopt;
}

}  // namespace

SurgeryResult delaunay_surgery(const Mesh& mesh, const CirclePackingMetric& metric,
                               const std::vector<double>& u,
                               std::vector<double> lengths) {
    if (metric.bg != Background::E2 || metric.scheme != Scheme::yamabe)
        throw DomainError("Delaunay surgery is defined for the E2 yamabe scheme");

    SurgeryResult res;
    res.mesh = mesh;
    res.metric = metric;
    res.lengths = std::move(lengths);

    auto angles = face_angles(res.mesh, res.lengths, Background::E2);

    auto opposite_angle_sum = [&](int e) -> double {
        int h = res.mesh.edge_halfedge[e];
        int t = res.mesh.he_twin[h];
        double sum = 0;
        for (int he : {h, t}) {
            int f = res.mesh.he_face[he];
            for (int c = 0; c < 3; ++c)
                if (res.mesh.face_opposite_halfedge(f, c) == he) sum += angles[f][c];
        }
        return sum;
    };

    std::deque<int> queue;
    std::vector<bool> queued(res.mesh.n_edges(), false);
    for (int e = 0; e < res.mesh.n_edges(); ++e)
        if (!res.mesh.edge_on_boundary(e)) {
            queue.push_back(e);
            queued[e] = true;
        }

    const long flip_cap =
        static_cast<long>(res.mesh.n_edges()) * res.mesh.n_edges();
    while (!queue.empty()) {
        if (res.flips >= flip_cap) {
            res.cap_exceeded = true;
            break;
        }
        int e = queue.front();
        queue.pop_front();
        queued[e] = false;
        if (res.mesh.edge_on_boundary(e)) continue;
        if (opposite_angle_sum(e) <= kPi + 1e-12) continue;

        int k = -1, m = -1;
        auto lkm = flipped_diagonal_length(res.mesh, e, res.lengths, &k, &m);
        if (!lkm) continue;

        int h = res.mesh.edge_halfedge[e];
        int quad[4] = {res.mesh.he_next[h], res.mesh.he_next[res.mesh.he_next[h]],
                       res.mesh.he_next[res.mesh.he_twin[h]],
                       res.mesh.he_next[res.mesh.he_next[res.mesh.he_twin[h]]]};
        try {
            flip_edge(res.mesh, e);
        } catch (const Error&) {
            continue;  // flip would break the complex; leave the edge alone
        }
        ++res.flips;
        res.lengths[e] = *lkm;
        // yamabe: l^2 = 2 eta exp(u_k + u_m)
        res.metric.eta[e] = 0.5 * (*lkm) * (*lkm) * std::exp(-u[k] - u[m]);

        for (int f : {res.mesh.he_face[res.mesh.edge_halfedge[e]],
                      res.mesh.he_face[res.mesh.he_twin[res.mesh.edge_halfedge[e]]]}) {
            auto oe = res.mesh.face_opposite_edges(f);
            angles[f] = corner_angles(res.lengths[oe[0]], res.lengths[oe[1]],
                                      res.lengths[oe[2]], Background::E2);
        }
        for (int he : quad) {
            int ne = res.mesh.he_edge[he];
            if (!queued[ne] && !res.mesh.edge_on_boundary(ne)) {
                queue.push_back(ne);
                queued[ne] = true;
            }
        }
    }
    return res;
}

namespace {

struct EvalResult {
    ConformalState state;
    CurvatureVector K;
    double error = 0;
};

std::optional<EvalResult> try_eval(const Mesh& mesh, const CirclePackingMetric& metric,
                                   const std::vector<double>& u,
                                   const TargetCurvature& target) {
    try {
        EvalResult r;
        r.state = compute_state(mesh, metric, u);
        r.K = vertex_curvatures(mesh, r.state);
        r.error = curvature_error(r.K, target);
        return r;
    } catch (const Error&) {
        return std::nullopt;
    }
}

void recenter(std::vector<double>& u) {
    double mean = 0;
    for (double x : u) mean += x;
    mean /= static_cast<double>(u.size());
    for (double& x : u) x -= mean;
}

}  // namespace

FlowResult run(const Mesh& mesh, const CirclePackingMetric& metric0,
               const TargetCurvature& target, const FlowConfig& cfg) {
    auto validation = validate_target(mesh, target, metric0.bg);
    if (!validation.ok)
        throw DomainError("target curvature fails validation (" +
                          std::to_string(validation.violations.size()) +
                          " violations)");
    if (cfg.surgery == SurgeryMode::delaunay_e2 &&
        (metric0.bg != Background::E2 || metric0.scheme != Scheme::yamabe))
        throw DomainError("Delaunay surgery requires the E2 yamabe scheme");

    FlowResult res;
    res.mesh_final = mesh;
    res.metric_final = metric0;

    std::vector<double> u = conformal_factors(metric0);
    const bool euclidean = metric0.bg == Background::E2;
    if (euclidean) recenter(u);

    std::ofstream log;
    if (!cfg.log_path.empty()) {
        log.open(cfg.log_path);
        log << "iteration,max_error,step_used,flips\n";
    }

    auto finalize = [&](FlowStatus status) {
        res.status = status;
        res.u_final = u;
        for (int v = 0; v < res.mesh_final.n_vertices(); ++v) {
            try {
                res.metric_final.gamma[v] = gamma_from_u(u[v], metric0.bg);
            } catch (const Error&) {
                // H2 factors can leave the radius parameterization (u >= 0)
                // while the metric itself stays valid; keep the old radius.
            }
        }
        try {
            res.lengths_final = edge_lengths(res.mesh_final, res.metric_final, u);
        } catch (const Error&) {
            res.lengths_final.clear();
        }
        return res;
    };

    for (int iter = 0; iter <= cfg.max_iterations; ++iter) {
        int flips_now = 0;
        if (cfg.surgery == SurgeryMode::delaunay_e2) {
            try {
                auto lengths = edge_lengths(res.mesh_final, res.metric_final, u);
                auto sr = delaunay_surgery(res.mesh_final, res.metric_final, u,
                                           std::move(lengths));
                res.mesh_final = std::move(sr.mesh);
                res.metric_final = std::move(sr.metric);
                flips_now = sr.flips;
                res.flips += sr.flips;
            } catch (const Error&) {
                return finalize(FlowStatus::degenerate);
            }
        }

        auto eval = try_eval(res.mesh_final, res.metric_final, u, target);
        if (!eval) return finalize(FlowStatus::degenerate);
        res.error_history.push_back(eval->error);

        if (eval->error <= cfg.threshold) {
            // certify from scratch before reporting success
            auto fresh = try_eval(res.mesh_final, res.metric_final, u, target);
            if (fresh && fresh->error <= cfg.threshold)
                return finalize(FlowStatus::converged);
            return finalize(FlowStatus::degenerate);
        }
        if (iter == cfg.max_iterations) break;

        std::vector<double> direction(u.size());
        if (cfg.method == FlowMethod::newton) {
            try {
                auto fh = face_hessians(res.mesh_final, res.metric_final, eval->state);
                SparseHessian H = assemble_global(res.mesh_final, fh);
                LinearSystem sys;
                sys.H = &H;
                sys.rhs = Eigen::VectorXd(u.size());
                for (size_t v = 0; v < u.size(); ++v)
                    sys.rhs[v] = target.K[v] - eval->K.K[v];
                sys.constraint =
                    euclidean ? SolveConstraint::zero_mean : SolveConstraint::none;
                Eigen::VectorXd du = solve(sys, 1e-10, 10 * res.mesh_final.n_vertices());
                for (size_t v = 0; v < u.size(); ++v) direction[v] = du[v];
            } catch (const Error&) {
                return finalize(FlowStatus::solver_failure);
            }
        } else {
            for (size_t v = 0; v < u.size(); ++v)
                direction[v] = target.K[v] - eval->K.K[v];
        }

        double dt = cfg.step_length;
        const int max_halvings = cfg.backtracking ? 20 : 0;
        std::vector<double> u_trial;
        bool accepted = false;
        bool last_was_degenerate = false;
        for (int halving = 0; halving <= max_halvings; ++halving) {
            u_trial = u;
            for (size_t v = 0; v < u.size(); ++v) u_trial[v] += dt * direction[v];
            if (euclidean) recenter(u_trial);
            auto trial = try_eval(res.mesh_final, res.metric_final, u_trial, target);
            if (!trial) {
                last_was_degenerate = true;
                dt /= 2;
                continue;
            }
            last_was_degenerate = false;
            if (cfg.backtracking && trial->error > eval->error &&
                halving < max_halvings) {
                dt /= 2;
                continue;
            }
            accepted = true;
            break;
        }
        if (!accepted) {
            if (last_was_degenerate) return finalize(FlowStatus::degenerate);
            // error kept increasing at the smallest step; take it anyway
        }
        u = u_trial;
        ++res.iterations;
        if (log.is_open())
            log << iter << ',' << eval->error << ',' << dt << ',' << flips_now << '\n';
    }
    return finalize(FlowStatus::max_iter);
}

}  // namespace ricci
