#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "ricci/errors.hpp"
#include "ricci/fd_oracle.hpp"
#include "ricci/flow.hpp"
#include "ricci/geometry.hpp"
#include "ricci/hessian.hpp"
#include "ricci/layout.hpp"
#include "ricci/mesh.hpp"

using nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;

struct Options {
    std::string input;
    std::string geometry = "e2";
    std::string scheme = "yamabe";
    std::string target = "uniform";  // uniform | zero-interior | path
    double step = 0.5;
    double threshold = 1e-6;
    int max_iter = 200;
    std::string method = "newton";
    bool surgery = false;
    std::string output = "out";
    std::string log;
};

ricci::TargetCurvature make_target(const ricci::Mesh& mesh,
                                   const ricci::CirclePackingMetric& metric,
                                   const std::string& spec) {
    ricci::TargetCurvature t;
    const int nv = mesh.n_vertices();
    const double total = 2 * kPi * ricci::topology(mesh).euler_characteristic;
    if (spec == "uniform") {
        // E2: constant cone curvature 2 pi chi / V. H2/S2: the constant-
        // curvature metric has zero angle deficit everywhere; the topology
        // lives in the area term.
        t.K.assign(nv, metric.bg == ricci::Background::E2 ? total / nv : 0.0);
    } else if (spec == "zero-interior") {
        // interior flat; the total curvature goes to the boundary in
        // proportion to its current distribution
        auto state = ricci::compute_state(mesh, metric, ricci::conformal_factors(metric));
        auto K = ricci::vertex_curvatures(mesh, state);
        t.K.assign(nv, 0.0);
        double boundary_sum = 0;
        for (int v = 0; v < nv; ++v)
            if (mesh.vertex_on_boundary(v)) boundary_sum += K.K[v];
        for (int v = 0; v < nv; ++v)
            if (mesh.vertex_on_boundary(v))
                t.K[v] = boundary_sum != 0 ? K.K[v] * (total / boundary_sum) : 0.0;
    } else {
        std::ifstream in(spec);
        if (!in) throw ricci::ParseError("cannot open target file '" + spec + "'");
        nlohmann::json j = nlohmann::json::parse(in);
        t.K = j.get<std::vector<double>>();
        if (static_cast<int>(t.K.size()) != nv)
            throw ricci::ParseError("target file has " + std::to_string(t.K.size()) +
                                    " entries for " + std::to_string(nv) + " vertices");
    }
    return t;
}

ordered_json violations_json(const ricci::ValidationReport& rep) {
    ordered_json arr = ordered_json::array();
    for (const auto& v : rep.violations)
        arr.push_back({{"kind", v.kind},
                       {"vertex", v.vertex},
                       {"value", v.value},
                       {"limit", v.limit}});
    return arr;
}

int cmd_flow(const Options& opt) {
    ricci::Mesh mesh = ricci::load_obj(opt.input);
    auto bg = ricci::background_from_string(opt.geometry);
    auto scheme = ricci::scheme_from_string(opt.scheme);
    auto metric = ricci::init_circle_packing(
        mesh, ricci::embedded_edge_lengths(mesh), scheme, bg);
    auto target = make_target(mesh, metric, opt.target);

    auto validation = ricci::validate_target(mesh, target, bg);
    if (!validation.ok) {
        ordered_json out;
        out["error"] = "target validation failed";
        out["violations"] = violations_json(validation);
        std::cout << out.dump(2) << "\n";
        return 1;
    }

    ricci::FlowConfig cfg;
    cfg.step_length = opt.step;
    cfg.threshold = opt.threshold;
    cfg.max_iterations = opt.max_iter;
    cfg.method = opt.method == "gradient" ? ricci::FlowMethod::gradient
                                          : ricci::FlowMethod::newton;
    cfg.surgery = opt.surgery ? ricci::SurgeryMode::delaunay_e2
                              : ricci::SurgeryMode::off;
    cfg.log_path = opt.log;

    auto result = ricci::run(mesh, metric, target, cfg);

    {
        std::ofstream mfile(opt.output + ".metric.json");
        mfile << ricci::write_metric_json(result.mesh_final, result.metric_final,
                                          &result.u_final);
    }

    ordered_json report;
    report["status"] = ricci::to_string(result.status);
    report["iterations"] = result.iterations;
    report["flips"] = result.flips;
    report["final_error"] =
        result.error_history.empty() ? -1.0 : result.error_history.back();
    report["error_history"] = result.error_history;

    ordered_json layout_report;
    layout_report["emitted"] = false;
    auto topo = ricci::topology(result.mesh_final);
    bool disk = topo.euler_characteristic == 1 && topo.num_boundary_loops == 1;
    if (bg == ricci::Background::E2 && disk && !result.lengths_final.empty()) {
        try {
            auto emb = ricci::embed_disk(result.mesh_final, result.lengths_final);
            double dev = ricci::embedding_max_length_deviation(
                result.mesh_final, result.lengths_final, emb);
            ricci::save_obj(result.mesh_final, opt.output + ".obj", &emb.uv);
            layout_report["emitted"] = true;
            layout_report["max_length_deviation"] = dev;
        } catch (const ricci::Error& e) {
            layout_report["skipped"] = e.what();
        }
    }
    report["layout"] = layout_report;

    std::ofstream rfile(opt.output + ".report.json");
    rfile << report.dump(2) << "\n";
    std::cout << report.dump(2) << "\n";

    return result.status == ricci::FlowStatus::converged ? 0 : 2;
}

int cmd_check(const Options& opt) {
    ricci::Mesh mesh = ricci::load_obj(opt.input);
    auto bg = ricci::background_from_string(opt.geometry);
    auto scheme = ricci::scheme_from_string(opt.scheme);

    ordered_json out;
    auto topo = ricci::topology(mesh);
    out["topology"] = {{"vertices", topo.num_vertices},
                       {"edges", topo.num_edges},
                       {"faces", topo.num_faces},
                       {"euler_characteristic", topo.euler_characteristic},
                       {"genus", topo.genus},
                       {"boundary_loops", topo.num_boundary_loops}};

    bool ok = true;

    auto metric = ricci::init_circle_packing(
        mesh, ricci::embedded_edge_lengths(mesh), scheme, bg);
    auto state = ricci::compute_state(mesh, metric, ricci::conformal_factors(metric));
    auto K = ricci::vertex_curvatures(mesh, state);
    double area = ricci::total_area(mesh, state, bg);
    double residual = ricci::gauss_bonnet_residual(mesh, K, area, bg);
    out["gauss_bonnet_residual"] = residual;
    if (std::abs(residual) > 1e-9) ok = false;

    auto oracle = ricci::run_face_hessian_oracle(bg, scheme, 200, 20240229);
    out["fd_oracle"] =
        nlohmann::json::parse(ricci::write_oracle_report_json(oracle));
    if (oracle.max_rel_error > 1e-5) ok = false;

    out["ok"] = ok;
    std::cout << out.dump(2) << "\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete surface Ricci flow for triangle meshes"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--input", opt.input, "input OBJ mesh")->required();
        cmd->add_option("--geometry", opt.geometry, "e2 | h2 | s2");
        cmd->add_option("--scheme", opt.scheme,
                        "tangential | thurston | inversive | yamabe | virtual | mixed");
    };

    CLI::App* flow = app.add_subcommand("flow", "run the curvature flow");
    add_common(flow);
    flow->add_option("--target", opt.target,
                     "uniform | zero-interior | path to a JSON array");
    flow->add_option("--step", opt.step, "step length in (0, 1]");
    flow->add_option("--threshold", opt.threshold, "max curvature error");
    flow->add_option("--max-iter", opt.max_iter, "iteration cap");
    flow->add_option("--method", opt.method, "newton | gradient");
    flow->add_flag("--surgery", opt.surgery, "keep the triangulation Delaunay");
    flow->add_option("--output", opt.output, "output path prefix");
    flow->add_option("--log", opt.log, "iteration log CSV path");

    CLI::App* check = app.add_subcommand("check", "audit a mesh and its metric");
    add_common(check);

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(flow)) return cmd_flow(opt);
        return cmd_check(opt);
    } catch (const ricci::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
