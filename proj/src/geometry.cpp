#include "ricci/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>

#include "json.hpp"

#include "ricci/errors.hpp"
#include "ricci/parallel.hpp"

namespace ricci {

namespace {
constexpr double kPi = std::numbers::pi;
}

Background background_from_string(const std::string& s) {
    if (s == "e2" || s == "E2") return Background::E2;
    if (s == "h2" || s == "H2") return Background::H2;
    if (s == "s2" || s == "S2") return Background::S2;
    throw DomainError("unknown background geometry '" + s + "'");
}

std::string to_string(Background bg) {
    switch (bg) {
        case Background::E2: return "e2";
        case Background::H2: return "h2";
        case Background::S2: return "s2";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& s) {
    if (s == "tangential") return Scheme::tangential;
    if (s == "thurston") return Scheme::thurston;
    if (s == "inversive") return Scheme::inversive;
    if (s == "yamabe") return Scheme::yamabe;
    if (s == "virtual") return Scheme::virtual_radius;
    if (s == "mixed") return Scheme::mixed;
    throw DomainError("unknown scheme '" + s + "'");
}

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::tangential: return "tangential";
        case Scheme::thurston: return "thurston";
        case Scheme::inversive: return "inversive";
        case Scheme::yamabe: return "yamabe";
        case Scheme::virtual_radius: return "virtual";
        case Scheme::mixed: return "mixed";
    }
    return "?";
}

double u_from_gamma(double gamma, Background bg) {
    if (!(gamma > 0)) throw DomainError("radius must be positive");
    switch (bg) {
        case Background::E2: return std::log(gamma);
        case Background::H2: return std::log(std::tanh(gamma / 2));
        case Background::S2:
            if (!(gamma < kPi)) throw DomainError("spherical radius must be < pi");
            return std::log(std::tan(gamma / 2));
    }
    return 0;
}

double gamma_from_u(double u, Background bg) {
    switch (bg) {
        case Background::E2: return std::exp(u);
        case Background::H2:
            if (!(u < 0)) throw DomainError("hyperbolic conformal factor must be < 0");
            return 2 * std::atanh(std::exp(u));
        case Background::S2: return 2 * std::atan(std::exp(u));
    }
    return 0;
}

double edge_length(double u_i, double u_j, double eta, int eps_i, int eps_j,
                   Background bg) {
    const double gi = std::exp(2 * u_i);
    const double gj = std::exp(2 * u_j);
    const double cross = std::exp(u_i + u_j);
    switch (bg) {
        case Background::E2: {
            double sq = 2 * eta * cross + eps_i * gi + eps_j * gj;
            if (!(sq > 0)) throw DegenerateLengthError("nonpositive squared length");
            return std::sqrt(sq);
        }
        case Background::H2: {
            double num = 4 * eta * cross + (1 + eps_i * gi) * (1 + eps_j * gj);
            double den = (1 - eps_i * gi) * (1 - eps_j * gj);
            if (!(den > 0)) throw DegenerateLengthError("invalid hyperbolic factor");
            double c = num / den;
            if (!(c > 1)) throw DegenerateLengthError("cosh argument below 1");
            return std::acosh(c);
        }
        case Background::S2: {
            double num = -4 * eta * cross + (1 - eps_i * gi) * (1 - eps_j * gj);
            double den = (1 + eps_i * gi) * (1 + eps_j * gj);
            if (!(den > 0)) throw DegenerateLengthError("invalid spherical factor");
            double c = num / den;
            if (!(c > -1 && c < 1)) throw DegenerateLengthError("cos argument out of range");
            return std::acos(c);
        }
    }
    return 0;
}

std::array<double, 3> corner_angles(double l0, double l1, double l2,
                                    Background bg) {
    const std::array<double, 3> l = {l0, l1, l2};
    std::array<double, 3> theta;
    if (bg == Background::S2) {
        for (double x : l)
            if (!(x > 0 && x < kPi))
                throw TriangleInequalityError("spherical edge length outside (0, pi)");
    }
    for (int c = 0; c < 3; ++c) {
        const int a = (c + 1) % 3, b = (c + 2) % 3;
        double x = 0;
        switch (bg) {
            case Background::E2:
                x = (l[a] * l[a] + l[b] * l[b] - l[c] * l[c]) / (2 * l[a] * l[b]);
                break;
            case Background::H2:
                x = (std::cosh(l[a]) * std::cosh(l[b]) - std::cosh(l[c])) /
                    (std::sinh(l[a]) * std::sinh(l[b]));
                break;
            case Background::S2:
                x = (std::cos(l[c]) - std::cos(l[a]) * std::cos(l[b])) /
                    (std::sin(l[a]) * std::sin(l[b]));
                break;
        }
        if (!(x > -1 && x < 1))
            throw TriangleInequalityError("triangle inequality violated");
        theta[c] = std::acos(x);
    }
    return theta;
}

std::vector<double> edge_lengths(const Mesh& mesh, const CirclePackingMetric& metric,
                                 const std::vector<double>& u) {
    std::vector<double> l(mesh.n_edges());
    parallel_for(mesh.n_edges(), [&](int e) {
        auto [i, j] = mesh.edge_vertices[e];
        l[e] = edge_length(u[i], u[j], metric.eta[e], metric.epsilon[i],
                           metric.epsilon[j], metric.bg);
    });
    return l;
}

std::vector<std::array<double, 3>> face_angles(const Mesh& mesh,
                                               const std::vector<double>& l,
                                               Background bg) {
    std::vector<std::array<double, 3>> theta(mesh.n_faces());
    parallel_for(mesh.n_faces(), [&](int f) {
        auto e = mesh.face_opposite_edges(f);
        theta[f] = corner_angles(l[e[0]], l[e[1]], l[e[2]], bg);
    });
    return theta;
}

ConformalState compute_state(const Mesh& mesh, const CirclePackingMetric& metric,
                             const std::vector<double>& u) {
    ConformalState s;
    s.u = u;
    s.l = edge_lengths(mesh, metric, u);
    s.theta = face_angles(mesh, s.l, metric.bg);
    return s;
}

CurvatureVector vertex_curvatures(const Mesh& mesh, const ConformalState& state) {
    CurvatureVector kv;
    kv.K.resize(mesh.n_vertices());
    for (int v = 0; v < mesh.n_vertices(); ++v)
        kv.K[v] = mesh.vertex_on_boundary(v) ? kPi : 2 * kPi;
    for (int f = 0; f < mesh.n_faces(); ++f) {
        auto vtx = mesh.face_vertices(f);
        for (int c = 0; c < 3; ++c) kv.K[vtx[c]] -= state.theta[f][c];
    }
    return kv;
}

double face_area(double l0, double l1, double l2,
                 const std::array<double, 3>& theta, Background bg) {
    switch (bg) {
        case Background::E2: {
            double s = (l0 + l1 + l2) / 2;
            double sq = s * (s - l0) * (s - l1) * (s - l2);
            return sq > 0 ? std::sqrt(sq) : 0.0;
        }
        case Background::H2: return kPi - theta[0] - theta[1] - theta[2];
        case Background::S2: return theta[0] + theta[1] + theta[2] - kPi;
    }
    return 0;
}

double total_area(const Mesh& mesh, const ConformalState& state, Background bg) {
    double a = 0;
    for (int f = 0; f < mesh.n_faces(); ++f) {
        auto e = mesh.face_opposite_edges(f);
        a += face_area(state.l[e[0]], state.l[e[1]], state.l[e[2]], state.theta[f], bg);
    }
    return a;
}

double gauss_bonnet_residual(const Mesh& mesh, const CurvatureVector& K,
                             double total_area, Background bg) {
    double sum = 0;
    for (double k : K.K) sum += k;
    double eps_geom = bg == Background::S2 ? 1.0 : (bg == Background::H2 ? -1.0 : 0.0);
    int chi = topology(mesh).euler_characteristic;
    return sum + eps_geom * total_area - 2 * kPi * chi;
}

double eta_from_lambda(double lambda, int eps_i, int eps_j) {
    return 0.5 * (std::exp(lambda) + eps_i * eps_j * std::exp(-lambda));
}

double lambda_from_eta(double eta, int eps_i, int eps_j) {
    const int p = eps_i * eps_j;
    if (p == 0) {
        if (!(eta > 0)) throw InverseUndefinedError("eta must be positive");
        return std::log(2 * eta);
    }
    if (p > 0) {
        if (!(eta >= 1)) throw InverseUndefinedError("eta must be >= 1 (cosh range)");
        return std::acosh(eta);
    }
    return std::asinh(eta);
}

double eta_for_length(double target_l, double u_i, double u_j, int eps_i,
                      int eps_j, Background bg) {
    const double gi = std::exp(2 * u_i);
    const double gj = std::exp(2 * u_j);
    const double cross = std::exp(u_i + u_j);
    switch (bg) {
        case Background::E2:
            return (target_l * target_l - eps_i * gi - eps_j * gj) / (2 * cross);
        case Background::H2:
            return (std::cosh(target_l) * (1 - eps_i * gi) * (1 - eps_j * gj) -
                    (1 + eps_i * gi) * (1 + eps_j * gj)) /
                   (4 * cross);
        case Background::S2:
            return ((1 - eps_i * gi) * (1 - eps_j * gj) -
                    std::cos(target_l) * (1 + eps_i * gi) * (1 + eps_j * gj)) /
                   (4 * cross);
    }
    return 0;
}

namespace {

// Per-vertex contact radius: the incircle split (l_ij + l_ik - l_jk)/2,
// minimized over incident faces.
std::vector<double> contact_radii(const Mesh& mesh, const std::vector<double>& l) {
    std::vector<double> g(mesh.n_vertices(), std::numeric_limits<double>::max());
    for (int f = 0; f < mesh.n_faces(); ++f) {
        auto v = mesh.face_vertices(f);
        auto e = mesh.face_opposite_edges(f);
        for (int c = 0; c < 3; ++c) {
            double r = (l[e[(c + 1) % 3]] + l[e[(c + 2) % 3]] - l[e[c]]) / 2;
            g[v[c]] = std::min(g[v[c]], r);
        }
    }
    return g;
}

}  // namespace

CirclePackingMetric init_circle_packing(const Mesh& mesh,
                                        const std::vector<double>& embedded_lengths,
                                        Scheme scheme, Background bg) {
    const int nv = mesh.n_vertices();
    CirclePackingMetric m;
    m.bg = bg;
    m.scheme = scheme;
    m.gamma.assign(nv, 1.0);
    m.eta.assign(mesh.n_edges(), 0.0);

    switch (scheme) {
        case Scheme::inversive:
        case Scheme::tangential:
        case Scheme::thurston:
            m.epsilon.assign(nv, 1);
            break;
        case Scheme::yamabe:
            m.epsilon.assign(nv, 0);
            break;
        case Scheme::virtual_radius:
            m.epsilon.assign(nv, -1);
            break;
        case Scheme::mixed:
            // vertex index mod 3 maps to -1, 0, +1; a deterministic mixture
            m.epsilon.resize(nv);
            for (int v = 0; v < nv; ++v) m.epsilon[v] = v % 3 - 1;
            break;
    }

    if (scheme == Scheme::inversive) {
        m.gamma.assign(nv, std::numeric_limits<double>::max());
        for (int e = 0; e < mesh.n_edges(); ++e) {
            auto [i, j] = mesh.edge_vertices[e];
            m.gamma[i] = std::min(m.gamma[i], embedded_lengths[e] / 3);
            m.gamma[j] = std::min(m.gamma[j], embedded_lengths[e] / 3);
        }
    } else if (scheme == Scheme::tangential || scheme == Scheme::thurston) {
        m.gamma = contact_radii(mesh, embedded_lengths);
        for (double g : m.gamma)
            if (!(g > 0))
                throw InitializationInfeasibleError("nonpositive contact radius");
    }
    if (bg == Background::S2)
        for (double g : m.gamma)
            if (!(g < kPi))
                throw InitializationInfeasibleError("spherical radius >= pi");

    std::vector<double> u(nv);
    for (int v = 0; v < nv; ++v) u[v] = u_from_gamma(m.gamma[v], bg);

    for (int e = 0; e < mesh.n_edges(); ++e) {
        auto [i, j] = mesh.edge_vertices[e];
        if (scheme == Scheme::tangential) {
            m.eta[e] = 1.0;
            continue;
        }
        double eta = eta_for_length(embedded_lengths[e], u[i], u[j], m.epsilon[i],
                                    m.epsilon[j], bg);
        if (scheme == Scheme::thurston && !(eta >= 0 && eta <= 1 + 1e-12))
            throw InitializationInfeasibleError(
                "thurston coefficient outside [0,1] on edge " + std::to_string(e));
        if (scheme != Scheme::thurston && scheme != Scheme::mixed && !(eta > 0))
            throw InitializationInfeasibleError("nonpositive eta on edge " +
                                                std::to_string(e));
        if (scheme == Scheme::thurston) eta = std::min(eta, 1.0);
        m.eta[e] = eta;
    }

    // The derived metric must produce valid faces; for the eta-solved schemes
    // it must also reproduce the input lengths.
    std::vector<double> check = edge_lengths(mesh, m, u);
    face_angles(mesh, check, bg);
    if (scheme == Scheme::inversive || scheme == Scheme::yamabe ||
        scheme == Scheme::virtual_radius || scheme == Scheme::mixed) {
        for (int e = 0; e < mesh.n_edges(); ++e) {
            double rel = std::abs(check[e] - embedded_lengths[e]) /
                         std::max(1.0, embedded_lengths[e]);
            if (rel > 1e-12)
                throw InitializationInfeasibleError(
                    "initial metric fails to reproduce edge " + std::to_string(e));
        }
    }
    return m;
}

std::vector<double> conformal_factors(const CirclePackingMetric& metric) {
    std::vector<double> u(metric.gamma.size());
    for (size_t v = 0; v < u.size(); ++v)
        u[v] = u_from_gamma(metric.gamma[v], metric.bg);
    return u;
}

namespace {

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::string write_metric_json(const Mesh& mesh, const CirclePackingMetric& metric,
                              const std::vector<double>* u) {
    std::string out = "{\n";
    out += "  \"bg\": \"" + to_string(metric.bg) + "\",\n";
    out += "  \"scheme\": \"" + to_string(metric.scheme) + "\",\n";
    out += "  \"epsilon\": [";
    for (size_t i = 0; i < metric.epsilon.size(); ++i)
        out += (i ? ", " : "") + std::to_string(metric.epsilon[i]);
    out += "],\n  \"gamma\": [";
    for (size_t i = 0; i < metric.gamma.size(); ++i)
        out += (i ? ", " : "") + fmt17(metric.gamma[i]);
    out += "],\n  \"eta\": {";
    for (int e = 0; e < mesh.n_edges(); ++e) {
        auto [i, j] = mesh.edge_vertices[e];
        out += (e ? ", " : "") + std::string("\"") + std::to_string(i) + "," +
               std::to_string(j) + "\": " + fmt17(metric.eta[e]);
    }
    out += "}";
    if (u) {
        out += ",\n  \"u\": [";
        for (size_t i = 0; i < u->size(); ++i) out += (i ? ", " : "") + fmt17((*u)[i]);
        out += "]";
    }
    out += "\n}\n";
    return out;
}

CirclePackingMetric read_metric_json(const std::string& text, const Mesh& mesh,
                                     std::vector<double>* u_out) {
    nlohmann::json j = nlohmann::json::parse(text);
    CirclePackingMetric m;
    m.bg = background_from_string(j.at("bg").get<std::string>());
    m.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    m.epsilon = j.at("epsilon").get<std::vector<int>>();
    m.gamma = j.at("gamma").get<std::vector<double>>();
    if (static_cast<int>(m.gamma.size()) != mesh.n_vertices())
        throw ParseError("metric gamma size does not match mesh");
    m.eta.assign(mesh.n_edges(), 0.0);
    std::map<std::pair<int, int>, int> lookup;
    for (int e = 0; e < mesh.n_edges(); ++e)
        lookup[{mesh.edge_vertices[e][0], mesh.edge_vertices[e][1]}] = e;
    for (auto& [key, val] : j.at("eta").items()) {
        size_t comma = key.find(',');
        if (comma == std::string::npos) throw ParseError("bad eta key '" + key + "'");
        int a = std::stoi(key.substr(0, comma));
        int b = std::stoi(key.substr(comma + 1));
        auto it = lookup.find({std::min(a, b), std::max(a, b)});
        if (it == lookup.end()) throw ParseError("eta key names a missing edge");
        m.eta[it->second] = val.get<double>();
    }
    if (u_out && j.contains("u")) *u_out = j.at("u").get<std::vector<double>>();
    return m;
}

}  // namespace ricci
