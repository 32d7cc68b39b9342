#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "ricci/geometry.hpp"
#include "ricci/mesh.hpp"

namespace fixtures {

inline const char* kTriangleObj =
    "v 0 0 0\n"
    "v 5 0 0\n"
    "v 1 3 0\n"
    "f 1 2 3\n";

// Regular tetrahedron with unit edge length.
inline std::string unit_tetra_obj() {
    const double s = 1.0 / std::sqrt(8.0);
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "v %.17g %.17g %.17g\n"
                  "v %.17g %.17g %.17g\n"
                  "v %.17g %.17g %.17g\n"
                  "v %.17g %.17g %.17g\n"
                  "f 1 2 3\nf 1 4 2\nf 2 4 3\nf 3 4 1\n",
                  s, s, s, s, -s, -s, -s, s, -s, -s, -s, s);
    return buf;
}

inline ricci::Mesh unit_tetra() { return ricci::parse_obj(unit_tetra_obj()); }

inline const char* kQuadObj =
    "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
    "f 1 2 3 4\n";

// n x n vertex grid in the plane, each cell split along one diagonal.
inline ricci::Mesh grid_disk(int n) {
    std::vector<Eigen::Vector3d> pos;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) pos.emplace_back(i, j, 0);
    auto idx = [n](int i, int j) { return j * n + i; };
    std::vector<std::array<int, 3>> faces;
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            faces.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            faces.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    return ricci::build_mesh(std::move(pos), faces);
}

inline std::vector<std::array<int, 3>> torus_faces(int n, int m,
                                                   int offset = 0) {
    auto idx = [&](int i, int j) { return offset + (j % m) * n + (i % n); };
    std::vector<std::array<int, 3>> faces;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            faces.push_back({idx(i, j), idx(i + 1, j), idx(i + 1, j + 1)});
            faces.push_back({idx(i, j), idx(i + 1, j + 1), idx(i, j + 1)});
        }
    return faces;
}

// n x m torus embedded with major radius 2, minor radius 1.
inline ricci::Mesh torus(int n, int m) {
    std::vector<Eigen::Vector3d> pos;
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < n; ++i) {
            double psi = 2 * std::numbers::pi * i / n;
            double phi = 2 * std::numbers::pi * j / m;
            double w = 2 + std::cos(phi);
            pos.emplace_back(w * std::cos(psi), w * std::sin(psi), std::sin(phi));
        }
    return ricci::build_mesh(std::move(pos), torus_faces(n, m));
}

// Genus-2 surface: two n x n tori, each with one grid cell removed, glued
// along the square boundary of the holes (orientation-reversing map).
inline ricci::Mesh genus2(int n = 8) {
    const int nm = n * n;
    auto idx = [&](int i, int j) { return (j % n) * n + (i % n); };
    const int a = idx(0, 0), b = idx(1, 0), c = idx(1, 1), d = idx(0, 1);

    auto strip_hole = [&](std::vector<std::array<int, 3>> faces) {
        std::vector<std::array<int, 3>> kept;
        for (auto f : faces) {
            bool is_hole =
                (f == std::array<int, 3>{a, b, c}) || (f == std::array<int, 3>{a, c, d});
            if (!is_hole) kept.push_back(f);
        }
        return kept;
    };

    auto faces = strip_hole(torus_faces(n, n));
    auto second = strip_hole(torus_faces(n, n));

    // remap the second torus: hole corners (a,b,c,d) -> (a,d,c,b), the rest
    // to fresh indices
    std::vector<int> remap(nm, -1);
    remap[a] = a;
    remap[b] = d;
    remap[c] = c;
    remap[d] = b;
    int next = nm;
    for (int v = 0; v < nm; ++v)
        if (remap[v] < 0) remap[v] = next++;
    for (auto f : second) faces.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});

    // both handles reuse the torus embedding; positions only ever feed
    // intrinsic edge lengths, so the overlap is harmless
    std::vector<Eigen::Vector3d> pos(next);
    ricci::Mesh t = torus(n, n);
    for (int v = 0; v < nm; ++v) {
        pos[v] = t.positions[v];
        if (remap[v] >= nm) pos[remap[v]] = t.positions[v];
    }
    return ricci::build_mesh(std::move(pos), faces);
}

// Grid disk lifted by a Gaussian bump: genuinely curved interior.
inline ricci::Mesh bump_disk(int n = 15, double height = 1.2) {
    ricci::Mesh m = grid_disk(n);
    for (auto& p : m.positions) {
        double x = p.x() / (n - 1) * 4 - 2;
        double y = p.y() / (n - 1) * 4 - 2;
        p = {x, y, height * std::exp(-(x * x + y * y))};
    }
    return m;
}

// Two triangles across a short diagonal whose opposite angles sum past pi.
inline ricci::Mesh non_delaunay_quad(double h = 0.3) {
    std::vector<Eigen::Vector3d> pos = {
        {0, 0, 0}, {1, 0, 0}, {0.5, h, 0}, {0.5, -h, 0}};
    std::vector<std::array<int, 3>> faces = {{0, 1, 2}, {0, 3, 1}};
    return ricci::build_mesh(std::move(pos), faces);
}

// Random valid metric: radii near 0.3, per-vertex indicators from the scheme
// (random for mixed), eta solved so the edge lengths land in [0.9, 1.1]
// (every such face is a valid triangle in all three geometries).
inline ricci::CirclePackingMetric random_valid_metric(
    const ricci::Mesh& mesh, ricci::Background bg, std::uint64_t seed,
    ricci::Scheme scheme = ricci::Scheme::mixed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> gdist(0.25, 0.35);
    std::uniform_real_distribution<double> ldist(0.9, 1.1);
    ricci::CirclePackingMetric m;
    m.bg = bg;
    m.scheme = scheme;
    m.gamma.resize(mesh.n_vertices());
    m.epsilon.resize(mesh.n_vertices());
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        m.gamma[v] = gdist(rng);
        switch (scheme) {
            case ricci::Scheme::yamabe: m.epsilon[v] = 0; break;
            case ricci::Scheme::virtual_radius: m.epsilon[v] = -1; break;
            case ricci::Scheme::mixed:
                m.epsilon[v] = static_cast<int>(rng() % 3) - 1;
                break;
            default: m.epsilon[v] = 1; break;
        }
    }
    auto u = ricci::conformal_factors(m);
    m.eta.resize(mesh.n_edges());
    for (int e = 0; e < mesh.n_edges(); ++e) {
        auto [i, j] = mesh.edge_vertices[e];
        m.eta[e] = ricci::eta_for_length(ldist(rng), u[i], u[j], m.epsilon[i],
                                         m.epsilon[j], bg);
    }
    return m;
}

}  // namespace fixtures
