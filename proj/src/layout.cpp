#include "ricci/layout.hpp"

#include <cmath>
#include <deque>

#include "ricci/errors.hpp"
#include "ricci/geometry.hpp"

namespace ricci {

namespace {

// Intersection of circles (around a, radius ra) and (around b, radius rb),
// taken on the left side of a -> b so the face keeps positive orientation.
Eigen::Vector2d place_third(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                            double ra, double rb) {
    const double d = (b - a).norm();
    if (!(d > 0)) throw PlacementAmbiguityError("coincident base points");
    const double x = (d * d + ra * ra - rb * rb) / (2 * d);
    double ysq = ra * ra - x * x;
    // near-flat metrics can dip a hair below zero from accumulated roundoff
    if (ysq < 0) {
        if (ysq < -1e-8 * ra * ra)
            throw PlacementAmbiguityError("circles do not intersect");
        ysq = 0;
    }
    const Eigen::Vector2d t = (b - a) / d;
    const Eigen::Vector2d n(-t.y(), t.x());
    return a + x * t + std::sqrt(ysq) * n;
}

}  // namespace

PlanarEmbedding embed_disk(const Mesh& mesh, const std::vector<double>& lengths,
                           double k_interior_max) {
    auto topo = topology(mesh);
    if (topo.euler_characteristic != 1 || topo.num_boundary_loops != 1)
        throw NotADiskError("mesh is not a topological disk (chi=" +
                            std::to_string(topo.euler_characteristic) + ", " +
                            std::to_string(topo.num_boundary_loops) +
                            " boundary loops)");

    ConformalState state;
    state.l = lengths;
    state.theta = face_angles(mesh, lengths, Background::E2);
    auto K = vertex_curvatures(mesh, state);
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (!mesh.vertex_on_boundary(v) && std::abs(K.K[v]) > k_interior_max)
            throw NotFlatError("interior curvature " + std::to_string(K.K[v]) +
                               " at vertex " + std::to_string(v));

    PlanarEmbedding emb;
    emb.uv.assign(mesh.n_vertices(), Eigen::Vector2d::Zero());
    std::vector<bool> placed(mesh.n_vertices(), false);
    std::vector<bool> visited(mesh.n_faces(), false);

    // seed face: corners at the origin, on +x, and above
    {
        auto v = mesh.face_vertices(0);
        auto e = mesh.face_opposite_edges(0);
        emb.uv[v[0]] = {0, 0};
        emb.uv[v[1]] = {lengths[e[2]], 0};
        emb.uv[v[2]] =
            place_third(emb.uv[v[0]], emb.uv[v[1]], lengths[e[1]], lengths[e[0]]);
        placed[v[0]] = placed[v[1]] = placed[v[2]] = true;
        visited[0] = true;
    }

    std::deque<int> queue = {0};
    while (!queue.empty()) {
        int f = queue.front();
        queue.pop_front();
        auto hs = mesh.face_halfedges(f);
        for (int h : hs) {
            int t = mesh.he_twin[h];
            int g = mesh.he_face[t];
            if (g < 0 || visited[g]) continue;
            visited[g] = true;
            // t runs a -> b inside g; the third corner of g sits left of it
            int a = mesh.he_origin[t];
            int b = mesh.he_origin[mesh.he_next[t]];
            int c = mesh.he_origin[mesh.he_next[mesh.he_next[t]]];
            if (!placed[c]) {
                double ra = lengths[mesh.he_edge[mesh.he_next[mesh.he_next[t]]]];
                double rb = lengths[mesh.he_edge[mesh.he_next[t]]];
                emb.uv[c] = place_third(emb.uv[a], emb.uv[b], ra, rb);
                placed[c] = true;
            }
            queue.push_back(g);
        }
    }
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (!placed[v])
            throw NotADiskError("vertex " + std::to_string(v) +
                                " unreachable from the seed face");
    return emb;
}

double embedding_max_length_deviation(const Mesh& mesh,
                                      const std::vector<double>& lengths,
                                      const PlanarEmbedding& embedding) {
    double worst = 0;
    for (int e = 0; e < mesh.n_edges(); ++e) {
        auto [i, j] = mesh.edge_vertices[e];
        double d = (embedding.uv[i] - embedding.uv[j]).norm();
        worst = std::max(worst, std::abs(d - lengths[e]) / lengths[e]);
    }
    return worst;
}

}  // namespace ricci
