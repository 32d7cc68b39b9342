#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ricci {

struct TopologyReport {
    int num_vertices = 0;
    int num_edges = 0;
    int num_faces = 0;
    int euler_characteristic = 0;
    int genus = 0;
    int num_boundary_loops = 0;
};

// Halfedge triangle mesh. Faces are oriented CCW; every interior halfedge
// has a twin, and boundary halfedges (face == -1) form closed loops.
// Interior halfedges occupy indices [0, interior_halfedges); boundary
// halfedges follow. Per-edge data is stored once per undirected edge.
//
// The mesh is treated as immutable after construction. The only sanctioned
// mutation is the Delaunay edge flip used by the flow driver (flip_edge).
struct Mesh {
    std::vector<Eigen::Vector3d> positions;

    std::vector<int> he_next;    // per halfedge
    std::vector<int> he_twin;    // per halfedge
    std::vector<int> he_origin;  // per halfedge
    std::vector<int> he_face;    // per halfedge, -1 on boundary halfedges
    std::vector<int> he_edge;    // per halfedge

    std::vector<int> v_halfedge;  // outgoing halfedge; boundary one if on boundary
    std::vector<int> f_halfedge;  // one interior halfedge per face

    std::vector<std::array<int, 2>> edge_vertices;  // sorted vertex pair
    std::vector<int> edge_halfedge;                 // an interior halfedge of the edge

    int interior_halfedges = 0;

    int n_vertices() const { return static_cast<int>(positions.size()); }
    int n_edges() const { return static_cast<int>(edge_vertices.size()); }
    int n_faces() const { return static_cast<int>(f_halfedge.size()); }
    int n_halfedges() const { return static_cast<int>(he_next.size()); }

    bool halfedge_on_boundary(int h) const { return he_face[h] < 0; }
    bool vertex_on_boundary(int v) const { return he_face[v_halfedge[v]] < 0; }
    bool edge_on_boundary(int e) const {
        return he_face[he_twin[edge_halfedge[e]]] < 0;
    }

    std::array<int, 3> face_halfedges(int f) const {
        int h0 = f_halfedge[f];
        int h1 = he_next[h0];
        return {h0, h1, he_next[h1]};
    }

    // Corner c of face f is the origin of its c-th halfedge.
    std::array<int, 3> face_vertices(int f) const {
        auto h = face_halfedges(f);
        return {he_origin[h[0]], he_origin[h[1]], he_origin[h[2]]};
    }

    // Edge opposite corner c (the edge joining the other two corners).
    std::array<int, 3> face_opposite_edges(int f) const {
        auto h = face_halfedges(f);
        return {he_edge[h[1]], he_edge[h[2]], he_edge[h[0]]};
    }

    // Interior halfedge of face f whose origin is corner (c+1)%3 and whose
    // destination is corner (c+2)%3, i.e. the halfedge along the edge
    // opposite corner c.
    int face_opposite_halfedge(int f, int c) const {
        return face_halfedges(f)[(c + 1) % 3];
    }

    // Walks connectivity and throws NonManifoldError on a broken invariant.
    void check_valid() const;
};

// Builds the halfedge structure from a triangle soup. Throws NonManifoldError
// on duplicated directed edges (non-manifold or non-orientable input), edges
// with more than two incident faces, or bowtie vertices; NonTriangularError
// on degenerate index triples.
Mesh build_mesh(std::vector<Eigen::Vector3d> positions,
                const std::vector<std::array<int, 3>>& faces);

// Wavefront OBJ subset: `v x y z` and triangular `f i j k` (1-based;
// `i/t/n` forms accepted, texture/normal indices ignored).
Mesh load_obj(const std::string& path);
Mesh parse_obj(const std::string& text);

// Writes `v` and `f` records; adds `vt` records (and `f i/i j/j k/k`) when
// per-vertex UVs are given. Coordinates are printed with 17 significant
// digits so a round trip reproduces them bit-exact.
void save_obj(const Mesh& mesh, const std::string& path,
              const std::vector<Eigen::Vector2d>* uv = nullptr);
std::string write_obj(const Mesh& mesh,
                      const std::vector<Eigen::Vector2d>* uv = nullptr);

TopologyReport topology(const Mesh& mesh);

// Faces incident to v in consistent rotational order; an open fan for
// boundary vertices (starting at one boundary edge, ending at the other).
std::vector<int> one_ring_faces(const Mesh& mesh, int v);

// Per-edge lengths induced by the vertex positions.
std::vector<double> embedded_edge_lengths(const Mesh& mesh);

// Flips interior edge e in place: the shared diagonal of the two incident
// triangles is replaced by the opposite diagonal. Edge and face indices are
// reused; edge_vertices[e] is updated. Throws NonManifoldError if the flip
// would create a duplicate edge, DegenerateFaceError if e is a boundary edge
// or the incident faces do not form a quad.
void flip_edge(Mesh& mesh, int e);

}  // namespace ricci
