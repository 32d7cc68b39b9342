#include "ricci/mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "ricci/errors.hpp"

namespace ricci {

Mesh build_mesh(std::vector<Eigen::Vector3d> positions,
                const std::vector<std::array<int, 3>>& faces) {
    Mesh m;
    m.positions = std::move(positions);
    const int nv = m.n_vertices();
    const int nf = static_cast<int>(faces.size());

    for (const auto& f : faces) {
        if (f[0] == f[1] || f[1] == f[2] || f[2] == f[0])
            throw NonTriangularError("face references a repeated vertex");
        for (int v : f)
            if (v < 0 || v >= nv)
                throw ParseError("face references vertex " + std::to_string(v + 1) +
                                 " out of range");
    }

    // Interior halfedges: 3 per face, CCW.
    m.he_next.assign(3 * nf, -1);
    m.he_twin.assign(3 * nf, -1);
    m.he_origin.assign(3 * nf, -1);
    m.he_face.assign(3 * nf, -1);
    m.he_edge.assign(3 * nf, -1);
    m.f_halfedge.resize(nf);

    std::map<std::pair<int, int>, int> directed;  // (origin, dest) -> halfedge
    for (int f = 0; f < nf; ++f) {
        m.f_halfedge[f] = 3 * f;
        for (int c = 0; c < 3; ++c) {
            int h = 3 * f + c;
            int a = faces[f][c];
            int b = faces[f][(c + 1) % 3];
            m.he_next[h] = 3 * f + (c + 1) % 3;
            m.he_origin[h] = a;
            m.he_face[h] = f;
            auto [it, fresh] = directed.emplace(std::make_pair(a, b), h);
            if (!fresh)
                throw NonManifoldError(
                    "directed edge (" + std::to_string(a) + "," + std::to_string(b) +
                    ") appears twice: non-manifold or inconsistently oriented input");
        }
    }

    // Twins and undirected edges.
    for (int h = 0; h < 3 * nf; ++h) {
        int a = m.he_origin[h];
        int b = m.he_origin[m.he_next[h]];
        if (m.he_edge[h] < 0) {
            int e = m.n_edges();
            m.edge_vertices.push_back({std::min(a, b), std::max(a, b)});
            m.edge_halfedge.push_back(h);
            m.he_edge[h] = e;
            auto it = directed.find({b, a});
            if (it != directed.end()) {
                m.he_twin[h] = it->second;
                m.he_twin[it->second] = h;
                m.he_edge[it->second] = e;
            }
        }
    }
    m.interior_halfedges = 3 * nf;

    // Boundary halfedges: one per unmatched interior halfedge.
    std::map<int, int> boundary_out;  // origin vertex -> boundary halfedge
    for (int h = 0; h < 3 * nf; ++h) {
        if (m.he_twin[h] >= 0) continue;
        int b = m.he_origin[m.he_next[h]];
        int bh = m.n_halfedges();
        m.he_next.push_back(-1);
        m.he_twin.push_back(h);
        m.he_origin.push_back(b);
        m.he_face.push_back(-1);
        m.he_edge.push_back(m.he_edge[h]);
        m.he_twin[h] = bh;
        auto [it, fresh] = boundary_out.emplace(b, bh);
        if (!fresh)
            throw NonManifoldError("vertex " + std::to_string(b) +
                                   " has more than one boundary fan");
    }
    for (int h = m.interior_halfedges; h < m.n_halfedges(); ++h) {
        int dest = m.he_origin[m.he_twin[h]];
        auto it = boundary_out.find(dest);
        if (it == boundary_out.end())
            throw NonManifoldError("open boundary chain at vertex " +
                                   std::to_string(dest));
        m.he_next[h] = it->second;
    }

    // Outgoing halfedge per vertex, preferring the boundary one so one-ring
    // walks start at the open end of the fan.
    m.v_halfedge.assign(nv, -1);
    for (int h = 0; h < m.interior_halfedges; ++h)
        if (m.v_halfedge[m.he_origin[h]] < 0) m.v_halfedge[m.he_origin[h]] = h;
    for (auto [v, bh] : boundary_out) m.v_halfedge[v] = bh;
    for (int v = 0; v < nv; ++v)
        if (m.v_halfedge[v] < 0)
            throw NonManifoldError("isolated vertex " + std::to_string(v));

    m.check_valid();
    return m;
}

void Mesh::check_valid() const {
    for (int f = 0; f < n_faces(); ++f) {
        auto h = face_halfedges(f);
        if (he_next[h[2]] != h[0])
            throw NonManifoldError("face loop of face " + std::to_string(f) +
                                   " does not close");
        for (int c = 0; c < 3; ++c)
            if (he_face[h[c]] != f)
                throw NonManifoldError("halfedge/face link broken");
    }
    for (int h = 0; h < n_halfedges(); ++h) {
        if (he_twin[h] < 0 || he_twin[he_twin[h]] != h)
            throw NonManifoldError("twin link broken");
        if (he_origin[he_twin[h]] != he_origin[he_next[h]])
            throw NonManifoldError("twin orientation broken");
    }
    // Every one-ring walk must terminate.
    for (int v = 0; v < n_vertices(); ++v) {
        int h = v_halfedge[v];
        int guard = 0;
        do {
            if (he_origin[h] != v) throw NonManifoldError("vertex ring broken");
            h = he_next[he_twin[h]];
            if (++guard > n_halfedges())
                throw NonManifoldError("vertex ring does not terminate");
        } while (h != v_halfedge[v]);
    }
}

namespace {

int parse_face_index(const std::string& token, int line_no) {
    // accepts "i", "i/t", "i/t/n", "i//n"
    size_t slash = token.find('/');
    std::string head = slash == std::string::npos ? token : token.substr(0, slash);
    char* end = nullptr;
    long v = std::strtol(head.c_str(), &end, 10);
    if (end == head.c_str() || *end != '\0')
        throw ParseError("line " + std::to_string(line_no) +
                         ": bad face index '" + token + "'");
    if (v < 0)
        throw ParseError("line " + std::to_string(line_no) +
                         ": negative face indices are not supported");
    return static_cast<int>(v) - 1;
}

}  // namespace

Mesh parse_obj(const std::string& text) {
    std::vector<Eigen::Vector3d> positions;
    std::vector<std::array<int, 3>> faces;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag) || tag.empty() || tag[0] == '#') continue;
        if (tag == "v") {
            Eigen::Vector3d p;
            if (!(ls >> p.x() >> p.y() >> p.z()))
                throw ParseError("line " + std::to_string(line_no) +
                                 ": malformed vertex record");
            positions.push_back(p);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string token;
            while (ls >> token) idx.push_back(parse_face_index(token, line_no));
            if (idx.size() != 3)
                throw NonTriangularError("line " + std::to_string(line_no) +
                                         ": face with " + std::to_string(idx.size()) +
                                         " vertices (triangles only)");
            faces.push_back({idx[0], idx[1], idx[2]});
        }
        // vt/vn/usemtl/... ignored
    }
    if (positions.empty() || faces.empty())
        throw ParseError("no vertices or faces found");
    return build_mesh(std::move(positions), faces);
}

Mesh load_obj(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_obj(buf.str());
}

std::string write_obj(const Mesh& mesh, const std::vector<Eigen::Vector2d>* uv) {
    std::string out;
    char buf[128];
    for (const auto& p : mesh.positions) {
        std::snprintf(buf, sizeof(buf), "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out += buf;
    }
    if (uv) {
        for (const auto& q : *uv) {
            std::snprintf(buf, sizeof(buf), "vt %.17g %.17g\n", q.x(), q.y());
            out += buf;
        }
    }
    for (int f = 0; f < mesh.n_faces(); ++f) {
        auto v = mesh.face_vertices(f);
        if (uv)
            std::snprintf(buf, sizeof(buf), "f %d/%d %d/%d %d/%d\n", v[0] + 1,
                          v[0] + 1, v[1] + 1, v[1] + 1, v[2] + 1, v[2] + 1);
        else
            std::snprintf(buf, sizeof(buf), "f %d %d %d\n", v[0] + 1, v[1] + 1,
                          v[2] + 1);
        out += buf;
    }
    return out;
}

void save_obj(const Mesh& mesh, const std::string& path,
              const std::vector<Eigen::Vector2d>* uv) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << write_obj(mesh, uv);
}

TopologyReport topology(const Mesh& mesh) {
    TopologyReport r;
    r.num_vertices = mesh.n_vertices();
    r.num_edges = mesh.n_edges();
    r.num_faces = mesh.n_faces();
    r.euler_characteristic = r.num_vertices - r.num_edges + r.num_faces;

    std::vector<bool> seen(mesh.n_halfedges(), false);
    for (int h = mesh.interior_halfedges; h < mesh.n_halfedges(); ++h) {
        if (seen[h]) continue;
        ++r.num_boundary_loops;
        for (int c = h; !seen[c]; c = mesh.he_next[c]) seen[c] = true;
    }
    // chi = 2 - 2g - b for orientable surfaces with b boundary loops
    r.genus = (2 - r.euler_characteristic - r.num_boundary_loops) / 2;
    return r;
}

std::vector<int> one_ring_faces(const Mesh& mesh, int v) {
    std::vector<int> faces;
    int start = mesh.v_halfedge[v];
    int h = start;
    do {
        if (mesh.he_face[h] >= 0) faces.push_back(mesh.he_face[h]);
        h = mesh.he_next[mesh.he_twin[h]];
    } while (h != start);
    return faces;
}

std::vector<double> embedded_edge_lengths(const Mesh& mesh) {
    std::vector<double> l(mesh.n_edges());
    for (int e = 0; e < mesh.n_edges(); ++e) {
        auto [a, b] = mesh.edge_vertices[e];
        l[e] = (mesh.positions[a] - mesh.positions[b]).norm();
    }
    return l;
}

void flip_edge(Mesh& mesh, int e) {
    if (mesh.edge_on_boundary(e))
        throw DegenerateFaceError("cannot flip boundary edge");
    int h = mesh.edge_halfedge[e];   // i -> j in face f0 = (i, j, k)
    int t = mesh.he_twin[h];         // j -> i in face f1 = (j, i, m)
    int h1 = mesh.he_next[h];        // j -> k
    int h2 = mesh.he_next[h1];       // k -> i
    int t1 = mesh.he_next[t];        // i -> m
    int t2 = mesh.he_next[t1];       // m -> j
    int i = mesh.he_origin[h];
    int j = mesh.he_origin[t];
    int k = mesh.he_origin[h2];
    int m = mesh.he_origin[t2];
    if (k == m) throw DegenerateFaceError("flip would collapse a degenerate quad");
    {
        int c = mesh.v_halfedge[k];
        do {
            if (mesh.he_origin[mesh.he_twin[c]] == m)
                throw NonManifoldError("flip would duplicate an existing edge");
            c = mesh.he_next[mesh.he_twin[c]];
        } while (c != mesh.v_halfedge[k]);
    }

    int f0 = mesh.he_face[h];
    int f1 = mesh.he_face[t];

    // New faces: f0 = (i, m, k) with loop t1,h,h2; f1 = (m, j, k) with t2,h1,t.
    mesh.he_origin[h] = m;
    mesh.he_origin[t] = k;
    mesh.he_next[t1] = h;
    mesh.he_next[h] = h2;
    mesh.he_next[h2] = t1;
    mesh.he_next[t2] = h1;
    mesh.he_next[h1] = t;
    mesh.he_next[t] = t2;
    mesh.he_face[t1] = f0;
    mesh.he_face[h2] = f0;
    mesh.he_face[h] = f0;
    mesh.he_face[t2] = f1;
    mesh.he_face[h1] = f1;
    mesh.he_face[t] = f1;
    mesh.f_halfedge[f0] = h;
    mesh.f_halfedge[f1] = t;
    mesh.edge_vertices[e] = {std::min(k, m), std::max(k, m)};
    mesh.edge_halfedge[e] = h;

    if (mesh.v_halfedge[i] == h) mesh.v_halfedge[i] = t1;
    if (mesh.v_halfedge[j] == t) mesh.v_halfedge[j] = h1;
}

}  // namespace ricci
