#pragma once

#include <vector>

#include <Eigen/Core>

#include "ricci/mesh.hpp"

namespace ricci {

struct PlanarEmbedding {
    std::vector<Eigen::Vector2d> uv;  // per vertex
};

// Embeds a disk-topology mesh with a near-flat metric into the plane. The
// seed face is placed canonically (first corner at the origin, second on +x,
// third in the upper half-plane) and the remaining vertices follow by
// breadth-first face traversal, each placed at the two-circle intersection on
// the orientation-consistent side. k_interior_max bounds the allowed interior
// curvature of the metric (recomputed from the lengths). Throws NotADiskError,
// NotFlatError or PlacementAmbiguityError.
PlanarEmbedding embed_disk(const Mesh& mesh, const std::vector<double>& lengths,
                           double k_interior_max = 1e-4);

// Max relative deviation |uv distance - metric length| / metric length over
// all edges; the isometry audit of an embedding.
double embedding_max_length_deviation(const Mesh& mesh,
                                      const std::vector<double>& lengths,
                                      const PlanarEmbedding& embedding);

}  // namespace ricci
