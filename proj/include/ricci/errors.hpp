#pragma once

#include <stdexcept>
#include <string>

namespace ricci {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input value outside the formula's domain (e.g. non-positive radius).
class DomainError : public Error {
public:
    using Error::Error;
};

// OBJ file could not be parsed.
class ParseError : public Error {
public:
    using Error::Error;
};

// Mesh violates the manifold/orientability requirements.
class NonManifoldError : public Error {
public:
    using Error::Error;
};

// Face with arity other than 3.
class NonTriangularError : public Error {
public:
    using Error::Error;
};

// The metric left the admissible space: an edge length is undefined.
class DegenerateLengthError : public Error {
public:
    using Error::Error;
};

// Edge lengths do not form a valid triangle for the background geometry.
class TriangleInequalityError : public Error {
public:
    using Error::Error;
};

// Requested eta <-> lambda inversion outside the monotone range.
class InverseUndefinedError : public Error {
public:
    using Error::Error;
};

// Circle packing initialization produced an out-of-range coefficient.
class InitializationInfeasibleError : public Error {
public:
    using Error::Error;
};

// Zero-area or collinear face.
class DegenerateFaceError : public Error {
public:
    using Error::Error;
};

// The power circle of a face does not exist (imaginary radius/height).
class PowerCircleUndefinedError : public Error {
public:
    using Error::Error;
};

// Linear solve hit a direction of non-positive curvature.
class NotPositiveDefiniteError : public Error {
public:
    using Error::Error;
};

// Iterative solve exhausted its iteration budget.
class NoConvergenceError : public Error {
public:
    using Error::Error;
};

// Layout requires a disk-topology mesh.
class NotADiskError : public Error {
public:
    using Error::Error;
};

// Layout requires near-zero interior curvature.
class NotFlatError : public Error {
public:
    using Error::Error;
};

// Two-circle intersection during layout was degenerate.
class PlacementAmbiguityError : public Error {
public:
    using Error::Error;
};

// Finite-difference stencil left the valid metric neighborhood.
class DegenerateNeighborhoodError : public Error {
public:
    using Error::Error;
};

// Delaunay surgery exceeded its flip budget.
class SurgeryLoopError : public Error {
public:
    using Error::Error;
};

}  // namespace ricci
