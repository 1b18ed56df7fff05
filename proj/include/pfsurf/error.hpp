#pragma once

#include <stdexcept>
#include <string>

namespace pfsurf {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two fields (or a field and an obstacle) were built on different grids.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Input set is empty/full or otherwise unusable for the requested operation.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// A distance transform was asked for with no target voxels at all.
class AllFarError : public Error {
public:
    using Error::Error;
};

/// Obstacle bounds cross (lower > upper) or interior/exterior sets overlap.
class InfeasibleConstraintsError : public Error {
public:
    using Error::Error;
};

/// Solver configuration violates its invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed files, manifests, or CLI arguments.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Mesh connectivity that the curvature code cannot handle.
class NonManifoldError : public Error {
public:
    using Error::Error;
};

/// An iterate stopped being finite.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, int iteration)
        : Error(what), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

}  // namespace pfsurf
