#pragma once

#include <stdexcept>
#include <string>

namespace alame {

/// Argument landed inside the guard radius of a pole.
class PoleProximityError : public std::runtime_error {
public:
    explicit PoleProximityError(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iteration (Newton polish, adaptive integrator, tail scan) failed to converge.
class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Parameter pair (m, ell) outside the supported set.
class UnsupportedModelError : public std::invalid_argument {
public:
    explicit UnsupportedModelError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Seed function has a node in range (or would otherwise produce a singular partner).
class SingularTransformError : public std::runtime_error {
public:
    explicit SingularTransformError(const std::string& msg)
        : std::runtime_error(msg), has_node_(false), node_x_(0.0) {}
    SingularTransformError(const std::string& msg, double node_x)
        : std::runtime_error(msg), has_node_(true), node_x_(node_x) {}

    bool has_node() const { return has_node_; }
    double node_x() const { return node_x_; }

private:
    bool has_node_;
    double node_x_;
};

/// |psi(x_ref)| too small even after shifting the reference point.
class NormalizationError : public std::runtime_error {
public:
    explicit NormalizationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Tail decay not detected within the allowed number of periods.
class NonNormalizableError : public std::runtime_error {
public:
    explicit NonNormalizableError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace alame
