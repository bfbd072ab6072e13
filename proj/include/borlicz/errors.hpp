#pragma once

#include <stdexcept>
#include <string>

namespace borlicz {

// Thrown when a sphere covering fails its post-construction coverage check
// even after one candidate-stream extension.
class CoverageFailure : public std::runtime_error {
public:
    explicit CoverageFailure(const std::string& what) : std::runtime_error(what) {}
};

// Query point lies beyond the coronae covered by a cell decomposition.
class OutOfDepth : public std::runtime_error {
public:
    explicit OutOfDepth(const std::string& what) : std::runtime_error(what) {}
};

// A symbol map produced a point outside the open unit ball.
class SelfMapViolation : public std::runtime_error {
public:
    explicit SelfMapViolation(const std::string& what) : std::runtime_error(what) {}
};

// No finite Luxemburg bracket could be established.
class NotIntegrable : public std::runtime_error {
public:
    explicit NotIntegrable(const std::string& what) : std::runtime_error(what) {}
};

// An integrand returned NaN at a node or sample.
class NonFinite : public std::runtime_error {
public:
    explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

// The hypothesis of a conditional inequality check is not met on the grid.
class HypothesisUnmet : public std::runtime_error {
public:
    explicit HypothesisUnmet(const std::string& what) : std::runtime_error(what) {}
};

} // namespace borlicz
