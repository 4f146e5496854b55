#pragma once

#include <stdexcept>
#include <string>

namespace socap {

// Base class for all library errors. `code()` is a short stable identifier
// used in sweep output rows, `what()` carries the human-readable detail.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Invalid or inconsistent configuration values (n < 2, alpha < 2, q out of
// range, bad cell area, ...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error("config", msg) {}
};

// A computation required the distance between a node and itself, or between
// two coincident nodes. The channel model assumes far-field separation, so
// zero distance has no meaning anywhere in the library.
class DegeneratePairError : public Error {
public:
    DegeneratePairError(int a, int b)
        : Error("degenerate-pair",
                "zero distance between nodes " + std::to_string(a) + " and " +
                    std::to_string(b)),
          node_a(a), node_b(b) {}

    int node_a;
    int node_b;
};

// A cell of the routing grid received no nodes. Relaying is impossible
// through an empty cell, so the grid is rejected instead of being patched.
// The caller may enlarge the cell area or resample the deployment.
class EmptyCellError : public Error {
public:
    EmptyCellError(int cx, int cy)
        : Error("empty-cell", "cell (" + std::to_string(cx) + "," +
                                  std::to_string(cy) + ") contains no nodes"),
          cell_x(cx), cell_y(cy) {}

    int cell_x;
    int cell_y;
};

// A subnetwork cannot host two disjoint clusters of the requested size.
class ClusterSizeError : public Error {
public:
    explicit ClusterSizeError(const std::string& msg)
        : Error("cluster-size", msg) {}
};

// Numerical failure (non-finite intermediate, Cholesky breakdown, ...).
class NumericError : public Error {
public:
    explicit NumericError(const std::string& msg) : Error("numeric", msg) {}
};

// Inputs outside the mathematical domain of an estimator or a closed form
// (nonpositive data passed to a log-log fit, cell-area scaling outside the
// admissible band, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error("domain", msg) {}
};

} // namespace socap
