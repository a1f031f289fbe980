#pragma once

#include <stdexcept>
#include <string>

namespace netdiscern {

/// Graph input violates a structural requirement (self-loop, duplicate
/// edge, zero edge weight, index out of range).
class invalid_graph_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A variation or sensor specification does not match the model it
/// targets (missing edge, isolated node, duplicate sensor).
class invalid_spec_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric precondition was violated (asymmetric input to a symmetric
/// solver, a vector that is not an eigenvector of the stated matrix).
class contract_violation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario, graph, or sample files.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace netdiscern
