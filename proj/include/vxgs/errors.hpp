#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vxgs {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied values failed.
struct invalid_parameter : error {
    using error::error;
};

/// Two fields (or a field and a coefficient) live on different grids.
struct grid_mismatch : error {
    using error::error;
};

/// The requested operation is not defined for this grid kind.
struct unsupported_operation : error {
    using error::error;
};

/// A root-find or bracket expansion left the range of double precision.
struct numeric_failure : error {
    using error::error;
};

/// Gradient requested at a point where it is undefined (zero field).
struct undefined_gradient : error {
    using error::error;
};

/// A translation would move nonzero samples out of the domain.
struct invalid_shift : error {
    using error::error;
};

/// Expression source could not be parsed; carries the byte offset.
struct parse_error : error {
    std::size_t offset;
    parse_error(std::size_t off, const std::string& msg)
        : error(msg + " (offset " + std::to_string(off) + ")"), offset(off) {}
};

/// Expression evaluation hit a domain error or an unbound variable.
struct evaluation_error : error {
    using error::error;
};

} // namespace vxgs
