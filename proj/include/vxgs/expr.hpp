#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "vxgs/grid.hpp"

namespace vxgs {

/// Coordinate values available to an expression. The radial variable r, when
/// not set explicitly, is derived as the Euclidean norm of the bound
/// coordinates.
struct EvalContext {
    std::optional<double> x, y, z, r;
};

/// Parsed arithmetic expression over the variables r, x, y, z, the constant
/// pi, the operators + - * / ^ (with ^ binding tightest, right-associative)
/// and the functions exp, log, abs, sqrt, sin, cos, tanh, sech, min, max.
class Expr {
  public:
    static Expr parse(std::string_view source);

    double eval(const EvalContext& ctx) const;

    /// Canonical fully parenthesized rendering; parse(str()) reproduces the
    /// same tree.
    std::string str() const;

    /// Evaluate at every node of a grid. line1d binds x (and r = |x|),
    /// radial grids bind only r, cartesian2d binds x, y (and r).
    Field sample(const std::shared_ptr<const Grid>& g) const;

    struct Impl;

  private:
    std::shared_ptr<const Impl> impl_;
    explicit Expr(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
};

} // namespace vxgs
