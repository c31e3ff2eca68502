#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <string_view>
#include <vector>

#include "vxgs/errors.hpp"

namespace vxgs {

enum class GridKind { line1d, radial_nd, cartesian2d };

GridKind grid_kind_from_string(std::string_view s);
std::string_view to_string(GridKind k);

/// Uniform discretization of the truncated domain with quadrature weights.
///
/// Node layouts:
///   line1d      x_i = -R + i*h, i = 0..n-1, trapezoid weights (sum = 2R).
///   radial_nd   r_i = (i + 1/2)*h, i = 0..n-1; the weight of node i is the
///               exact measure of the spherical shell [i*h, (i+1)*h], so the
///               weights sum to the measure of the ball of radius R.
///   cartesian2d tensor grid on [-R,R]^2, node index = ix*ny + iy,
///               tensor-trapezoid weights (sum = 4R^2).
class Grid : public std::enable_shared_from_this<Grid> {
  public:
    static std::shared_ptr<const Grid> build(int dim, GridKind kind, double r_dom, double h);

    int dim() const { return dim_; }
    GridKind kind() const { return kind_; }
    double truncation_radius() const { return radius_; }
    double spacing() const { return h_; }
    std::size_t size() const { return weights_.size(); }

    const std::vector<double>& weights() const { return weights_; }
    double weight(std::size_t i) const { return weights_[i]; }

    /// Euclidean distance of node i from the origin.
    double radius(std::size_t i) const;
    /// Coordinates of node i; unused components are zero.
    std::array<double, 2> position(std::size_t i) const;

    /// Per-axis node coordinates (line1d/radial_nd: the single axis;
    /// cartesian2d: the shared x/y axis).
    const std::vector<double>& axis() const { return axis_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return nx_; }

    /// Sum of all quadrature weights.
    double measure() const;

    /// Surface measure of the unit (dim-1)-sphere (radial grids).
    double sphere_factor() const;

  private:
    Grid() = default;
    int dim_ = 1;
    GridKind kind_ = GridKind::line1d;
    double radius_ = 0.0;
    double h_ = 0.0;
    std::vector<double> axis_;
    std::vector<double> weights_;
    std::size_t nx_ = 0; // cartesian2d only
};

/// Real-valued samples on a grid.
class Field {
  public:
    explicit Field(std::shared_ptr<const Grid> g);
    Field(std::shared_ptr<const Grid> g, std::vector<double> values);

    const Grid& grid() const { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    /// True when every sample is exactly zero.
    bool is_zero() const;

  private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> values_;
};

void require_same_grid(const Field& a, const Field& b);

/// Dirichlet Laplacian (field treated as zero outside the truncation radius).
/// Radial grids use the conservative flux form of u'' + (N-1)/r u'.
Field laplacian(const Field& u);

/// Pointwise squared gradient, centered differences, one-sided at the boundary.
Field gradient_sq(const Field& u);

/// Shift samples by y (integer multiples of the spacing per axis); values
/// moved in from outside the domain are zero, values moved out are dropped.
/// Only line1d and cartesian2d grids support translation.
Field translate(const Field& u, const std::vector<double>& y);

/// Quadrature of the samples (compensated summation in fixed node order).
double integrate(const Field& f);
/// Weighted inner product sum_i w_i a_i b_i.
double inner(const Field& a, const Field& b);
/// sqrt(inner(a, a)).
double norm_l2(const Field& a);

/// Quadrature of the product of squared-difference quotients over grid edges.
/// This is the discrete Dirichlet energy exactly adjoint to laplacian() on
/// interior nodes; boundary ghost edges are excluded.
double dirichlet_form(const Field& u, const Field& v);

/// Quadrature of f restricted to |x| > cutoff, with the straddling cell
/// weighted by the fraction of it lying beyond the cutoff.
double tail_integrate(const Field& f, double cutoff);

} // namespace vxgs
