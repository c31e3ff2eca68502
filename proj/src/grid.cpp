#include "vxgs/grid.hpp"

#include <cmath>
#include <numbers>

namespace vxgs {

namespace {

// Compensated (Kahan) summation in a fixed order, so reductions are
// bit-reproducible regardless of build flags.
class KahanSum {
  public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

double pow_int(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

} // namespace

GridKind grid_kind_from_string(std::string_view s) {
    if (s == "line1d") return GridKind::line1d;
    if (s == "radialNd") return GridKind::radial_nd;
    if (s == "cartesian2d") return GridKind::cartesian2d;
    throw invalid_parameter("unknown grid kind '" + std::string(s) + "'");
}

std::string_view to_string(GridKind k) {
    switch (k) {
        case GridKind::line1d: return "line1d";
        case GridKind::radial_nd: return "radialNd";
        case GridKind::cartesian2d: return "cartesian2d";
    }
    return "?";
}

double Grid::sphere_factor() const {
    switch (dim_) {
        case 1: return 2.0;
        case 2: return 2.0 * std::numbers::pi;
        case 3: return 4.0 * std::numbers::pi;
    }
    throw invalid_parameter("unsupported dimension");
}

std::shared_ptr<const Grid> Grid::build(int dim, GridKind kind, double r_dom, double h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw invalid_parameter("spacing h must be positive");
    if (!(r_dom > 0.0) || !std::isfinite(r_dom))
        throw invalid_parameter("truncation radius must be positive");
    if (r_dom < 2.0 * h) throw invalid_parameter("truncation radius must cover at least two cells");
    bool ok = (kind == GridKind::line1d && dim == 1) ||
              (kind == GridKind::radial_nd && (dim >= 1 && dim <= 3)) ||
              (kind == GridKind::cartesian2d && dim == 2);
    if (!ok)
        throw invalid_parameter("unsupported dim/kind pair: dim=" + std::to_string(dim) + " kind=" +
                                std::string(to_string(kind)));

    auto g = std::shared_ptr<Grid>(new Grid());
    g->dim_ = dim;
    g->kind_ = kind;
    g->radius_ = r_dom;

    switch (kind) {
        case GridKind::line1d: {
            auto n = static_cast<std::size_t>(std::llround(2.0 * r_dom / h)) + 1;
            if (n < 2) throw invalid_parameter("grid would have fewer than 2 nodes");
            double he = 2.0 * r_dom / static_cast<double>(n - 1);
            g->h_ = he;
            g->axis_.resize(n);
            g->weights_.assign(n, he);
            for (std::size_t i = 0; i < n; ++i)
                g->axis_[i] = -r_dom + static_cast<double>(i) * he;
            g->weights_.front() = 0.5 * he;
            g->weights_.back() = 0.5 * he;
            break;
        }
        case GridKind::radial_nd: {
            auto n = static_cast<std::size_t>(std::llround(r_dom / h));
            if (n < 2) throw invalid_parameter("grid would have fewer than 2 nodes");
            double he = r_dom / static_cast<double>(n);
            g->h_ = he;
            g->axis_.resize(n);
            g->weights_.resize(n);
            double omega = g->sphere_factor();
            for (std::size_t i = 0; i < n; ++i) {
                g->axis_[i] = (static_cast<double>(i) + 0.5) * he;
                double rl = static_cast<double>(i) * he;
                double rr = static_cast<double>(i + 1) * he;
                g->weights_[i] = omega * (pow_int(rr, dim) - pow_int(rl, dim)) / dim;
            }
            break;
        }
        case GridKind::cartesian2d: {
            auto n = static_cast<std::size_t>(std::llround(2.0 * r_dom / h)) + 1;
            if (n < 2) throw invalid_parameter("grid would have fewer than 2 nodes");
            double he = 2.0 * r_dom / static_cast<double>(n - 1);
            g->h_ = he;
            g->nx_ = n;
            g->axis_.resize(n);
            for (std::size_t i = 0; i < n; ++i)
                g->axis_[i] = -r_dom + static_cast<double>(i) * he;
            std::vector<double> w1(n, he);
            w1.front() = 0.5 * he;
            w1.back() = 0.5 * he;
            g->weights_.resize(n * n);
            for (std::size_t ix = 0; ix < n; ++ix)
                for (std::size_t iy = 0; iy < n; ++iy)
                    g->weights_[ix * n + iy] = w1[ix] * w1[iy];
            break;
        }
    }
    return g;
}

double Grid::radius(std::size_t i) const {
    switch (kind_) {
        case GridKind::line1d: return std::abs(axis_[i]);
        case GridKind::radial_nd: return axis_[i];
        case GridKind::cartesian2d: {
            double x = axis_[i / nx_];
            double y = axis_[i % nx_];
            return std::hypot(x, y);
        }
    }
    return 0.0;
}

std::array<double, 2> Grid::position(std::size_t i) const {
    switch (kind_) {
        case GridKind::line1d:
        case GridKind::radial_nd: return {axis_[i], 0.0};
        case GridKind::cartesian2d: return {axis_[i / nx_], axis_[i % nx_]};
    }
    return {0.0, 0.0};
}

double Grid::measure() const {
    KahanSum s;
    for (double w : weights_) s.add(w);
    return s.value();
}

Field::Field(std::shared_ptr<const Grid> g) : grid_(std::move(g)) {
    if (!grid_) throw invalid_parameter("field requires a grid");
    values_.assign(grid_->size(), 0.0);
}

Field::Field(std::shared_ptr<const Grid> g, std::vector<double> values)
    : grid_(std::move(g)), values_(std::move(values)) {
    if (!grid_) throw invalid_parameter("field requires a grid");
    if (values_.size() != grid_->size())
        throw invalid_parameter("field length does not match grid node count");
    for (double v : values_) {
        if (!std::isfinite(v)) throw invalid_parameter("field values must be finite");
    }
}

bool Field::is_zero() const {
    for (double v : values_) {
        if (v != 0.0) return false;
    }
    return true;
}

void require_same_grid(const Field& a, const Field& b) {
    if (a.grid_ptr() != b.grid_ptr()) throw grid_mismatch("fields live on different grids");
}

Field laplacian(const Field& u) {
    const Grid& g = u.grid();
    Field out(u.grid_ptr());
    const auto& v = u.values();
    double h = g.spacing();
    double h2 = h * h;
    switch (g.kind()) {
        case GridKind::line1d: {
            std::size_t n = v.size();
            for (std::size_t i = 0; i < n; ++i) {
                double left = (i > 0) ? v[i - 1] : 0.0;
                double right = (i + 1 < n) ? v[i + 1] : 0.0;
                out[i] = (left - 2.0 * v[i] + right) / h2;
            }
            break;
        }
        case GridKind::radial_nd: {
            std::size_t n = v.size();
            int N = g.dim();
            for (std::size_t i = 0; i < n; ++i) {
                // face areas r^{N-1} at cell edges; the inner flux vanishes
                // (r=0 for N>=2, even reflection for N=1)
                double al = (i > 0) ? pow_int(static_cast<double>(i) * h, N - 1) : 0.0;
                double ar = pow_int(static_cast<double>(i + 1) * h, N - 1);
                double vt = g.weight(i) / (g.sphere_factor() * h);
                double right = (i + 1 < n) ? v[i + 1] : 0.0;
                double fl = (i > 0) ? al * (v[i] - v[i - 1]) : 0.0;
                double fr = ar * (right - v[i]);
                out[i] = (fr - fl) / (h2 * vt);
            }
            break;
        }
        case GridKind::cartesian2d: {
            std::size_t n = g.nx();
            for (std::size_t ix = 0; ix < n; ++ix) {
                for (std::size_t iy = 0; iy < n; ++iy) {
                    std::size_t id = ix * n + iy;
                    double c = v[id];
                    double xm = (ix > 0) ? v[id - n] : 0.0;
                    double xp = (ix + 1 < n) ? v[id + n] : 0.0;
                    double ym = (iy > 0) ? v[id - 1] : 0.0;
                    double yp = (iy + 1 < n) ? v[id + 1] : 0.0;
                    out[id] = (xm + xp + ym + yp - 4.0 * c) / h2;
                }
            }
            break;
        }
    }
    return out;
}

Field gradient_sq(const Field& u) {
    const Grid& g = u.grid();
    Field out(u.grid_ptr());
    const auto& v = u.values();
    double h = g.spacing();

    auto deriv_1d = [&](std::size_t i, std::size_t n, auto at) {
        if (n == 1) return 0.0;
        if (i == 0) return (at(1) - at(0)) / h;
        if (i + 1 == n) return (at(n - 1) - at(n - 2)) / h;
        return (at(i + 1) - at(i - 1)) / (2.0 * h);
    };

    switch (g.kind()) {
        case GridKind::line1d:
        case GridKind::radial_nd: {
            std::size_t n = v.size();
            for (std::size_t i = 0; i < n; ++i) {
                double d = deriv_1d(i, n, [&](std::size_t j) { return v[j]; });
                out[i] = d * d;
            }
            break;
        }
        case GridKind::cartesian2d: {
            std::size_t n = g.nx();
            for (std::size_t ix = 0; ix < n; ++ix) {
                for (std::size_t iy = 0; iy < n; ++iy) {
                    double dx = deriv_1d(ix, n, [&](std::size_t j) { return v[j * n + iy]; });
                    double dy = deriv_1d(iy, n, [&](std::size_t j) { return v[ix * n + j]; });
                    out[ix * n + iy] = dx * dx + dy * dy;
                }
            }
            break;
        }
    }
    return out;
}

namespace {

long shift_steps(double y, double h) {
    double q = y / h;
    double r = std::round(q);
    if (std::abs(q - r) > 1e-9 * std::max(1.0, std::abs(q)))
        throw invalid_parameter("translation offset must be an integer multiple of the spacing");
    return static_cast<long>(r);
}

} // namespace

Field translate(const Field& u, const std::vector<double>& y) {
    const Grid& g = u.grid();
    if (g.kind() == GridKind::radial_nd)
        throw unsupported_operation("translation is not defined on radial grids");

    Field out(u.grid_ptr());
    const auto& v = u.values();
    if (g.kind() == GridKind::line1d) {
        if (y.size() != 1) throw invalid_parameter("line1d translation takes a single offset");
        long k = shift_steps(y[0], g.spacing());
        long n = static_cast<long>(v.size());
        for (long i = 0; i < n; ++i) {
            long j = i - k;
            out[static_cast<std::size_t>(i)] =
                (j >= 0 && j < n) ? v[static_cast<std::size_t>(j)] : 0.0;
        }
        return out;
    }
    if (y.size() != 2) throw invalid_parameter("cartesian2d translation takes two offsets");
    long kx = shift_steps(y[0], g.spacing());
    long ky = shift_steps(y[1], g.spacing());
    long n = static_cast<long>(g.nx());
    for (long ix = 0; ix < n; ++ix) {
        for (long iy = 0; iy < n; ++iy) {
            long jx = ix - kx;
            long jy = iy - ky;
            double val = (jx >= 0 && jx < n && jy >= 0 && jy < n)
                             ? v[static_cast<std::size_t>(jx * n + jy)]
                             : 0.0;
            out[static_cast<std::size_t>(ix * n + iy)] = val;
        }
    }
    return out;
}

double integrate(const Field& f) {
    const auto& w = f.grid().weights();
    KahanSum s;
    for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * f[i]);
    return s.value();
}

double inner(const Field& a, const Field& b) {
    require_same_grid(a, b);
    const auto& w = a.grid().weights();
    KahanSum s;
    for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * a[i] * b[i]);
    return s.value();
}

double norm_l2(const Field& a) { return std::sqrt(inner(a, a)); }

double dirichlet_form(const Field& u, const Field& v) {
    require_same_grid(u, v);
    const Grid& g = u.grid();
    const auto& a = u.values();
    const auto& b = v.values();
    double h = g.spacing();
    KahanSum s;
    switch (g.kind()) {
        case GridKind::line1d:
            for (std::size_t i = 0; i + 1 < a.size(); ++i)
                s.add((a[i + 1] - a[i]) * (b[i + 1] - b[i]) / h);
            break;
        case GridKind::radial_nd: {
            int N = g.dim();
            double omega = g.sphere_factor();
            for (std::size_t i = 0; i + 1 < a.size(); ++i) {
                double area = pow_int(static_cast<double>(i + 1) * h, N - 1);
                s.add(omega * area * (a[i + 1] - a[i]) * (b[i + 1] - b[i]) / h);
            }
            break;
        }
        case GridKind::cartesian2d: {
            std::size_t n = g.nx();
            auto wline = [&](std::size_t j) {
                return (j == 0 || j + 1 == n) ? 0.5 * h : h;
            };
            for (std::size_t ix = 0; ix + 1 < n; ++ix)
                for (std::size_t iy = 0; iy < n; ++iy)
                    s.add(wline(iy) * (a[(ix + 1) * n + iy] - a[ix * n + iy]) *
                          (b[(ix + 1) * n + iy] - b[ix * n + iy]) / h);
            for (std::size_t ix = 0; ix < n; ++ix)
                for (std::size_t iy = 0; iy + 1 < n; ++iy)
                    s.add(wline(ix) * (a[ix * n + iy + 1] - a[ix * n + iy]) *
                          (b[ix * n + iy + 1] - b[ix * n + iy]) / h);
            break;
        }
    }
    return s.value();
}

double tail_integrate(const Field& f, double cutoff) {
    const Grid& g = f.grid();
    double h = g.spacing();
    KahanSum s;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double r = g.radius(i);
        double frac;
        if (r >= cutoff + 0.5 * h) {
            frac = 1.0;
        } else if (r <= cutoff - 0.5 * h) {
            frac = 0.0;
        } else {
            frac = (r + 0.5 * h - cutoff) / h;
        }
        if (frac > 0.0) s.add(frac * g.weight(i) * f[i]);
    }
    return s.value();
}

} // namespace vxgs
