#include "vxgs/varexp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vxgs {

namespace {

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

void require_samples_finite(const Field& f, const char* what) {
    for (double v : f.values()) {
        if (!std::isfinite(v)) throw invalid_parameter(std::string(what) + " samples must be finite");
    }
}

} // namespace

double two_star(int dim) {
    if (dim >= 3) return 2.0 * dim / (dim - 2.0);
    return std::numeric_limits<double>::infinity();
}

Exponent Exponent::make(Field samples, double p_inf, double tail_tol) {
    require_samples_finite(samples, "exponent");
    const Grid& g = samples.grid();
    double lo = samples[0], hi = samples[0];
    for (double v : samples.values()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    double crit = two_star(g.dim());
    if (!(lo > 2.0))
        throw invalid_parameter("exponent must satisfy p(x) > 2 everywhere (min sample " +
                                std::to_string(lo) + ")");
    if (!(hi < crit))
        throw invalid_parameter("exponent must stay below the critical exponent " +
                                std::to_string(crit));
    if (!(p_inf > 2.0) || !(p_inf < crit))
        throw invalid_parameter("limit exponent must lie in (2, 2*)");
    double band = 0.9 * g.truncation_radius();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.radius(i) >= band && std::abs(samples[i] - p_inf) > tail_tol)
            throw invalid_parameter("exponent tail deviates from its limit by more than " +
                                    std::to_string(tail_tol));
    }
    return Exponent{std::move(samples), lo, hi, p_inf};
}

Potential Potential::make(Field samples, double v_inf, double tail_tol) {
    require_samples_finite(samples, "potential");
    if (!(v_inf > 0.0)) throw invalid_parameter("limit potential must be positive");
    const Grid& g = samples.grid();
    double band = 0.9 * g.truncation_radius();
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (g.radius(i) >= band && std::abs(samples[i] - v_inf) > tail_tol)
            throw invalid_parameter("potential tail deviates from its limit by more than " +
                                    std::to_string(tail_tol));
    }
    return Potential{std::move(samples), v_inf};
}

double rho(const Field& u, const Exponent& p) {
    require_same_grid(u, p.samples);
    const auto& w = u.grid().weights();
    KahanSum s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double a = std::abs(u[i]);
        if (a != 0.0) s.add(w[i] * std::pow(a, p.samples[i]));
    }
    return s.value();
}

double weighted_modular(const Field& u, const Exponent& p, double gamma) {
    require_same_grid(u, p.samples);
    if (!(gamma > 0.0)) throw invalid_parameter("modular scale gamma must be positive");
    const auto& w = u.grid().weights();
    KahanSum s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double a = std::abs(u[i]);
        if (a != 0.0) s.add(w[i] * std::pow(a / gamma, p.samples[i]) / p.samples[i]);
    }
    return s.value();
}

namespace {

// modular evaluated from precomputed log|u_i|, as exp(p_i (log|u_i| - log g)),
// with inf/0 saturation handled by IEEE semantics
double modular_from_logs(const std::vector<double>& logs, const std::vector<double>& ws,
                         const std::vector<double>& ps, double gamma) {
    double lg = std::log(gamma);
    KahanSum s;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        double t = std::exp(ps[i] * (logs[i] - lg));
        s.add(ws[i] * t / ps[i]);
    }
    return s.value();
}

} // namespace

double luxemburg_norm(const Field& u, const Exponent& p) {
    require_same_grid(u, p.samples);
    if (u.is_zero()) return 0.0;

    const auto& w = u.grid().weights();
    std::vector<double> logs, ws, ps;
    logs.reserve(u.size());
    ws.reserve(u.size());
    ps.reserve(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        double a = std::abs(u[i]);
        if (a == 0.0) continue;
        logs.push_back(std::log(a));
        ws.push_back(w[i]);
        ps.push_back(p.samples[i]);
    }
    auto modular = [&](double g) { return modular_from_logs(logs, ws, ps, g); };

    // bracket the root of modular(gamma) = 1 from the modular/norm relation
    double r = rho(u, p);
    double lo, hi;
    if (std::isfinite(r) && r > 0.0) {
        lo = 0.5 * std::min(std::pow(r / p.p_plus, 1.0 / p.p_plus),
                            std::pow(r / p.p_plus, 1.0 / p.p_minus));
        hi = 2.0 * std::max(std::pow(r / p.p_minus, 1.0 / p.p_minus),
                            std::pow(r / p.p_minus, 1.0 / p.p_plus));
    } else {
        double m = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i]));
        lo = hi = m;
    }
    if (!std::isfinite(lo) || !std::isfinite(hi) || lo <= 0.0 || hi <= 0.0)
        throw numeric_failure("luxemburg norm bracket could not be initialized");

    int expansions = 0;
    while (modular(lo) < 1.0) {
        lo *= 0.5;
        if (++expansions > 200 || lo <= 0.0)
            throw numeric_failure("luxemburg norm bracket expansion failed (overflow-scale input)");
    }
    while (modular(hi) > 1.0) {
        hi *= 2.0;
        if (++expansions > 200 || !std::isfinite(hi))
            throw numeric_failure("luxemburg norm bracket expansion failed (overflow-scale input)");
    }

    while (hi - lo > 1e-12) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (modular(mid) > 1.0)
            lo = mid;
        else
            hi = mid;
    }
    double gamma = 0.5 * (lo + hi);

    // one Newton refinement: m'(g) = -rho(u/g)/g
    double m = modular(gamma);
    KahanSum rg;
    {
        double lg = std::log(gamma);
        for (std::size_t i = 0; i < logs.size(); ++i)
            rg.add(ws[i] * std::exp(ps[i] * (logs[i] - lg)));
    }
    double deriv = -rg.value() / gamma;
    if (deriv < 0.0 && std::isfinite(m)) {
        double refined = gamma - (m - 1.0) / deriv;
        if (refined >= lo && refined <= hi) gamma = refined;
    }
    return gamma;
}

double sigma(const Field& u, const Exponent& p) {
    double n = luxemburg_norm(u, p);
    return std::max(std::pow(n, p.p_minus - 1.0), std::pow(n, p.p_plus - 1.0));
}

double rho_inf(const Field& u, double p_inf) {
    double crit = two_star(u.grid().dim());
    if (!(p_inf > 2.0) || !(p_inf < crit))
        throw invalid_parameter("limit exponent must lie in (2, 2*)");
    const auto& w = u.grid().weights();
    KahanSum s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        double a = std::abs(u[i]);
        if (a != 0.0) s.add(w[i] * std::pow(a, p_inf));
    }
    return s.value();
}

double norm_inf(const Field& u, double p_inf) {
    double r = rho_inf(u, p_inf);
    if (r == 0.0) return 0.0;
    return std::pow(r / p_inf, 1.0 / p_inf);
}

} // namespace vxgs
