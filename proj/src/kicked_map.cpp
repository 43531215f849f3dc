#include "shear/kicked_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace shear {

MapParams::MapParams(double k_, double omega_) : k(k_), omega(omega_) {
    if (!std::isfinite(k) || !std::isfinite(omega)) throw std::domain_error("map parameters must be finite");
    if (k < 0.0) throw std::domain_error("kick strength k must be non-negative");
}

Mat2 operator*(const Mat2& a, const Mat2& b) noexcept {
    Mat2 c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

double wrap_2pi(double x) noexcept {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r = 0.0;
    return r;
}

LiftedPoint lift_step(const LiftedPoint& x, const MapParams& params) noexcept {
    return {x.J + params.k * std::sin(x.theta + x.J) + params.omega, x.theta + x.J};
}

LiftedPoint step(const LiftedPoint& x, const MapParams& params) noexcept {
    const auto y = lift_step(x, params);
    return {wrap_2pi(y.J), wrap_2pi(y.theta)};
}

Mat2 jacobian_step(const LiftedPoint& x, const MapParams& params) noexcept {
    const double kc = params.k * std::cos(x.theta + x.J);
    return {{{1.0 + kc, kc}, {1.0, 1.0}}};
}

Iterate lift_iterate(const LiftedPoint& x, const MapParams& params, int p) noexcept {
    Iterate it{x, {{{1.0, 0.0}, {0.0, 1.0}}}};
    for (int i = 0; i < p; ++i) {
        it.jacobian = jacobian_step(it.image, params) * it.jacobian;
        it.image = lift_step(it.image, params);
    }
    return it;
}

Stability classify_trace(double tr) noexcept {
    if (std::abs(std::abs(tr) - 2.0) <= kParabolicTolerance) return Stability::Parabolic;
    return std::abs(tr) < 2.0 ? Stability::Elliptic : Stability::Hyperbolic;
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Elliptic: return "elliptic";
        case Stability::Hyperbolic: return "hyperbolic";
        case Stability::Parabolic: return "parabolic";
    }
    return "unknown";
}

std::string to_string(SearchFailure f) {
    return f == SearchFailure::MaxIterations ? "max-iterations" : "singular-jacobian";
}

Rational PeriodicOrbit::rotation_number() const {
    const std::int64_t q = ((w_J % p) + p) % p;
    return make_rational(q, p);
}

double acceleration(int p, std::int64_t w_J, double omega) noexcept {
    return kTwoPi * static_cast<double>(w_J) / static_cast<double>(p) - omega;
}

double acceleration(const PeriodicOrbit& orbit, const MapParams& params) noexcept {
    return acceleration(orbit.p, orbit.w_J, params.omega);
}

nlohmann::json to_json(const PeriodicOrbit& orbit) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& x : orbit.points) pts.push_back({x.J, x.theta});
    return {{"k", orbit.params.k},
            {"omega", orbit.params.omega},
            {"p", orbit.p},
            {"w_J", orbit.w_J},
            {"w_theta", orbit.w_theta},
            {"points", pts},
            {"trace", orbit.trace},
            {"stability", to_string(orbit.stability)},
            {"residual", orbit.residual},
            {"alpha", acceleration(orbit, orbit.params)}};
}

// ---------------------------------------------------------------------------

namespace {

struct Residual {
    double gJ, gtheta;
    Mat2 jacobian;
    double norm() const noexcept { return std::max(std::abs(gJ), std::abs(gtheta)); }
};

Residual residual_at(const LiftedPoint& x, const MapParams& params, int p, std::int64_t w_J, std::int64_t w_theta) {
    const auto it = lift_iterate(x, params, p);
    return {it.image.J - x.J - kTwoPi * static_cast<double>(w_J),
            it.image.theta - x.theta - kTwoPi * static_cast<double>(w_theta), it.jacobian};
}

struct NewtonOutcome {
    LiftedPoint x;
    double residual;
    std::optional<SearchFailure> failure;
};

constexpr double kMaxNewtonStep = 3.14159265358979323846;
constexpr int kMaxHalvings = 30;

NewtonOutcome newton(LiftedPoint x, const MapParams& params, int p, std::int64_t w_J, std::int64_t w_theta,
                     const NewtonOptions& opts) {
    Residual r = residual_at(x, params, p, w_J, w_theta);
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        if (r.norm() <= opts.tol) return {x, r.norm(), std::nullopt};
        const double a = r.jacobian[0][0] - 1.0;
        const double b = r.jacobian[0][1];
        const double c = r.jacobian[1][0];
        const double d = r.jacobian[1][1] - 1.0;
        const double dt = a * d - b * c;
        const double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
        if (!std::isfinite(dt) || std::abs(dt) <= 1e-14 * scale * scale)
            return {x, r.norm(), SearchFailure::SingularJacobian};
        double dJ = (-d * r.gJ + b * r.gtheta) / dt;
        double dth = (c * r.gJ - a * r.gtheta) / dt;
        const double len = std::max(std::abs(dJ), std::abs(dth));
        if (len > kMaxNewtonStep) {
            dJ *= kMaxNewtonStep / len;
            dth *= kMaxNewtonStep / len;
        }
        double s = 1.0;
        bool improved = false;
        for (int h = 0; h < kMaxHalvings; ++h, s *= 0.5) {
            const LiftedPoint trial{x.J + s * dJ, x.theta + s * dth};
            Residual rt = residual_at(trial, params, p, w_J, w_theta);
            if (rt.norm() < r.norm()) {
                x = trial;
                r = rt;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    if (r.norm() <= opts.tol) return {x, r.norm(), std::nullopt};
    return {x, r.norm(), SearchFailure::MaxIterations};
}

bool torus_less(const LiftedPoint& a, const LiftedPoint& b) noexcept {
    const double aJ = wrap_2pi(a.J), bJ = wrap_2pi(b.J);
    if (aJ != bJ) return aJ < bJ;
    return wrap_2pi(a.theta) < wrap_2pi(b.theta);
}

PeriodicOrbit assemble(const LiftedPoint& base, const MapParams& params, int p, std::int64_t w_J,
                       std::int64_t w_theta, double residual) {
    PeriodicOrbit orbit;
    orbit.params = params;
    orbit.p = p;
    orbit.w_J = w_J;
    orbit.w_theta = w_theta;
    orbit.residual = residual;
    LiftedPoint x = base;
    Mat2 m{{{1.0, 0.0}, {0.0, 1.0}}};
    for (int i = 0; i < p; ++i) {
        orbit.points.push_back(x);
        m = jacobian_step(x, params) * m;
        x = lift_step(x, params);
    }
    orbit.trace = trace(m);
    orbit.det = det(m);
    orbit.stability = classify_trace(orbit.trace);
    return orbit;
}

}  // namespace

OrbitResult find_periodic_orbit(const MapParams& params, int p, std::int64_t w_J, std::int64_t w_theta,
                                const LiftedPoint& seed, const NewtonOptions& opts) {
    if (p < 1) throw std::domain_error("find_periodic_orbit: period must be positive");
    if (!(opts.tol > 0.0)) throw std::domain_error("find_periodic_orbit: tolerance must be positive");

    const auto first = newton(seed, params, p, w_J, w_theta, opts);
    if (first.failure) return NotFound{*first.failure, first.residual};

    // Rebase to the least orbit point on the torus and re-solve there.
    LiftedPoint best = first.x;
    LiftedPoint x = first.x;
    for (int i = 1; i < p; ++i) {
        x = lift_step(x, params);
        if (torus_less(x, best)) best = x;
    }
    const LiftedPoint base{wrap_2pi(best.J), wrap_2pi(best.theta)};
    const auto it = lift_iterate(base, params, p);
    const auto rebased_w_theta = static_cast<std::int64_t>(std::llround((it.image.theta - base.theta) / kTwoPi));
    const auto polished = newton(base, params, p, w_J, rebased_w_theta, opts);
    if (!polished.failure && polished.x.J >= 0.0 && polished.x.J < kTwoPi && polished.x.theta >= 0.0 &&
        polished.x.theta < kTwoPi)
        return assemble(polished.x, params, p, w_J, rebased_w_theta, polished.residual);
    return assemble(first.x, params, p, w_J, w_theta, first.residual);
}

std::pair<std::int64_t, std::int64_t> theta_winding_range(const MapParams& params, int p) {
    const double tri = 0.5 * static_cast<double>(p) * static_cast<double>(p - 1);
    const double lo = (params.omega - params.k) * tri;
    const double hi = static_cast<double>(p) * kTwoPi + (params.omega + params.k) * tri;
    return {static_cast<std::int64_t>(std::floor(lo / kTwoPi)), static_cast<std::int64_t>(std::ceil(hi / kTwoPi))};
}

bool winding_admissible(const MapParams& params, int p, std::int64_t w_J) noexcept {
    // Small slack so that orbits sitting exactly on a tongue edge are not discarded.
    return std::abs(acceleration(p, w_J, params.omega)) <= params.k * (1.0 + 1e-12) + 1e-12;
}

namespace {

double circle_gap(double a, double b) noexcept {
    const double d = std::abs(wrap_2pi(a) - wrap_2pi(b));
    return std::min(d, kTwoPi - d);
}

double point_gap(const LiftedPoint& a, const LiftedPoint& b) noexcept {
    return std::max(circle_gap(a.J, b.J), circle_gap(a.theta, b.theta));
}

double directed_hausdorff(const PeriodicOrbit& a, const PeriodicOrbit& b) {
    double worst = 0.0;
    for (const auto& x : a.points) {
        double nearest = INFINITY;
        for (const auto& y : b.points) nearest = std::min(nearest, point_gap(x, y));
        worst = std::max(worst, nearest);
    }
    return worst;
}

}  // namespace

double orbit_distance(const PeriodicOrbit& a, const PeriodicOrbit& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

std::vector<PeriodicOrbit> orbit_search_grid(const MapParams& params, int p, std::int64_t w_J, int grid_n,
                                             const NewtonOptions& opts) {
    if (grid_n < 1) throw std::domain_error("orbit_search_grid: grid_n must be positive");
    if (p < 1) throw std::domain_error("orbit_search_grid: period must be positive");
    std::vector<PeriodicOrbit> found;
    const double merge = 10.0 * opts.tol;
    const auto [wt_lo, wt_hi] = theta_winding_range(params, p);
    for (std::int64_t wt = wt_lo; wt <= wt_hi; ++wt) {
        for (int i = 0; i < grid_n; ++i) {
            for (int j = 0; j < grid_n; ++j) {
                const LiftedPoint seed{(i + 0.5) * kTwoPi / grid_n, (j + 0.5) * kTwoPi / grid_n};
                auto result = find_periodic_orbit(params, p, w_J, wt, seed, opts);
                auto* orbit = std::get_if<PeriodicOrbit>(&result);
                if (!orbit) continue;
                const bool dup = std::any_of(found.begin(), found.end(),
                                             [&](const PeriodicOrbit& o) { return orbit_distance(o, *orbit) <= merge; });
                if (!dup) found.push_back(std::move(*orbit));
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        const auto& x = a.points.front();
        const auto& y = b.points.front();
        return x.J != y.J ? x.J < y.J : x.theta < y.theta;
    });
    return found;
}

}  // namespace shear
