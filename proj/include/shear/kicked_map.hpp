#pragma once

// Classical kicked accelerated particle:
//
//   J'     = J + k sin(theta + J) + omega
//   theta' = theta + J                      (mod 2 pi)
//
// The lift to R^2 commutes with the deck group as the shear (1 0; 1 1):
// shifting J by 2 pi shifts the image by (2 pi, 2 pi).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "shear/rational.hpp"

namespace shear {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct MapParams {
    double k = 0.0;
    double omega = 0.0;

    /// Throws std::domain_error unless k >= 0 and both are finite.
    MapParams(double k_, double omega_);
    MapParams() = default;
};

struct LiftedPoint {
    double J = 0.0;
    double theta = 0.0;
};

using Mat2 = std::array<std::array<double, 2>, 2>;

inline double det(const Mat2& m) noexcept { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
inline double trace(const Mat2& m) noexcept { return m[0][0] + m[1][1]; }
Mat2 operator*(const Mat2& a, const Mat2& b) noexcept;

/// x mod 2 pi in [0, 2 pi).
double wrap_2pi(double x) noexcept;

LiftedPoint lift_step(const LiftedPoint& x, const MapParams& params) noexcept;

/// lift_step followed by reduction of both coordinates to [0, 2 pi).
LiftedPoint step(const LiftedPoint& x, const MapParams& params) noexcept;

/// Rows (J', theta'), columns (J, theta): [[1 + k c, k c], [1, 1]], c = cos(theta + J).
Mat2 jacobian_step(const LiftedPoint& x, const MapParams& params) noexcept;

/// p-fold lift and its Jacobian (chain rule).
struct Iterate {
    LiftedPoint image;
    Mat2 jacobian;
};
Iterate lift_iterate(const LiftedPoint& x, const MapParams& params, int p) noexcept;

enum class Stability { Elliptic, Hyperbolic, Parabolic };

inline constexpr double kParabolicTolerance = 1e-8;

/// Parabolic when |trace| is within kParabolicTolerance of 2.
Stability classify_trace(double trace) noexcept;
std::string to_string(Stability s);

struct PeriodicOrbit {
    MapParams params;
    int p = 1;
    std::int64_t w_J = 0;
    std::int64_t w_theta = 0;
    std::vector<LiftedPoint> points;  // lifted, base point first and in [0, 2 pi)^2
    double residual = 0.0;            // sup norm of F^p(x) - x - 2 pi (w_J, w_theta)
    double trace = 0.0;
    double det = 1.0;
    Stability stability = Stability::Elliptic;

    /// (w_J mod p)/p
    Rational rotation_number() const;
};

/// {k, omega, p, w_J, w_theta, points, trace, stability, residual, alpha}
nlohmann::json to_json(const PeriodicOrbit& orbit);

/// 2 pi w_J / p - omega
double acceleration(const PeriodicOrbit& orbit, const MapParams& params) noexcept;
double acceleration(int p, std::int64_t w_J, double omega) noexcept;

enum class SearchFailure { MaxIterations, SingularJacobian };
std::string to_string(SearchFailure f);

struct NotFound {
    SearchFailure reason;
    double residual;  // best residual reached
};

using OrbitResult = std::variant<PeriodicOrbit, NotFound>;

struct NewtonOptions {
    double tol = 1e-12;
    int max_iter = 50;
};

/// Damped Newton on G(x) = F^p(x) - x - 2 pi (w_J, w_theta) from seed. On
/// success the orbit is rebased to its lexicographically least point on the
/// torus and polished there, so equal orbits come back identical.
OrbitResult find_periodic_orbit(const MapParams& params, int p, std::int64_t w_J, std::int64_t w_theta,
                                const LiftedPoint& seed, const NewtonOptions& opts = {});

/// Inclusive w_theta range reachable from base points with J in [0, 2 pi):
/// the theta displacement over one period is the sum of the lifted J values,
/// each of which moves by omega +- k per step.
std::pair<std::int64_t, std::int64_t> theta_winding_range(const MapParams& params, int p);

/// Necessary condition for a (p, w_J) orbit: the mean kick over a period,
/// 2 pi w_J / p - omega, cannot exceed k in magnitude.
bool winding_admissible(const MapParams& params, int p, std::int64_t w_J) noexcept;

/// Torus distance between two orbits viewed as unordered point sets
/// (Hausdorff, sup norm on each coordinate mod 2 pi).
double orbit_distance(const PeriodicOrbit& a, const PeriodicOrbit& b);

/// Newton from a grid_n x grid_n lattice of seeds over [0, 2 pi)^2 and every
/// w_theta in theta_winding_range. Orbits within 10 tol of one another are
/// merged. Sorted by base point (J, theta).
std::vector<PeriodicOrbit> orbit_search_grid(const MapParams& params, int p, std::int64_t w_J, int grid_n,
                                             const NewtonOptions& opts = {});

}  // namespace shear
