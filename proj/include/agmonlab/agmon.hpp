#ifndef AGMONLAB_AGMON_HPP
#define AGMONLAB_AGMON_HPP

#include <string>
#include <vector>

#include "agmonlab/fields.hpp"

namespace agml {

/// Gridded geodesic distance rho(x) = inf over Lipschitz paths from the source
/// of the length integral of sqrt(2V) |gamma'|.
struct DistanceField {
    ScalarField rho;
    Vec3 source;
    std::string solver;        // "fast-marching" | "dijkstra-oracle"
    std::string potential_id;
    bool thickened = false;    // built from the ball-sup potential

    double at(const std::array<int64_t, 3>& idx) const { return rho.at(idx); }
    double interp(const Vec3& x) const { return rho.interp(x); }
};

/// Piecewise-linear path gamma(s_0..s_N) from y to x with its metric length.
struct Geodesic {
    std::vector<Vec3> nodes; // nodes.front() = y, nodes.back() = x
    double length = 0.0;
    bool converged = true;
};

/// Piecewise-linear timed path q(t_0..t_N) on [0, T] with its action value.
struct TimedPath {
    std::vector<Vec3> nodes;
    std::vector<double> times; // strictly increasing, times.front()=0, times.back()=T
    double horizon = 0.0;
    double action = 0.0;
};

/// First-order upwind Godunov fast marching for |grad rho|^2 = 2V with
/// rho(source) = 0. Throws GridTooCoarse on a causality violation.
DistanceField solve_eikonal(const ScalarField& v, const Vec3& source);

/// Shortest path on the grid graph; neighbor template of the given order
/// (order 1 = axis/face/body diagonals, higher orders add longer coprime
/// offsets and shrink the metrication error). Edge weight is
/// edge length * sqrt(2 V(midpoint)) with multilinear midpoint interpolation.
DistanceField dijkstra_oracle(const ScalarField& v, const Vec3& source, int neighbor_order = 1);

/// Trapezoidal length of the metric integrand sqrt(2V) along the stored
/// nodes; depends only on node positions.
double path_length(const Potential& p, const Geodesic& gamma);

/// Trapezoidal action: integral of |q'|^2/2 + V(q) dt on the stored nodes.
double action(const Potential& p, const TimedPath& q);

/// Re-space path nodes to constant metric speed (equal sqrt(2V)-length
/// segments), keeping endpoints and node count.
Geodesic respace_constant_speed(const Potential& p, const Geodesic& gamma);

struct MinimizeOpts {
    int interior_nodes = 128;
    int max_iter = 2000;
    double tol = 1e-10;      // stationarity: relative length decrease per sweep
    double step0 = 0.1;      // initial step scale for the line search
};

/// Local minimizer of the node-discretized length functional by gradient
/// descent with backtracking; nodes re-spaced to constant metric speed each
/// sweep. Returns the best iterate with converged=false after max_iter.
Geodesic minimize_path(const Potential& p, const Vec3& x, const Vec3& y, const Geodesic& init,
                       const MinimizeOpts& opts = {});

/// Straight-segment initial path from y to x.
Geodesic straight_path(const Potential& p, const Vec3& y, const Vec3& x, int interior_nodes = 128);

/// Time change of a constant-metric-speed path (nodes ordered 0 -> x, length
/// rho_x) into the timed path q(t) = gamma(sigma(T - t)) running x -> 0; the
/// resulting speed matches sqrt(2V(q)) and action(q) equals the length.
TimedPath jacobi_reparametrize(const Potential& p, const Geodesic& gamma, double rho_x);

/// minimize_path from 0 to x composed with jacobi_reparametrize.
TimedPath minimize_action(const Potential& p, const Vec3& x, const MinimizeOpts& opts = {});

/// Travel-time bound (1/(2 a(R0)) + max_{|z|=R0} rho(z) / (sqrt(8) R1)) * rho(x)
/// with a(R0) = inf_{|z| >= R0} V. Throws DomainTooSmall when the sphere
/// |z| = R0 is not resolved by the distance field.
double travel_time_bound(const Potential& p, const Vec3& x, double r0, double r1, const DistanceField& rho);

struct ResidualStats {
    double median = 0.0;
    double max = 0.0;
    int64_t count = 0;
};

/// Relative residual | |grad rho|^2 - 2V | / (2V) of the upwind gradient at
/// interior nodes away from the source.
ResidualStats eikonal_residual(const DistanceField& df, const ScalarField& v, double exclude_radius);

/// Max over nodes of |a - b| / max(b, floor); used for solver cross-checks.
double max_rel_gap(const DistanceField& a, const DistanceField& b);

} // namespace agml

#endif
