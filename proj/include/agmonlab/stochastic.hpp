#ifndef AGMONLAB_STOCHASTIC_HPP
#define AGMONLAB_STOCHASTIC_HPP

#include <cstdint>
#include <string>

#include "agmonlab/agmon.hpp"
#include "agmonlab/fields.hpp"

namespace agml {

struct McConfig {
    double dt = 1e-3;
    int64_t paths = 100000;
    uint64_t seed = 1;
    int dim = 3;
    int threads = 1;
};

struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;
    int64_t samples = 0;
    uint64_t seed = 0;
    std::string tag;
};

/// P[sup_{s <= T} |B_s| <= 1] for Brownian motion from the origin, with the
/// per-step Brownian-bridge boundary-crossing correction (Broadie-Glasserman-
/// Kou) against the locally flat sphere.
McEstimate ball_survival(double T, const McConfig& cfg);

/// Smallest eigenvalue of -1/2 Laplacian with Dirichlet data on the unit
/// ball, via the symmetrized radial finite-volume eigenproblem (h = 1e-4).
double dirichlet_tau(int dim);

/// P[sup over step times |B_t + x - q(t)| <= radius], x = q(0); the tube is
/// checked at step times only (documented upward bias).
McEstimate tube_probability(const TimedPath& q, double radius, const McConfig& cfg);

struct GirsanovCheck {
    McEstimate tube;       // P[M_T]
    McEstimate survival;   // P[Q_T]
    double kinetic_factor; // exp(-1/2 int |q'|^2)
    double rhs() const { return kinetic_factor * survival.value; }
};

/// Both sides of P[M_T] >= e^{-1/2 int |q'|^2} P[Q_T].
GirsanovCheck girsanov_check(const TimedPath& q, const McConfig& cfg);

/// Feynman-Kac reconstruction E[e^{-int V(B+x)} psi(B_T + x)] e^{T E}:
/// left-point rule for the potential integral, multilinear interpolation of
/// psi, zero contribution for paths leaving the psi grid. Throws
/// GridExitRateHigh when more than 1% of paths exit.
McEstimate fk_ground_state(const Potential& p, const Vec3& x, double T, double energy, const ScalarField& psi,
                           const McConfig& cfg);

/// Inputs of the path-certificate lower bound on the vacuum overlap.
struct CertificateInput {
    Vec3 x;
    TimedPath q;      // q(0) = x, q(T) = 0
    double p = 1.5;   // Hoelder exponent > 1
    double alpha = 0; // chi(1) exp(-||Phi||_inf^2 / (2 chi(1)^2))
    double tau = 0;
    double energy = 0;
    // field constants; zero in the scalar reduction where the bound is exact
    double c = 0.0;
    double C = 1.0;
    double g = 0.0;
};

/// alpha * exp(-(p/2) int |q'|^2 - int Vcirc(q) + T (E - p tau)) with
/// trapezoidal path quadratures; a certified lower bound for ell(x) in the
/// scalar theory (g = 0). For g != 0 the existential constants make the
/// value non-certified and callers must label it so.
double certificate_value(const CertificateInput& ci, const Potential& vcirc);

/// chi(1) exp(-sup^2/(2 chi(1)^2)) from ground-state field data.
double certificate_alpha(double chi1, double sup_norm);

/// Exact kinetic integral int |q'|^2 dt of a piecewise-linear timed path.
double kinetic_energy(const TimedPath& q);

} // namespace agml

#endif
