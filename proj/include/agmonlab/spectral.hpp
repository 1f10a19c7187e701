#ifndef AGMONLAB_SPECTRAL_HPP
#define AGMONLAB_SPECTRAL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "agmonlab/fields.hpp"
#include "agmonlab/sparse.hpp"

namespace agml {

/// Truncated single-particle mode set: K modes with wavenumber k_j >= 0,
/// weight eta_j in [0,1], frequency omega_j = sqrt(k_j^2 + nu^2) and at most
/// n_max quanta per mode. k_j = 0 requires nu > 0 so every omega_j > 0.
struct FockBasis {
    struct Mode {
        double k = 0.0;
        double eta = 1.0;
    };
    std::vector<Mode> modes;
    double nu = 1.0;
    int n_max = 4;

    FockBasis() = default;
    FockBasis(std::vector<Mode> m, double nu_, int n_max_);

    int num_modes() const { return static_cast<int>(modes.size()); }
    double omega(int j) const { return std::sqrt(modes[static_cast<size_t>(j)].k * modes[static_cast<size_t>(j)].k + nu * nu); }
    int64_t dim() const;

    /// occupancies <-> flat Fock index (mixed radix, mode 0 slowest)
    int64_t index_of(const std::vector<int>& occ) const;
    std::vector<int> occupancies(int64_t f) const;
    int total_quanta(int64_t f) const;
};

/// H = -1/2 Laplacian (Dirichlet) + V on the grid, second-order central.
SparseOperator build_schrodinger(const ScalarField& v);

struct GroundStateOpts {
    double tol = 1e-10;
    uint64_t seed = 1;
    int max_basis = 400;
    int max_restarts = 6;
    /// bandwidth cutoff below which the banded inverse-iteration path is used
    int64_t banded_cutoff = 96;
};

/// Smallest eigenpair. Banded operators go through LDL^T inverse iteration
/// (sign-safe, resolves exponentially small tails); wide operators through
/// Lanczos with full reorthogonalization.
EigenResult ground_state(const SparseOperator& H, const GroundStateOpts& opts = {});

/// Toy Hamiltonian on (1D matter grid) x (truncated Fock space):
/// H = H_p ox 1 + 1 ox dGamma(omega) + sum_j f_j(x) (a_j + a_j^dagger) with
/// real couplings f_j(x) = g eta_j sqrt(2/omega_j) cos(k_j x) for k_j > 0 and
/// g eta_j / sqrt(omega_j) for k_j = 0.
SparseOperator build_nelson_toy(const GridSpec& grid, const Potential& p, const FockBasis& basis, double g,
                                int64_t dim_cap = 5000000);

/// Coupling amplitude f_j(x) used by build_nelson_toy.
double nelson_coupling(const FockBasis& basis, int j, double g, double x);

/// Ground-state field on the matter grid: coefficient fiber per node,
/// vacuum overlap ell(x), fiber norms, ground energy. Normalized so that
/// sum_x h^d sum_f Phi(x,f)^2 = 1 and the global sign makes sum_x ell(x) > 0.
struct GroundStateField {
    GridSpec grid;
    FockBasis basis;
    int64_t fock_dim = 1;
    std::vector<double> coeff; // [node][fock], row-major
    double energy = 0.0;
    double residual = 0.0;
    std::string phase = "global-sign";

    double coeff_at(int64_t node, int64_t f) const { return coeff[static_cast<size_t>(node * fock_dim + f)]; }
    double ell(int64_t node) const { return coeff_at(node, 0); }
    double fiber_norm(int64_t node) const;
    /// chi(R) = inf_{|z| <= R} ell(z) over grid nodes.
    double chi(double R) const;
    double max_fiber_norm() const;
    double sup_ell() const;
};

/// Reshape an eigenvector into a GroundStateField, fix the global sign, and
/// verify ell(x) > 0 at every node (throws PositivityViolation otherwise).
GroundStateField extract_field(const SparseOperator& H, const EigenResult& eig, const GridSpec& grid,
                               const FockBasis& basis);

/// || e^{r dGamma(1)} Phi(x) || computed exactly in the occupancy basis.
double number_weighted_norm(const GroundStateField& gs, int64_t node, double r);

/// (e^{-phi(f)} Omega, Phi(x)) for a single-mode real amplitude f on mode j,
/// via the dense matrix exponential of the truncated mode operator.
double displaced_vacuum_overlap(const GroundStateField& gs, int64_t node, int j, double f);

/// Renormalization integral g^2 int_{|k|<Lambda} eta(k)^2 / (omega (omega + k^2/2)) dk
/// by adaptive Simpson quadrature of the radial reduction. eta is a radial
/// profile; eta = nullptr means eta == 1.
double renormalization_energy(double lambda, double g, double nu, const std::function<double(double)>& eta = {});

} // namespace agml

#endif
