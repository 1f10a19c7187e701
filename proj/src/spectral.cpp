#include "agmonlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace agml {

FockBasis::FockBasis(std::vector<Mode> m, double nu_, int n_max_) : modes(std::move(m)), nu(nu_), n_max(n_max_) {
    require(!modes.empty(), Errc::invalid_argument, "Fock basis needs at least one mode");
    require(n_max >= 0, Errc::invalid_argument, "n_max must be nonnegative");
    require(nu >= 0.0, Errc::invalid_argument, "boson mass must be nonnegative");
    for (size_t j = 0; j < modes.size(); ++j) {
        require(modes[j].k >= 0.0, Errc::invalid_argument, "mode wavenumbers must be nonnegative");
        require(modes[j].eta >= 0.0 && modes[j].eta <= 1.0, Errc::invalid_argument, "mode weights must lie in [0,1]");
        require(modes[j].k > 0.0 || nu > 0.0, Errc::invalid_argument,
                "a k = 0 mode requires positive boson mass (infrared condition)");
    }
}

int64_t FockBasis::dim() const {
    int64_t d = 1;
    for (size_t j = 0; j < modes.size(); ++j) d *= (n_max + 1);
    return d;
}

int64_t FockBasis::index_of(const std::vector<int>& occ) const {
    int64_t f = 0;
    for (size_t j = 0; j < modes.size(); ++j) f = f * (n_max + 1) + occ[j];
    return f;
}

std::vector<int> FockBasis::occupancies(int64_t f) const {
    std::vector<int> occ(modes.size(), 0);
    for (size_t j = modes.size(); j-- > 0;) {
        occ[j] = static_cast<int>(f % (n_max + 1));
        f /= (n_max + 1);
    }
    return occ;
}

int FockBasis::total_quanta(int64_t f) const {
    int total = 0;
    for (size_t j = modes.size(); j-- > 0;) {
        total += static_cast<int>(f % (n_max + 1));
        f /= (n_max + 1);
    }
    return total;
}

SparseOperator build_schrodinger(const ScalarField& v) {
    // Unknowns are the interior nodes; the box boundary carries the
    // homogeneous Dirichlet datum.
    const GridSpec& g = v.grid;
    const int dim = g.dim;
    const double inv_h2 = 1.0 / (g.h * g.h);
    std::array<int64_t, 3> ni{1, 1, 1};
    int64_t n_int = 1;
    for (int a = 0; a < dim; ++a) {
        ni[static_cast<size_t>(a)] = g.shape()[static_cast<size_t>(a)] - 2;
        require(ni[static_cast<size_t>(a)] >= 1, Errc::config_error, "grid too small for interior unknowns");
        n_int *= ni[static_cast<size_t>(a)];
    }
    int64_t stride[3] = {0, 0, 0};
    {
        int64_t s = 1;
        for (int a = dim - 1; a >= 0; --a) {
            stride[a] = s;
            s *= ni[static_cast<size_t>(a)];
        }
    }
    SparseBuilder b(n_int);
    for (int64_t i = 0; i < n_int; ++i) {
        // interior index -> full-grid index (+1 per axis)
        std::array<int64_t, 3> idx{0, 0, 0};
        int64_t f = i;
        for (int a = dim - 1; a >= 0; --a) {
            idx[static_cast<size_t>(a)] = f % ni[static_cast<size_t>(a)] + 1;
            f /= ni[static_cast<size_t>(a)];
        }
        b.add(i, i, v.at(idx) + static_cast<double>(dim) * inv_h2);
        for (int a = 0; a < dim; ++a) {
            if (idx[static_cast<size_t>(a)] > 1) b.add(i, i - stride[a], -0.5 * inv_h2);
            if (idx[static_cast<size_t>(a)] < ni[static_cast<size_t>(a)]) b.add(i, i + stride[a], -0.5 * inv_h2);
        }
    }
    return b.assemble();
}

EigenResult ground_state(const SparseOperator& H, const GroundStateOpts& opts) {
    require(H.symmetric, Errc::invalid_argument, "ground_state needs a symmetric operator");
    if (H.bandwidth() <= opts.banded_cutoff) {
        return banded_inverse_iteration(H, opts.tol);
    }
    return lanczos_smallest(H, opts.tol, opts.seed, opts.max_basis, opts.max_restarts);
}

double nelson_coupling(const FockBasis& basis, int j, double g, double x) {
    double w = basis.omega(j);
    double eta = basis.modes[static_cast<size_t>(j)].eta;
    double k = basis.modes[static_cast<size_t>(j)].k;
    if (k > 0.0) return g * eta * std::sqrt(2.0 / w) * std::cos(k * x);
    return g * eta / std::sqrt(w);
}

SparseOperator build_nelson_toy(const GridSpec& grid, const Potential& p, const FockBasis& basis, double g,
                                int64_t dim_cap) {
    require(grid.dim == 1, Errc::invalid_argument, "the toy model uses a 1D matter grid");
    require(p.dim() == 1, Errc::invalid_argument, "potential dimension must match the 1D grid");
    const int64_t nx = grid.num_nodes() - 2; // interior matter nodes
    require(nx >= 1, Errc::config_error, "grid too small for interior unknowns");
    const int64_t nf = basis.dim();
    require(nx * nf <= dim_cap, Errc::dimension_overflow,
            "matter x Fock dimension " + std::to_string(nx * nf) + " exceeds the cap " + std::to_string(dim_cap));

    const double inv_h2 = 1.0 / (grid.h * grid.h);
    const int K = basis.num_modes();
    const int np1 = basis.n_max + 1;

    // Mode strides in the mixed-radix Fock index (mode 0 slowest).
    std::vector<int64_t> fstride(static_cast<size_t>(K), 1);
    for (int j = K - 2; j >= 0; --j) fstride[static_cast<size_t>(j)] = fstride[static_cast<size_t>(j) + 1] * np1;

    // Precompute dGamma(omega) diagonal and occupancies per Fock index.
    std::vector<double> field_diag(static_cast<size_t>(nf), 0.0);
    for (int64_t f = 0; f < nf; ++f) {
        auto occ = basis.occupancies(f);
        double e = 0.0;
        for (int j = 0; j < K; ++j) e += basis.omega(j) * occ[static_cast<size_t>(j)];
        field_diag[static_cast<size_t>(f)] = e;
    }

    SparseBuilder b(nx * nf);
    for (int64_t ix = 0; ix < nx; ++ix) {
        double x = grid.node_coord({ix + 1, 0, 0})[0];
        double vx = p.eval(Vec3{x});
        std::vector<double> fj(static_cast<size_t>(K));
        for (int j = 0; j < K; ++j) fj[static_cast<size_t>(j)] = nelson_coupling(basis, j, g, x);
        for (int64_t f = 0; f < nf; ++f) {
            int64_t row = ix * nf + f;
            b.add(row, row, vx + inv_h2 + field_diag[static_cast<size_t>(f)]);
            if (ix > 0) b.add(row, row - nf, -0.5 * inv_h2);
            if (ix + 1 < nx) b.add(row, row + nf, -0.5 * inv_h2);
            // phi(f_x) = sum_j f_j(x) (a_j + a_j^dagger); truncation drops
            // occupancies beyond n_max.
            int64_t rem = f;
            for (int j = 0; j < K; ++j) {
                int nj = static_cast<int>((rem / fstride[static_cast<size_t>(j)]) % np1);
                if (nj + 1 <= basis.n_max) {
                    double amp = fj[static_cast<size_t>(j)] * std::sqrt(static_cast<double>(nj + 1));
                    b.add(row, row + fstride[static_cast<size_t>(j)], amp);
                }
                if (nj > 0) {
                    double amp = fj[static_cast<size_t>(j)] * std::sqrt(static_cast<double>(nj));
                    b.add(row, row - fstride[static_cast<size_t>(j)], amp);
                }
            }
        }
    }
    return b.assemble();
}

double GroundStateField::fiber_norm(int64_t node) const {
    double s = 0.0;
    for (int64_t f = 0; f < fock_dim; ++f) {
        double c = coeff_at(node, f);
        s += c * c;
    }
    return std::sqrt(s);
}

double GroundStateField::chi(double R) const {
    double best = std::numeric_limits<double>::infinity();
    for (int64_t i = 0; i < grid.num_nodes(); ++i) {
        if (grid.node_coord(grid.unflatten(i)).norm() <= R) best = std::min(best, ell(i));
    }
    require(std::isfinite(best), Errc::empty_window, "no grid nodes inside radius R");
    return best;
}

double GroundStateField::max_fiber_norm() const {
    double best = 0.0;
    for (int64_t i = 0; i < grid.num_nodes(); ++i) best = std::max(best, fiber_norm(i));
    return best;
}

double GroundStateField::sup_ell() const {
    double best = -std::numeric_limits<double>::infinity();
    for (int64_t i = 0; i < grid.num_nodes(); ++i) best = std::max(best, ell(i));
    return best;
}

GroundStateField extract_field(const SparseOperator& H, const EigenResult& eig, const GridSpec& grid,
                               const FockBasis& basis) {
    // The operator's unknowns are the interior nodes; the field lives there.
    GridSpec inner = grid.interior();
    const int64_t nx = inner.num_nodes();
    const int64_t nf = basis.dim();
    require(H.dim == nx * nf, Errc::grid_mismatch, "eigenvector length does not match grid x Fock dimensions");
    require(static_cast<int64_t>(eig.vector.size()) == H.dim, Errc::invalid_argument, "eigenvector missing");

    GroundStateField gs;
    gs.grid = inner;
    gs.basis = basis;
    gs.fock_dim = nf;
    gs.energy = eig.value;
    gs.residual = eig.residual;
    gs.coeff = eig.vector;

    // Normalize: sum_x h^d sum_f Phi^2 = 1.
    double hd = std::pow(grid.h, grid.dim);
    double s2 = 0.0;
    for (double c : gs.coeff) s2 += c * c;
    double scale = 1.0 / std::sqrt(hd * s2);
    for (double& c : gs.coeff) c *= scale;

    // Global sign: sum_x ell(x) > 0.
    double ell_sum = 0.0;
    for (int64_t ix = 0; ix < nx; ++ix) ell_sum += gs.ell(ix);
    if (ell_sum < 0.0)
        for (double& c : gs.coeff) c = -c;

    for (int64_t ix = 0; ix < nx; ++ix) {
        if (!(gs.ell(ix) > 0.0)) {
            Vec3 xp = inner.node_coord(inner.unflatten(ix));
            fail(Errc::positivity_violation,
                 "vacuum overlap is not strictly positive at x = " + std::to_string(xp[0]) +
                     " (truncation too aggressive or degenerate ground state)");
        }
    }
    return gs;
}

double number_weighted_norm(const GroundStateField& gs, int64_t node, double r) {
    require(r >= 0.0, Errc::invalid_argument, "weight exponent must be nonnegative");
    double s = 0.0;
    for (int64_t f = 0; f < gs.fock_dim; ++f) {
        double c = gs.coeff_at(node, f);
        double w = std::exp(r * static_cast<double>(gs.basis.total_quanta(f)));
        s += w * w * c * c;
    }
    return std::sqrt(s);
}

double displaced_vacuum_overlap(const GroundStateField& gs, int64_t node, int j, double f) {
    const int np1 = gs.basis.n_max + 1;
    require(j >= 0 && j < gs.basis.num_modes(), Errc::invalid_argument, "mode index out of range");

    // w = e^{-phi} e_0 within the truncated single-mode space, where
    // phi = f (a + a^dagger) is tridiagonal with zero diagonal. Spectral
    // decomposition: w = U e^{-L} U^T e_0.
    std::vector<double> d(static_cast<size_t>(np1), 0.0), e(static_cast<size_t>(np1) - 1);
    for (int n = 0; n + 1 < np1; ++n) e[static_cast<size_t>(n)] = f * std::sqrt(static_cast<double>(n + 1));
    std::vector<std::vector<double>> z(static_cast<size_t>(np1), std::vector<double>(static_cast<size_t>(np1), 0.0));
    for (int i = 0; i < np1; ++i) z[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1.0;
    tridiag_eigensystem(d, e, z);
    std::vector<double> w(static_cast<size_t>(np1), 0.0);
    for (int a = 0; a < np1; ++a) {
        double acc = 0.0;
        for (int k = 0; k < np1; ++k)
            acc += z[static_cast<size_t>(a)][static_cast<size_t>(k)] * std::exp(-d[static_cast<size_t>(k)]) *
                   z[0][static_cast<size_t>(k)];
        w[static_cast<size_t>(a)] = acc;
    }

    // Contract: sum over the j-th mode occupancy with other modes in vacuum.
    const int K = gs.basis.num_modes();
    std::vector<int> occ(static_cast<size_t>(K), 0);
    double acc = 0.0;
    for (int n = 0; n < np1; ++n) {
        occ[static_cast<size_t>(j)] = n;
        acc += w[static_cast<size_t>(n)] * gs.coeff_at(node, gs.basis.index_of(occ));
    }
    return acc;
}

double renormalization_energy(double lambda, double g, double nu, const std::function<double(double)>& eta) {
    require(lambda > 0.0, Errc::invalid_argument, "cutoff must be positive");
    if (g == 0.0) return 0.0;
    auto integrand = [&](double k) {
        double w = std::sqrt(k * k + nu * nu);
        double et = eta ? eta(k) : 1.0;
        if (w == 0.0) return et * et; // massless k -> 0 limit of k^2/(w(w + k^2/2))
        return et * et * k * k / (w * (w + 0.5 * k * k));
    };
    // Adaptive Simpson with a recursion guard.
    struct Simpson {
        const std::function<double(double)>& f;
        int evals = 0;
        double simpson(double a, double b, double fa, double fm, double fb) const {
            return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        }
        double adapt(double a, double b, double fa, double fm, double fb, double whole, double tol, int depth) {
            evals += 2;
            require(evals < 2000000, Errc::quadrature_failure, "adaptive quadrature stalled");
            double m = 0.5 * (a + b);
            double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            double flm = f(lm), frm = f(rm);
            double left = simpson(a, m, fa, flm, fm);
            double right = simpson(m, b, fm, frm, fb);
            if (depth <= 0) fail(Errc::quadrature_failure, "adaptive quadrature refinement stalled");
            if (std::fabs(left + right - whole) <= 15.0 * tol)
                return left + right + (left + right - whole) / 15.0;
            return adapt(a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
                   adapt(m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
        }
    };
    std::function<double(double)> f = integrand;
    Simpson s{f};
    double a = 0.0, b = lambda;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = s.simpson(a, b, fa, fm, fb);
    double val = s.adapt(a, b, fa, fm, fb, whole, 1e-12 * std::max(1.0, std::fabs(whole)), 60);
    return 4.0 * M_PI * g * g * val;
}

} // namespace agml
