#ifndef AGMONLAB_SPARSE_HPP
#define AGMONLAB_SPARSE_HPP

#include <cstdint>
#include <vector>

#include "agmonlab/errors.hpp"

namespace agml {

/// Real symmetric sparse operator in compressed sparse row form.
struct SparseOperator {
    int64_t dim = 0;
    std::vector<int64_t> row_ptr;
    std::vector<int64_t> col;
    std::vector<double> val;
    bool symmetric = true;

    void matvec(const double* x, double* y) const;
    /// max |A - A^T| over stored entries.
    double symmetry_defect() const;
    /// Half bandwidth: max |i - j| over stored entries.
    int64_t bandwidth() const;
};

/// Builder that accumulates (i, j, v) triplets and assembles CSR with summed
/// duplicates and sorted columns.
class SparseBuilder {
  public:
    explicit SparseBuilder(int64_t dim) : dim_(dim) {}
    void add(int64_t i, int64_t j, double v) { trip_.push_back({i, j, v}); }
    SparseOperator assemble();

  private:
    struct Trip {
        int64_t i, j;
        double v;
    };
    int64_t dim_;
    std::vector<Trip> trip_;
};

struct EigenResult {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
    int iterations = 0;
};

/// Smallest eigenpair by Lanczos with full reorthogonalization and restarts.
/// Deterministic start vector derived from `seed`. Throws NoConvergence when
/// the residual tolerance is not met within the budget.
EigenResult lanczos_smallest(const SparseOperator& A, double tol, uint64_t seed, int max_basis = 400,
                             int max_restarts = 6);

/// Smallest eigenpair by shifted inverse iteration with a banded LDL^T
/// factorization (shift 0; the operators used here are positive definite).
/// Preserves the sign structure of the iterates, which resolves far tails of
/// ground states to relative accuracy.
EigenResult banded_inverse_iteration(const SparseOperator& A, double tol, int max_iter = 400);

/// Smallest eigenvalue of a symmetric tridiagonal matrix (diag d, offdiag e)
/// by Sturm-sequence bisection.
double tridiag_smallest_eigenvalue(const std::vector<double>& d, const std::vector<double>& e);

/// Full eigensystem of a symmetric tridiagonal matrix by implicit QL.
/// On return d holds the eigenvalues and z[row][k] the k-th eigenvector
/// component; pass z as the identity.
void tridiag_eigensystem(std::vector<double>& d, std::vector<double>& e, std::vector<std::vector<double>>& z);

} // namespace agml

#endif
