#include "agmonlab/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "agmonlab/rng.hpp"

namespace agml {

void SparseOperator::matvec(const double* x, double* y) const {
    for (int64_t i = 0; i < dim; ++i) {
        double acc = 0.0;
        for (int64_t k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i) + 1]; ++k)
            acc += val[static_cast<size_t>(k)] * x[col[static_cast<size_t>(k)]];
        y[i] = acc;
    }
}

double SparseOperator::symmetry_defect() const {
    // Probe A x - A^T x for a fixed vector; exact symmetry gives zero up to
    // the same rounding on both sides, so compare stored entries instead.
    double worst = 0.0;
    for (int64_t i = 0; i < dim; ++i) {
        for (int64_t k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i) + 1]; ++k) {
            int64_t j = col[static_cast<size_t>(k)];
            if (j < i) continue;
            double vij = val[static_cast<size_t>(k)];
            // binary search row j for column i
            double vji = 0.0;
            int64_t lo = row_ptr[static_cast<size_t>(j)], hi = row_ptr[static_cast<size_t>(j) + 1];
            while (lo < hi) {
                int64_t mid = (lo + hi) / 2;
                if (col[static_cast<size_t>(mid)] < i)
                    lo = mid + 1;
                else
                    hi = mid;
            }
            if (lo < row_ptr[static_cast<size_t>(j) + 1] && col[static_cast<size_t>(lo)] == i)
                vji = val[static_cast<size_t>(lo)];
            worst = std::max(worst, std::fabs(vij - vji));
        }
    }
    return worst;
}

int64_t SparseOperator::bandwidth() const {
    int64_t bw = 0;
    for (int64_t i = 0; i < dim; ++i)
        for (int64_t k = row_ptr[static_cast<size_t>(i)]; k < row_ptr[static_cast<size_t>(i) + 1]; ++k)
            bw = std::max<int64_t>(bw, std::llabs(col[static_cast<size_t>(k)] - i));
    return bw;
}

SparseOperator SparseBuilder::assemble() {
    std::sort(trip_.begin(), trip_.end(), [](const Trip& a, const Trip& b) {
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
    SparseOperator A;
    A.dim = dim_;
    A.row_ptr.assign(static_cast<size_t>(dim_) + 1, 0);
    for (size_t k = 0; k < trip_.size();) {
        size_t k2 = k;
        double acc = 0.0;
        while (k2 < trip_.size() && trip_[k2].i == trip_[k].i && trip_[k2].j == trip_[k].j) acc += trip_[k2++].v;
        if (acc != 0.0) {
            A.col.push_back(trip_[k].j);
            A.val.push_back(acc);
            A.row_ptr[static_cast<size_t>(trip_[k].i) + 1]++;
        }
        k = k2;
    }
    for (size_t i = 1; i < A.row_ptr.size(); ++i) A.row_ptr[i] += A.row_ptr[i - 1];
    return A;
}

namespace {

double nrm2(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
    for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

} // namespace

void tridiag_eigensystem(std::vector<double>& d, std::vector<double>& e, std::vector<std::vector<double>>& z) {
    int n = static_cast<int>(d.size());
    e.push_back(0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                double dd = std::fabs(d[static_cast<size_t>(m)]) + std::fabs(d[static_cast<size_t>(m) + 1]);
                if (std::fabs(e[static_cast<size_t>(m)]) <= 1e-300 + 1e-15 * dd) break;
            }
            if (m != l) {
                require(iter++ < 50, Errc::no_convergence, "tridiagonal QL stalled");
                double g = (d[static_cast<size_t>(l) + 1] - d[static_cast<size_t>(l)]) / (2.0 * e[static_cast<size_t>(l)]);
                double r = std::hypot(g, 1.0);
                g = d[static_cast<size_t>(m)] - d[static_cast<size_t>(l)] +
                    e[static_cast<size_t>(l)] / (g + (g >= 0 ? std::fabs(r) : -std::fabs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                int i = m - 1;
                for (; i >= l; --i) {
                    double f = s * e[static_cast<size_t>(i)];
                    double b = c * e[static_cast<size_t>(i)];
                    r = std::hypot(f, g);
                    e[static_cast<size_t>(i) + 1] = r;
                    if (r == 0.0) {
                        d[static_cast<size_t>(i) + 1] -= p;
                        e[static_cast<size_t>(m)] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[static_cast<size_t>(i) + 1] - p;
                    r = (d[static_cast<size_t>(i)] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[static_cast<size_t>(i) + 1] = g + p;
                    g = c * r - b;
                    for (auto& zr : z) {
                        double f2 = zr[static_cast<size_t>(i) + 1];
                        zr[static_cast<size_t>(i) + 1] = s * zr[static_cast<size_t>(i)] + c * f2;
                        zr[static_cast<size_t>(i)] = c * zr[static_cast<size_t>(i)] - s * f2;
                    }
                }
                if (r == 0.0 && i >= l) continue;
                d[static_cast<size_t>(l)] -= p;
                e[static_cast<size_t>(l)] = g;
                e[static_cast<size_t>(m)] = 0.0;
            }
        } while (m != l);
    }
    e.pop_back();
}

EigenResult lanczos_smallest(const SparseOperator& A, double tol, uint64_t seed, int max_basis, int max_restarts) {
    require(A.dim >= 1, Errc::invalid_argument, "empty operator");
    const auto n = static_cast<size_t>(A.dim);
    int m_max = static_cast<int>(std::min<int64_t>(max_basis, A.dim));

    // Deterministic start vector.
    std::vector<double> v0(n);
    {
        Rng rng(seed ^ 0x1a2b3c4d5e6f7788ULL);
        for (auto& x : v0) x = rng.normal();
        double s = nrm2(v0);
        for (auto& x : v0) x /= s;
    }

    EigenResult out;
    for (int restart = 0; restart <= max_restarts; ++restart) {
        std::vector<std::vector<double>> basis;
        basis.reserve(static_cast<size_t>(m_max));
        std::vector<double> alpha, beta;
        std::vector<double> w(n), v = v0;

        for (int j = 0; j < m_max; ++j) {
            basis.push_back(v);
            A.matvec(v.data(), w.data());
            double a = dot(w, v);
            alpha.push_back(a);
            axpy(-a, v, w);
            if (j > 0) axpy(-beta.back(), basis[static_cast<size_t>(j) - 1], w);
            // full reorthogonalization, twice
            for (int pass = 0; pass < 2; ++pass)
                for (const auto& q : basis) axpy(-dot(w, q), q, w);
            double b = nrm2(w);
            if (b < 1e-13) break; // invariant subspace found
            beta.push_back(b);
            for (size_t i = 0; i < n; ++i) v[i] = w[i] / b;
        }
        if (!beta.empty() && beta.size() == basis.size()) beta.pop_back();

        // Smallest Ritz pair of the tridiagonal.
        std::vector<double> d = alpha, e = beta;
        std::vector<std::vector<double>> z(d.size(), std::vector<double>(d.size(), 0.0));
        for (size_t i = 0; i < d.size(); ++i) z[i][i] = 1.0;
        tridiag_eigensystem(d, e, z);
        size_t kmin = 0;
        for (size_t k = 1; k < d.size(); ++k)
            if (d[k] < d[kmin]) kmin = k;

        std::vector<double> x(n, 0.0);
        for (size_t j = 0; j < basis.size(); ++j) axpy(z[j][kmin], basis[j], x);
        double xn = nrm2(x);
        for (auto& t : x) t /= xn;

        A.matvec(x.data(), w.data());
        axpy(-d[kmin], x, w);
        double res = nrm2(w);
        out.value = d[kmin];
        out.vector = x;
        out.residual = res;
        out.iterations += static_cast<int>(basis.size());
        if (res <= tol) return out;
        v0 = x; // restart from the best Ritz vector
    }
    fail(Errc::no_convergence, "Lanczos residual " + std::to_string(out.residual) + " above tolerance");
}

namespace {

/// Banded LDL^T (no pivoting; intended for positive definite operators).
/// Lower band stored row-major: entry (i, j), j in [i-bw, i], lives at
/// m[i*(bw+1) + (j - i + bw)]. After factor(), off-diagonals hold unit-lower
/// L and d holds the pivots.
struct BandedFactor {
    int64_t n = 0, bw = 0;
    std::vector<double> m;
    std::vector<double> d;

    double& at(int64_t i, int64_t j) { return m[static_cast<size_t>(i * (bw + 1) + (j - i + bw))]; }
    double at(int64_t i, int64_t j) const { return m[static_cast<size_t>(i * (bw + 1) + (j - i + bw))]; }

    void factor(const SparseOperator& A) {
        n = A.dim;
        bw = A.bandwidth();
        m.assign(static_cast<size_t>(n * (bw + 1)), 0.0);
        d.assign(static_cast<size_t>(n), 0.0);
        for (int64_t i = 0; i < n; ++i)
            for (int64_t k = A.row_ptr[static_cast<size_t>(i)]; k < A.row_ptr[static_cast<size_t>(i) + 1]; ++k) {
                int64_t j = A.col[static_cast<size_t>(k)];
                if (j <= i) at(i, j) = A.val[static_cast<size_t>(k)];
            }
        for (int64_t j = 0; j < n; ++j) {
            double dj = at(j, j);
            for (int64_t k = std::max<int64_t>(0, j - bw); k < j; ++k) {
                double l = at(j, k);
                dj -= l * l * d[static_cast<size_t>(k)];
            }
            require(dj > 0.0, Errc::no_convergence, "banded factorization hit a non-positive pivot");
            d[static_cast<size_t>(j)] = dj;
            int64_t iend = std::min(n, j + bw + 1);
            for (int64_t i = j + 1; i < iend; ++i) {
                double s = at(i, j);
                for (int64_t k = std::max<int64_t>(0, i - bw); k < j; ++k)
                    s -= at(i, k) * at(j, k) * d[static_cast<size_t>(k)];
                at(i, j) = s / dj;
            }
        }
    }

    void solve(std::vector<double>& x) const {
        for (int64_t i = 0; i < n; ++i) {
            double s = x[static_cast<size_t>(i)];
            for (int64_t j = std::max<int64_t>(0, i - bw); j < i; ++j) s -= at(i, j) * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] = s;
        }
        for (int64_t i = 0; i < n; ++i) x[static_cast<size_t>(i)] /= d[static_cast<size_t>(i)];
        for (int64_t i = n - 1; i >= 0; --i) {
            double s = x[static_cast<size_t>(i)];
            int64_t jend = std::min(n, i + bw + 1);
            for (int64_t j = i + 1; j < jend; ++j) s -= at(j, i) * x[static_cast<size_t>(j)];
            x[static_cast<size_t>(i)] = s;
        }
    }
};

} // namespace

EigenResult banded_inverse_iteration(const SparseOperator& A, double tol, int max_iter) {
    require(A.dim >= 1, Errc::invalid_argument, "empty operator");
    const auto n = static_cast<size_t>(A.dim);
    BandedFactor F;
    F.factor(A);

    std::vector<double> x(n, 1.0), w(n);
    double s = nrm2(x);
    for (auto& t : x) t /= s;

    EigenResult out;
    double lambda = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        F.solve(x);
        double xn = nrm2(x);
        for (auto& t : x) t /= xn;
        A.matvec(x.data(), w.data());
        lambda = 0.0;
        for (size_t i = 0; i < n; ++i) lambda += w[i] * x[i];
        double res = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double r = w[i] - lambda * x[i];
            res += r * r;
        }
        res = std::sqrt(res);
        out.value = lambda;
        out.residual = res;
        out.iterations = it + 1;
        if (res <= tol) {
            out.vector = std::move(x);
            return out;
        }
    }
    fail(Errc::no_convergence, "inverse iteration residual " + std::to_string(out.residual) + " above tolerance");
}

double tridiag_smallest_eigenvalue(const std::vector<double>& d, const std::vector<double>& e) {
    size_t n = d.size();
    require(n >= 1 && e.size() == n - 1, Errc::invalid_argument, "bad tridiagonal sizes");
    // Gershgorin bracket.
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (size_t i = 0; i < n; ++i) {
        double r = (i > 0 ? std::fabs(e[i - 1]) : 0.0) + (i + 1 < n ? std::fabs(e[i]) : 0.0);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    // Sturm count: number of eigenvalues < x.
    auto count_below = [&](double x) {
        int cnt = 0;
        double q = d[0] - x;
        if (q < 0) ++cnt;
        for (size_t i = 1; i < n; ++i) {
            double denom = (q == 0.0) ? 1e-300 : q;
            q = d[i] - x - e[i - 1] * e[i - 1] / denom;
            if (q < 0) ++cnt;
        }
        return cnt;
    };
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1)
            hi = mid;
        else
            lo = mid;
        if (hi - lo < 1e-14 * std::max(1.0, std::fabs(hi))) break;
    }
    return 0.5 * (lo + hi);
}

} // namespace agml
