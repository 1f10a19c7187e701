#include "agmonlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "agmonlab/rng.hpp"
#include "agmonlab/sparse.hpp"

namespace agml {

namespace {

struct BatchSums {
    double sum = 0.0;
    double sum2 = 0.0;
    int64_t n = 0;
    int64_t aux = 0; // estimator-specific counter (e.g. grid exits)
};

/// Run `paths` samples split into fixed-size batches; each batch draws its
/// own RNG stream from (seed, batch index) so the reduction is independent
/// of the thread schedule.
template <typename Body>
BatchSums run_batches(const McConfig& cfg, Body body) {
    const int64_t batch_size = 4096;
    const int64_t nbatch = (cfg.paths + batch_size - 1) / batch_size;
    std::vector<BatchSums> per(static_cast<size_t>(nbatch));
    int threads = std::max(1, cfg.threads);
    auto work = [&](int t) {
        for (int64_t b = t; b < nbatch; b += threads) {
            Rng rng = Rng::stream(cfg.seed, static_cast<uint64_t>(b));
            int64_t count = std::min(batch_size, cfg.paths - b * batch_size);
            BatchSums& s = per[static_cast<size_t>(b)];
            for (int64_t i = 0; i < count; ++i) {
                double v = body(rng, s);
                s.sum += v;
                s.sum2 += v * v;
                s.n += 1;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
        for (auto& th : pool) th.join();
    }
    BatchSums total;
    for (const auto& s : per) {
        total.sum += s.sum;
        total.sum2 += s.sum2;
        total.n += s.n;
        total.aux += s.aux;
    }
    return total;
}

McEstimate finish(const BatchSums& s, uint64_t seed, std::string tag) {
    McEstimate e;
    e.samples = s.n;
    e.seed = seed;
    e.tag = std::move(tag);
    double mean = s.sum / static_cast<double>(s.n);
    double var = std::max(0.0, s.sum2 / static_cast<double>(s.n) - mean * mean);
    e.value = mean;
    e.stderr_ = std::sqrt(var / static_cast<double>(s.n));
    return e;
}

} // namespace

McEstimate ball_survival(double T, const McConfig& cfg) {
    require(T > 0.0, Errc::invalid_argument, "horizon must be positive");
    require(cfg.dt > 0.0 && cfg.paths >= 1, Errc::invalid_argument, "bad Monte Carlo configuration");
    const auto nsteps = static_cast<int64_t>(std::ceil(T / cfg.dt - 1e-12));
    const int d = cfg.dim;
    require(d >= 1 && d <= 3, Errc::invalid_argument, "dimension must be 1..3");

    auto sums = run_batches(cfg, [&](Rng& rng, BatchSums&) -> double {
        double B[3] = {0, 0, 0};
        double dist_prev = 1.0; // distance to the sphere from the origin
        for (int64_t s = 0; s < nsteps; ++s) {
            double dt = std::min(cfg.dt, T - static_cast<double>(s) * cfg.dt);
            double sq = std::sqrt(dt);
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                B[a] += sq * rng.normal();
                r2 += B[a] * B[a];
            }
            double r = std::sqrt(r2);
            if (r >= 1.0) return 0.0;
            double dist_new = 1.0 - r;
            // Brownian bridge crossing probability against the locally flat
            // boundary: exp(-2 d1 d2 / dt).
            double pcross = std::exp(-2.0 * dist_prev * dist_new / dt);
            if (rng.uniform() < pcross) return 0.0;
            dist_prev = dist_new;
        }
        return 1.0;
    });
    return finish(sums, cfg.seed, "ball_survival");
}

double dirichlet_tau(int dim) {
    require(dim >= 1 && dim <= 3, Errc::invalid_argument, "dimension must be 1..3");
    const double h = 1e-4;
    const auto n = static_cast<size_t>(std::llround(1.0 / h));
    // Cell-centered finite volume on (0,1): r_i = (i + 1/2) h, faces at i h.
    // Radial part of -1/2 Laplacian: -(1/2) r^{1-d} d/dr (r^{d-1} d/dr).
    // Symmetrized with weights w_i = r_i^{d-1}. The inner face flux vanishes:
    // by the face measure for d >= 2, by even reflection for d = 1.
    std::vector<double> diag(n, 0.0), off(n - 1, 0.0);
    auto facew = [&](double r) { return std::pow(r, dim - 1); };
    auto cellw = [&](size_t i) { return std::pow((static_cast<double>(i) + 0.5) * h, dim - 1); };
    for (size_t i = 0; i < n; ++i) {
        double wi = cellw(i);
        double flux_sum = 0.0;
        if (i + 1 < n) {
            double wf = facew(static_cast<double>(i + 1) * h);
            flux_sum += wf;
            off[i] = -0.5 * wf / (h * h * std::sqrt(wi * cellw(i + 1)));
        } else {
            // Dirichlet at the outer face: ghost value -f_n mirrors through 0.
            flux_sum += 2.0 * facew(1.0);
        }
        if (i > 0) flux_sum += facew(static_cast<double>(i) * h);
        diag[i] = 0.5 * flux_sum / (h * h * wi);
    }
    return tridiag_smallest_eigenvalue(diag, off);
}

McEstimate tube_probability(const TimedPath& q, double radius, const McConfig& cfg) {
    require(radius > 0.0, Errc::invalid_argument, "tube radius must be positive");
    require(q.nodes.size() >= 2, Errc::invalid_argument, "guide path needs nodes");
    const double T = q.horizon;
    const auto nsteps = static_cast<int64_t>(std::ceil(T / cfg.dt - 1e-12));
    const int d = cfg.dim;
    const Vec3 x = q.nodes.front();

    // Guide path sampled at step times once.
    std::vector<Vec3> centers(static_cast<size_t>(nsteps) + 1);
    {
        size_t seg = 0;
        for (int64_t s = 0; s <= nsteps; ++s) {
            double t = std::min(T, static_cast<double>(s) * cfg.dt);
            while (seg + 2 < q.times.size() && q.times[seg + 1] < t) ++seg;
            double span = q.times[seg + 1] - q.times[seg];
            double u = span > 0.0 ? (t - q.times[seg]) / span : 0.0;
            centers[static_cast<size_t>(s)] = q.nodes[seg] + (q.nodes[seg + 1] - q.nodes[seg]) * std::clamp(u, 0.0, 1.0);
        }
    }

    auto sums = run_batches(cfg, [&](Rng& rng, BatchSums&) -> double {
        double B[3] = {0, 0, 0};
        for (int64_t s = 1; s <= nsteps; ++s) {
            double t_prev = static_cast<double>(s - 1) * cfg.dt;
            double dt = std::min(cfg.dt, T - t_prev);
            double sq = std::sqrt(dt);
            const Vec3& c = centers[static_cast<size_t>(s)];
            double r2 = 0.0;
            for (int a = 0; a < d; ++a) {
                B[a] += sq * rng.normal();
                double dev = B[a] + x[a] - c[a];
                r2 += dev * dev;
            }
            if (r2 > radius * radius) return 0.0;
        }
        return 1.0;
    });
    return finish(sums, cfg.seed, "tube_probability");
}

double kinetic_energy(const TimedPath& q) {
    double acc = 0.0;
    for (size_t i = 1; i < q.nodes.size(); ++i) {
        double dt = q.times[i] - q.times[i - 1];
        acc += (q.nodes[i] - q.nodes[i - 1]).norm2() / dt;
    }
    return acc;
}

GirsanovCheck girsanov_check(const TimedPath& q, const McConfig& cfg) {
    GirsanovCheck out;
    McConfig tube_cfg = cfg;
    out.tube = tube_probability(q, 1.0, tube_cfg);
    McConfig ball_cfg = cfg;
    ball_cfg.seed = cfg.seed ^ 0x5bd1e995u; // independent stream for Q_T
    out.survival = ball_survival(q.horizon, ball_cfg);
    out.kinetic_factor = std::exp(-0.5 * kinetic_energy(q));
    return out;
}

McEstimate fk_ground_state(const Potential& p, const Vec3& x, double T, double energy, const ScalarField& psi,
                           const McConfig& cfg) {
    require(T > 0.0, Errc::invalid_argument, "horizon must be positive");
    const auto nsteps = static_cast<int64_t>(std::ceil(T / cfg.dt - 1e-12));
    const int d = cfg.dim;
    require(d == psi.grid.dim, Errc::grid_mismatch, "Monte Carlo dimension must match the psi grid");

    auto sums = run_batches(cfg, [&](Rng& rng, BatchSums& s) -> double {
        double B[3] = {0, 0, 0};
        double pot_int = 0.0;
        Vec3 pos = x;
        bool exited = false;
        for (int64_t st = 0; st < nsteps; ++st) {
            double t_prev = static_cast<double>(st) * cfg.dt;
            double dt = std::min(cfg.dt, T - t_prev);
            // left-point rule: V at the step start
            pot_int += p.eval(pos) * dt;
            double sq = std::sqrt(dt);
            for (int a = 0; a < d; ++a) {
                B[a] += sq * rng.normal();
                pos[a] = x[a] + B[a];
            }
            if (!exited && !psi.contains(pos)) exited = true;
        }
        if (exited) {
            s.aux += 1;
            return 0.0; // Dirichlet consistency: absorbed paths contribute zero
        }
        return std::exp(-pot_int + T * energy) * psi.interp(pos);
    });
    double exit_rate = static_cast<double>(sums.aux) / static_cast<double>(sums.n);
    if (exit_rate > 0.01)
        fail(Errc::grid_exit_rate_high, "grid exit rate " + std::to_string(exit_rate) + " exceeds 1%");
    return finish(sums, cfg.seed, "fk_ground_state");
}

double certificate_alpha(double chi1, double sup_norm) {
    require(chi1 > 0.0, Errc::invalid_argument, "chi(1) must be positive");
    return chi1 * std::exp(-sup_norm * sup_norm / (2.0 * chi1 * chi1));
}

double certificate_value(const CertificateInput& ci, const Potential& vcirc) {
    require(ci.p > 1.0, Errc::invalid_argument, "Hoelder exponent must exceed 1");
    require(ci.q.nodes.size() >= 2, Errc::invalid_argument, "certificate path needs nodes");
    require(dist(ci.q.nodes.front(), ci.x) < 1e-9, Errc::invalid_argument, "path must start at x");
    require(ci.q.nodes.back().norm() < 1e-9, Errc::invalid_argument, "path must end at the origin");

    double T = ci.q.horizon;
    double kin = kinetic_energy(ci.q);
    // trapezoid of Vcirc along the path
    double pot = 0.0;
    double v_prev = vcirc.eval(ci.q.nodes.front());
    for (size_t i = 1; i < ci.q.nodes.size(); ++i) {
        double vi = vcirc.eval(ci.q.nodes[i]);
        pot += 0.5 * (v_prev + vi) * (ci.q.times[i] - ci.q.times[i - 1]);
        v_prev = vi;
    }
    double field_penalty = ci.c * (ci.g * ci.g + std::pow(ci.g, 4) / (ci.p - 1.0)) * std::max(1.0, T);
    double expo = -0.5 * ci.p * kin - pot + T * (ci.energy - ci.p * ci.tau) - field_penalty;
    return ci.alpha / std::pow(ci.C, ci.p - 1.0) * std::exp(expo);
}

} // namespace agml
