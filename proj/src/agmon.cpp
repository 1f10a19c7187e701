#include "agmonlab/agmon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace agml {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct HeapEntry {
    double value;
    int64_t node;
    bool operator>(const HeapEntry& o) const { return value > o.value; }
};

using MinHeap = std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<HeapEntry>>;

} // namespace

DistanceField solve_eikonal(const ScalarField& v, const Vec3& source) {
    const GridSpec& g = v.grid;
    const int64_t n = g.num_nodes();
    const int dim = g.dim;
    auto src_idx = g.snap(source);
    const int64_t src = g.flat_index(src_idx);
    const Vec3 src_pos = g.node_coord(src_idx);
    const double h = g.h;

    // Source factoring: rho = D u with D(x) = |x - x0|. Discretizing grad u
    // (smooth near the source) with the analytic grad D removes the O(1)
    // relative error a planar-front update makes against the strongly curved
    // wavefront around a point source.
    std::vector<double> rho(static_cast<size_t>(n), kInf);
    std::vector<uint8_t> accepted(static_cast<size_t>(n), 0);

    int64_t stride[3] = {0, 0, 0};
    {
        int64_t s = 1;
        for (int a = dim - 1; a >= 0; --a) {
            stride[a] = s;
            s *= g.shape()[static_cast<size_t>(a)];
        }
    }

    auto dist_to_src = [&](int64_t node) { return dist(g.node_coord(g.unflatten(node)), src_pos); };

    MinHeap heap;
    rho[static_cast<size_t>(src)] = 0.0;
    accepted[static_cast<size_t>(src)] = 1;

    // Seed the first rings exactly (ray quadrature); the factored update is
    // singular at the source itself.
    {
        const double r_init = 2.5 * h;
        const auto reach = static_cast<int64_t>(std::ceil(r_init / h));
        static const double gx[5] = {0.046910077030668, 0.230765344947158, 0.5, 0.769234655052842,
                                     0.953089922969332};
        static const double gw[5] = {0.118463442528095, 0.239314335249683, 0.284444444444444, 0.239314335249683,
                                     0.118463442528095};
        std::array<int64_t, 3> lo{0, 0, 0}, hi{0, 0, 0};
        for (int a = 0; a < dim; ++a) {
            lo[static_cast<size_t>(a)] = std::max<int64_t>(0, src_idx[static_cast<size_t>(a)] - reach);
            hi[static_cast<size_t>(a)] =
                std::min<int64_t>(g.shape()[static_cast<size_t>(a)] - 1, src_idx[static_cast<size_t>(a)] + reach);
        }
        std::array<int64_t, 3> idx = lo;
        while (true) {
            Vec3 y = g.node_coord(idx);
            double r = dist(y, src_pos);
            int64_t node = g.flat_index(idx);
            if (node != src && r <= r_init + 1e-12) {
                double acc = 0.0;
                for (int q = 0; q < 5; ++q) {
                    Vec3 z = src_pos + (y - src_pos) * gx[q];
                    acc += gw[q] * std::sqrt(2.0 * v.interp(z));
                }
                rho[static_cast<size_t>(node)] = r * acc;
                accepted[static_cast<size_t>(node)] = 1; // frozen seed
                heap.push({rho[static_cast<size_t>(node)], node});
            }
            int a = dim - 1;
            while (a >= 0 && ++idx[static_cast<size_t>(a)] > hi[static_cast<size_t>(a)]) {
                idx[static_cast<size_t>(a)] = lo[static_cast<size_t>(a)];
                --a;
            }
            if (a < 0) break;
        }
    }

    auto update_neighbor = [&](int64_t node, const std::array<int64_t, 3>& idx) {
        Vec3 x = g.node_coord(idx);
        double D = dist(x, src_pos);
        if (D == 0.0) return;
        Vec3 nvec = (x - src_pos) * (1.0 / D);

        struct Arm {
            double P, Q, rho_a;
        };
        std::vector<Arm> arms;
        for (int a = 0; a < dim; ++a) {
            double best = kInf;
            double sgn = 0.0;
            int64_t nb_lo = node - stride[a], nb_hi = node + stride[a];
            if (idx[static_cast<size_t>(a)] > 0 && accepted[static_cast<size_t>(nb_lo)] &&
                rho[static_cast<size_t>(nb_lo)] < best) {
                best = rho[static_cast<size_t>(nb_lo)];
                sgn = 1.0;
            }
            if (idx[static_cast<size_t>(a)] + 1 < g.shape()[static_cast<size_t>(a)] &&
                accepted[static_cast<size_t>(nb_hi)] && rho[static_cast<size_t>(nb_hi)] < best) {
                best = rho[static_cast<size_t>(nb_hi)];
                sgn = -1.0;
            }
            if (!std::isfinite(best)) continue;
            int64_t nb = (sgn > 0) ? nb_lo : nb_hi;
            double Dn = dist_to_src(nb);
            if (Dn <= 0.0) continue; // the source only feeds the seeded rings
            double u_a = best / Dn;
            arms.push_back({nvec[a] + sgn * D / h, sgn * (D / h) * u_a, best});
        }
        if (arms.empty()) return;
        std::sort(arms.begin(), arms.end(), [](const Arm& a, const Arm& b) { return a.rho_a < b.rho_a; });

        const double twoV = 2.0 * v.values[static_cast<size_t>(node)];
        double best_rho = kInf;
        for (size_t k = 1; k <= arms.size(); ++k) {
            double A = 0.0, B = 0.0, C = -twoV;
            for (size_t j = 0; j < k; ++j) {
                A += arms[j].P * arms[j].P;
                B += arms[j].P * arms[j].Q;
                C += arms[j].Q * arms[j].Q;
            }
            if (A <= 0.0) continue;
            double disc = B * B - A * C;
            if (disc < 0.0) continue;
            double u = (B + std::sqrt(disc)) / A;
            double cand = D * u;
            if (cand + 1e-12 * (1.0 + cand) < arms[k - 1].rho_a) continue; // upwinding violated
            if (k < arms.size() && cand > arms[k].rho_a + 1e-12) continue; // next arm should join
            best_rho = std::min(best_rho, cand);
        }
        if (!std::isfinite(best_rho)) {
            // no admissible factored stencil: one-arm unfactored update
            best_rho = arms[0].rho_a + h * std::sqrt(twoV);
        }
        if (best_rho < rho[static_cast<size_t>(node)]) {
            rho[static_cast<size_t>(node)] = best_rho;
            heap.push({best_rho, node});
        }
    };

    std::vector<uint8_t> processed(static_cast<size_t>(n), 0);
    heap.push({0.0, src});
    double last_accepted = 0.0;
    while (!heap.empty()) {
        auto [val, node] = heap.top();
        heap.pop();
        if (processed[static_cast<size_t>(node)]) continue;
        if (!accepted[static_cast<size_t>(node)]) {
            if (val > rho[static_cast<size_t>(node)] + 1e-15) continue; // stale entry
            if (val < last_accepted - 1e-9 * (1.0 + last_accepted))
                fail(Errc::grid_too_coarse, "fast marching front ordering violated");
            accepted[static_cast<size_t>(node)] = 1;
        }
        processed[static_cast<size_t>(node)] = 1;
        last_accepted = std::max(last_accepted, rho[static_cast<size_t>(node)]);
        auto idx = g.unflatten(node);
        for (int a = 0; a < dim; ++a) {
            if (idx[static_cast<size_t>(a)] > 0) {
                int64_t nb = node - stride[a];
                if (!accepted[static_cast<size_t>(nb)]) {
                    auto nidx = idx;
                    nidx[static_cast<size_t>(a)] -= 1;
                    update_neighbor(nb, nidx);
                }
            }
            if (idx[static_cast<size_t>(a)] + 1 < g.shape()[static_cast<size_t>(a)]) {
                int64_t nb = node + stride[a];
                if (!accepted[static_cast<size_t>(nb)]) {
                    auto nidx = idx;
                    nidx[static_cast<size_t>(a)] += 1;
                    update_neighbor(nb, nidx);
                }
            }
        }
    }

    DistanceField df;
    df.rho = ScalarField(g);
    df.rho.values = std::move(rho);
    df.source = g.node_coord(src_idx);
    df.solver = "fast-marching";
    return df;
}

DistanceField dijkstra_oracle(const ScalarField& v, const Vec3& source, int neighbor_order) {
    require(neighbor_order >= 1 && neighbor_order <= 6, Errc::invalid_argument,
            "dijkstra neighbor order must be in 1..6");
    const GridSpec& g = v.grid;
    const int dim = g.dim;
    auto src_idx = g.snap(source);
    const int64_t src = g.flat_index(src_idx);

    // Coprime offsets within the order box; redundant non-coprime offsets are
    // collinear with shorter ones and never improve a path.
    struct Offset {
        int d[3];
        double len;
    };
    std::vector<Offset> offsets;
    int r = neighbor_order;
    auto gcd3 = [](int a, int b, int c) {
        auto gcd = [](int x, int y) {
            x = std::abs(x);
            y = std::abs(y);
            while (y) {
                int t = x % y;
                x = y;
                y = t;
            }
            return x;
        };
        return gcd(gcd(a, b), c);
    };
    int rx = r, ry = dim >= 2 ? r : 0, rz = dim >= 3 ? r : 0;
    for (int a = -rx; a <= rx; ++a)
        for (int b = -ry; b <= ry; ++b)
            for (int c = -rz; c <= rz; ++c) {
                if (!a && !b && !c) continue;
                if (gcd3(a, b, c) != 1) continue;
                double len = std::sqrt(static_cast<double>(a) * a + static_cast<double>(b) * b +
                                       static_cast<double>(c) * c) * g.h;
                offsets.push_back({{a, b, c}, len});
            }

    std::vector<double> dist(static_cast<size_t>(g.num_nodes()), kInf);
    std::vector<uint8_t> done(static_cast<size_t>(g.num_nodes()), 0);
    MinHeap heap;
    dist[static_cast<size_t>(src)] = 0.0;
    heap.push({0.0, src});

    while (!heap.empty()) {
        auto [val, node] = heap.top();
        heap.pop();
        if (done[static_cast<size_t>(node)]) continue;
        done[static_cast<size_t>(node)] = 1;
        auto idx = g.unflatten(node);
        Vec3 xp = g.node_coord(idx);
        for (const auto& off : offsets) {
            std::array<int64_t, 3> nidx = idx;
            for (int a = 0; a < dim; ++a) nidx[static_cast<size_t>(a)] += off.d[a];
            if (!g.in_grid(nidx)) continue;
            int64_t nb = g.flat_index(nidx);
            if (done[static_cast<size_t>(nb)]) continue;
            Vec3 xq = g.node_coord(nidx);
            Vec3 mid = (xp + xq) * 0.5;
            double w = off.len * std::sqrt(2.0 * v.interp(mid));
            double nd = val + w;
            if (nd < dist[static_cast<size_t>(nb)]) {
                dist[static_cast<size_t>(nb)] = nd;
                heap.push({nd, nb});
            }
        }
    }

    DistanceField df;
    df.rho = ScalarField(g);
    df.rho.values = std::move(dist);
    df.source = g.node_coord(src_idx);
    df.solver = "dijkstra-oracle";
    return df;
}

double path_length(const Potential& p, const Geodesic& gamma) {
    require(gamma.nodes.size() >= 2, Errc::invalid_argument, "path needs at least two nodes");
    double total = 0.0;
    double f_prev = std::sqrt(2.0 * p.eval(gamma.nodes[0]));
    for (size_t i = 1; i < gamma.nodes.size(); ++i) {
        double f = std::sqrt(2.0 * p.eval(gamma.nodes[i]));
        double seg = dist(gamma.nodes[i], gamma.nodes[i - 1]);
        total += 0.5 * (f_prev + f) * seg;
        f_prev = f;
    }
    return total;
}

double action(const Potential& p, const TimedPath& q) {
    require(q.nodes.size() >= 2 && q.nodes.size() == q.times.size(), Errc::invalid_argument,
            "timed path needs matching nodes and times");
    double total = 0.0;
    double v_prev = p.eval(q.nodes[0]);
    for (size_t i = 1; i < q.nodes.size(); ++i) {
        double dt = q.times[i] - q.times[i - 1];
        require(dt > 0.0, Errc::invalid_argument, "times must be strictly increasing");
        double seg2 = (q.nodes[i] - q.nodes[i - 1]).norm2();
        double vi = p.eval(q.nodes[i]);
        total += 0.5 * seg2 / dt + 0.5 * (v_prev + vi) * dt;
        v_prev = vi;
    }
    return total;
}

Geodesic respace_constant_speed(const Potential& p, const Geodesic& gamma) {
    require(gamma.nodes.size() >= 2, Errc::invalid_argument, "path needs at least two nodes");
    size_t n = gamma.nodes.size();
    Geodesic out = gamma;
    // Re-sampling measures metric length along the current polyline, so one
    // pass is only approximate when the input is rough; iterate to a fixed
    // point (smooth inputs settle in one or two passes).
    for (int pass = 0; pass < 64; ++pass) {
        const auto& nodes = out.nodes;
        std::vector<double> cum(n, 0.0);
        std::vector<double> f(n);
        for (size_t i = 0; i < n; ++i) f[i] = std::sqrt(2.0 * p.eval(nodes[i]));
        for (size_t i = 1; i < n; ++i) cum[i] = cum[i - 1] + 0.5 * (f[i - 1] + f[i]) * dist(nodes[i], nodes[i - 1]);
        double total = cum[n - 1];
        if (total <= 0.0) {
            out.nodes.assign(n, nodes.front());
            out.length = 0.0;
            return out;
        }
        double mean = total / static_cast<double>(n - 1);
        double dev = 0.0;
        for (size_t i = 1; i < n; ++i) dev = std::max(dev, std::fabs(cum[i] - cum[i - 1] - mean));
        if (dev <= 1e-9 * mean) break;
        std::vector<Vec3> next(n);
        next.front() = nodes.front();
        next.back() = nodes.back();
        size_t seg = 0;
        for (size_t i = 1; i + 1 < n; ++i) {
            double target = mean * static_cast<double>(i);
            while (seg + 2 < n && cum[seg + 1] < target) ++seg;
            double span = cum[seg + 1] - cum[seg];
            double t = span > 0.0 ? (target - cum[seg]) / span : 0.0;
            next[i] = nodes[seg] + (nodes[seg + 1] - nodes[seg]) * t;
        }
        out.nodes = std::move(next);
    }
    out.length = path_length(p, out);
    return out;
}

Geodesic straight_path(const Potential& p, const Vec3& y, const Vec3& x, int interior_nodes) {
    Geodesic gamma;
    int n = interior_nodes + 2;
    gamma.nodes.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(n - 1);
        gamma.nodes[static_cast<size_t>(i)] = y + (x - y) * t;
    }
    gamma.length = path_length(p, gamma);
    return gamma;
}

namespace {

/// Gradient of the trapezoidal length functional with respect to the interior
/// node positions.
void length_gradient(const Potential& p, const std::vector<Vec3>& nodes, std::vector<Vec3>& grad) {
    size_t n = nodes.size();
    grad.assign(n, Vec3{});
    std::vector<double> f(n), seg(n - 1);
    std::vector<Vec3> dir(n - 1);
    for (size_t i = 0; i < n; ++i) f[i] = std::sqrt(2.0 * p.eval(nodes[i]));
    for (size_t i = 0; i + 1 < n; ++i) {
        Vec3 d = nodes[i + 1] - nodes[i];
        seg[i] = d.norm();
        dir[i] = seg[i] > 0.0 ? d * (1.0 / seg[i]) : Vec3{};
    }
    for (size_t i = 1; i + 1 < n; ++i) {
        // d f_i / d a_i = grad V / sqrt(2 V) = grad V / f_i
        Vec3 gf = p.grad(nodes[i]) * (f[i] > 0.0 ? 1.0 / f[i] : 0.0);
        Vec3 g = gf * (0.5 * (seg[i - 1] + seg[i]));
        g += dir[i - 1] * (0.5 * (f[i - 1] + f[i]));
        g += dir[i] * (-0.5 * (f[i] + f[i + 1]));
        grad[i] = g;
    }
}

} // namespace

namespace {

/// Linear resample of a polyline to `count` nodes by Euclidean arc length.
std::vector<Vec3> resample_polyline(const std::vector<Vec3>& nodes, size_t count) {
    size_t n = nodes.size();
    std::vector<double> cum(n, 0.0);
    for (size_t i = 1; i < n; ++i) cum[i] = cum[i - 1] + dist(nodes[i], nodes[i - 1]);
    double total = cum[n - 1];
    std::vector<Vec3> out(count);
    out.front() = nodes.front();
    out.back() = nodes.back();
    size_t seg = 0;
    for (size_t i = 1; i + 1 < count; ++i) {
        double target = total * static_cast<double>(i) / static_cast<double>(count - 1);
        while (seg + 2 < n && cum[seg + 1] < target) ++seg;
        double span = cum[seg + 1] - cum[seg];
        double t = span > 0.0 ? (target - cum[seg]) / span : 0.0;
        out[i] = nodes[seg] + (nodes[seg + 1] - nodes[seg]) * t;
    }
    return out;
}

} // namespace

Geodesic minimize_path(const Potential& p, const Vec3& x, const Vec3& y, const Geodesic& init,
                       const MinimizeOpts& opts) {
    require(!init.nodes.empty(), Errc::invalid_argument, "empty initial path");
    require(dist(init.nodes.front(), y) < 1e-9 && dist(init.nodes.back(), x) < 1e-9, Errc::invalid_argument,
            "initial path must connect y to x");
    if (dist(x, y) == 0.0) {
        Geodesic out;
        out.nodes.assign(2, x);
        out.length = 0.0;
        return out;
    }

    // Coarse-to-fine schedule: gradient descent on the node polyline is
    // stiff at the target resolution, so converge the geometry on few nodes
    // first and refine.
    std::vector<int> levels;
    for (int c = std::min(8, opts.interior_nodes);; c *= 2) {
        levels.push_back(std::min(c, opts.interior_nodes));
        if (levels.back() == opts.interior_nodes) break;
    }

    Geodesic cur = init;
    bool converged = false;
    std::vector<Vec3> grad;
    for (int nodes_level : levels) {
        cur.nodes = resample_polyline(cur.nodes, static_cast<size_t>(nodes_level) + 2);
        cur = respace_constant_speed(p, cur);
        double len = cur.length;
        double step = opts.step0 * dist(x, y) / static_cast<double>(nodes_level + 1);
        converged = false;
        for (int it = 0; it < opts.max_iter; ++it) {
            length_gradient(p, cur.nodes, grad);
            double gnorm2 = 0.0;
            for (const auto& gv : grad) gnorm2 += gv.norm2();
            if (gnorm2 == 0.0) {
                converged = true;
                break;
            }
            bool accepted_step = false;
            for (int bt = 0; bt < 40; ++bt) {
                Geodesic trial = cur;
                for (size_t i = 1; i + 1 < trial.nodes.size(); ++i) trial.nodes[i] = cur.nodes[i] + grad[i] * (-step);
                double tlen = path_length(p, trial);
                if (tlen < len - 1e-4 * step * gnorm2) {
                    cur = respace_constant_speed(p, trial);
                    accepted_step = true;
                    step *= 1.5;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted_step) {
                converged = true; // stationary at line-search resolution
                break;
            }
            double decrease = len - cur.length;
            len = cur.length;
            if (std::fabs(decrease) < opts.tol * std::max(1.0, len)) {
                converged = true;
                break;
            }
        }
    }
    cur.length = path_length(p, cur);
    cur.converged = converged;
    return cur;
}

TimedPath jacobi_reparametrize(const Potential& p, const Geodesic& gamma, double rho_x) {
    const auto& nodes = gamma.nodes;
    require(nodes.size() >= 2, Errc::invalid_argument, "path needs at least two nodes");
    require(rho_x > 0.0, Errc::invalid_argument, "rho_x must be positive");
    size_t n = nodes.size();
    // tau(s_i) by trapezoid of rho_x / (2 V(gamma)); s is uniform on [0,1] for
    // the constant-speed node spacing.
    std::vector<double> tau(n, 0.0);
    double ds = 1.0 / static_cast<double>(n - 1);
    double g_prev = rho_x / (2.0 * p.eval(nodes[0]));
    for (size_t i = 1; i < n; ++i) {
        double gi = rho_x / (2.0 * p.eval(nodes[i]));
        tau[i] = tau[i - 1] + 0.5 * (g_prev + gi) * ds;
        g_prev = gi;
    }
    double T = tau[n - 1];
    TimedPath q;
    q.nodes.resize(n);
    q.times.resize(n);
    // q(t) = gamma(sigma(T - t)): node i of q is gamma node n-1-i at time T - tau_{n-1-i}.
    for (size_t i = 0; i < n; ++i) {
        q.nodes[i] = nodes[n - 1 - i];
        q.times[i] = T - tau[n - 1 - i];
    }
    q.times.front() = 0.0;
    q.times.back() = T;
    q.horizon = T;
    q.action = action(p, q);
    return q;
}

TimedPath minimize_action(const Potential& p, const Vec3& x, const MinimizeOpts& opts) {
    require(x.norm() > 0.0, Errc::invalid_argument, "minimize_action requires x != 0");
    Geodesic init = straight_path(p, Vec3{}, x, opts.interior_nodes);
    Geodesic gamma = minimize_path(p, x, Vec3{}, init, opts);
    if (!gamma.converged) fail(Errc::no_convergence, "path minimization exhausted its iteration budget");
    return jacobi_reparametrize(p, gamma, gamma.length);
}

double travel_time_bound(const Potential& p, const Vec3& x, double r0, double r1, const DistanceField& rho) {
    require(r1 > r0 && r0 > 0.0, Errc::invalid_argument, "need R1 > R0 > 0");
    require(x.norm() >= r1 - 1e-12, Errc::invalid_argument, "need |x| >= R1");

    // a(R0) = inf_{|z| >= R0} V: radial profile when available, else grid min.
    double a0 = kInf;
    const GridSpec& g = rho.rho.grid;
    if (p.is_radial() && p.radial_nondecreasing()) {
        a0 = p.eval(Vec3{r0, 0, 0});
    } else {
        for (int64_t i = 0; i < g.num_nodes(); ++i) {
            Vec3 z = g.node_coord(g.unflatten(i));
            if (z.norm() >= r0) a0 = std::min(a0, p.eval(z));
        }
        require(std::isfinite(a0), Errc::domain_too_small, "no grid nodes outside R0");
    }

    // max_{|z|=R0} rho(z) over the node shell around radius R0. Half a cell
    // diagonal always catches a node and keeps the grid sup conservative.
    double shell_max = -kInf;
    double band = 0.5 * g.h * std::sqrt(static_cast<double>(g.dim));
    for (int64_t i = 0; i < g.num_nodes(); ++i) {
        Vec3 z = g.node_coord(g.unflatten(i));
        if (std::fabs(z.norm() - r0) <= band) shell_max = std::max(shell_max, rho.rho.values[static_cast<size_t>(i)]);
    }
    require(std::isfinite(shell_max) && shell_max >= 0.0, Errc::domain_too_small,
            "sphere |z| = R0 is not resolved by the distance field");

    double rx = rho.interp(x);
    return (1.0 / (2.0 * a0) + shell_max / (std::sqrt(8.0) * r1)) * rx;
}

ResidualStats eikonal_residual(const DistanceField& df, const ScalarField& v, double exclude_radius) {
    const GridSpec& g = df.rho.grid;
    int dim = g.dim;
    int64_t stride[3] = {0, 0, 0};
    {
        int64_t s = 1;
        for (int a = dim - 1; a >= 0; --a) {
            stride[a] = s;
            s *= g.shape()[static_cast<size_t>(a)];
        }
    }
    std::vector<double> residuals;
    for (int64_t i = 0; i < g.num_nodes(); ++i) {
        auto idx = g.unflatten(i);
        bool interior = true;
        for (int a = 0; a < dim; ++a)
            if (idx[static_cast<size_t>(a)] == 0 || idx[static_cast<size_t>(a)] + 1 == g.shape()[static_cast<size_t>(a)])
                interior = false;
        if (!interior) continue;
        Vec3 z = g.node_coord(idx);
        if (dist(z, df.source) <= exclude_radius) continue;
        double u = df.rho.values[static_cast<size_t>(i)];
        double grad2 = 0.0;
        for (int a = 0; a < dim; ++a) {
            double m = std::min(df.rho.values[static_cast<size_t>(i - stride[a])],
                                df.rho.values[static_cast<size_t>(i + stride[a])]);
            double d = (u - m) / g.h;
            if (d > 0.0) grad2 += d * d;
        }
        double twoV = 2.0 * v.values[static_cast<size_t>(i)];
        residuals.push_back(std::fabs(grad2 - twoV) / twoV);
    }
    ResidualStats st;
    st.count = static_cast<int64_t>(residuals.size());
    if (residuals.empty()) return st;
    std::sort(residuals.begin(), residuals.end());
    st.median = residuals[residuals.size() / 2];
    st.max = residuals.back();
    return st;
}

double max_rel_gap(const DistanceField& a, const DistanceField& b) {
    require(a.rho.grid.same_as(b.rho.grid), Errc::grid_mismatch, "distance fields on different grids");
    double worst = 0.0;
    for (size_t i = 0; i < a.rho.values.size(); ++i) {
        double av = a.rho.values[i], bv = b.rho.values[i];
        double denom = std::max({std::fabs(av), std::fabs(bv), 1e-12});
        if (av == 0.0 && bv == 0.0) continue;
        worst = std::max(worst, std::fabs(av - bv) / denom);
    }
    return worst;
}

} // namespace agml
