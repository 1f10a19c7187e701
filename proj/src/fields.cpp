#include "agmonlab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace agml {

namespace {

bool check_dim(int d) { return d >= 1 && d <= 3; }

std::string fmt_coeffs(const std::vector<double>& c) {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << "]";
    return os.str();
}

} // namespace

Potential Potential::constant(int dim, double value) {
    require(check_dim(dim), Errc::invalid_argument, "potential dimension must be 1..3");
    Potential p;
    p.kind_ = Kind::constant;
    p.dim_ = dim;
    p.value_ = value;
    p.is_radial_ = true;
    p.radial_nondecreasing_ = true;
    p.describe_ = "constant(" + std::to_string(value) + ")";
    return p;
}

Potential Potential::radial_poly(int dim, std::vector<double> coeffs) {
    require(check_dim(dim), Errc::invalid_argument, "potential dimension must be 1..3");
    require(!coeffs.empty(), Errc::invalid_argument, "radial_poly needs at least one coefficient");
    Potential p;
    p.kind_ = Kind::radial_poly;
    p.dim_ = dim;
    p.coeffs_ = std::move(coeffs);
    p.is_radial_ = true;
    p.radial_nondecreasing_ = std::all_of(p.coeffs_.begin() + 1, p.coeffs_.end(), [](double c) { return c >= 0.0; });
    p.describe_ = "radial_poly" + fmt_coeffs(p.coeffs_);
    return p;
}

Potential Potential::coord_poly(int dim, std::vector<CoordTerm> terms) {
    require(check_dim(dim), Errc::invalid_argument, "potential dimension must be 1..3");
    require(!terms.empty(), Errc::invalid_argument, "coord_poly needs at least one term");
    Potential p;
    p.kind_ = Kind::coord_poly;
    p.dim_ = dim;
    p.terms_ = std::move(terms);
    p.is_radial_ = false;
    p.radial_nondecreasing_ = false;
    p.describe_ = "coord_poly(" + std::to_string(p.terms_.size()) + " terms)";
    return p;
}

void Potential::set_envelope(const Envelope& e) {
    require(e.a > 0 && e.A > 0, Errc::invalid_argument, "envelope requires a, A > 0");
    require(e.b >= 0 && e.B >= 0, Errc::invalid_argument, "envelope requires b, B >= 0");
    require(e.m >= e.n && e.n > 0, Errc::invalid_argument, "envelope requires m >= n > 0");
    envelope_ = e;
}

double Potential::raw_eval(const Vec3& x) const {
    switch (kind_) {
        case Kind::constant:
            return value_;
        case Kind::radial_poly: {
            double r = x.norm();
            double v = 0.0;
            for (size_t k = coeffs_.size(); k-- > 0;) v = v * r + coeffs_[k];
            return v;
        }
        case Kind::coord_poly: {
            double v = 0.0;
            for (const auto& t : terms_) {
                double term = t.c;
                for (int a = 0; a < dim_; ++a)
                    for (int e = 0; e < t.e[static_cast<size_t>(a)]; ++e) term *= std::fabs(x[a]);
                v += term;
            }
            return v;
        }
        case Kind::ball_sup:
            return sup_ball(*base_, x, sup_radius_, sup_samples_);
    }
    return value_;
}

double Potential::eval(const Vec3& x) const {
    for (int a = 0; a < 3; ++a)
        require(std::isfinite(x[a]), Errc::invalid_argument, "potential evaluated at non-finite point");
    double v = raw_eval(x);
    if (v < 1.0) {
        std::ostringstream os;
        os << describe_ << " evaluates to " << v << " < 1 at (" << x[0] << "," << x[1] << "," << x[2] << ")";
        fail(Errc::potential_below_one, os.str());
    }
    if (envelope_) {
        const auto& e = *envelope_;
        double r = x.norm();
        double lower = 0.5 * e.a * e.a * std::pow(r, 2.0 * e.n) - e.b;
        double upper = 0.5 * e.A * e.A * std::pow(r, 2.0 * e.m) + e.B;
        if (v < lower - 1e-12 * std::max(1.0, std::fabs(lower)) ||
            v > upper + 1e-12 * std::max(1.0, std::fabs(upper))) {
            std::ostringstream os;
            os << describe_ << " violates its envelope at |x|=" << r << " (V=" << v << ", bounds [" << lower << ","
               << upper << "])";
            fail(Errc::envelope_violation, os.str());
        }
    }
    return v;
}

Vec3 Potential::grad(const Vec3& x) const {
    switch (kind_) {
        case Kind::constant:
            return Vec3{};
        case Kind::radial_poly: {
            double r = x.norm();
            if (r == 0.0) return Vec3{};
            double dv = 0.0;
            for (size_t k = coeffs_.size(); k-- > 1;) dv = dv * r + static_cast<double>(k) * coeffs_[k];
            return x * (dv / r);
        }
        case Kind::coord_poly: {
            Vec3 g;
            for (const auto& t : terms_) {
                for (int a = 0; a < dim_; ++a) {
                    int ea = t.e[static_cast<size_t>(a)];
                    if (ea == 0) continue;
                    double d = t.c * static_cast<double>(ea);
                    for (int b = 0; b < dim_; ++b) {
                        int eb = t.e[static_cast<size_t>(b)] - (b == a ? 1 : 0);
                        for (int e = 0; e < eb; ++e) d *= std::fabs(x[b]);
                    }
                    g[a] += d * (x[a] >= 0.0 ? 1.0 : -1.0);
                }
            }
            return g;
        }
        case Kind::ball_sup: {
            // No analytic form; central differences on the sampled sup.
            Vec3 g;
            double d = 1e-6;
            for (int a = 0; a < dim_; ++a) {
                Vec3 xp = x, xm = x;
                xp[a] += d;
                xm[a] -= d;
                g[a] = (raw_eval(xp) - raw_eval(xm)) / (2.0 * d);
            }
            return g;
        }
    }
    return Vec3{};
}

double sup_ball(const Potential& p, const Vec3& x, double radius, int samples) {
    require(radius > 0.0, Errc::invalid_argument, "sup_ball radius must be positive");
    if (p.is_radial() && p.radial_nondecreasing()) {
        double r = x.norm();
        // sup over the ball is attained at the farthest point from the origin
        Vec3 far = (r == 0.0) ? Vec3{radius, 0, 0} : x * ((r + radius) / r);
        return p.eval(far);
    }
    double best = p.eval(x);
    int d = p.dim();
    if (d == 1) {
        int n = std::max(samples, 2);
        for (int i = 0; i <= n; ++i) {
            double t = -radius + 2.0 * radius * static_cast<double>(i) / static_cast<double>(n);
            best = std::max(best, p.eval(Vec3{x[0] + t}));
        }
        return best;
    }
    // Shell stack: concentric shells r_k = radius * k / K, points per shell
    // proportional to its measure, golden-angle rotation offset per shell.
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    int shells = std::max(2, static_cast<int>(std::round(std::cbrt(samples))));
    double measure_sum = 0.0;
    std::vector<double> rk(static_cast<size_t>(shells)), wk(static_cast<size_t>(shells));
    for (int k = 1; k <= shells; ++k) {
        double r = radius * static_cast<double>(k) / static_cast<double>(shells);
        rk[static_cast<size_t>(k - 1)] = r;
        wk[static_cast<size_t>(k - 1)] = (d == 2) ? r : r * r;
        measure_sum += wk[static_cast<size_t>(k - 1)];
    }
    for (int k = 0; k < shells; ++k) {
        int nk = std::max(4, static_cast<int>(std::round(static_cast<double>(samples) * wk[static_cast<size_t>(k)] / measure_sum)));
        double r = rk[static_cast<size_t>(k)];
        double rot = golden * static_cast<double>(k + 1);
        for (int i = 0; i < nk; ++i) {
            Vec3 q = x;
            if (d == 2) {
                double a = rot + 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(nk);
                q[0] += r * std::cos(a);
                q[1] += r * std::sin(a);
            } else {
                // Fibonacci sphere on the shell
                double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(nk);
                double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
                double a = rot + golden * static_cast<double>(i);
                q[0] += r * rho * std::cos(a);
                q[1] += r * rho * std::sin(a);
                q[2] += r * z;
            }
            best = std::max(best, p.eval(q));
        }
    }
    return best;
}

Potential ball_sup_potential(const Potential& p, double radius, int samples) {
    require(radius > 0.0, Errc::invalid_argument, "ball_sup radius must be positive");
    Potential q;
    q.kind_ = Potential::Kind::ball_sup;
    q.dim_ = p.dim();
    q.base_ = std::make_shared<Potential>(p);
    q.sup_radius_ = radius;
    q.sup_samples_ = samples;
    q.is_radial_ = p.is_radial();
    q.radial_nondecreasing_ = p.radial_nondecreasing();
    q.describe_ = "ball_sup(" + p.describe() + ", r=" + std::to_string(radius) + ")";
    return q;
}

GridSpec::GridSpec(int d, const Vec3& lo_, const Vec3& hi_, double h_) : dim(d), lo(lo_), hi(hi_), h(h_) {
    require(check_dim(d), Errc::invalid_argument, "grid dimension must be 1..3");
    require(h > 0.0, Errc::config_error, "grid spacing h must be positive");
    num_nodes_ = 1;
    for (int a = 0; a < dim; ++a) {
        require(lo[a] <= 0.0 && hi[a] >= 0.0, Errc::config_error, "grid box must contain the origin");
        require(hi[a] > lo[a], Errc::config_error, "grid box must have positive extent");
        auto n = static_cast<int64_t>(std::round((hi[a] - lo[a]) / h)) + 1;
        require(n >= 2, Errc::config_error, "grid must have at least two nodes per axis");
        shape_[static_cast<size_t>(a)] = n;
        num_nodes_ *= n;
    }
    for (int a = dim; a < 3; ++a) shape_[static_cast<size_t>(a)] = 1;
}

std::array<int64_t, 3> GridSpec::snap(const Vec3& x) const {
    std::array<int64_t, 3> idx{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
        auto i = static_cast<int64_t>(std::round((x[a] - lo[a]) / h));
        require(i >= 0 && i < shape_[static_cast<size_t>(a)], Errc::invalid_argument, "point outside the grid box");
        idx[static_cast<size_t>(a)] = i;
    }
    return idx;
}

GridSpec GridSpec::interior() const {
    Vec3 l, u;
    for (int a = 0; a < dim; ++a) {
        l[a] = lo[a] + h;
        u[a] = hi[a] - h;
    }
    return GridSpec(dim, l, u, h);
}

bool GridSpec::same_as(const GridSpec& o) const {
    if (dim != o.dim || h != o.h) return false;
    for (int a = 0; a < dim; ++a)
        if (lo[a] != o.lo[a] || hi[a] != o.hi[a]) return false;
    return true;
}

bool ScalarField::contains(const Vec3& x) const {
    double eps = 1e-9 * grid.h; // node coordinates may overshoot the box by rounding
    for (int a = 0; a < grid.dim; ++a)
        if (x[a] < grid.lo[a] - eps || x[a] > grid.hi[a] + eps) return false;
    return true;
}

double ScalarField::interp(const Vec3& x) const {
    require(contains(x), Errc::invalid_argument, "interpolation point outside the grid box");
    std::array<int64_t, 3> base{0, 0, 0};
    std::array<double, 3> t{0, 0, 0};
    for (int a = 0; a < grid.dim; ++a) {
        double s = (x[a] - grid.lo[a]) / grid.h;
        auto i = static_cast<int64_t>(std::floor(s));
        auto nmax = grid.shape()[static_cast<size_t>(a)] - 1;
        if (i >= nmax) i = nmax - 1;
        if (i < 0) i = 0;
        base[static_cast<size_t>(a)] = i;
        t[static_cast<size_t>(a)] = std::clamp(s - static_cast<double>(i), 0.0, 1.0);
    }
    double acc = 0.0;
    int corners = 1 << grid.dim;
    for (int c = 0; c < corners; ++c) {
        std::array<int64_t, 3> idx = base;
        double w = 1.0;
        for (int a = 0; a < grid.dim; ++a) {
            if (c & (1 << a)) {
                idx[static_cast<size_t>(a)] += 1;
                w *= t[static_cast<size_t>(a)];
            } else {
                w *= 1.0 - t[static_cast<size_t>(a)];
            }
        }
        acc += w * at(idx);
    }
    return acc;
}

ScalarField discretize(const Potential& p, const GridSpec& g) {
    require(p.dim() == g.dim, Errc::grid_mismatch, "potential and grid dimensions differ");
    ScalarField f(g);
    int64_t n = g.num_nodes();
    for (int64_t i = 0; i < n; ++i) f.values[static_cast<size_t>(i)] = p.eval(g.node_coord(g.unflatten(i)));
    return f;
}

} // namespace agml
