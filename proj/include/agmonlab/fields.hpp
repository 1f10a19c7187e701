#ifndef AGMONLAB_FIELDS_HPP
#define AGMONLAB_FIELDS_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agmonlab/errors.hpp"
#include "agmonlab/geom.hpp"

namespace agml {

/// Polynomial envelope parameters: a^2/2 |x|^{2n} - b <= V(x) <= A^2/2 |x|^{2m} + B
/// with m >= n > 0, a, A > 0, b, B >= 0. Checked at every evaluation when present.
struct Envelope {
    double a = 1.0;
    double b = 0.0;
    double A = 1.0;
    double B = 0.0;
    double n = 1.0;
    double m = 1.0;
};

/// Confining potential V >= 1 on R^d. Built-in families:
///   constant           V(x) = c
///   radial_poly        V(x) = sum_k coeff[k] * |x|^k
///   coord_poly         V(x) = sum_t c_t * prod_i |x_i|^{e_ti}
/// plus the derived ball-sup potential (see ball_sup_potential).
class Potential {
  public:
    static Potential constant(int dim, double value);
    static Potential radial_poly(int dim, std::vector<double> coeffs);
    /// Terms (c, e1, e2, e3); exponents apply to |x_i|.
    struct CoordTerm {
        double c = 0.0;
        std::array<int, 3> e{0, 0, 0};
    };
    static Potential coord_poly(int dim, std::vector<CoordTerm> terms);

    int dim() const { return dim_; }
    bool is_radial() const { return is_radial_; }
    /// Radial profile known to be nondecreasing in |x| (true for radial_poly
    /// with nonnegative coefficients); enables the exact ball supremum.
    bool radial_nondecreasing() const { return radial_nondecreasing_; }

    const std::optional<Envelope>& envelope() const { return envelope_; }
    void set_envelope(const Envelope& e);

    /// V(x). Throws PotentialBelowOne if the value is < 1 and
    /// EnvelopeViolation if a declared envelope fails at x.
    double eval(const Vec3& x) const;

    /// Gradient of V at x (analytic for the built-in families).
    Vec3 grad(const Vec3& x) const;

    const std::string& describe() const { return describe_; }

  private:
    Potential() = default;
    double raw_eval(const Vec3& x) const;

    enum class Kind { constant, radial_poly, coord_poly, ball_sup };
    Kind kind_ = Kind::constant;
    int dim_ = 3;
    double value_ = 1.0;
    std::vector<double> coeffs_;
    std::vector<CoordTerm> terms_;
    bool is_radial_ = false;
    bool radial_nondecreasing_ = false;
    std::optional<Envelope> envelope_;
    std::string describe_;

    // ball_sup state
    std::shared_ptr<const Potential> base_;
    double sup_radius_ = 1.0;
    int sup_samples_ = 512;

    friend Potential ball_sup_potential(const Potential& p, double radius, int samples);
    friend double sup_ball(const Potential& p, const Vec3& x, double radius, int samples);
};

/// sup of V over the closed ball of given radius about x. Exact for radial
/// nondecreasing potentials; otherwise a deterministic Fibonacci shell-stack
/// sample of `samples` points plus the center.
double sup_ball(const Potential& p, const Vec3& x, double radius, int samples = 512);

/// Potential whose eval is sup_ball of the base; used to build the thickened
/// rate field and its distance.
Potential ball_sup_potential(const Potential& p, double radius = 1.0, int samples = 512);

/// Axis-aligned uniform grid [lo, hi]^d with spacing h; node coordinates are
/// lo + i*h exactly. The box must contain the origin.
struct GridSpec {
    int dim = 1;
    Vec3 lo{0, 0, 0};
    Vec3 hi{0, 0, 0};
    double h = 0.1;

    GridSpec() = default;
    GridSpec(int d, const Vec3& lo_, const Vec3& hi_, double h_);

    std::array<int64_t, 3> shape() const { return shape_; }
    int64_t num_nodes() const { return num_nodes_; }

    Vec3 node_coord(const std::array<int64_t, 3>& idx) const {
        Vec3 p;
        for (int a = 0; a < dim; ++a) p[a] = lo[a] + static_cast<double>(idx[static_cast<size_t>(a)]) * h;
        return p;
    }
    int64_t flat_index(const std::array<int64_t, 3>& idx) const {
        int64_t f = 0;
        for (int a = 0; a < dim; ++a) f = f * shape_[static_cast<size_t>(a)] + idx[static_cast<size_t>(a)];
        return f;
    }
    std::array<int64_t, 3> unflatten(int64_t f) const {
        std::array<int64_t, 3> idx{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            idx[static_cast<size_t>(a)] = f % shape_[static_cast<size_t>(a)];
            f /= shape_[static_cast<size_t>(a)];
        }
        return idx;
    }
    bool in_grid(const std::array<int64_t, 3>& idx) const {
        for (int a = 0; a < dim; ++a)
            if (idx[static_cast<size_t>(a)] < 0 || idx[static_cast<size_t>(a)] >= shape_[static_cast<size_t>(a)]) return false;
        return true;
    }
    /// Nearest node to a point; throws InvalidArgument when outside the box.
    std::array<int64_t, 3> snap(const Vec3& x) const;

    /// Grid over the interior nodes (one h shell removed per side); the
    /// matter grid of Dirichlet eigenproblems posed on this box.
    GridSpec interior() const;

    bool same_as(const GridSpec& o) const;

  private:
    std::array<int64_t, 3> shape_{1, 1, 1};
    int64_t num_nodes_ = 1;
};

/// One real value per grid node, row-major in node index order.
struct ScalarField {
    GridSpec grid;
    std::vector<double> values;

    ScalarField() = default;
    ScalarField(const GridSpec& g, double fill = 0.0)
        : grid(g), values(static_cast<size_t>(g.num_nodes()), fill) {}

    double& at(const std::array<int64_t, 3>& idx) { return values[static_cast<size_t>(grid.flat_index(idx))]; }
    double at(const std::array<int64_t, 3>& idx) const { return values[static_cast<size_t>(grid.flat_index(idx))]; }

    /// Multilinear interpolation; throws InvalidArgument outside the box.
    double interp(const Vec3& x) const;
    bool contains(const Vec3& x) const;
};

/// Field of V over the grid nodes; propagates eval errors.
ScalarField discretize(const Potential& p, const GridSpec& g);

} // namespace agml

#endif
