#ifndef AGMONLAB_GEOM_HPP
#define AGMONLAB_GEOM_HPP

#include <array>
#include <cmath>

namespace agml {

/// Point in R^d, d <= 3. Unused trailing components are kept at zero so the
/// same type serves every dimension.
struct Vec3 {
    std::array<double, 3> v{0.0, 0.0, 0.0};

    Vec3() = default;
    Vec3(double x, double y = 0.0, double z = 0.0) : v{x, y, z} {}

    double& operator[](int i) { return v[static_cast<size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<size_t>(i)]; }

    Vec3 operator+(const Vec3& o) const { return {v[0] + o.v[0], v[1] + o.v[1], v[2] + o.v[2]}; }
    Vec3 operator-(const Vec3& o) const { return {v[0] - o.v[0], v[1] - o.v[1], v[2] - o.v[2]}; }
    Vec3 operator*(double s) const { return {v[0] * s, v[1] * s, v[2] * s}; }
    Vec3& operator+=(const Vec3& o) {
        v[0] += o.v[0]; v[1] += o.v[1]; v[2] += o.v[2];
        return *this;
    }

    double dot(const Vec3& o) const { return v[0] * o.v[0] + v[1] * o.v[1] + v[2] * o.v[2]; }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& a) { return a * s; }

inline double dist(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

} // namespace agml

#endif
