#pragma once

#include <cmath>

namespace semilag {

/// Point / covector in R^1 or R^2. In one dimension `y` stays 0, so the
/// Euclidean helpers below work unchanged for both.
struct Vec {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec() = default;
    constexpr Vec(double x_, double y_ = 0.0) : x(x_), y(y_) {}

    constexpr double operator[](int axis) const { return axis == 0 ? x : y; }
    constexpr double& operator[](int axis) { return axis == 0 ? x : y; }

    constexpr Vec& operator+=(const Vec& o) { x += o.x; y += o.y; return *this; }
    constexpr Vec& operator-=(const Vec& o) { x -= o.x; y -= o.y; return *this; }
    constexpr Vec& operator*=(double s) { x *= s; y *= s; return *this; }

    friend constexpr Vec operator+(Vec a, const Vec& b) { return a += b; }
    friend constexpr Vec operator-(Vec a, const Vec& b) { return a -= b; }
    friend constexpr Vec operator-(const Vec& a) { return {-a.x, -a.y}; }
    friend constexpr Vec operator*(double s, Vec a) { return a *= s; }
    friend constexpr Vec operator*(Vec a, double s) { return a *= s; }
    friend constexpr bool operator==(const Vec&, const Vec&) = default;
};

constexpr double dot(const Vec& a, const Vec& b) { return a.x * b.x + a.y * b.y; }
constexpr double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::hypot(a.x, a.y); }

}  // namespace semilag
