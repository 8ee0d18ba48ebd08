#pragma once

#include <cmath>

namespace meneuron {

/// Plain 3-component real vector. Units depend on use: dimensionless for the
/// free-layer magnetization, A/m for fields, A for spin current.
struct Vector3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vector3& operator+=(const Vector3& o) noexcept {
        x += o.x;
        y += o.y;
        z += o.z;
        return *this;
    }
    constexpr Vector3& operator-=(const Vector3& o) noexcept {
        x -= o.x;
        y -= o.y;
        z -= o.z;
        return *this;
    }
    constexpr Vector3& operator*=(double s) noexcept {
        x *= s;
        y *= s;
        z *= s;
        return *this;
    }

    friend constexpr bool operator==(const Vector3&, const Vector3&) = default;
};

constexpr Vector3 operator+(Vector3 a, const Vector3& b) noexcept { return a += b; }
constexpr Vector3 operator-(Vector3 a, const Vector3& b) noexcept { return a -= b; }
constexpr Vector3 operator-(const Vector3& a) noexcept { return {-a.x, -a.y, -a.z}; }
constexpr Vector3 operator*(Vector3 a, double s) noexcept { return a *= s; }
constexpr Vector3 operator*(double s, Vector3 a) noexcept { return a *= s; }

constexpr double dot(const Vector3& a, const Vector3& b) noexcept {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Vector3 cross(const Vector3& a, const Vector3& b) noexcept {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vector3& a) noexcept { return std::sqrt(dot(a, a)); }

inline Vector3 normalized(const Vector3& a) noexcept { return a * (1.0 / norm(a)); }

inline bool is_finite(const Vector3& a) noexcept {
    return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

}  // namespace meneuron
