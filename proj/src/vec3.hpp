#ifndef NCIHF_VEC3_HPP
#define NCIHF_VEC3_HPP

#include <cmath>
#include <complex>

#include "params.hpp"

namespace ncihf {

// Small fixed three-vectors over double or complex<double>. The dot product
// is bilinear (no conjugation); use cdot for the Hermitian pairing.
template <class T>
struct V3 {
    T x{}, y{}, z{};

    V3() = default;
    V3(T a, T b, T c) : x(a), y(b), z(c) {}

    V3 operator+(const V3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    V3 operator-(const V3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    V3 operator-() const { return {-x, -y, -z}; }
    V3& operator+=(const V3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    V3& operator-=(const V3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
};

using Vec3 = V3<double>;
using CVec3 = V3<cplx>;

template <class T, class S>
inline auto operator*(const S& c, const V3<T>& v) -> V3<decltype(c * v.x)> {
    return {c * v.x, c * v.y, c * v.z};
}

template <class T>
inline T dot(const V3<T>& a, const V3<T>& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline cplx dot(const CVec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline cplx dot(const Vec3& a, const CVec3& b) { return dot(b, a); }

template <class T>
inline V3<T> wedge(const V3<T>& a, const V3<T>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline CVec3 conj(const CVec3& v) { return {std::conj(v.x), std::conj(v.y), std::conj(v.z)}; }
inline Vec3 real(const CVec3& v) { return {v.x.real(), v.y.real(), v.z.real()}; }
inline Vec3 imag(const CVec3& v) { return {v.x.imag(), v.y.imag(), v.z.imag()}; }
inline CVec3 complexify(const Vec3& v) { return {cplx(v.x), cplx(v.y), cplx(v.z)}; }

// Hermitian pairing conj(a).b; real and non-negative for a == b.
inline cplx cdot(const CVec3& a, const CVec3& b) { return dot(conj(a), b); }

inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double norm(const CVec3& v) { return std::sqrt(std::norm(v.x) + std::norm(v.y) + std::norm(v.z)); }
inline double max_abs(const CVec3& v) {
    return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}
inline double max_abs(const Vec3& v) {
    return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}
inline Vec3 normalized(const Vec3& v) { return (1.0 / norm(v)) * v; }

// Value of a two-component object (upper = u channel, lower = v channel).
template <class T>
struct Pair {
    T up{}, dn{};
    Pair() = default;
    Pair(T a, T b) : up(a), dn(b) {}
    Pair operator+(const Pair& o) const { return {up + o.up, dn + o.dn}; }
    Pair operator-(const Pair& o) const { return {up - o.up, dn - o.dn}; }
};

}  // namespace ncihf

#endif
