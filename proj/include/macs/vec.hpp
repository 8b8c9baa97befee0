#pragma once
// Dense semantic vectors and the tiny linear algebra the simulator needs.
//
// All modules traffic in unit-norm d-dimensional vectors; the zero vector is
// reserved as a "no content" sentinel (empty inbox, unassigned agent).

#include <cmath>
#include <cstddef>
#include <vector>

namespace macs {

using Vec = std::vector<double>;

constexpr double kNormEps = 1e-9;

inline double dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(const Vec& v) { return std::sqrt(dot(v, v)); }

inline bool is_zero(const Vec& v) { return norm(v) < kNormEps; }

/// v / ||v||. Caller must reject degenerate inputs first; this asserts nothing.
inline Vec normalized(const Vec& v) {
    const double n = norm(v);
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
    return out;
}

/// Inner product of unit vectors, clamped to [-1, 1].
inline double cosine(const Vec& a, const Vec& b) {
    const double d = dot(a, b);
    if (d > 1.0) return 1.0;
    if (d < -1.0) return -1.0;
    return d;
}

/// Cosine for vectors of any length (post-projection outputs are not unit).
/// Returns 0 when either argument is the zero sentinel.
inline double cosine_general(const Vec& a, const Vec& b) {
    const double na = norm(a);
    const double nb = norm(b);
    if (na < kNormEps || nb < kNormEps) return 0.0;
    const double c = dot(a, b) / (na * nb);
    if (c > 1.0) return 1.0;
    if (c < -1.0) return -1.0;
    return c;
}

inline Vec& add_scaled(Vec& acc, const Vec& v, double w) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
    return acc;
}

inline Vec zeros(std::size_t d) { return Vec(d, 0.0); }

}  // namespace macs
