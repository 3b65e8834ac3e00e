#pragma once

#include <array>
#include <cmath>

namespace dpp {

/// Point / displacement in at most two dimensions. 1D problems use only v[0].
using Vec = std::array<double, 2>;

inline Vec operator+(Vec a, Vec b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec operator-(Vec a, Vec b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec operator*(double c, Vec a) { return {c * a[0], c * a[1]}; }
inline Vec operator-(Vec a) { return {-a[0], -a[1]}; }

inline double dot(Vec a, Vec b) { return a[0] * b[0] + a[1] * b[1]; }
inline double norm(Vec a) { return std::hypot(a[0], a[1]); }

/// Integer lattice index, one per axis. 1D uses only i[0].
using Index = std::array<long, 2>;

inline Index operator+(Index a, Index b) { return {a[0] + b[0], a[1] + b[1]}; }

} // namespace dpp
