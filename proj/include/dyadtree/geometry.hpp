#pragma once

// Dyadic-cube arithmetic, point location and hyperplane side tests on the
// unit cube [0,1]^d.  Cubes are addressed by (level, integer index vector),
// never by floating-point corners, so addresses hash and compare exactly.

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace dyadtree {

inline constexpr int kMaxCubeLevel = 30;

// Half-open cell prod_i [k_i 2^-j, (k_i+1) 2^-j), with faces touching the
// upper boundary of [0,1]^d closed so that the leaves of a complete tree
// partition the whole domain.
struct DyadicCube {
    int level = 0;
    std::vector<std::uint32_t> index;

    int dim() const { return static_cast<int>(index.size()); }
    double side() const { return std::ldexp(1.0, -level); }
    double lower(int axis) const {
        return std::ldexp(static_cast<double>(index[static_cast<std::size_t>(axis)]), -level);
    }
    double upper(int axis) const {
        return std::ldexp(static_cast<double>(index[static_cast<std::size_t>(axis)]) + 1.0, -level);
    }

    bool operator==(const DyadicCube&) const = default;
};

inline DyadicCube root_cube(int dim) {
    if (dim < 1) throw std::invalid_argument("root_cube: dimension must be >= 1");
    return DyadicCube{0, std::vector<std::uint32_t>(static_cast<std::size_t>(dim), 0)};
}

// Address order: by level, then lexicographically by index.  Used wherever a
// deterministic cube ordering is required (serialization, tie-breaking).
inline bool address_less(const DyadicCube& a, const DyadicCube& b) {
    if (a.level != b.level) return a.level < b.level;
    return a.index < b.index;
}

struct CubeHash {
    std::size_t operator()(const DyadicCube& c) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            h ^= v;
            h *= 1099511628211ull;
        };
        mix(static_cast<std::uint64_t>(c.level));
        for (std::uint32_t k : c.index) mix(k);
        return static_cast<std::size_t>(h);
    }
};

inline void check_point_dim(const DyadicCube& c, std::span<const double> p) {
    if (c.dim() != static_cast<int>(p.size()))
        throw std::invalid_argument("point/cube dimension mismatch");
}

inline bool cube_contains(const DyadicCube& c, std::span<const double> p) {
    check_point_dim(c, p);
    const std::uint32_t top = (c.level >= 32) ? 0xffffffffu : ((1u << c.level) - 1u);
    for (int a = 0; a < c.dim(); ++a) {
        const double lo = c.lower(a);
        const double hi = c.upper(a);
        if (p[static_cast<std::size_t>(a)] < lo) return false;
        if (c.index[static_cast<std::size_t>(a)] == top) {
            if (p[static_cast<std::size_t>(a)] > 1.0) return false; // top face closed
        } else {
            if (p[static_cast<std::size_t>(a)] >= hi) return false;
        }
    }
    return true;
}

// Children in lexicographic index order; bit b of `bits` (axis 0 most
// significant) selects the upper half along that axis.
inline DyadicCube child(const DyadicCube& c, unsigned bits) {
    if (c.level >= kMaxCubeLevel) throw std::invalid_argument("child: level cap exceeded");
    DyadicCube out;
    out.level = c.level + 1;
    out.index.resize(c.index.size());
    const int d = c.dim();
    for (int a = 0; a < d; ++a) {
        const unsigned b = (bits >> (d - 1 - a)) & 1u;
        out.index[static_cast<std::size_t>(a)] = 2u * c.index[static_cast<std::size_t>(a)] + b;
    }
    return out;
}

inline std::vector<DyadicCube> children(const DyadicCube& c) {
    const unsigned n = 1u << c.dim();
    std::vector<DyadicCube> out;
    out.reserve(n);
    for (unsigned bits = 0; bits < n; ++bits) out.push_back(child(c, bits));
    return out;
}

inline DyadicCube parent(const DyadicCube& c) {
    if (c.level == 0) throw std::invalid_argument("parent: root has no parent");
    DyadicCube out;
    out.level = c.level - 1;
    out.index.resize(c.index.size());
    for (std::size_t a = 0; a < c.index.size(); ++a) out.index[a] = c.index[a] >> 1;
    return out;
}

// Which child of `c` would contain p (half-open convention: the midpoint
// belongs to the upper child).
inline unsigned child_bits_toward(const DyadicCube& c, std::span<const double> p) {
    check_point_dim(c, p);
    unsigned bits = 0;
    const int d = c.dim();
    for (int a = 0; a < d; ++a) {
        const double mid = std::ldexp(2.0 * static_cast<double>(c.index[static_cast<std::size_t>(a)]) + 1.0,
                                      -(c.level + 1));
        bits <<= 1;
        if (p[static_cast<std::size_t>(a)] >= mid) bits |= 1u;
    }
    return bits;
}

// The unique level-`level` cube containing p.  Points with a coordinate
// exactly 1 land in the topmost cube along that axis.
inline DyadicCube locate(std::span<const double> p, int level) {
    if (level < 0 || level > kMaxCubeLevel) throw std::invalid_argument("locate: bad level");
    DyadicCube out;
    out.level = level;
    out.index.resize(p.size());
    const double scale = std::ldexp(1.0, level);
    const std::uint32_t top = (1u << level) - 1u;
    for (std::size_t a = 0; a < p.size(); ++a) {
        double v = std::floor(p[a] * scale);
        if (v < 0.0) v = 0.0;
        std::uint32_t k = static_cast<std::uint32_t>(v);
        if (level > 0 && k > top) k = top;
        if (level == 0) k = 0;
        out.index[a] = k;
    }
    return out;
}

// Oriented hyperplane <normal,x> = offset.  Side 0 is the closed half-space
// <normal,x> - offset <= 0; points on the plane always map to side 0.
struct Hyperplane {
    std::vector<double> normal;
    double offset = 0.0;

    int dim() const { return static_cast<int>(normal.size()); }
    bool operator==(const Hyperplane&) const = default;
};

inline bool zero_normal(const Hyperplane& h) {
    for (double v : h.normal)
        if (v != 0.0) return false;
    return true;
}

inline int side_of(const Hyperplane& h, std::span<const double> p) {
    if (h.dim() != static_cast<int>(p.size()))
        throw std::invalid_argument("side_of: dimension mismatch");
    if (zero_normal(h)) throw std::invalid_argument("side_of: zero normal");
    double s = -h.offset;
    for (std::size_t a = 0; a < p.size(); ++a) s += h.normal[a] * p[a];
    return s <= 0.0 ? 0 : 1;
}

// Negated orientation; swaps the open/closed roles of the two half-spaces.
inline Hyperplane flipped(const Hyperplane& h) {
    Hyperplane out = h;
    for (double& v : out.normal) v = -v;
    out.offset = -out.offset;
    return out;
}

// A cube intersected with one side of an optional hyperplane cut.  With no
// cut the cell is the whole cube.
struct HCell {
    DyadicCube cube;
    std::optional<Hyperplane> cut;
    int side = 0;

    bool contains(std::span<const double> p) const {
        if (!cube_contains(cube, p)) return false;
        if (!cut) return true;
        return side_of(*cut, p) == side;
    }
};

} // namespace dyadtree
