#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "tgather/errors.hpp"

namespace tgather
{

// An (ell, L)-torus: big_l rings of ell nodes each.
struct TorusDims
{
    int ell = 0;
    int big_l = 0;

    // Validates the dimensions. Rings of length 1 or 2 are rejected, and so is
    // big_l >= ell. strict additionally demands big_l > 4.
    static TorusDims make(int ell, int big_l, bool strict = false);

    int size() const { return ell * big_l; }
    bool operator==(const TorusDims&) const = default;
};

// Node (ring i, position j).
struct Coord
{
    int ring = 0;
    int pos = 0;

    auto operator<=>(const Coord&) const = default;
};

std::string to_string(Coord c);

inline int wrap(int v, int m)
{
    int r = v % m;
    return r < 0 ? r + m : r;
}

// Cyclic distance between a and b on a cycle of length m.
inline int cyclic_gap(int a, int b, int m)
{
    int d = wrap(a - b, m);
    return d < m - d ? d : m - d;
}

Coord normalize(Coord c, const TorusDims& dims);
bool valid(Coord c, const TorusDims& dims);
int index_of(Coord c, const TorusDims& dims);
Coord coord_of(int index, const TorusDims& dims);

// Ring neighbours (pos+1, pos-1) followed by column neighbours (ring+1, ring-1).
std::array<Coord, 4> neighbors(Coord c, const TorusDims& dims);
bool adjacent(Coord a, Coord b, const TorusDims& dims);
int dist(Coord a, Coord b, const TorusDims& dims);

// Binary occupancy grid: what every robot sees.
class Occupancy
{
public:
    Occupancy() = default;
    explicit Occupancy(const TorusDims& dims);
    Occupancy(const TorusDims& dims, std::vector<std::uint8_t> bits);

    const TorusDims& dims() const { return dims_; }
    const std::vector<std::uint8_t>& bits() const { return bits_; }

    bool at(Coord c) const { return bits_[index_of(c, dims_)] != 0; }
    bool at(int ring, int pos) const { return at(Coord{ring, pos}); }
    void set(Coord c, bool value) { bits_[index_of(c, dims_)] = value ? 1 : 0; }

    int nb_ring(int ring) const;
    int occupied_nodes() const;
    int occupied_rings() const;
    std::vector<Coord> occupied() const;
    std::vector<int> ring_positions(int ring) const;

    bool operator==(const Occupancy&) const = default;

private:
    TorusDims dims_{};
    std::vector<std::uint8_t> bits_;
};

// Robot counts per node.
class Config
{
public:
    Config() = default;
    explicit Config(const TorusDims& dims);
    static Config from_robots(const TorusDims& dims, const std::vector<Coord>& robots);

    const TorusDims& dims() const { return dims_; }
    int count(Coord c) const { return counts_[index_of(c, dims_)]; }
    void add(Coord c, int n = 1);
    void remove(Coord c);
    int k() const { return k_; }
    bool has_multiplicity() const;
    const std::vector<int>& counts() const { return counts_; }
    Occupancy occupancy() const;
    int nb_ring(int ring) const;

    bool operator==(const Config&) const = default;

private:
    TorusDims dims_{};
    std::vector<int> counts_;
    int k_ = 0;
};

struct Block
{
    int ring = 0;
    Coord start;
    int size = 0;
    int gap = 1;

    // Position of the idx-th node of the block (walking in +pos direction).
    int pos_at(int idx, int ell) const { return wrap(start.pos + idx * gap, ell); }
};

// Maximal d.blocks of one ring, smallest start first. Walks in the +pos direction.
std::vector<Block> blocks(const Occupancy& occ, int ring, int d);

std::vector<int> maximal_rings(const Occupancy& occ);
std::array<int, 2> adjacent_rings(int ring, const TorusDims& dims);
// First occupied ring met scanning from ring in direction dir (+1/-1), ring itself excluded
// unless nothing else is occupied.
int neighbor_ring(const Occupancy& occ, int ring, int dir);
std::array<int, 2> neighbor_rings(const Occupancy& occ, int ring);

// Torus automorphism: optional reflections followed by a translation.
struct Automorphism
{
    bool flip_ring = false;
    bool flip_pos = false;
    int shift_ring = 0;
    int shift_pos = 0;

    Coord apply(Coord c, const TorusDims& dims) const;
    Occupancy apply(const Occupancy& occ) const;
    Config apply(const Config& cfg) const;
    Automorphism inverse() const;
    bool is_identity(const TorusDims& dims) const;

    // All 4 * ell * big_l automorphisms of the grid.
    static std::vector<Automorphism> all(const TorusDims& dims);
};

} // namespace tgather
