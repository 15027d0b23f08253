#include "tgather/torus.hpp"

#include <algorithm>
#include <numeric>

namespace tgather
{

TorusDims TorusDims::make(int ell, int big_l, bool strict)
{
    if (ell < 3 || big_l < 3)
        throw InvalidDims("ring lengths must be at least 3 (got ell=" + std::to_string(ell) +
                          ", L=" + std::to_string(big_l) + ")");
    if (big_l >= ell)
        throw InvalidDims("the torus must satisfy L < ell");
    if (strict && big_l <= 4)
        throw InvalidDims("strict dimensions require L > 4");
    return TorusDims{ell, big_l};
}

std::string to_string(Coord c)
{
    return "(" + std::to_string(c.ring) + "," + std::to_string(c.pos) + ")";
}

Coord normalize(Coord c, const TorusDims& dims)
{
    return Coord{wrap(c.ring, dims.big_l), wrap(c.pos, dims.ell)};
}

bool valid(Coord c, const TorusDims& dims)
{
    return c.ring >= 0 && c.ring < dims.big_l && c.pos >= 0 && c.pos < dims.ell;
}

int index_of(Coord c, const TorusDims& dims)
{
    return c.ring * dims.ell + c.pos;
}

Coord coord_of(int index, const TorusDims& dims)
{
    return Coord{index / dims.ell, index % dims.ell};
}

std::array<Coord, 4> neighbors(Coord c, const TorusDims& dims)
{
    return {Coord{c.ring, wrap(c.pos + 1, dims.ell)}, Coord{c.ring, wrap(c.pos - 1, dims.ell)},
            Coord{wrap(c.ring + 1, dims.big_l), c.pos}, Coord{wrap(c.ring - 1, dims.big_l), c.pos}};
}

bool adjacent(Coord a, Coord b, const TorusDims& dims)
{
    return dist(a, b, dims) == 1;
}

int dist(Coord a, Coord b, const TorusDims& dims)
{
    return cyclic_gap(a.ring, b.ring, dims.big_l) + cyclic_gap(a.pos, b.pos, dims.ell);
}

Occupancy::Occupancy(const TorusDims& dims) : dims_(dims), bits_(dims.size(), 0) {}

Occupancy::Occupancy(const TorusDims& dims, std::vector<std::uint8_t> bits)
    : dims_(dims), bits_(std::move(bits))
{
    if (static_cast<int>(bits_.size()) != dims.size())
        throw PreconditionError("occupancy size does not match the torus");
    for (auto& b : bits_)
        b = b ? 1 : 0;
}

int Occupancy::nb_ring(int ring) const
{
    auto first = bits_.begin() + ring * dims_.ell;
    return static_cast<int>(std::count(first, first + dims_.ell, 1));
}

int Occupancy::occupied_nodes() const
{
    return static_cast<int>(std::count(bits_.begin(), bits_.end(), 1));
}

int Occupancy::occupied_rings() const
{
    int n = 0;
    for (int i = 0; i < dims_.big_l; ++i)
        n += nb_ring(i) > 0 ? 1 : 0;
    return n;
}

std::vector<Coord> Occupancy::occupied() const
{
    std::vector<Coord> out;
    for (int idx = 0; idx < dims_.size(); ++idx)
        if (bits_[idx])
            out.push_back(coord_of(idx, dims_));
    return out;
}

std::vector<int> Occupancy::ring_positions(int ring) const
{
    std::vector<int> out;
    for (int j = 0; j < dims_.ell; ++j)
        if (at(ring, j))
            out.push_back(j);
    return out;
}

Config::Config(const TorusDims& dims) : dims_(dims), counts_(dims.size(), 0) {}

Config Config::from_robots(const TorusDims& dims, const std::vector<Coord>& robots)
{
    Config cfg(dims);
    for (const auto& r : robots)
    {
        if (!valid(r, dims))
            throw PreconditionError("robot position " + to_string(r) + " outside the torus");
        cfg.add(r);
    }
    return cfg;
}

void Config::add(Coord c, int n)
{
    counts_[index_of(c, dims_)] += n;
    k_ += n;
}

void Config::remove(Coord c)
{
    int& v = counts_[index_of(c, dims_)];
    if (v == 0)
        throw PreconditionError("no robot to remove at " + to_string(c));
    --v;
    --k_;
}

bool Config::has_multiplicity() const
{
    return std::any_of(counts_.begin(), counts_.end(), [](int v) { return v > 1; });
}

Occupancy Config::occupancy() const
{
    std::vector<std::uint8_t> bits(counts_.size());
    for (std::size_t i = 0; i < counts_.size(); ++i)
        bits[i] = counts_[i] > 0 ? 1 : 0;
    return Occupancy(dims_, std::move(bits));
}

int Config::nb_ring(int ring) const
{
    return occupancy().nb_ring(ring);
}

std::vector<Block> blocks(const Occupancy& occ, int ring, int d)
{
    if (d < 1)
        throw PreconditionError("block gap must be positive");
    const int ell = occ.dims().ell;
    std::vector<int> pos = occ.ring_positions(ring);
    std::vector<Block> out;
    if (pos.empty())
        return out;
    const int m = static_cast<int>(pos.size());
    auto gap_after = [&](int idx) {
        int nxt = pos[(idx + 1) % m];
        int g = wrap(nxt - pos[idx], ell);
        return g == 0 ? ell : g;
    };
    // Find a break (a gap different from d); a ring with no break is one cyclic block.
    int brk = -1;
    for (int idx = 0; idx < m; ++idx)
        if (gap_after(idx) != d)
        {
            brk = idx;
            break;
        }
    if (brk < 0)
    {
        out.push_back(Block{ring, Coord{ring, pos[0]}, m, d});
        return out;
    }
    int idx = (brk + 1) % m;
    for (int seen = 0; seen < m;)
    {
        Block b{ring, Coord{ring, pos[idx]}, 1, d};
        ++seen;
        while (gap_after(idx) == d && seen < m)
        {
            idx = (idx + 1) % m;
            ++b.size;
            ++seen;
        }
        out.push_back(b);
        idx = (idx + 1) % m;
    }
    std::sort(out.begin(), out.end(), [](const Block& a, const Block& b) {
        return a.start.pos != b.start.pos ? a.start.pos < b.start.pos : a.size < b.size;
    });
    return out;
}

std::vector<int> maximal_rings(const Occupancy& occ)
{
    int best = -1;
    std::vector<int> out;
    for (int i = 0; i < occ.dims().big_l; ++i)
    {
        int nb = occ.nb_ring(i);
        if (nb > best)
        {
            best = nb;
            out.clear();
        }
        if (nb == best)
            out.push_back(i);
    }
    return out;
}

std::array<int, 2> adjacent_rings(int ring, const TorusDims& dims)
{
    return {wrap(ring - 1, dims.big_l), wrap(ring + 1, dims.big_l)};
}

int neighbor_ring(const Occupancy& occ, int ring, int dir)
{
    const int big_l = occ.dims().big_l;
    for (int s = 1; s < big_l; ++s)
    {
        int r = wrap(ring + dir * s, big_l);
        if (occ.nb_ring(r) > 0)
            return r;
    }
    return ring;
}

std::array<int, 2> neighbor_rings(const Occupancy& occ, int ring)
{
    return {neighbor_ring(occ, ring, -1), neighbor_ring(occ, ring, +1)};
}

Coord Automorphism::apply(Coord c, const TorusDims& dims) const
{
    int r = flip_ring ? -c.ring : c.ring;
    int p = flip_pos ? -c.pos : c.pos;
    return Coord{wrap(r + shift_ring, dims.big_l), wrap(p + shift_pos, dims.ell)};
}

Occupancy Automorphism::apply(const Occupancy& occ) const
{
    const auto& dims = occ.dims();
    Occupancy out(dims);
    for (int idx = 0; idx < dims.size(); ++idx)
        if (occ.bits()[idx])
            out.set(apply(coord_of(idx, dims), dims), true);
    return out;
}

Config Automorphism::apply(const Config& cfg) const
{
    const auto& dims = cfg.dims();
    Config out(dims);
    for (int idx = 0; idx < dims.size(); ++idx)
        if (int n = cfg.counts()[idx])
            out.add(apply(coord_of(idx, dims), dims), n);
    return out;
}

Automorphism Automorphism::inverse() const
{
    return Automorphism{flip_ring, flip_pos, flip_ring ? shift_ring : -shift_ring,
                        flip_pos ? shift_pos : -shift_pos};
}

bool Automorphism::is_identity(const TorusDims& dims) const
{
    return !flip_ring && !flip_pos && wrap(shift_ring, dims.big_l) == 0 &&
           wrap(shift_pos, dims.ell) == 0;
}

std::vector<Automorphism> Automorphism::all(const TorusDims& dims)
{
    std::vector<Automorphism> out;
    out.reserve(4 * dims.size());
    for (int fr = 0; fr < 2; ++fr)
        for (int fp = 0; fp < 2; ++fp)
            for (int sr = 0; sr < dims.big_l; ++sr)
                for (int sp = 0; sp < dims.ell; ++sp)
                    out.push_back(Automorphism{fr == 1, fp == 1, sr, sp});
    return out;
}

} // namespace tgather
