#include "tgather/view.hpp"

#include <algorithm>
#include <set>

namespace tgather
{

std::vector<std::uint8_t> BigDelta::flatten() const
{
    std::vector<std::uint8_t> out;
    for (const auto& row : rows)
        out.insert(out.end(), row.begin(), row.end());
    return out;
}

std::span<const std::uint8_t> RobotView::part(int i) const
{
    const std::size_t n = key.size() / 4;
    return std::span<const std::uint8_t>(key).subspan(i * n, n);
}

DeltaSeq delta_seq(const Occupancy& occ, Coord at, int pos_dir)
{
    const int ell = occ.dims().ell;
    DeltaSeq out(ell);
    for (int c = 0; c < ell; ++c)
        out[c] = occ.at(at.ring, wrap(at.pos + pos_dir * c, ell)) ? 1 : 0;
    return out;
}

BigDelta big_delta(const Occupancy& occ, Coord at, int pos_dir, int ring_dir)
{
    const int big_l = occ.dims().big_l;
    BigDelta out;
    out.rows.reserve(big_l);
    for (int t = 0; t < big_l; ++t)
        out.rows.push_back(delta_seq(occ, Coord{wrap(at.ring + ring_dir * t, big_l), at.pos}, pos_dir));
    return out;
}

namespace
{

void flat_reading(const Occupancy& occ, Coord at, int pos_dir, int ring_dir, std::uint8_t* out)
{
    const auto& dims = occ.dims();
    const auto& bits = occ.bits();
    for (int t = 0; t < dims.big_l; ++t)
    {
        const int base = wrap(at.ring + ring_dir * t, dims.big_l) * dims.ell;
        for (int c = 0; c < dims.ell; ++c)
            *out++ = bits[base + wrap(at.pos + pos_dir * c, dims.ell)];
    }
}

} // namespace

RobotView node_view(const Occupancy& occ, Coord at)
{
    const std::size_t n = occ.dims().size();
    std::array<std::vector<std::uint8_t>, 4> parts;
    int idx = 0;
    for (int pd : {+1, -1})
        for (int rd : {+1, -1})
        {
            parts[idx].resize(n);
            flat_reading(occ, at, pd, rd, parts[idx].data());
            ++idx;
        }
    std::sort(parts.begin(), parts.end(), std::greater<>());
    RobotView v;
    v.key.reserve(4 * n);
    for (const auto& p : parts)
        v.key.insert(v.key.end(), p.begin(), p.end());
    return v;
}

RobotView compute_view(const Config& cfg, Coord at)
{
    if (cfg.count(at) == 0)
        throw PreconditionError("view requested for an empty node " + to_string(at));
    RobotView v = node_view(cfg.occupancy(), at);
    v.m = cfg.count(at) >= 2;
    return v;
}

ViewOrder compare_views(const RobotView& a, const RobotView& b)
{
    if (a.key.size() != b.key.size())
        throw PreconditionError("views taken on different tori");
    auto c = a.key <=> b.key;
    if (c < 0)
        return ViewOrder::less;
    if (c > 0)
        return ViewOrder::greater;
    return ViewOrder::equal;
}

std::vector<Coord> largest_view_nodes(const Occupancy& occ, std::span<const Coord> candidates)
{
    std::vector<Coord> best;
    RobotView best_view;
    for (const auto& c : candidates)
    {
        RobotView v = node_view(occ, c);
        if (best.empty() || v.key > best_view.key)
        {
            best = {c};
            best_view = std::move(v);
        }
        else if (v.key == best_view.key)
            best.push_back(c);
    }
    return best;
}

Coord elect_largest_view(const Occupancy& occ, std::span<const Coord> candidates)
{
    if (candidates.empty())
        throw PreconditionError("election over an empty candidate set");
    std::vector<Coord> best = largest_view_nodes(occ, candidates);
    // Duplicated coordinates are the same node, not a tie.
    std::sort(best.begin(), best.end());
    best.erase(std::unique(best.begin(), best.end()), best.end());
    if (best.size() > 1)
        throw TieError("largest view shared by " + to_string(best[0]) + " and " + to_string(best[1]));
    return best.front();
}

Coord elect_largest_view(const Config& cfg, std::span<const Coord> candidates)
{
    for (const auto& c : candidates)
        if (cfg.count(c) == 0)
            throw PreconditionError("election candidate " + to_string(c) + " is not occupied");
    return elect_largest_view(cfg.occupancy(), candidates);
}

bool views_distinct(const Occupancy& occ)
{
    std::set<std::vector<std::uint8_t>> seen;
    for (const auto& c : occ.occupied())
        if (!seen.insert(node_view(occ, c).key).second)
            return false;
    return true;
}

} // namespace tgather
