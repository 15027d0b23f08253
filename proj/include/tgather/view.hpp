#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "tgather/torus.hpp"

namespace tgather
{

// Occupancy bits of one ring read from the observer's column, length ell.
using DeltaSeq = std::vector<std::uint8_t>;

// Stacked DeltaSeq rows, rows[0] on the observer's ring.
struct BigDelta
{
    std::vector<DeltaSeq> rows;

    std::vector<std::uint8_t> flatten() const;
};

// The four BigDelta readings (pos direction x ring direction) sorted in decreasing
// lexicographic order and concatenated row-major. m is the observer's multiplicity bit
// and takes no part in comparisons.
struct RobotView
{
    std::vector<std::uint8_t> key;
    bool m = false;

    // The i-th largest BigDelta, flattened.
    std::span<const std::uint8_t> part(int i) const;
};

enum class ViewOrder
{
    less,
    equal,
    greater
};

DeltaSeq delta_seq(const Occupancy& occ, Coord at, int pos_dir);
BigDelta big_delta(const Occupancy& occ, Coord at, int pos_dir, int ring_dir);

// View of an occupied node of cfg; throws PreconditionError on an empty node.
RobotView compute_view(const Config& cfg, Coord at);
// The same reading taken from any node, occupied or not (m is false).
RobotView node_view(const Occupancy& occ, Coord at);

ViewOrder compare_views(const RobotView& a, const RobotView& b);

// Candidates sharing the largest view, in input order.
std::vector<Coord> largest_view_nodes(const Occupancy& occ, std::span<const Coord> candidates);

// The unique candidate with the largest view; TieError when the maximum is shared.
Coord elect_largest_view(const Occupancy& occ, std::span<const Coord> candidates);
Coord elect_largest_view(const Config& cfg, std::span<const Coord> candidates);

// True when every occupied node has a distinct view.
bool views_distinct(const Occupancy& occ);

} // namespace tgather
