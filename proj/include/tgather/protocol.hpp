#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "tgather/classify.hpp"
#include "tgather/torus.hpp"

namespace tgather
{

// One admissible move. Several entries sharing `from` are alternatives resolved by the
// scheduler; they carry adversary_choice. single_only moves are taken only by a robot that
// is alone on `from` (decided with its own multiplicity bit).
struct EnabledMove
{
    Coord from;
    Coord to;
    bool adversary_choice = false;
    bool single_only = false;

    bool applies(bool multiplicity) const { return !(multiplicity && single_only); }

    bool operator==(const EnabledMove&) const = default;
};

using EnabledSet = std::vector<EnabledMove>;

struct Snapshot
{
    Occupancy occupancy;
    Coord self;
    bool self_multiplicity = false;
};

struct MoveDecision
{
    // Empty means Stay. With several alternatives the scheduler picks one.
    std::vector<Coord> alternatives;
    SetLabel label = SetLabel::gathered;

    bool stays() const { return alternatives.empty(); }
    std::optional<Coord> destination() const
    {
        if (alternatives.empty())
            return std::nullopt;
        return alternatives.front();
    }
};

// Align(li, lk): arrange the nodes of li around the column of lk's mark.
EnabledSet align_enabled(const Occupancy& occ, int li, int lk);
// Whether li is already arranged as Align wants it.
bool aligned(const Occupancy& occ, int li, int lk);
// Throws PreconditionError when Align may not be called on (li, lk).
void check_align_precondition(const Occupancy& occ, int li, int lk);

// Preparation phase. Throws PreconditionError on a phase-2 or non-rigid configuration.
EnabledSet preparation_enabled(const Occupancy& occ);
// Gathering phase. Throws PreconditionError on a phase-1 configuration.
EnabledSet gathering_enabled(const Occupancy& occ);
// The gathering phase with single_only moves resolved by a per-node multiplicity oracle.
EnabledSet gathering_enabled(const Occupancy& occ, const std::function<bool(Coord)>& is_multiplicity);

// Which ring of {li, lk} the equal-count edge-edge rule reduces first.
int select_ring_edge_edge(const Occupancy& occ, int li, int lk);

// Whole-protocol enabled set for an occupancy (phase chosen by classification).
// TieError and ModelViolation propagate.
EnabledSet enabled_moves(const Occupancy& occ);
EnabledSet enabled_moves(const Occupancy& occ, const Classification& cls);

// Keeps the moves a robot at `self` would take given its multiplicity bit.
std::vector<Coord> moves_for(const EnabledSet& set, Coord self, bool self_multiplicity);

// The robot algorithm. Throws ModelViolation when the protocol has no answer.
MoveDecision decide(const Snapshot& snap);

} // namespace tgather
