#include "tgather/protocol.hpp"

#include <algorithm>

#include "planner.hpp"

namespace tgather
{

EnabledSet preparation_enabled(const Occupancy& occ)
{
    const Classification cls = classify(occ);
    if (phase_of(cls.label) != 1)
        throw PreconditionError("configuration is in the gathering phase (" + to_string(cls.label) + ")");
    if (!is_rigid(occ))
        throw PreconditionError("preparation phase needs a rigid configuration");
    return detail::Planner(occ, cls).preparation();
}

EnabledSet gathering_enabled(const Occupancy& occ)
{
    const Classification cls = classify(occ);
    if (phase_of(cls.label) != 2)
        throw PreconditionError("configuration is in the preparation phase (" + to_string(cls.label) + ")");
    return detail::Planner(occ, cls).gathering();
}

EnabledSet gathering_enabled(const Occupancy& occ, const std::function<bool(Coord)>& is_multiplicity)
{
    EnabledSet all = gathering_enabled(occ);
    std::erase_if(all, [&](const EnabledMove& m) { return !m.applies(is_multiplicity(m.from)); });
    return all;
}

int select_ring_edge_edge(const Occupancy& occ, int li, int lk)
{
    Classification cls = classify(occ);
    return detail::Planner(occ, cls).select_edge_edge_ring(li, lk);
}

EnabledSet enabled_moves(const Occupancy& occ, const Classification& cls)
{
    detail::Planner planner(occ, cls);
    return phase_of(cls.label) == 1 ? planner.preparation() : planner.gathering();
}

EnabledSet enabled_moves(const Occupancy& occ)
{
    return enabled_moves(occ, classify(occ));
}

std::vector<Coord> moves_for(const EnabledSet& set, Coord self, bool self_multiplicity)
{
    std::vector<Coord> out;
    for (const auto& m : set)
        if (m.from == self && m.applies(self_multiplicity))
            out.push_back(m.to);
    return out;
}

MoveDecision decide(const Snapshot& snap)
{
    if (!snap.occupancy.at(snap.self))
        throw PreconditionError("snapshot taken from an empty node");
    MoveDecision d;
    const Classification cls = classify(snap.occupancy);
    d.label = cls.label;
    try
    {
        d.alternatives = moves_for(enabled_moves(snap.occupancy, cls), snap.self, snap.self_multiplicity);
    }
    catch (const TieError& e)
    {
        throw ModelViolation(std::string("election without a winner in ") + to_string(cls.label) + ": " + e.what());
    }
    return d;
}

} // namespace tgather
