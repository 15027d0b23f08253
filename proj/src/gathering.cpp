#include "planner.hpp"

#include <algorithm>
#include <array>

namespace tgather::detail
{

void Planner::gath_pr()
{
    const auto& t = *cls_.pred.target;
    const int up = t.up(dims_);
    const int mr = t.max_ring;
    const int li = wrap(t.target_ring - up, big_l());
    const Coord vt = t.v_target;
    // An empty v_target whose filling would tie the maximal ring is bypassed: robots enter the
    // target ring through its occupied nodes beside v_target instead.
    const bool bypass = !at(vt) && nb(t.target_ring) + 1 >= nb(mr);
    if (nb(li) > 0)
    {
        if (bypass)
        {
            // One side takes the climbers so that the 2.block does not end up with two towers.
            // The side is read with ring li cleared, which stays fixed while li empties.
            Occupancy rest = occ_;
            for (int p = 0; p < ell(); ++p)
                rest.set(Coord{li, p}, false);
            const std::array<Coord, 2> sides{node(t.target_ring, vt.pos - 1), node(t.target_ring, vt.pos + 1)};
            std::vector<int> entries;
            for (const auto& c : largest_view_nodes(rest, sides))
                entries.push_back(c.pos);
            bool any = false;
            for (int p : entries)
                if (at(li, p))
                {
                    emit(Coord{li, p}, Coord{t.target_ring, p});
                    any = true;
                }
            if (any)
                return;
            int dbest = ell();
            for (const auto& r : robots_on(li))
                for (int p : entries)
                    dbest = std::min(dbest, pgap(r.pos, p));
            for (const auto& r : robots_on(li))
                for (int p : entries)
                    if (pgap(r.pos, p) == dbest)
                        step_ring_toward(r, p);
            return;
        }
        const Coord ui{li, vt.pos};
        if (at(ui))
        {
            emit(ui, vt);
            return;
        }
        if (nb(li) < ell() - 1)
        {
            for (const auto& r : closest_to(robots_on(li), ui))
                step_ring_toward(r, ui.pos);
            return;
        }
        // One hole on the ring: its neighbours enter it, but never out of a tower.
        emit(node(li, ui.pos + 1), ui, true);
        emit(node(li, ui.pos - 1), ui, true);
        return;
    }
    int lk = li;
    while (nb(lk) == 0)
        lk = wrap(lk - up, big_l());
    const Coord below{lk, vt.pos};
    if (at(below))
    {
        emit(below, node(lk + up, vt.pos));
        return;
    }
    const auto rm = closest_to(robots_on(lk), below);
    // Two robots climbing together onto the empty ring would tie the maximal ring: they meet
    // on their own ring first.
    const bool tie = static_cast<int>(rm.size()) >= nb(mr);
    for (const auto& r : rm)
        if (tie)
            step_ring_toward(r, vt.pos);
        else
            emit(r, node(r.ring + up, r.pos));
}

void Planner::gath_ls()
{
    const auto& t = *cls_.pred.target;
    const int mr = t.max_ring;
    if (nb(mr) <= 5)
    {
        for (const auto& m : align(mr, t.target_ring))
            out_.push_back(m);
        return;
    }
    const int u = t.v_target.pos;
    const Coord u3{mr, u};
    if (at(u3))
    {
        std::vector<Coord> occ_nbrs;
        for (int s : {+1, -1})
            if (at(mr, u + s))
                occ_nbrs.push_back(node(mr, u + s));
        if (occ_nbrs.size() == 1)
            emit(occ_nbrs[0], u3);
        else
            emit(u3, t.v_target);
        return;
    }
    auto r = closest_to(robots_on(mr), u3);
    if (r.size() == 2)
    {
        for (const auto& x : r)
            step_ring_toward(x, u);
        return;
    }
    // The robot across the hole from r, if one step farther, moves first.
    const Coord x = r[0];
    const int d = pgap(x.pos, u);
    const int away = wrap(x.pos - u, ell()) == d ? -1 : +1; // direction from u3 away from x
    int p = u;
    do
        p = wrap(p + away, ell());
    while (!at(mr, p));
    if (pgap(p, u) == d + 1)
        step_ring_toward(Coord{mr, p}, u);
    else
        step_ring_toward(x, u);
}

void Planner::gath_sp1()
{
    const Coord v = *sp1_target(occ_);
    const int lj = v.ring, u = v.pos;
    if (at(v))
    {
        for (int s : {+1, -1})
            if (at(lj, u + s))
                emit(node(lj, u + s), v);
        return;
    }
    // A tower entering v one robot at a time would add a third node to the ring.
    const bool two_block = nb(lj) == 2;
    emit(node(lj, u + 1), v, two_block);
    emit(node(lj, u - 1), v, two_block);
}

void Planner::gath_sp2()
{
    const auto& t = *cls_.pred.target;
    const int mr = t.max_ring;
    const int v = t.v_target.pos;
    const Coord u{mr, v};
    if (nb(mr) == 5 || !at(u))
    {
        emit(node(mr, v + 1), u);
        emit(node(mr, v - 1), u);
        return;
    }
    // 1.block of three ending above v_target, lone node across the hole.
    for (int dir : {+1, -1})
        if (at(mr, v + dir) && at(mr, v + 2 * dir) && !at(mr, v - dir))
            emit(node(mr, v + dir), u);
}

void Planner::gath_sp3()
{
    const auto& t = *cls_.pred.target;
    emit(t.v_target, Coord{t.max_ring, t.v_target.pos});
}

void Planner::gath_sp4()
{
    const int ring = maximal_rings(occ_)[0];
    auto bl = blocks(occ_, ring, 1);
    const auto& b = bl[0];
    if (b.size == 3)
    {
        const Coord mid{ring, b.pos_at(1, ell())};
        emit(Coord{ring, b.pos_at(0, ell())}, mid);
        emit(Coord{ring, b.pos_at(2, ell())}, mid);
        return;
    }
    const Coord a{ring, b.pos_at(0, ell())}, c{ring, b.pos_at(1, ell())};
    emit(a, c, true);
    emit(c, a, true);
}

EnabledSet Planner::gathering()
{
    switch (cls_.label)
    {
    case SetLabel::gathered: break;
    case SetLabel::sp4: gath_sp4(); break;
    case SetLabel::sp3: gath_sp3(); break;
    case SetLabel::sp2: gath_sp2(); break;
    case SetLabel::sp1: gath_sp1(); break;
    case SetLabel::pr: gath_pr(); break;
    case SetLabel::ls: gath_ls(); break;
    default: throw PreconditionError("gathering phase asked for a " + to_string(cls_.label) + " configuration");
    }
    return finish();
}

} // namespace tgather::detail
