#include "planner.hpp"

#include <algorithm>

namespace tgather::detail
{

// ---------------------------------------------------------------------------------------
// Several maximal rings

void Planner::prep_full_rings()
{
    // Every maximal ring is full. A robot steps onto a neighbour of its own ring; the
    // destination does not change the occupancy reached, only which node is vacated.
    std::vector<Coord> cands, good;
    for (int r : maximal_rings(occ_))
        for (const auto& c : robots_on(r))
        {
            cands.push_back(c);
            Occupancy o = occ_;
            o.set(c, false);
            if (is_rigid(o))
                good.push_back(c);
        }
    const Coord r = elect(good.empty() ? cands : good);
    emit(r, {node(r.ring, r.pos + 1), node(r.ring, r.pos - 1)}, true);
}

void Planner::leave_to_empty_ring(const std::vector<Coord>& cands)
{
    std::vector<Coord> movers, good;
    for (const auto& c : cands)
    {
        bool any = false, all_rigid = true;
        for (int s : {+1, -1})
        {
            const int ring = wrap(c.ring + s, big_l());
            if (nb(ring) != 0)
                continue;
            any = true;
            all_rigid = all_rigid && is_rigid(moved(c, Coord{ring, c.pos}));
        }
        if (!any)
            continue;
        movers.push_back(c);
        if (all_rigid)
            good.push_back(c);
    }
    if (movers.empty())
        throw ModelViolation("no robot can step onto an empty ring");
    const Coord r = elect(good.empty() ? movers : good);
    std::vector<Coord> tos;
    for (int s : {+1, -1})
        if (nb(r.ring + s) == 0)
            tos.push_back(node(r.ring + s, r.pos));
    emit(r, tos);
}

void Planner::prep_fill_empty()
{
    auto maxr = maximal_rings(occ_);
    std::vector<Coord> holes;
    for (int r : maxr)
        for (int p = 0; p < ell(); ++p)
            if (!at(r, p))
                holes.push_back(Coord{r, p});

    // Each robot's distance to the nearest hole on a maximal ring other than its own.
    auto robots = occ_.occupied();
    std::vector<int> dmin(robots.size(), -1);
    int best_d = -1;
    for (std::size_t i = 0; i < robots.size(); ++i)
    {
        for (const auto& h : holes)
            if (h.ring != robots[i].ring)
            {
                const int d = dist(robots[i], h, dims_);
                if (dmin[i] < 0 || d < dmin[i])
                    dmin[i] = d;
            }
        if (dmin[i] >= 0 && (best_d < 0 || dmin[i] < best_d))
            best_d = dmin[i];
    }
    std::vector<Coord> r_set;
    for (std::size_t i = 0; i < robots.size(); ++i)
        if (dmin[i] == best_d)
            r_set.push_back(robots[i]);

    // Nearest holes of r, ties broken by node view; first step along the ring, then the column.
    auto target_of = [&](Coord r) {
        std::vector<Coord> near;
        for (const auto& h : holes)
            if (h.ring != r.ring && dist(r, h, dims_) == best_d)
                near.push_back(h);
        return best(near);
    };
    auto first_steps = [&](Coord r, const std::vector<Coord>& us) {
        std::vector<Coord> tos;
        for (const auto& u : us)
        {
            if (u.pos != r.pos)
                for (int s : pos_steps(r.pos, u.pos))
                    tos.push_back(node(r.ring, r.pos + s));
            else
                for (int s : ring_steps(r.ring, u.ring))
                    tos.push_back(node(r.ring + s, r.pos));
        }
        std::sort(tos.begin(), tos.end());
        tos.erase(std::unique(tos.begin(), tos.end()), tos.end());
        return tos;
    };

    std::vector<Coord> good;
    for (const auto& r : r_set)
    {
        bool ok = true;
        for (const auto& to : first_steps(r, target_of(r)))
            ok = ok && is_rigid(moved(r, to));
        if (ok)
            good.push_back(r);
    }
    if (!good.empty())
    {
        const Coord r = elect(good);
        emit(r, first_steps(r, target_of(r)));
        return;
    }

    const Coord r = elect(r_set);
    const auto us = target_of(r);
    const auto steps = first_steps(r, us);
    if (occ_.occupied_rings() == 2)
    {
        std::vector<Coord> cands;
        for (int m : maxr)
            for (const auto& c : robots_on(m))
                cands.push_back(c);
        leave_to_empty_ring(cands);
        return;
    }
    const Coord u = us.front();
    const Coord to = steps.front();
    if (to.pos == u.pos && r.pos != u.pos && !(to == u))
    {
        // r would enter u's column for the first time: the robot of u's ring in r's column
        // takes u instead.
        const Coord beside{u.ring, r.pos};
        if (at(beside))
        {
            emit(beside, u);
            return;
        }
    }
    else if (to == u)
    {
        const Occupancy after = moved(r, to);
        if (after.occupied_rings() == 2)
        {
            std::vector<Coord> cands;
            for (int m : maxr)
                if (m != u.ring)
                    for (const auto& c : robots_on(m))
                        if (!(c == r))
                            cands.push_back(c);
            if (!cands.empty())
            {
                leave_to_empty_ring(cands);
                return;
            }
        }
        else
        {
            auto axes = symmetry_axes(after);
            const bool parallel = std::any_of(axes.begin(), axes.end(), [](const SymmetryAxis& a) {
                return a.orientation == AxisOrientation::ring_parallel;
            });
            std::vector<Coord> movers;
            std::vector<std::vector<Coord>> dests;
            auto consider = [&](Coord c, std::vector<Coord> tos) {
                if (tos.empty())
                    return;
                movers.push_back(c);
                dests.push_back(std::move(tos));
            };
            if (parallel)
            {
                for (int m : maxr)
                    if (m != u.ring)
                        for (const auto& c : robots_on(m))
                            if (!(c == r))
                                consider(c, empty_ring_neighbors(c));
            }
            else
            {
                // Rings other than u's that are not two 1.blocks split by single holes: the
                // robot nearest the biggest 1.block closes in on it.
                for (int ring = 0; ring < big_l(); ++ring)
                {
                    if (ring == u.ring || nb(ring) == 0)
                        continue;
                    auto bl = blocks(occ_, ring, 1);
                    const bool split = bl.size() == 2 && nb(ring) == ell() - 2;
                    if (split || bl.size() < 2)
                        continue;
                    int big = 0;
                    for (const auto& b : bl)
                        big = std::max(big, b.size);
                    for (const auto& b : bl)
                    {
                        if (b.size != big)
                            continue;
                        // Nearest robots outside b on either side.
                        const int first = b.pos_at(0, ell()), last = b.pos_at(b.size - 1, ell());
                        int p = wrap(last + 1, ell());
                        while (!at(ring, p))
                            p = wrap(p + 1, ell());
                        consider(Coord{ring, p}, {node(ring, p - 1)});
                        p = wrap(first - 1, ell());
                        while (!at(ring, p))
                            p = wrap(p - 1, ell());
                        consider(Coord{ring, p}, {node(ring, p + 1)});
                    }
                }
                if (movers.empty())
                    for (int ring = 0; ring < big_l(); ++ring)
                        if (ring != u.ring)
                            for (const auto& c : robots_on(ring))
                                consider(c, empty_ring_neighbors(c));
            }
            if (!movers.empty())
            {
                std::vector<Coord> good_movers;
                for (std::size_t i = 0; i < movers.size(); ++i)
                {
                    bool ok = true;
                    for (const auto& t : dests[i])
                        ok = ok && is_rigid(moved(movers[i], t));
                    if (ok)
                        good_movers.push_back(movers[i]);
                }
                const Coord e = elect(good_movers.empty() ? movers : good_movers);
                for (std::size_t i = 0; i < movers.size(); ++i)
                    if (movers[i] == e)
                        emit(e, dests[i]);
                return;
            }
        }
    }
    emit(r, steps);
}

void Planner::prep_not_unique()
{
    const int top = nb(maximal_rings(occ_)[0]);
    if (top == ell())
        prep_full_rings();
    else
        prep_fill_empty();
}

// ---------------------------------------------------------------------------------------
// Unique maximal ring

void Planner::prep_empty()
{
    const int mr = cls_.roles->max_ring;
    if (occ_.occupied_rings() == 1)
    {
        const Coord r = elect(robots_on(mr));
        emit(r, {node(mr + 1, r.pos), node(mr - 1, r.pos)});
        return;
    }
    std::vector<Coord> cands;
    int dbest = big_l();
    for (const auto& c : occ_.occupied())
    {
        if (c.ring == mr)
            continue;
        const int d = rgap(c.ring, mr);
        if (d < dbest)
        {
            dbest = d;
            cands = {c};
        }
        else if (d == dbest)
            cands.push_back(c);
    }
    step_column_toward(elect(cands), mr);
}

void Planner::prep_semi_empty()
{
    const auto& roles = *cls_.roles;
    const int mr = roles.max_ring, li = roles.li, lk = roles.lk;
    if (nb(lk) == 3)
    {
        auto pos = occ_.ring_positions(lk);
        std::array<int, 3> gap{};
        for (int i = 0; i < 3; ++i)
            gap[i] = wrap(pos[(i + 1) % 3] - pos[i], ell()); // gap after pos[i]
        auto robot = [&](int i) { return Coord{lk, pos[i % 3]}; };
        if (gap[0] == gap[1] && gap[1] == gap[2])
        {
            const Coord r = elect({robot(0), robot(1), robot(2)});
            emit(r, empty_ring_neighbors(r));
            return;
        }
        for (int i = 0; i < 3; ++i)
        {
            // Robot i+1 sits between gaps i and i+1.
            if (gap[i] == gap[(i + 1) % 3] && gap[i] > 1)
            {
                const Coord mid = robot(i + 1);
                emit(mid, empty_ring_neighbors(mid));
                return;
            }
        }
        // The pair at the smallest gap is a d.block of two; the third robot closes in on it
        // through its shorter hole.
        int small = 0;
        for (int i = 1; i < 3; ++i)
            if (gap[i] < gap[small])
                small = i;
        const int third = (small + 2) % 3;
        const Coord t = robot(third);
        const int after = gap[third];          // towards robot third+1
        const int before = gap[(third + 2) % 3]; // towards robot third-1
        std::vector<Coord> tos;
        if (after <= before)
            tos.push_back(node(lk, t.pos + 1));
        if (before <= after)
            tos.push_back(node(lk, t.pos - 1));
        emit(t, tos);
        return;
    }
    const int s = ring_dir(mr, li);
    int ln = wrap(li + s, big_l());
    while (nb(ln) == 0)
        ln = wrap(ln + s, big_l());
    const Coord r = elect(robots_on(ln));
    emit(r, node(r.ring - s, r.pos));
}

void Planner::prep_oriented1()
{
    const auto& roles = *cls_.roles;
    const int mr = roles.max_ring, li = roles.li;
    const Coord ri = robots_on(li)[0];
    const Coord u{mr, ri.pos};
    const int nbm = nb(mr);
    if (nbm >= 5)
    {
        emit(ri, u);
        return;
    }
    if (nbm == 3)
    {
        if (at(u) && at(mr, u.pos + 1) && at(mr, u.pos - 1))
            emit(ri, u);
        else
            for (const auto& m : align(mr, li))
                out_.push_back(m);
        return;
    }
    if (!at(u))
    {
        emit(ri, u);
        return;
    }
    auto free = empty_ring_neighbors(u);
    if (!free.empty())
    {
        emit(u, free);
        return;
    }
    // u is the middle of a 1.block of three; one of its neighbours steps outward.
    int w = -1;
    for (int p : occ_.ring_positions(mr))
        if (pgap(p, u.pos) > 1)
            w = p;
    std::vector<Coord> cands, preferred;
    for (int s : {+1, -1})
    {
        const Coord c = node(mr, u.pos + s);
        if (at(node(mr, u.pos + 2 * s)))
            continue;
        cands.push_back(c);
        if (pgap(c.pos, w) != ell() / 2)
            preferred.push_back(c);
    }
    auto pool = best(preferred.empty() ? cands : preferred);
    for (const auto& c : pool)
        emit(c, node(mr, c.pos + (c.pos == wrap(u.pos + 1, ell()) ? 1 : -1)));
}

void Planner::prep_oriented2()
{
    const auto& roles = *cls_.roles;
    const int li = roles.li, lk = roles.lk;
    const int col = occ_.ring_positions(li)[0];
    if (nb(lk) <= 3)
    {
        for (const auto& m : align(lk, li))
            out_.push_back(m);
        return;
    }
    const Coord uk{lk, col};
    for (const auto& r : best(closest_to(robots_on(lk), uk)))
        step_ring_toward(r, col);
}

void Planner::prep_semi_oriented()
{
    const auto& roles = *cls_.roles;
    const int mr = roles.max_ring, li = roles.li, lk = roles.lk;
    const int si = ring_dir(mr, li), sk = ring_dir(mr, lk);
    auto scan = [&](int from, int s) {
        int r = wrap(from + s, big_l());
        while (nb(r) == 0)
            r = wrap(r + s, big_l());
        return r;
    };
    const int ni = scan(li, si), nk = scan(lk, sk);
    // With two robots on the maximal ring a robot reaching li or lk would tie it, so the
    // single robots of li and lk step away instead, as when only three rings are occupied.
    if (nk == li || nb(mr) == 2)
    {
        const Coord a = robots_on(li)[0], b = robots_on(lk)[0];
        // Where c may go: away from the maximal ring unless that ties it, else onto it.
        auto dest = [&](Coord c) -> std::optional<Coord> {
            const int s = c.ring == li ? si : sk;
            const Coord away = node(c.ring + s, c.pos);
            if (!at(away) && nb(away.ring) + 1 < nb(mr))
                return away;
            const Coord up = node(mr, c.pos);
            if (nb(mr) == 2 && !at(up))
                return up;
            return std::nullopt;
        };
        std::vector<Coord> free;
        for (const auto& c : {a, b})
            if (dest(c))
                free.push_back(c);
        if (free.empty())
        {
            const Coord r = elect({a, b});
            // Under a two-node maximal ring, shift to a column where the climb is free.
            std::vector<Coord> tos = empty_ring_neighbors(r);
            if (nb(mr) == 2)
            {
                std::vector<Coord> open;
                for (const auto& t : tos)
                    if (!at(mr, t.pos))
                        open.push_back(t);
                if (!open.empty())
                    tos = open;
            }
            emit(r, tos);
            return;
        }
        const Coord r = elect(free);
        emit(r, *dest(r));
        return;
    }
    const int di = rgap(ni, li), dk = rgap(nk, lk);
    struct Mover
    {
        Coord c;
        std::vector<Coord> tos;
    };
    std::vector<Mover> movers;
    auto add_ring = [&](int ring, std::vector<int> dirs) {
        for (const auto& c : robots_on(ring))
        {
            std::vector<Coord> tos;
            for (int d : dirs)
            {
                const Coord t = node(c.ring + d, c.pos);
                if (!at(t))
                    tos.push_back(t);
            }
            movers.push_back({c, tos});
        }
    };
    if (ni == nk)
    {
        std::vector<int> dirs;
        if (di <= dk)
            dirs.push_back(-si);
        if (dk <= di)
            dirs.push_back(-sk);
        add_ring(ni, dirs);
    }
    else
    {
        if (di <= dk)
            add_ring(ni, {-si});
        if (dk <= di)
            add_ring(nk, {-sk});
    }
    std::vector<Coord> able;
    for (const auto& m : movers)
        if (!m.tos.empty())
            able.push_back(m.c);
    if (able.empty())
    {
        // The only candidate would land on an occupied node: it shifts along its ring first.
        const Coord r = elect([&] {
            std::vector<Coord> all;
            for (const auto& m : movers)
                all.push_back(m.c);
            return all;
        }());
        emit(r, empty_ring_neighbors(r));
        return;
    }
    const Coord r = elect(able);
    for (const auto& m : movers)
        if (m.c == r)
            emit(r, m.tos);
}

// ---------------------------------------------------------------------------------------
// C_Undefined

void Planner::gather_on(int ring, int u)
{
    const Coord target{ring, u};
    auto rs = robots_on(ring);
    if (!at(target) && nb(ring) == ell() - 1)
    {
        emit(node(ring, u + 1), target, true);
        emit(node(ring, u - 1), target, true);
        return;
    }
    for (const auto& r : closest_to(rs, target))
        step_ring_toward(r, u);
}

void Planner::node_node_on_ring(int ring, const AxisCrossing& cr)
{
    const Coord a{ring, cr.nodes[0]}, b{ring, cr.nodes[1]};
    if (at(a) && at(b))
    {
        const Coord e = elect({a, b});
        emit(e, {node(ring, e.pos + 1), node(ring, e.pos - 1)});
        return;
    }
    if (at(a) || at(b))
    {
        gather_on(ring, at(a) ? a.pos : b.pos);
        return;
    }
    std::vector<Coord> rs;
    int dbest = ell();
    for (const auto& r : robots_on(ring))
    {
        const int d = std::min(pgap(r.pos, a.pos), pgap(r.pos, b.pos));
        if (d < dbest)
        {
            dbest = d;
            rs = {r};
        }
        else if (d == dbest)
            rs.push_back(r);
    }
    const Coord r = elect(rs);
    step_ring_toward(r, pgap(r.pos, a.pos) <= pgap(r.pos, b.pos) ? a.pos : b.pos);
}

// Direction from pos towards target along the side arc holding both (never across the axis).
int Planner::side_step(const AxisCrossing& cr, int pos, int target) const
{
    const int plus = wrap(target - pos, ell());
    for (int k = 1; k < plus; ++k)
    {
        const int p = wrap(pos + k, ell());
        for (const auto& e : cr.edges)
            if (p == e[1] && wrap(p - 1, ell()) == e[0])
                return -1;
    }
    // The + walk crosses an axis edge only if it steps from e[0] to e[1].
    for (int k = 0; k < plus; ++k)
    {
        const int p = wrap(pos + k, ell());
        for (const auto& e : cr.edges)
            if (p == e[0])
                return -1;
    }
    return +1;
}

bool Planner::free_between(int ring, const AxisCrossing& cr, int a, int b) const
{
    const int s = side_step(cr, a, b);
    for (int p = wrap(a + s, ell()); p != b; p = wrap(p + s, ell()))
        if (at(ring, p))
            return false;
    return true;
}

void Planner::edge_edge_on_ring(int ring, const AxisCrossing& cr)
{
    const auto& u = cr.u;
    auto side = [&](int p) { return cr.side_of(p, ell()); };
    auto u_side = [&](int i) { return i % 2 == 0 ? 0 : 1; }; // u[0], u[2] on side 0
    auto partner = [](int i) { return i ^ 1; };              // edge partner
    auto same_side = [](int i) { return (i + 2) % 4; };      // other U node on the same side
    std::array<bool, 4> occ_u{};
    int count = 0;
    for (int i = 0; i < 4; ++i)
        count += (occ_u[i] = at(ring, u[i])) ? 1 : 0;
    std::vector<Coord> others[2];
    for (const auto& r : robots_on(ring))
        if (side(r.pos) >= 0)
            others[side(r.pos)].push_back(r);
    auto coord = [&](int i) { return Coord{ring, u[i]}; };
    auto closest_on_side = [&](int s, int target) {
        std::vector<Coord> out;
        int dbest = ell();
        for (const auto& r : others[s])
        {
            const int d = pgap(r.pos, target);
            if (d < dbest)
            {
                dbest = d;
                out = {r};
            }
            else if (d == dbest)
                out.push_back(r);
        }
        return out;
    };
    auto step_to = [&](Coord r, int target) { emit(r, node(ring, r.pos + side_step(cr, r.pos, target))); };
    auto away_from_partner = [&](int i) {
        const int p = u[partner(i)];
        const int s = wrap(u[i] + 1, ell()) == p ? -1 : +1;
        emit(coord(i), node(ring, u[i] + s));
    };

    if (count == 4)
    {
        const Coord e = elect({coord(0), coord(1), coord(2), coord(3)});
        for (int i = 0; i < 4; ++i)
            if (coord(i) == e)
                emit(e, coord(partner(i)));
        return;
    }
    if (count == 3)
    {
        int e = 0;
        while (occ_u[e])
            ++e;
        const int q = same_side(e);
        if (!others[u_side(e)].empty())
        {
            for (const auto& r : closest_on_side(u_side(e), u[q]))
                step_to(r, u[q]);
            return;
        }
        // Robots on e's partner move away from e.
        const int p = partner(e);
        const int s = wrap(u[p] + 1, ell()) == u[e] ? -1 : +1;
        emit(coord(p), node(ring, u[p] + s));
        return;
    }
    if (count == 2)
    {
        int a = -1, b = -1;
        for (int i = 0; i < 4; ++i)
            if (occ_u[i])
                (a < 0 ? a : b) = i;
        if (partner(a) == b)
        {
            const bool left = !others[0].empty(), right = !others[1].empty();
            if (left != right)
            {
                const int s = left ? 0 : 1;
                const int keep = u_side(a) == s ? a : b;
                emit(coord(partner(keep)), coord(keep));
                return;
            }
            if (!left && !right)
            {
                const Coord e = elect({coord(a), coord(b)});
                emit(e, e == coord(a) ? coord(b) : coord(a));
                return;
            }
            // Robots on both sides: compare the farthest robot of each side from its U node.
            int far[2] = {-1, -1};
            std::vector<Coord> far_nodes[2];
            for (int s = 0; s < 2; ++s)
            {
                const int anchor = u_side(a) == s ? u[a] : u[b];
                for (const auto& r : others[s])
                {
                    const int d = pgap(r.pos, anchor);
                    if (d > far[s])
                    {
                        far[s] = d;
                        far_nodes[s] = {r};
                    }
                    else if (d == far[s])
                        far_nodes[s].push_back(r);
                }
            }
            auto anchor_of = [&](int s) { return u_side(a) == s ? u[a] : u[b]; };
            if (far[0] == far[1])
            {
                std::vector<Coord> cands = far_nodes[0];
                cands.insert(cands.end(), far_nodes[1].begin(), far_nodes[1].end());
                const Coord e = elect(cands);
                step_to(e, anchor_of(side(e.pos)));
                return;
            }
            const int other = far[0] > far[1] ? 1 : 0;
            for (const auto& r : closest_on_side(other, anchor_of(other)))
                step_to(r, anchor_of(other));
            return;
        }
        // Not neighbours: the robot with the larger view leaves the axis.
        const Coord e = elect({coord(a), coord(b)});
        away_from_partner(e == coord(a) ? a : b);
        return;
    }
    if (count == 1)
    {
        int a = 0;
        while (!occ_u[a])
            ++a;
        const int s = u_side(a);
        if (!others[s].empty())
        {
            for (const auto& r : closest_on_side(s, u[a]))
                step_to(r, u[a]);
            return;
        }
        emit(coord(a), coord(partner(a)));
        return;
    }
    int dbest = ell();
    std::vector<std::pair<Coord, int>> rs;
    for (int s = 0; s < 2; ++s)
        for (const auto& r : others[s])
            for (int i = 0; i < 4; ++i)
            {
                if (u_side(i) != s)
                    continue;
                const int d = pgap(r.pos, u[i]);
                if (d < dbest)
                {
                    dbest = d;
                    rs = {{r, i}};
                }
                else if (d == dbest)
                    rs.push_back({r, i});
            }
    std::vector<Coord> cands;
    for (const auto& [r, i] : rs)
        cands.push_back(r);
    const Coord e = elect(cands);
    for (const auto& [r, i] : rs)
        if (r == e)
            step_to(r, u[i]);
}

void Planner::reduce_gamma_axes(const std::vector<int>& ignored, const std::vector<int>& watched)
{
    struct Cand
    {
        Coord from;
        Coord to;
        bool rigid;
    };
    std::vector<Cand> kept;
    for (const auto& c : occ_.occupied())
    {
        if (std::find(ignored.begin(), ignored.end(), c.ring) != ignored.end())
            continue;
        for (const auto& t : empty_ring_neighbors(c))
        {
            const Occupancy after = moved(c, t);
            const Occupancy g = GammaConfig{after, ignored}.occupancy();
            if (analyze_gamma(g, watched).shape == GammaShape::multi)
                continue;
            kept.push_back({c, t, is_rigid(after)});
        }
    }
    std::vector<Coord> rigid_from, any_from;
    for (const auto& k : kept)
    {
        any_from.push_back(k.from);
        if (k.rigid)
            rigid_from.push_back(k.from);
    }
    if (any_from.empty())
    {
        for (const auto& c : occ_.occupied())
            if (std::find(ignored.begin(), ignored.end(), c.ring) == ignored.end() &&
                !empty_ring_neighbors(c).empty())
                any_from.push_back(c);
        const Coord e = elect(any_from);
        emit(e, empty_ring_neighbors(e));
        return;
    }
    const bool use_rigid = !rigid_from.empty();
    const Coord e = elect(use_rigid ? rigid_from : any_from);
    for (const auto& k : kept)
        if (k.from == e && (!use_rigid || k.rigid))
            emit(e, k.to);
}

void Planner::undefined_unequal(int li, int lk)
{
    const GammaConfig gc = gamma(occ_, li, lk);
    const Occupancy g = gc.occupancy();
    const GammaAnalysis ga = analyze_gamma(g, {li});
    if (ga.shape == GammaShape::rigid)
    {
        std::vector<std::uint8_t> top;
        int u = -1;
        for (int p = 0; p < ell(); ++p)
        {
            auto v = node_view(g, Coord{li, p}).key;
            if (u < 0 || v > top)
            {
                top = std::move(v);
                u = p;
            }
        }
        gather_on(li, u);
        return;
    }
    if (ga.shape == GammaShape::multi)
    {
        reduce_gamma_axes(gc.ignored_rings, {li});
        return;
    }
    const AxisCrossing cr = axis_ring_intersection(*ga.axis, ell());
    switch (cr.kind)
    {
    case CrossingKind::node_edge: gather_on(li, cr.nodes[0]); break;
    case CrossingKind::node_node: node_node_on_ring(li, cr); break;
    case CrossingKind::edge_edge: edge_edge_on_ring(li, cr); break;
    }
}

void Planner::node_edge_equal(int li, int lk, int a)
{
    const Coord ui{li, a}, uk{lk, a};
    const bool oi = at(ui), ok = at(uk);
    if (oi != ok)
    {
        const Coord u = oi ? ui : uk;
        const Coord r = elect(closest_to(robots_on(u.ring), u));
        step_ring_toward(r, a);
        return;
    }
    std::vector<Coord> cands = closest_to(robots_on(li), ui);
    auto ck = closest_to(robots_on(lk), uk);
    if (!cands.empty() && !ck.empty())
    {
        const int di = dist(cands[0], ui, dims_), dk = dist(ck[0], uk, dims_);
        if (oi && ok)
        {
            if (dk < di)
                cands = ck;
            else if (dk == di)
                cands.insert(cands.end(), ck.begin(), ck.end());
        }
        else
            cands.insert(cands.end(), ck.begin(), ck.end());
    }
    else if (cands.empty())
        cands = ck;
    const Coord r = elect(cands);
    step_ring_toward(r, a);
}

void Planner::node_node_equal(int li, int lk, const AxisCrossing& cr)
{
    const std::array<Coord, 4> us{Coord{li, cr.nodes[0]}, Coord{li, cr.nodes[1]}, Coord{lk, cr.nodes[0]},
                                  Coord{lk, cr.nodes[1]}};
    std::vector<Coord> occ_us;
    for (const auto& x : us)
        if (at(x))
            occ_us.push_back(x);
    auto has_occ_neighbor = [&](Coord c) { return at(c.ring, c.pos + 1) || at(c.ring, c.pos - 1); };
    auto occupied_neighbors = [&](Coord c) {
        std::vector<Coord> out;
        for (int s : {+1, -1})
            if (at(c.ring, c.pos + s))
                out.push_back(node(c.ring, c.pos + s));
        return out;
    };
    if (occ_us.size() == 4)
    {
        std::vector<Coord> uset;
        for (const auto& x : us)
            if (has_occ_neighbor(x))
                uset.push_back(x);
        if (!uset.empty())
        {
            const Coord e = elect(uset);
            emit(e, occupied_neighbors(e));
        }
        else
        {
            const Coord e = elect({us.begin(), us.end()});
            emit(e, empty_ring_neighbors(e));
        }
        return;
    }
    if (occ_us.size() == 1)
    {
        const Coord x = occ_us[0];
        const Coord r = elect(closest_to(robots_on(x.ring), x));
        step_ring_toward(r, x.pos);
        return;
    }
    if (occ_us.size() == 3)
    {
        // The ring holding both of its axis nodes is left alone; the other gathers on its one.
        for (const auto& x : occ_us)
        {
            const Coord mate{x.ring, x.pos == cr.nodes[0] ? cr.nodes[1] : cr.nodes[0]};
            if (!at(mate))
            {
                for (const auto& r : closest_to(robots_on(x.ring), x))
                    step_ring_toward(r, x.pos);
                return;
            }
        }
    }
    if (occ_us.size() == 2)
    {
        if (occ_us[0].ring == occ_us[1].ring)
        {
            const Coord e = elect(occ_us);
            emit(e, {node(e.ring, e.pos + 1), node(e.ring, e.pos - 1)});
            return;
        }
        std::vector<Coord> cands;
        for (const auto& x : occ_us)
            for (const auto& r : closest_to(robots_on(x.ring), x))
                cands.push_back(r);
        const Coord r = elect(cands);
        for (const auto& x : occ_us)
            if (x.ring == r.ring)
                step_ring_toward(r, x.pos);
        return;
    }
    // No axis node occupied.
    std::vector<Coord> cands;
    int dbest = ell();
    for (const auto& x : us)
        for (const auto& r : robots_on(x.ring))
        {
            const int d = pgap(r.pos, x.pos);
            if (d < dbest)
            {
                dbest = d;
                cands = {r};
            }
            else if (d == dbest)
                cands.push_back(r);
        }
    const Coord r = elect(cands);
    std::vector<Coord> tos;
    for (const auto& x : us)
        if (x.ring == r.ring && pgap(r.pos, x.pos) == dbest)
            for (int s : pos_steps(r.pos, x.pos))
                tos.push_back(node(r.ring, r.pos + s));
    emit(r, tos);
}

void Planner::undefined_equal(int li, int lk)
{
    const int mr = cls_.roles->max_ring;
    const int si = ring_dir(mr, li), sk = ring_dir(mr, lk);
    const int outer_i = wrap(li + si, big_l()), outer_k = wrap(lk + sk, big_l());
    const bool ei = nb(outer_i) == 0, ek = nb(outer_k) == 0;
    if (ei || ek)
    {
        std::vector<Coord> cands;
        if (ei)
            for (const auto& c : robots_on(li))
                cands.push_back(c);
        if (ek)
            for (const auto& c : robots_on(lk))
                cands.push_back(c);
        const Coord r = elect(cands);
        emit(r, node(r.ring + (r.ring == li ? si : sk), r.pos));
        return;
    }
    const GammaConfig gc{occ_, {li, lk}};
    const Occupancy g = gc.occupancy();
    const GammaAnalysis ga = analyze_gamma(g, {li, lk});
    if (ga.shape == GammaShape::rigid)
    {
        std::vector<std::uint8_t> top;
        Coord u;
        bool found = false;
        for (int ring : {li, lk})
            for (int p = 0; p < ell(); ++p)
            {
                auto v = node_view(g, Coord{ring, p}).key;
                if (!found || v > top)
                {
                    top = std::move(v);
                    u = Coord{ring, p};
                    found = true;
                }
            }
        gather_on(u.ring, u.pos);
        return;
    }
    if (ga.shape == GammaShape::multi)
    {
        reduce_gamma_axes({li, lk}, {li, lk});
        return;
    }
    const AxisCrossing cr = axis_ring_intersection(*ga.axis, ell());
    switch (cr.kind)
    {
    case CrossingKind::node_edge: node_edge_equal(li, lk, cr.nodes[0]); break;
    case CrossingKind::node_node: node_node_equal(li, lk, cr); break;
    case CrossingKind::edge_edge:
    {
        rung_one_move_.reset();
        const int ring = select_edge_edge_ring(li, lk);
        if (rung_one_move_)
            emit(rung_one_move_->first, rung_one_move_->second);
        else
            edge_edge_on_ring(ring, cr);
        break;
    }
    }
}

int Planner::select_edge_edge_ring(int li, int lk)
{
    const GammaConfig gc{occ_, {li, lk}};
    const GammaAnalysis ga = analyze_gamma(gc.occupancy(), {li, lk});
    if (ga.shape != GammaShape::single_axis)
        throw PreconditionError("ring selection needs a single-axis Gamma");
    const AxisCrossing cr = axis_ring_intersection(*ga.axis, ell());
    if (cr.kind != CrossingKind::edge_edge)
        throw PreconditionError("ring selection needs an edge-edge crossing");
    const auto& u = cr.u;
    const std::array<int, 2> rings{li, lk};

    struct RingInfo
    {
        std::array<bool, 4> occ{};
        int count = 0;
        bool free_side[2]{}; // free_side[s]: no robot strictly between the two U nodes of side s
        std::vector<Coord> side_robots[2];
    };
    std::array<RingInfo, 2> info;
    for (int k = 0; k < 2; ++k)
    {
        auto& in = info[k];
        for (int i = 0; i < 4; ++i)
            in.count += (in.occ[i] = at(rings[k], u[i])) ? 1 : 0;
        in.free_side[0] = free_between(rings[k], cr, u[0], u[2]);
        in.free_side[1] = free_between(rings[k], cr, u[1], u[3]);
        for (const auto& r : robots_on(rings[k]))
        {
            const int s = cr.side_of(r.pos, ell());
            if (s >= 0)
                in.side_robots[s].push_back(r);
        }
    }
    auto u_nodes = [&](int k) {
        std::vector<Coord> out;
        for (int i = 0; i < 4; ++i)
            if (info[k].occ[i])
                out.push_back(Coord{rings[k], u[i]});
        return out;
    };
    auto adjacent_pair = [&](int k) {
        const auto& o = info[k].occ;
        return info[k].count == 2 && ((o[0] && o[1]) || (o[2] && o[3]));
    };
    auto same_side_pair = [&](int k) {
        const auto& o = info[k].occ;
        return info[k].count == 2 && ((o[0] && o[2]) || (o[1] && o[3]));
    };
    // The ring hosting the largest view among the given nodes.
    auto ring_of_best = [&](const std::vector<Coord>& nodes) { return elect(nodes).ring; };
    auto both_u_nodes = [&] {
        auto a = u_nodes(0);
        auto b = u_nodes(1);
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    auto pick = [&](const std::array<bool, 2>& holds, auto&& tie) -> std::optional<int> {
        if (holds[0] && !holds[1])
            return rings[0];
        if (holds[1] && !holds[0])
            return rings[1];
        if (holds[0] && holds[1])
            return tie();
        return std::nullopt;
    };

    // Rung 1: a neighbouring pair with both sides free. The pair closes up.
    for (int k = 0; k < 2; ++k)
        if (adjacent_pair(k) && info[k].free_side[0] && info[k].free_side[1])
        {
            const auto nodes = u_nodes(k);
            const Coord e = elect(nodes);
            rung_one_move_ = {e, nodes[0] == e ? nodes[1] : nodes[0]};
            return rings[k];
        }

    // Rung 2: one U node occupied, its side blocked, the other side free.
    std::array<bool, 2> r2{};
    std::array<int, 2> occ_idx{-1, -1};
    for (int k = 0; k < 2; ++k)
    {
        if (info[k].count != 1)
            continue;
        int a = 0;
        while (!info[k].occ[a])
            ++a;
        occ_idx[k] = a;
        const int s = a % 2;
        r2[k] = info[k].free_side[1 - s] && !info[k].free_side[s];
    }
    auto nearest_to_u = [&](int k, int target) {
        std::vector<Coord> out;
        int dbest = ell();
        for (const auto& r : robots_on(rings[k]))
        {
            if (r.pos == target)
                continue;
            const int d = pgap(r.pos, target);
            if (d < dbest)
            {
                dbest = d;
                out = {r};
            }
            else if (d == dbest)
                out.push_back(r);
        }
        return std::pair{dbest, out};
    };
    if (auto r = pick(r2, [&] {
            auto [di, ri] = nearest_to_u(0, u[occ_idx[0]]);
            auto [dk, rk] = nearest_to_u(1, u[occ_idx[1]]);
            if (di != dk)
                return di < dk ? rings[0] : rings[1];
            ri.insert(ri.end(), rk.begin(), rk.end());
            return ring_of_best(ri);
        }))
        return *r;

    // Rung 3: a neighbouring pair with exactly one free side.
    std::array<bool, 2> r3{};
    for (int k = 0; k < 2; ++k)
        r3[k] = adjacent_pair(k) && (info[k].free_side[0] || info[k].free_side[1]);
    if (auto r = pick(r3, [&] { return ring_of_best(both_u_nodes()); }))
        return *r;

    // Rung 4: a same-side pair whose own side is blocked and whose other side is free.
    std::array<bool, 2> r4{};
    for (int k = 0; k < 2; ++k)
    {
        if (!same_side_pair(k))
            continue;
        const int s = info[k].occ[0] ? 0 : 1;
        r4[k] = info[k].free_side[1 - s] && !info[k].free_side[s];
    }
    if (auto r = pick(r4, [&] { return ring_of_best(both_u_nodes()); }))
        return *r;

    // Rung 5: three U nodes occupied and the empty one's side free.
    std::array<bool, 2> r5{};
    std::array<int, 2> hole{-1, -1};
    for (int k = 0; k < 2; ++k)
    {
        if (info[k].count != 3)
            continue;
        int e = 0;
        while (info[k].occ[e])
            ++e;
        hole[k] = e;
        r5[k] = info[k].free_side[e % 2];
    }
    if (auto r = pick(r5, [&] { return ring_of_best(both_u_nodes()); }))
        return *r;

    if (info[0].count != info[1].count)
        return info[0].count < info[1].count ? rings[0] : rings[1];

    switch (info[0].count)
    {
    case 4: return ring_of_best(both_u_nodes());
    case 3:
    {
        const int ni = static_cast<int>(info[0].side_robots[hole[0] % 2].size());
        const int nk = static_cast<int>(info[1].side_robots[hole[1] % 2].size());
        if (ni != nk)
            return ni < nk ? rings[0] : rings[1];
        auto [di, ri] = nearest_to_u(0, u[(hole[0] + 2) % 4]);
        auto [dk, rk] = nearest_to_u(1, u[(hole[1] + 2) % 4]);
        if (di != dk)
            return di < dk ? rings[0] : rings[1];
        ri.insert(ri.end(), rk.begin(), rk.end());
        return ring_of_best(ri);
    }
    case 2:
    {
        auto rank = [&](int k) { return adjacent_pair(k) ? 3 : same_side_pair(k) ? 2 : 1; };
        if (rank(0) != rank(1))
            return rank(0) > rank(1) ? rings[0] : rings[1];
        if (rank(0) == 3)
        {
            const int f0 = static_cast<int>(std::min(info[0].side_robots[0].size(), info[0].side_robots[1].size()));
            const int f1 = static_cast<int>(std::min(info[1].side_robots[0].size(), info[1].side_robots[1].size()));
            if (f0 != f1)
                return f0 < f1 ? rings[0] : rings[1];
        }
        if (rank(0) != 3)
            return ring_of_best(both_u_nodes());
        [[fallthrough]];
    }
    default:
    {
        // Smallest distance between a robot and a U node of its ring, broken by view.
        int dbest = ell();
        std::vector<Coord> cands;
        for (int k = 0; k < 2; ++k)
            for (const auto& r : robots_on(rings[k]))
                for (int i = 0; i < 4; ++i)
                {
                    if (info[0].count > 0 && !info[k].occ[i])
                        continue;
                    if (r.pos == u[i])
                        continue;
                    const int d = pgap(r.pos, u[i]);
                    if (d < dbest)
                    {
                        dbest = d;
                        cands = {r};
                    }
                    else if (d == dbest)
                        cands.push_back(r);
                }
        return ring_of_best(cands);
    }
    }
}

EnabledSet Planner::preparation()
{
    switch (cls_.label)
    {
    case SetLabel::not_unique: prep_not_unique(); break;
    case SetLabel::empty: prep_empty(); break;
    case SetLabel::semi_empty: prep_semi_empty(); break;
    case SetLabel::oriented1: prep_oriented1(); break;
    case SetLabel::oriented2: prep_oriented2(); break;
    case SetLabel::semi_oriented: prep_semi_oriented(); break;
    case SetLabel::undefined:
    {
        const int li = cls_.roles->li, lk = cls_.roles->lk;
        if (nb(li) < nb(lk))
            undefined_unequal(li, lk);
        else
            undefined_equal(li, lk);
        break;
    }
    default: throw PreconditionError("preparation phase asked for a " + to_string(cls_.label) + " configuration");
    }
    return finish();
}

} // namespace tgather::detail
