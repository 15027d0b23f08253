#include "planner.hpp"

#include <algorithm>
#include <map>

namespace tgather::detail
{

Planner::Planner(const Occupancy& occ, const Classification& cls)
    : occ_(occ), dims_(occ.dims()), cls_(cls), views_(occ.dims().size())
{
}

std::vector<int> Planner::pos_steps(int from, int to) const
{
    const int d = wrap(to - from, ell());
    if (d == 0)
        return {};
    if (2 * d < ell())
        return {+1};
    if (2 * d > ell())
        return {-1};
    return {+1, -1};
}

std::vector<int> Planner::ring_steps(int from, int to) const
{
    const int d = wrap(to - from, big_l());
    if (d == 0)
        return {};
    if (2 * d < big_l())
        return {+1};
    if (2 * d > big_l())
        return {-1};
    return {+1, -1};
}

std::vector<Coord> Planner::robots_on(int ring) const
{
    std::vector<Coord> out;
    for (int p : occ_.ring_positions(wrap(ring, big_l())))
        out.push_back(Coord{wrap(ring, big_l()), p});
    return out;
}

std::vector<Coord> Planner::empty_ring_neighbors(Coord c) const
{
    std::vector<Coord> out;
    for (int s : {+1, -1})
    {
        Coord n = node(c.ring, c.pos + s);
        if (!at(n))
            out.push_back(n);
    }
    return out;
}

const std::vector<std::uint8_t>& Planner::view(Coord c)
{
    auto& slot = views_[index_of(c, dims_)];
    if (!slot)
        slot = node_view(occ_, c).key;
    return *slot;
}

std::vector<Coord> Planner::best(std::vector<Coord> cands)
{
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::vector<Coord> out;
    const std::vector<std::uint8_t>* top = nullptr;
    for (const auto& c : cands)
    {
        const auto& v = view(c);
        if (!top || v > *top)
        {
            out = {c};
            top = &v;
        }
        else if (v == *top)
            out.push_back(c);
    }
    return out;
}

Coord Planner::elect(std::vector<Coord> cands)
{
    if (cands.empty())
        throw PreconditionError("election over an empty candidate set");
    auto b = best(std::move(cands));
    if (b.size() > 1)
        throw TieError("largest view shared by " + to_string(b[0]) + " and " + to_string(b[1]));
    return b.front();
}

std::vector<Coord> Planner::closest_to(const std::vector<Coord>& cands, Coord target) const
{
    std::vector<Coord> out;
    int bestd = -1;
    for (const auto& c : cands)
    {
        if (c == target)
            continue;
        const int d = dist(c, target, dims_);
        if (bestd < 0 || d < bestd)
        {
            out = {c};
            bestd = d;
        }
        else if (d == bestd)
            out.push_back(c);
    }
    return out;
}

void Planner::emit(Coord from, const std::vector<Coord>& tos, bool single_only)
{
    for (const auto& t : tos)
        out_.push_back(EnabledMove{normalize(from, dims_), normalize(t, dims_), false, single_only});
}

void Planner::step_ring_toward(Coord from, int target_pos, bool single_only)
{
    std::vector<Coord> tos;
    for (int s : pos_steps(from.pos, target_pos))
        tos.push_back(node(from.ring, from.pos + s));
    emit(from, tos, single_only);
}

void Planner::step_column_toward(Coord from, int target_ring)
{
    std::vector<Coord> tos;
    for (int s : ring_steps(from.ring, target_ring))
        tos.push_back(node(from.ring + s, from.pos));
    emit(from, tos);
}

EnabledSet Planner::finish()
{
    EnabledSet out;
    for (const auto& m : out_)
    {
        auto same = [&](const EnabledMove& x) { return x.from == m.from && x.to == m.to; };
        auto it = std::find_if(out.begin(), out.end(), same);
        if (it == out.end())
            out.push_back(m);
        else
            it->single_only = it->single_only && m.single_only;
    }
    // Alternatives are counted per kind of robot standing on the node.
    std::map<std::pair<Coord, bool>, int> per_from;
    for (const auto& m : out)
        for (bool multi : {false, true})
            if (m.applies(multi))
                ++per_from[{m.from, multi}];
    for (auto& m : out)
        m.adversary_choice = (m.applies(false) && per_from[{m.from, false}] > 1) ||
                             (m.applies(true) && per_from[{m.from, true}] > 1);
    std::sort(out.begin(), out.end(),
              [](const EnabledMove& a, const EnabledMove& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
    return out;
}

Occupancy Planner::moved(Coord from, Coord to) const
{
    Occupancy o = occ_;
    o.set(normalize(from, dims_), false);
    o.set(normalize(to, dims_), true);
    return o;
}

// ---------------------------------------------------------------------------------------
// Align

std::vector<int> Planner::offsets_from(int li, int m) const
{
    std::vector<int> out;
    for (int p : occ_.ring_positions(wrap(li, big_l())))
        if (p != m)
            out.push_back(wrap(p - m, ell()));
    std::sort(out.begin(), out.end());
    return out;
}

// Moves the robots on one side of m onto m+1, m+2 and those on the other side onto m-1, m-2.
// offsets holds exactly four robots, none on m.
void Planner::fill_sides(int li, int m, const std::vector<int>& o)
{
    auto at_off = [&](int off) { return Coord{wrap(li, big_l()), wrap(m + off, ell())}; };
    if (o[0] != 1)
        emit(at_off(o[0]), at_off(o[0] - 1));
    else if (o[1] != 2)
        emit(at_off(o[1]), at_off(o[1] - 1));
    if (o[3] != ell() - 1)
        emit(at_off(o[3]), at_off(o[3] + 1));
    else if (o[2] != ell() - 2)
        emit(at_off(o[2]), at_off(o[2] + 1));
}

void Planner::align_two(int li, int m)
{
    auto o = offsets_from(li, m);
    auto at_off = [&](int off) { return Coord{wrap(li, big_l()), wrap(m + off, ell())}; };
    if (at(li, m))
    {
        const int x = o[0];
        const int to_u2 = pgap(x, ell() - 1);
        const int to_u4 = pgap(x, 1);
        std::vector<Coord> tos;
        if (to_u2 <= to_u4)
            tos.push_back(at_off(1));
        if (to_u4 <= to_u2)
            tos.push_back(at_off(-1));
        emit(at_off(0), tos);
        return;
    }
    if (o[0] != 1)
        emit(at_off(o[0]), at_off(o[0] - 1));
    if (o[1] != ell() - 1)
        emit(at_off(o[1]), at_off(o[1] + 1));
}

void Planner::align_three(int li, int m)
{
    auto o = offsets_from(li, m);
    auto at_off = [&](int off) { return Coord{wrap(li, big_l()), wrap(m + off, ell())}; };
    auto g = [&](int off) { return pgap(off, 0); };
    if (at(li, m))
    {
        if (o[0] != 1)
            emit(at_off(o[0]), at_off(o[0] - 1));
        if (o[1] != ell() - 1)
            emit(at_off(o[1]), at_off(o[1] + 1));
        return;
    }
    // c1: a 1.block of three whose extremities are equidistant from u3.
    if (o[1] == o[0] + 1 && o[2] == o[0] + 2 && g(o[0]) == g(o[2]))
    {
        emit(at_off(o[0]), at_off(o[0] - 1));
        emit(at_off(o[2]), at_off(o[2] + 1));
        return;
    }
    // c2: what c1 leaves when only one extremity moved. The middle robot of the old block
    // still sits opposite u3; without that condition the rule also fires on configurations
    // c1 never produces and can undo the previous step.
    if (ell() % 2 == 0)
    {
        for (int a = 0; a < 3; ++a)
            for (int s : {+1, -1})
            {
                const int r1 = o[a];
                const int r2 = wrap(r1 + s, ell());
                const int r3 = wrap(r2 + 2 * s, ell());
                auto has = [&](int off) { return std::find(o.begin(), o.end(), off) != o.end(); };
                if (!has(r2) || !has(r3) || has(wrap(r2 + s, ell())))
                    continue;
                if (g(r1) == g(r3) + 1 && g(r2) == ell() / 2)
                {
                    emit(at_off(r1), at_off(r1 - s));
                    return;
                }
            }
    }
    int dmin = ell();
    for (int x : o)
        dmin = std::min(dmin, g(x));
    std::vector<int> r;
    int t = -1;
    for (int x : o)
        if (g(x) == dmin)
            r.push_back(x);
        else
            t = x;
    if (r.size() == 1)
    {
        step_ring_toward(at_off(r[0]), m);
        return;
    }
    const int d0 = pgap(r[0], t), d1 = pgap(r[1], t);
    if (d0 != d1)
    {
        step_ring_toward(at_off(d0 < d1 ? r[0] : r[1]), m);
        return;
    }
    emit(at_off(t), empty_ring_neighbors(at_off(t)));
}

void Planner::align_four(int li, int m)
{
    auto at_off = [&](int off) { return Coord{wrap(li, big_l()), wrap(m + off, ell())}; };
    auto occ_off = [&](int off) { return at(at_off(off)); };
    if (!occ_off(0))
    {
        fill_sides(li, m, offsets_from(li, m));
        return;
    }
    const bool e2 = !occ_off(-1), e4 = !occ_off(1);
    if (e2 || e4)
    {
        std::vector<Coord> tos;
        if (e2)
            tos.push_back(at_off(-1));
        if (e4)
            tos.push_back(at_off(1));
        emit(at_off(0), tos);
        return;
    }
    const bool e1 = !occ_off(-2), e5 = !occ_off(2);
    if (e1 && !e5)
    {
        emit(at_off(-1), at_off(-2));
        return;
    }
    if (e5 && !e1)
    {
        emit(at_off(1), at_off(2));
        return;
    }
    // u1 and u5 both empty: the robot outside the 1.block of three heads to the nearer one
    // along the arc that avoids the block.
    int x = -1;
    for (int off : offsets_from(li, m))
        if (off > 1 && off < ell() - 1)
            x = off;
    const int to_u5 = x - 2, to_u1 = ell() - 2 - x;
    std::vector<Coord> tos;
    if (to_u5 <= to_u1)
        tos.push_back(at_off(x - 1));
    if (to_u1 <= to_u5)
        tos.push_back(at_off(x + 1));
    emit(at_off(x), tos);
}

void Planner::align_five(int li, int m)
{
    auto at_off = [&](int off) { return Coord{wrap(li, big_l()), wrap(m + off, ell())}; };
    auto o = offsets_from(li, m);
    if (at(li, m))
    {
        fill_sides(li, m, o);
        return;
    }
    auto g = [&](int off) { return pgap(off, 0); };
    int dmin = ell();
    for (int x : o)
        dmin = std::min(dmin, g(x));
    std::vector<int> r;
    for (int x : o)
        if (g(x) == dmin)
            r.push_back(x);
    if (r.size() == 1)
    {
        step_ring_toward(at_off(r[0]), m);
        return;
    }
    // r = {o[0], o[4]}; the middle robot of the ordering breaks the tie.
    const int mid = o[2];
    const int d0 = pgap(o[0], mid), d4 = pgap(o[4], mid);
    if (d0 != d4)
    {
        step_ring_toward(at_off(d0 < d4 ? o[0] : o[4]), m);
        return;
    }
    auto free = empty_ring_neighbors(at_off(mid));
    if (!free.empty())
    {
        emit(at_off(mid), free);
        return;
    }
    // Only reachable when the ring has a single hole, on u3. The rest of the configuration
    // picks one neighbour; when it cannot, both are enabled and may build a tower.
    for (const auto& c : best({at_off(o[0]), at_off(o[4])}))
        step_ring_toward(c, m);
}

EnabledSet Planner::align(int li, int lk)
{
    li = wrap(li, big_l());
    lk = wrap(lk, big_l());
    auto mark = mark_position(occ_, lk);
    const int n = nb(li);
    if (!mark || n < 2 || n > 5 || n <= nb(lk))
        throw PreconditionError("Align called on rings " + std::to_string(li) + "/" + std::to_string(lk) +
                                " that do not satisfy its precondition");
    if (aligned(occ_, li, lk))
        return {};
    switch (n)
    {
    case 2: align_two(li, *mark); break;
    case 3: align_three(li, *mark); break;
    case 4: align_four(li, *mark); break;
    default: align_five(li, *mark); break;
    }
    return finish();
}

} // namespace tgather::detail

namespace tgather
{

void check_align_precondition(const Occupancy& occ, int li, int lk)
{
    const int n = occ.nb_ring(li);
    if (n < 2 || n > 5)
        throw PreconditionError("Align needs 2 to 5 occupied nodes on the aligned ring, found " + std::to_string(n));
    if (n <= occ.nb_ring(lk))
        throw PreconditionError("Align needs more occupied nodes on the aligned ring than on the reference ring");
    if (!mark_position(occ, lk))
        throw PreconditionError("reference ring holds no single node, 2.block or 1.block of three");
}

bool aligned(const Occupancy& occ, int li, int lk)
{
    auto mark = mark_position(occ, lk);
    if (!mark)
        return false;
    const int ell = occ.dims().ell;
    auto has = [&](std::initializer_list<int> offs) {
        if (occ.nb_ring(li) != static_cast<int>(offs.size()))
            return false;
        for (int o : offs)
            if (!occ.at(li, wrap(*mark + o, ell)))
                return false;
        return true;
    };
    switch (occ.nb_ring(li))
    {
    case 2: return has({-1, 1});
    case 3: return has({-1, 0, 1});
    case 4: return has({-2, -1, 1, 2});
    case 5: return has({-2, -1, 0, 1, 2});
    default: return false;
    }
}

EnabledSet align_enabled(const Occupancy& occ, int li, int lk)
{
    check_align_precondition(occ, li, lk);
    Classification cls;
    detail::Planner p(occ, cls);
    return p.align(li, lk);
}

} // namespace tgather
