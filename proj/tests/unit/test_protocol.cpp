#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "helpers.hpp"
#include "tgather/errors.hpp"
#include "tgather/protocol.hpp"
#include "tgather/scenario.hpp"

using namespace tgather;
using test::occ_of;

namespace
{
const TorusDims d65 = TorusDims::make(6, 5);
const TorusDims d75 = TorusDims::make(7, 5);

std::set<std::pair<Coord, Coord>> pairs(const EnabledSet& s)
{
    std::set<std::pair<Coord, Coord>> out;
    for (const auto& m : s)
        out.insert({m.from, m.to});
    return out;
}

std::vector<Coord> sorted(std::vector<Coord> v)
{
    std::sort(v.begin(), v.end());
    return v;
}
} // namespace

TEST_CASE("Align with two nodes: the node on the mark steps away from the other robot")
{
    // Mark of lk = ring 0 at position 0. r1 on u3 = (1,0), r2 one hop from u2 = (1,6).
    const auto o = occ_of(d75, {{0, 0}, {1, 0}, {1, 5}});
    CHECK(pairs(align_enabled(o, 1, 0)) == std::set<std::pair<Coord, Coord>>{{{1, 0}, {1, 1}}});
}

TEST_CASE("Align with three nodes")
{
    // c1: a 1.block of three with extremities equidistant from the mark.
    const auto c1 = occ_of(d65, {{0, 0}, {1, 2}, {1, 3}, {1, 4}});
    CHECK(pairs(align_enabled(c1, 1, 0)) == std::set<std::pair<Coord, Coord>>{{{1, 2}, {1, 1}}, {{1, 4}, {1, 5}}});
    // c2: one extremity went first; only the other one may move.
    const auto c2 = occ_of(d65, {{0, 0}, {1, 1}, {1, 3}, {1, 4}});
    CHECK(pairs(align_enabled(c2, 1, 0)) == std::set<std::pair<Coord, Coord>>{{{1, 4}, {1, 5}}});
}

TEST_CASE("aligned placements enable nothing")
{
    for (auto dims : {d65, d75})
    {
        const int ell = dims.ell;
        const std::vector<std::vector<int>> marks{{0}, {ell - 1, 1}, {ell - 1, 0, 1}};
        int seen = 0;
        for (const auto& mark : marks)
            for (int mask = 1; mask < (1 << ell); ++mask)
            {
                const int nb = __builtin_popcount(static_cast<unsigned>(mask));
                if (nb < 2 || nb > 5)
                    continue;
                Occupancy o(dims);
                for (int p : mark)
                    o.set({0, p}, true);
                for (int p = 0; p < ell; ++p)
                    if (mask & (1 << p))
                        o.set({1, p}, true);
                try
                {
                    check_align_precondition(o, 1, 0);
                }
                catch (const PreconditionError&)
                {
                    continue;
                }
                const auto en = align_enabled(o, 1, 0);
                if (aligned(o, 1, 0))
                {
                    ++seen;
                    REQUIRE(en.empty());
                }
                else
                    REQUIRE_FALSE(en.empty());
                for (const auto& m : en)
                {
                    REQUIRE(m.from.ring == 1);
                    REQUIRE(m.to.ring == 1);
                    REQUIRE(o.at(m.from));
                }
            }
        CHECK(seen > 0);
    }
}

TEST_CASE("C_Empty: one robot leaves the ring, the scheduler picks the side")
{
    const auto o = occ_of(d65, {{0, 0}, {0, 1}, {0, 3}});
    const auto en = preparation_enabled(o);
    REQUIRE(en.size() == 2);
    CHECK(en[0].from == en[1].from);
    for (const auto& m : en)
    {
        CHECK(m.adversary_choice);
        CHECK(m.to.ring != 0);
        CHECK(m.to.pos == m.from.pos);
    }
}

TEST_CASE("two full maximal rings: an enabled move reaches a rigid configuration with fewer of them")
{
    int checked = 0;
    for (int e1 = 0; e1 < d65.size(); ++e1)
        for (int e2 = e1 + 1; e2 < d65.size(); ++e2)
        {
            Occupancy o(d65);
            for (int p = 0; p < 6; ++p)
            {
                o.set({0, p}, true);
                o.set({2, p}, true);
            }
            const Coord a = coord_of(e1, d65), b = coord_of(e2, d65);
            if (o.at(a) || o.at(b))
                continue;
            o.set(a, true);
            o.set(b, true);
            if (!is_rigid(o) || maximal_rings(o).size() != 2)
                continue;
            ++checked;
            const auto en = preparation_enabled(o);
            REQUIRE_FALSE(en.empty());
            bool some = false;
            for (const auto& m : en)
            {
                Occupancy after = o;
                after.set(m.from, false);
                after.set(m.to, true);
                some = some || (is_rigid(after) && maximal_rings(after).size() < 2);
            }
            REQUIRE(some);
        }
    CHECK(checked > 0);
}

TEST_CASE("C_sp-4 block of three with a multiplicity in the middle: both ends move in")
{
    const auto o = occ_of(d65, {{0, 1}, {0, 2}, {0, 3}});
    const auto en = gathering_enabled(o, [](Coord c) { return c == Coord{0, 2}; });
    CHECK(pairs(en) == std::set<std::pair<Coord, Coord>>{{{0, 1}, {0, 2}}, {{0, 3}, {0, 2}}});
}

TEST_CASE("C_sp-3 with two nodes on the maximal ring: v_target climbs")
{
    const auto o = occ_of(d65, {{0, 0}, {0, 2}, {1, 1}});
    REQUIRE(phase_and_set(o) == SetLabel::sp3);
    CHECK(pairs(gathering_enabled(o)) == std::set<std::pair<Coord, Coord>>{{{1, 1}, {0, 1}}});
    // A robot that is not enabled stays.
    CHECK(decide(Snapshot{o, {0, 0}, false}).stays());
    CHECK(decide(Snapshot{o, {1, 1}, false}).destination() == Coord{0, 1});
}

TEST_CASE("C_sp-1 on a ring of six with two holes: the ends of l_j close on the matching u")
{
    // Ring 0 has holes at 0 and 3; only 3 sits over the middle of ring 1's block.
    const auto o = occ_of(d65, {{0, 1}, {0, 2}, {0, 4}, {0, 5}, {1, 2}, {1, 3}, {1, 4}});
    REQUIRE(phase_and_set(o) == SetLabel::sp1);
    CHECK(sp1_target(o) == Coord{1, 3});
    CHECK(pairs(gathering_enabled(o)) == std::set<std::pair<Coord, Coord>>{{{1, 2}, {1, 3}}, {{1, 4}, {1, 3}}});
}

TEST_CASE("C_pr: the robot under v_target moves onto it, the others wait")
{
    const auto o = occ_of(d65, {{2, 0}, {2, 1}, {2, 2}, {2, 4}, {1, 1}, {0, 1}, {0, 3}});
    const Classification cls = classify(o);
    REQUIRE(cls.label == SetLabel::pr);
    REQUIRE(cls.pred.target);
    CHECK(cls.pred.target->v_target == Coord{1, 1});
    CHECK(pairs(gathering_enabled(o)) == std::set<std::pair<Coord, Coord>>{{{0, 1}, {1, 1}}});
}

TEST_CASE("decide on a gathered configuration is Stay")
{
    const auto o = occ_of(d65, {{3, 4}});
    CHECK(enabled_moves(o).empty());
    CHECK(decide(Snapshot{o, {3, 4}, true}).stays());
}

TEST_CASE("enabled moves are sound on every rigid start, and decide is repeatable")
{
    for (auto dims : {d65, d75})
        for (int k : {3, 4})
            for (const auto& cs : enumerate_configs(dims, k, true, true))
            {
                const Occupancy o = occ_of(dims, cs);
                const auto en = enabled_moves(o);
                REQUIRE_FALSE(en.empty());
                for (const auto& m : en)
                {
                    REQUIRE(o.at(m.from));
                    REQUIRE(adjacent(m.from, m.to, dims));
                }
                for (auto c : cs)
                {
                    const auto a = decide(Snapshot{o, c, false});
                    const auto b = decide(Snapshot{o, c, false});
                    REQUIRE(a.alternatives == b.alternatives);
                    REQUIRE(a.label == b.label);
                }
            }
}

TEST_CASE("decide commutes with automorphisms")
{
    const auto syms = Automorphism::all(d65);
    std::mt19937_64 rng(3);
    for (int k : {3, 4})
        for (const auto& cs : enumerate_configs(d65, k, true, true))
        {
            const Occupancy o = occ_of(d65, cs);
            for (int t = 0; t < 10; ++t)
            {
                const auto& s = syms[rng() % syms.size()];
                const Occupancy so = s.apply(o);
                for (auto c : cs)
                {
                    std::vector<Coord> mapped;
                    for (auto x : decide(Snapshot{o, c, false}).alternatives)
                        mapped.push_back(s.apply(x, d65));
                    REQUIRE(sorted(mapped) == sorted(decide(Snapshot{so, s.apply(c, d65), false}).alternatives));
                }
            }
        }
}
