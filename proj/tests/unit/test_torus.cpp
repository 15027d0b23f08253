#include <doctest.h>

#include <algorithm>
#include <deque>
#include <set>

#include "helpers.hpp"
#include "tgather/errors.hpp"

using namespace tgather;
using test::occ_of;

namespace
{
const TorusDims d65 = TorusDims::make(6, 5);

std::set<Coord> as_set(const std::array<Coord, 4>& a) { return {a.begin(), a.end()}; }
} // namespace

TEST_CASE("dims validation")
{
    CHECK_THROWS_AS(TorusDims::make(6, 6), InvalidDims);
    CHECK_THROWS_AS(TorusDims::make(6, 7), InvalidDims);
    CHECK_THROWS_AS(TorusDims::make(2, 1), InvalidDims);
    CHECK_THROWS_AS(TorusDims::make(5, 2), InvalidDims);
    CHECK_THROWS_AS(TorusDims::make(6, 4, true), InvalidDims);
    CHECK_NOTHROW(TorusDims::make(6, 4));
    CHECK(d65.size() == 30);
}

TEST_CASE("neighbors wrap around")
{
    CHECK(as_set(neighbors({0, 0}, d65)) == std::set<Coord>{{0, 1}, {0, 5}, {1, 0}, {4, 0}});
    CHECK(as_set(neighbors({2, 3}, d65)) == std::set<Coord>{{2, 2}, {2, 4}, {1, 3}, {3, 3}});
    for (int i = 0; i < d65.size(); ++i)
        CHECK(as_set(neighbors(coord_of(i, d65), d65)).size() == 4);
}

TEST_CASE("dist examples")
{
    CHECK(dist({0, 0}, {0, 3}, d65) == 3);
    CHECK(dist({0, 0}, {0, 4}, d65) == 2);
    CHECK(dist({3, 2}, {3, 2}, d65) == 0);
}

TEST_CASE("dist is a metric")
{
    const int n = d65.size();
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
        {
            const Coord ca = coord_of(a, d65), cb = coord_of(b, d65);
            REQUIRE(dist(ca, cb, d65) == dist(cb, ca, d65));
            REQUIRE((dist(ca, cb, d65) == 0) == (a == b));
            for (int c = 0; c < n; ++c)
            {
                const Coord cc = coord_of(c, d65);
                REQUIRE(dist(ca, cb, d65) <= dist(ca, cc, d65) + dist(cc, cb, d65));
            }
        }
}

TEST_CASE("BFS over neighbors reaches every node within the diameter")
{
    for (auto dims : {d65, TorusDims::make(7, 5), TorusDims::make(9, 6)})
    {
        const int n = dims.size();
        const int diameter = dims.ell / 2 + dims.big_l / 2;
        for (int s = 0; s < n; ++s)
        {
            std::vector<int> depth(n, -1);
            std::deque<int> q{s};
            depth[s] = 0;
            while (!q.empty())
            {
                const int u = q.front();
                q.pop_front();
                for (auto v : neighbors(coord_of(u, dims), dims))
                {
                    const int vi = index_of(v, dims);
                    if (depth[vi] < 0)
                    {
                        depth[vi] = depth[u] + 1;
                        q.push_back(vi);
                    }
                }
            }
            for (int v = 0; v < n; ++v)
            {
                REQUIRE(depth[v] >= 0);
                REQUIRE(depth[v] <= diameter);
                REQUIRE(depth[v] == dist(coord_of(s, dims), coord_of(v, dims), dims));
            }
        }
    }
}

TEST_CASE("nb_ring counts nodes, not robots")
{
    Config cfg(d65);
    CHECK(cfg.nb_ring(0) == 0);
    cfg.add({0, 2}, 3);
    CHECK(cfg.nb_ring(0) == 1);
    Config full(d65);
    for (int p = 0; p < 6; ++p)
        full.add({3, p});
    CHECK(full.nb_ring(3) == 6);
    // Adding robots to occupied nodes never changes the count.
    for (int p = 0; p < 6; ++p)
    {
        full.add({3, p}, 2);
        CHECK(full.nb_ring(3) == 6);
    }
}

TEST_CASE("blocks examples")
{
    auto b = blocks(occ_of(d65, {{0, 0}, {0, 1}, {0, 2}}), 0, 1);
    REQUIRE(b.size() == 1);
    CHECK(b[0].size == 3);
    CHECK(b[0].start == Coord{0, 0});

    b = blocks(occ_of(d65, {{0, 0}, {0, 2}}), 0, 2);
    REQUIRE(b.size() == 1);
    CHECK(b[0].size == 2);

    b = blocks(occ_of(d65, {{0, 0}, {0, 1}, {0, 3}, {0, 4}}), 0, 1);
    REQUIRE(b.size() == 2);
    CHECK(b[0].size == 2);
    CHECK(b[1].size == 2);
}

TEST_CASE("1.blocks partition the occupied nodes of a ring")
{
    const TorusDims d = TorusDims::make(7, 5);
    for (int mask = 1; mask < (1 << 7); ++mask)
    {
        Occupancy o(d);
        for (int p = 0; p < 7; ++p)
            if (mask & (1 << p))
                o.set({2, p}, true);
        std::multiset<int> covered;
        for (const auto& b : blocks(o, 2, 1))
            for (int i = 0; i < b.size; ++i)
                covered.insert(b.pos_at(i, 7));
        const auto pos = o.ring_positions(2);
        REQUIRE(covered == std::multiset<int>(pos.begin(), pos.end()));
    }
}

TEST_CASE("maximal and neighbouring rings")
{
    CHECK(maximal_rings(occ_of(d65, {{2, 0}, {2, 1}, {2, 4}})) == std::vector<int>{2});
    auto two = maximal_rings(occ_of(d65, {{1, 0}, {1, 1}, {1, 3}, {3, 0}, {3, 2}, {3, 3}}));
    CHECK(two == std::vector<int>{1, 3});
    CHECK(maximal_rings(occ_of(d65, {{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}})).size() == 5);

    const auto o = occ_of(d65, {{1, 0}, {3, 2}});
    CHECK(neighbor_ring(o, 1, +1) == 3);
    CHECK(neighbor_ring(o, 1, -1) == 3);
    const auto single = occ_of(d65, {{2, 0}, {2, 3}});
    CHECK(neighbor_rings(single, 2) == std::array<int, 2>{2, 2});
    const auto adj = adjacent_rings(0, d65);
    CHECK(std::set<int>(adj.begin(), adj.end()) == std::set<int>{1, 4});
}

TEST_CASE("automorphisms are bijections with inverses")
{
    const auto all = Automorphism::all(d65);
    CHECK(all.size() == 4u * 30u);
    for (const auto& s : all)
    {
        std::set<Coord> image;
        for (int i = 0; i < d65.size(); ++i)
        {
            const Coord c = coord_of(i, d65);
            const Coord sc = s.apply(c, d65);
            image.insert(sc);
            REQUIRE(s.inverse().apply(sc, d65) == c);
            // Adjacency is preserved.
            for (auto nb : neighbors(c, d65))
                REQUIRE(adjacent(sc, s.apply(nb, d65), d65));
        }
        REQUIRE(image.size() == 30u);
    }
}
