#include <doctest.h>

#include <random>

#include "helpers.hpp"
#include "tgather/classify.hpp"
#include "tgather/errors.hpp"
#include "tgather/scenario.hpp"
#include "tgather/view.hpp"

using namespace tgather;
using test::occ_of;

namespace
{
const TorusDims d65 = TorusDims::make(6, 5);

Config config_of(const std::vector<Coord>& robots) { return Config::from_robots(d65, robots); }
} // namespace

TEST_CASE("delta sequences")
{
    const auto o = occ_of(d65, {{0, 0}});
    CHECK(delta_seq(o, {0, 0}, +1) == DeltaSeq{1, 0, 0, 0, 0, 0});
    CHECK(delta_seq(o, {0, 0}, -1) == DeltaSeq{1, 0, 0, 0, 0, 0});

    // A tower still reads as one occupied node.
    const Config tower = config_of({{1, 2}, {1, 2}, {1, 2}, {1, 4}});
    CHECK(delta_seq(tower.occupancy(), {1, 2}, +1)[0] == 1);

    const auto o2 = occ_of(d65, {{0, 0}, {0, 1}, {0, 4}});
    for (auto at : o2.occupied())
        CHECK(delta_seq(o2, at, +1)[0] == delta_seq(o2, at, -1)[0]);
}

TEST_CASE("views of a gathered configuration")
{
    const Config cfg = config_of({{2, 2}, {2, 2}, {2, 2}});
    const RobotView v = compute_view(cfg, {2, 2});
    CHECK(v.m);
    for (int i = 1; i < 4; ++i)
    {
        const auto a = v.part(0), b = v.part(i);
        CHECK(std::equal(a.begin(), a.end(), b.begin(), b.end()));
    }
    CHECK_THROWS_AS(compute_view(cfg, {0, 0}), PreconditionError);
}

TEST_CASE("mirror robots see equal views")
{
    // Reflection pos -> 2 - pos swaps (0,0) and (0,2).
    const Config cfg = config_of({{0, 0}, {0, 2}, {2, 1}});
    CHECK(compare_views(compute_view(cfg, {0, 0}), compute_view(cfg, {0, 2})) == ViewOrder::equal);
    const std::vector<Coord> pair{{0, 0}, {0, 2}};
    CHECK_THROWS_AS(elect_largest_view(cfg, pair), TieError);
}

TEST_CASE("compare_views is a strict order")
{
    const Config cfg = config_of({{0, 0}, {0, 1}, {2, 3}, {3, 5}});
    const auto occ = cfg.occupancy();
    for (auto a : occ.occupied())
    {
        const auto va = compute_view(cfg, a);
        CHECK(compare_views(va, va) == ViewOrder::equal);
        for (auto b : occ.occupied())
        {
            const auto vb = compute_view(cfg, b);
            const auto ab = compare_views(va, vb), ba = compare_views(vb, va);
            CHECK((ab == ViewOrder::less) == (ba == ViewOrder::greater));
            CHECK((ab == ViewOrder::equal) == (ba == ViewOrder::equal));
        }
    }
}

TEST_CASE("election basics")
{
    const Config cfg = config_of({{0, 0}, {0, 1}, {2, 3}});
    const std::vector<Coord> one{{2, 3}};
    CHECK(elect_largest_view(cfg, one) == Coord{2, 3});
    const std::vector<Coord> two{{0, 0}, {2, 3}};
    const Coord w = elect_largest_view(cfg, two);
    const Coord l = w == two[0] ? two[1] : two[0];
    CHECK(compare_views(compute_view(cfg, w), compute_view(cfg, l)) == ViewOrder::greater);
}

TEST_CASE("views are invariant under every automorphism, k <= 3 exhaustive")
{
    const auto syms = Automorphism::all(d65);
    for (int k = 1; k <= 3; ++k)
        for (const auto& cs : enumerate_configs(d65, k, false, true))
        {
            const Occupancy o = occ_of(d65, cs);
            for (const auto& s : syms)
            {
                const Occupancy so = s.apply(o);
                for (auto c : cs)
                    REQUIRE(node_view(o, c).key == node_view(so, s.apply(c, d65)).key);
            }
        }
}

TEST_CASE("views are invariant under automorphisms, k = 4 sampled")
{
    const auto syms = Automorphism::all(d65);
    const auto configs = enumerate_configs(d65, 4, false, false);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 3000; ++t)
    {
        const auto& cs = configs[rng() % configs.size()];
        const auto& s = syms[rng() % syms.size()];
        const Occupancy o = occ_of(d65, cs), so = s.apply(o);
        for (auto c : cs)
            REQUIRE(node_view(o, c).key == node_view(so, s.apply(c, d65)).key);
    }
}

TEST_CASE("election commutes with automorphisms on rigid configurations")
{
    const auto syms = Automorphism::all(d65);
    for (const auto& cs : enumerate_configs(d65, 4, true, true))
    {
        const Occupancy o = occ_of(d65, cs);
        const Coord w = elect_largest_view(o, cs);
        for (std::size_t i = 0; i < syms.size(); i += 7)
        {
            const auto& s = syms[i];
            std::vector<Coord> img;
            for (auto c : cs)
                img.push_back(s.apply(c, d65));
            REQUIRE(elect_largest_view(s.apply(o), img) == s.apply(w, d65));
        }
    }
}

TEST_CASE("distinct views are exactly view rigidity")
{
    for (int k : {3, 4})
        for (const auto& cs : enumerate_configs(d65, k, false, false))
        {
            const Occupancy o = occ_of(d65, cs);
            REQUIRE(views_distinct(o) == is_rigid(o));
        }
}
