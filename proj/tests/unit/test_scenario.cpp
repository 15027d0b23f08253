#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "tgather/classify.hpp"
#include "tgather/errors.hpp"
#include "tgather/scenario.hpp"

using namespace tgather;

namespace
{
Scenario parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_scenario(in);
}
} // namespace

TEST_CASE("scenario parsing")
{
    const Scenario sc = parse("# comment\n\ndims 6 5\nrobot 0 0\nrobot 0 1\nrobot 2 3\nscheduler random 9 2\n"
                              "flags strict_dims=0 hooks=off\n");
    CHECK(sc.dims == TorusDims::make(6, 5));
    CHECK(sc.robots == std::vector<Coord>{{0, 0}, {0, 1}, {2, 3}});
    REQUIRE(sc.scheduler);
    CHECK(sc.scheduler->seed == 9);
    CHECK(sc.scheduler->fairness_bound == 2);
    CHECK_FALSE(sc.strict_dims);
    CHECK_FALSE(sc.hooks);

    std::ostringstream out;
    write_scenario(out, sc);
    const Scenario back = parse(out.str());
    CHECK(back.robots == sc.robots);
    CHECK(back.scheduler->seed == 9);
    CHECK(back.hooks == sc.hooks);
}

TEST_CASE("scenario errors")
{
    CHECK_THROWS_AS(parse("robot 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 6\nrobot 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\nrobot 5 0\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\nrobot 0 0\nrobot 0 0\nrobot 0 1\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\nrobot 0\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\nrobot 0 0 7\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\nrobots 0 0\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\nrobot 0 0\nscheduler lazy\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\nrobot 0 0\nflags hooks=maybe\n"), ParseError);
    CHECK_THROWS_AS(parse("dims 6 5\nrobot 0 0\nflags speed=1\n"), ParseError);
    // Robots may share a node only when they all do.
    CHECK(parse("dims 6 5\nrobot 1 1\nrobot 1 1\nrobot 1 1\n").initial().gathered());
}

TEST_CASE("enumeration")
{
    const TorusDims d = TorusDims::make(6, 5);
    CHECK(binomial(30, 3) == 4060);
    CHECK(binomial(30, 4) == 27405);
    const auto raw = enumerate_configs(d, 3, false, false);
    CHECK(raw.size() == 4060);
    CHECK(raw.front() == std::vector<Coord>{{0, 0}, {0, 1}, {0, 2}});
    CHECK(raw.back() == std::vector<Coord>{{4, 3}, {4, 4}, {4, 5}});
    const auto rigid = enumerate_configs(d, 3, true, false);
    CHECK(rigid.size() == 3180);
    const auto canon = enumerate_configs(d, 3, true, true);
    CHECK(canon.size() == 29);
    CHECK(canon.size() <= rigid.size());
    CHECK(enumerate_configs(d, 3, true, true) == canon);

    // Every rigid configuration is the image of exactly one canonical one.
    const auto syms = Automorphism::all(d);
    std::set<std::vector<Coord>> images;
    for (const auto& cs : canon)
        for (const auto& s : syms)
        {
            std::vector<Coord> img;
            for (auto c : cs)
                img.push_back(s.apply(c, d));
            std::sort(img.begin(), img.end());
            images.insert(img);
        }
    CHECK(images.size() == rigid.size());
}
