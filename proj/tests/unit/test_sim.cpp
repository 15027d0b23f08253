#include <doctest.h>

#include <map>
#include <sstream>

#include "tgather/errors.hpp"
#include "tgather/scenario.hpp"
#include "tgather/sim.hpp"

using namespace tgather;

namespace
{
const TorusDims d65 = TorusDims::make(6, 5);

StepChoice all(const SimState& s, ActionKind a)
{
    StepChoice c;
    for (const auto& r : s.robots)
        if (a == ActionKind::look || r.pending)
            c.push_back(Activation{r.id, a});
    return c;
}

std::string traced_run(const SimState& init, std::uint64_t seed, RunResult* out = nullptr)
{
    std::ostringstream os;
    TraceWriter w(os);
    SchedulerPolicy p{SchedulerKind::random_adversary, seed, 3};
    w.header(init, p);
    RandomAdversary adv(seed, 3);
    RunOptions opt;
    opt.trace = &w;
    opt.fairness_bound = 3;
    const RunResult r = run(init, adv, opt);
    if (out)
        *out = r;
    return os.str();
}
} // namespace

TEST_CASE("synchronous round from Looks then Moves")
{
    const SimState s0 = SimState::initial(d65, {{0, 0}, {0, 1}, {0, 3}});
    const SimState s1 = step(s0, all(s0, ActionKind::look));
    int pending = 0;
    for (const auto& r : s1.robots)
    {
        pending += r.pending.has_value();
        CHECK(r.at == s0.robots[r.id].at);
    }
    CHECK(pending == 1);
    const SimState s2 = step(s1, all(s1, ActionKind::move));
    CHECK(s2.k() == 3);
    for (const auto& r : s2.robots)
        CHECK_FALSE(r.pending);
    CHECK(s2.occupancy() != s0.occupancy());
}

TEST_CASE("a Move acts on the view of its Look even when the configuration changed")
{
    int exercised = 0;
    for (const auto& cs : enumerate_configs(d65, 4, true, true))
    {
        const SimState s0 = SimState::initial(d65, cs);
        const SimState s1 = step(s0, all(s0, ActionKind::look));
        std::vector<int> movers;
        for (const auto& r : s1.robots)
            if (r.pending)
                movers.push_back(r.id);
        if (movers.size() < 2)
            continue;
        ++exercised;
        const int a = movers[0], b = movers[1];
        const SimState s2 = step(s1, {Activation{a, ActionKind::move}});
        REQUIRE(s2.robots[b].pending);
        const Coord planned = *s2.robots[b].pending->destination();
        const SimState s3 = step(s2, {Activation{b, ActionKind::move}});
        REQUIRE(s3.robots[b].at == planned);
    }
    CHECK(exercised > 0);
}

TEST_CASE("a gathered state does not change")
{
    const SimState g = SimState::initial(d65, {{1, 1}, {1, 1}, {1, 1}});
    CHECK(g.gathered());
    const SimState g1 = step(g, all(g, ActionKind::look));
    CHECK(g1.robots == SimState(g1).robots);
    for (std::size_t i = 0; i < g.robots.size(); ++i)
    {
        CHECK(g1.robots[i].at == g.robots[i].at);
        CHECK_FALSE(g1.robots[i].pending);
    }
    CHECK(invariant_hooks(g, g1).empty());
}

TEST_CASE("illegal scheduler choices are rejected")
{
    const SimState s0 = SimState::initial(d65, {{0, 0}, {0, 1}, {0, 3}});
    CHECK_THROWS_AS(step(s0, {Activation{7, ActionKind::look}}), PreconditionError);
    CHECK_THROWS_AS(step(s0, {Activation{0, ActionKind::move}}), PreconditionError);
}

TEST_CASE("initial configurations are screened")
{
    GreedyAll g;
    RunOptions opt;
    CHECK_THROWS_AS(run(SimState::initial(d65, {{0, 0}, {0, 3}, {1, 1}, {1, 4}}), g, opt), InputRejected);
    CHECK_THROWS_AS(run(SimState::initial(d65, {{0, 0}, {0, 0}, {1, 1}}), g, opt), InputRejected);
    CHECK_THROWS_AS(run(SimState::initial(d65, {{0, 0}, {2, 2}}), g, opt), InputRejected);
    CHECK_THROWS_AS(check_initial(SimState::initial(TorusDims::make(6, 4), {{0, 0}, {0, 1}, {2, 3}}), false),
                    InputRejected);
    const RunResult r = run(SimState::initial(d65, {{2, 2}, {2, 2}, {2, 2}}), g, opt);
    CHECK(r.status == RunStatus::gathered);
    CHECK(r.steps == 0);
}

TEST_CASE("set-label transitions")
{
    CHECK(legal_transition(SetLabel::semi_empty, SetLabel::oriented1));
    CHECK(legal_transition(SetLabel::sp2, SetLabel::sp3));
    CHECK_FALSE(legal_transition(SetLabel::sp3, SetLabel::sp1));
    CHECK_FALSE(legal_transition(SetLabel::sp4, SetLabel::not_unique));
    const SimState s = SimState::initial(d65, {{0, 0}, {0, 1}, {0, 3}});
    CHECK(invariant_hooks(s, s).empty());
}

TEST_CASE("seeded runs gather, respect fairness and leave nothing enabled")
{
    for (const auto& cs : enumerate_configs(d65, 3, true, true))
        for (std::uint64_t seed = 1; seed <= 3; ++seed)
        {
            const SimState init = SimState::initial(d65, cs);
            RandomAdversary adv(seed, 3);
            SimState s = init;
            std::map<int, long> last;
            long t = 0;
            while (!s.gathered() && t < 10000)
            {
                const auto choice = adv.next(s);
                REQUIRE(choice);
                for (const auto& a : *choice)
                    last[a.robot] = t;
                for (const auto& r : s.robots)
                    REQUIRE(t - (last.count(r.id) ? last[r.id] : -1) <= 3 * s.k());
                const SimState n = step(s, *choice);
                REQUIRE(invariant_hooks(s, n).empty());
                REQUIRE(n.k() == s.k());
                s = n;
                ++t;
            }
            REQUIRE(s.gathered());
            REQUIRE(enabled_moves(s.occupancy()).empty());
        }
}

TEST_CASE("traces are deterministic and replay to the same final state")
{
    const auto configs = enumerate_configs(d65, 4, true, true);
    for (std::size_t i = 0; i < configs.size(); i += 9)
    {
        const SimState init = SimState::initial(d65, configs[i]);
        RunResult r;
        const std::string a = traced_run(init, 40 + i, &r);
        CHECK(a == traced_run(init, 40 + i));
        std::istringstream in(a);
        const Trace tr = read_trace(in);
        CHECK(tr.steps.size() == static_cast<std::size_t>(r.steps));
        CHECK(replay(tr) == r.final_state);
    }
}

TEST_CASE("malformed traces are rejected")
{
    std::istringstream empty("");
    CHECK_THROWS_AS(read_trace(empty), ParseError);
    std::istringstream junk("{\"type\":\"header\"}\n");
    CHECK_THROWS_AS(read_trace(junk), ParseError);
}
