#include "tgather/explore.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <unordered_map>

namespace tgather
{

std::string to_string(ExploreOutcome outcome)
{
    switch (outcome)
    {
    case ExploreOutcome::all_gathered: return "AllGathered";
    case ExploreOutcome::counterexample: return "CounterexampleTrace";
    case ExploreOutcome::depth_bound: return "DepthBound";
    }
    return "?";
}

std::string to_string(CounterexampleKind kind)
{
    switch (kind)
    {
    case CounterexampleKind::violation: return "violation";
    case CounterexampleKind::livelock: return "livelock";
    case CounterexampleKind::deadlock: return "deadlock";
    }
    return "?";
}

namespace
{

// Robot state plus the number of steps since its last activation.
struct Fair
{
    SimState state;
    std::vector<int> gaps;
};

struct Node
{
    Fair at;
    int parent = -1;
    StepChoice via;
    int depth = 0;
};

struct Successor
{
    StepChoice choice;
    Fair next;
};

using Tuple = std::array<int, 3>;

std::vector<Tuple> tuples(const Fair& f, const Automorphism& sigma)
{
    const auto& dims = f.state.dims;
    std::vector<Tuple> out;
    out.reserve(f.state.robots.size());
    for (const auto& r : f.state.robots)
    {
        const int dest = r.pending ? index_of(sigma.apply(r.pending->alternatives.front(), dims), dims) : -1;
        out.push_back({index_of(sigma.apply(r.at, dims), dims), dest, f.gaps[r.id]});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string encode(const std::vector<Tuple>& t)
{
    std::string s;
    s.reserve(t.size() * 6);
    for (const auto& x : t)
        for (int v : x)
        {
            const int u = v + 1;
            s.push_back(static_cast<char>(u & 0xff));
            s.push_back(static_cast<char>(u >> 8));
        }
    return s;
}

class Engine
{
public:
    Engine(const ExploreOptions& options, const ExploreSystem& system, const TorusDims& dims, int k)
        : opt_(options), sys_(system), window_(options.fairness_bound * k)
    {
        if (!sys_.goal)
            sys_.goal = [](const SimState& s) { return s.gathered(); };
        if (!sys_.check)
            sys_.check = invariant_hooks;
        if (opt_.dedup == Dedup::symmetry)
            syms_ = sys_.symmetries.empty() ? Automorphism::all(dims) : sys_.symmetries;
        else
            syms_ = {Automorphism{}};
        decider_ = [this](const Snapshot& s) { return cached(s); };
    }

    const Decider& decider() const { return decider_; }
    int window() const { return window_; }
    const std::vector<Automorphism>& syms() const { return syms_; }
    bool goal(const SimState& s) const { return sys_.goal(s); }
    std::vector<Violation> check(const SimState& a, const SimState& b) const { return sys_.check(a, b); }

    std::string key(const Fair& f) const
    {
        std::vector<Tuple> best;
        for (const auto& sigma : syms_)
        {
            auto t = tuples(f, sigma);
            if (best.empty() || t < best)
                best = std::move(t);
        }
        return encode(best);
    }

    // Enumerates every scheduler step allowed from `f`. Idle robots are always activated:
    // their Look is a no-op that only resets their fairness counter.
    // Returns false with `error` set when a decision throws.
    bool successors(const Fair& f, std::vector<Successor>& out, Violation& error, StepChoice& failing)
    {
        out.clear();
        const SimState& s = f.state;
        const Config cfg = s.config();
        const Occupancy occ = cfg.occupancy();
        std::vector<int> enabled, idle;
        std::vector<std::size_t> alts(s.robots.size(), 0);
        for (const auto& r : s.robots)
        {
            if (r.pending)
            {
                enabled.push_back(r.id);
                continue;
            }
            try
            {
                const auto d = decider_(Snapshot{occ, r.at, cfg.count(r.at) > 1});
                if (d.stays())
                    idle.push_back(r.id);
                else
                {
                    enabled.push_back(r.id);
                    alts[r.id] = d.alternatives.size();
                }
            }
            catch (const GatherError& e)
            {
                error = {"model", e.what()};
                failing = {Activation{r.id, ActionKind::look, 0, false, std::nullopt}};
                return false;
            }
        }
        const int m = static_cast<int>(enabled.size());
        unsigned forced = 0;
        for (int i = 0; i < m; ++i)
            if (f.gaps[enabled[i]] >= window_ - 1)
                forced |= 1u << i;
        for (unsigned mask = 1; mask < (1u << m); ++mask)
        {
            if ((mask & forced) != forced)
                continue;
            // Mixed-radix counter over the alternatives of the activated lookers.
            std::vector<std::size_t> pick(m, 0);
            while (true)
            {
                StepChoice choice;
                std::vector<bool> active(s.robots.size(), false);
                for (int id : idle)
                    active[id] = true;
                for (int i = 0; i < m; ++i)
                    if (mask & (1u << i))
                        active[enabled[i]] = true;
                for (const auto& r : s.robots)
                {
                    if (!active[r.id])
                        continue;
                    int i = static_cast<int>(std::find(enabled.begin(), enabled.end(), r.id) - enabled.begin());
                    Activation a{r.id, r.pending ? ActionKind::move : ActionKind::look, 0, false, std::nullopt};
                    if (i < m)
                        a.alternative = pick[i];
                    choice.push_back(a);
                }
                Fair next;
                try
                {
                    next.state = step(s, choice, decider_);
                }
                catch (const GatherError& e)
                {
                    error = {"model", e.what()};
                    failing = choice;
                    return false;
                }
                next.gaps.resize(s.robots.size());
                for (const auto& r : s.robots)
                    next.gaps[r.id] = active[r.id] ? 0 : f.gaps[r.id] + 1;
                out.push_back({std::move(choice), std::move(next)});
                int i = 0;
                for (; i < m; ++i)
                {
                    if (!(mask & (1u << i)) || s.robots[enabled[i]].pending)
                        continue;
                    if (++pick[i] < alts[enabled[i]])
                        break;
                    pick[i] = 0;
                }
                if (i == m)
                    break;
            }
        }
        return true;
    }

    // Some automorphism and robot matching taking `from` onto `to`, as (sigma, robot of
    // `from` for each robot of `to`).
    std::optional<std::pair<Automorphism, std::vector<int>>> match(const Fair& from, const Fair& to) const
    {
        const auto target = tuples(to, Automorphism{});
        const auto& dims = from.state.dims;
        for (const auto& sigma : syms_)
        {
            if (tuples(from, sigma) != target)
                continue;
            std::vector<int> pi(to.state.robots.size(), -1);
            std::vector<bool> used(from.state.robots.size(), false);
            for (const auto& r : to.state.robots)
            {
                const Tuple want{index_of(r.at, dims),
                                 r.pending ? index_of(r.pending->alternatives.front(), dims) : -1, to.gaps[r.id]};
                for (const auto& q : from.state.robots)
                {
                    if (used[q.id])
                        continue;
                    const Tuple got{
                        index_of(sigma.apply(q.at, dims), dims),
                        q.pending ? index_of(sigma.apply(q.pending->alternatives.front(), dims), dims) : -1,
                        from.gaps[q.id]};
                    if (got == want)
                    {
                        used[q.id] = true;
                        pi[r.id] = q.id;
                        break;
                    }
                }
            }
            return std::make_pair(sigma, pi);
        }
        return std::nullopt;
    }

private:
    MoveDecision cached(const Snapshot& s)
    {
        std::string k(s.occupancy.bits().begin(), s.occupancy.bits().end());
        k.push_back(static_cast<char>(index_of(s.self, s.occupancy.dims()) & 0xff));
        k.push_back(static_cast<char>(index_of(s.self, s.occupancy.dims()) >> 8));
        k.push_back(s.self_multiplicity ? 1 : 0);
        auto it = cache_.find(k);
        if (it == cache_.end())
        {
            Entry e;
            try
            {
                e.d = sys_.decider(s);
            }
            catch (const GatherError& ex)
            {
                e.error = ex.what();
            }
            it = cache_.emplace(std::move(k), std::move(e)).first;
        }
        if (it->second.error)
            throw ModelViolation(*it->second.error);
        return it->second.d;
    }

    struct Entry
    {
        MoveDecision d;
        std::optional<std::string> error;
    };

    ExploreOptions opt_;
    ExploreSystem sys_;
    int window_;
    std::vector<Automorphism> syms_;
    std::unordered_map<std::string, Entry> cache_;
    Decider decider_;
};

// Looks of `choice` pinned to what they decided in `after`.
StepChoice pin(const StepChoice& choice, const SimState& after)
{
    StepChoice out = choice;
    for (auto& a : out)
        if (a.action == ActionKind::look)
        {
            a.scripted = true;
            const auto& p = after.robots[a.robot].pending;
            a.destination = p ? std::optional<Coord>(p->alternatives.front()) : std::nullopt;
        }
    return out;
}

std::vector<StepChoice> tree_path(const std::vector<Node>& nodes, int at)
{
    std::vector<StepChoice> out;
    for (int n = at; nodes[n].parent >= 0; n = nodes[n].parent)
        out.push_back(pin(nodes[n].via, nodes[n].at.state));
    std::reverse(out.begin(), out.end());
    return out;
}

// Depth-first search for a cycle over the expanded part of the graph; returns its nodes
// in order, the first repeated at the end implicitly.
std::vector<int> find_cycle(const std::vector<std::vector<int>>& edges)
{
    const int n = static_cast<int>(edges.size());
    std::vector<char> color(n, 0);
    std::vector<std::pair<int, std::size_t>> stack;
    std::vector<int> pos_in_stack(n, -1);
    for (int root = 0; root < n; ++root)
    {
        if (color[root])
            continue;
        stack.push_back({root, 0});
        color[root] = 1;
        pos_in_stack[root] = 0;
        while (!stack.empty())
        {
            auto& [u, i] = stack.back();
            if (i < edges[u].size())
            {
                const int v = edges[u][i++];
                if (color[v] == 1)
                {
                    std::vector<int> cyc;
                    for (std::size_t j = pos_in_stack[v]; j < stack.size(); ++j)
                        cyc.push_back(stack[j].first);
                    return cyc;
                }
                if (color[v] == 0)
                {
                    color[v] = 1;
                    pos_in_stack[v] = static_cast<int>(stack.size());
                    stack.push_back({v, 0});
                }
            }
            else
            {
                color[u] = 2;
                pos_in_stack[u] = -1;
                stack.pop_back();
            }
        }
    }
    return {};
}

} // namespace

ExploreReport explore(const SimState& initial, const ExploreOptions& options, const ExploreSystem& system)
{
    const int k = initial.k();
    const int n = initial.dims.size();
    if (!options.override_guard && (k > 4 || n > 35))
        throw FeasibilityError("exploration guard: k=" + std::to_string(k) + ", n=" + std::to_string(n) +
                               " (limits k <= 4, n <= 35)");
    if (options.fairness_bound < 1)
        throw PreconditionError("fairness bound must be positive");
    Engine eng(options, system, initial.dims, k);

    ExploreReport rep;
    rep.initial = initial;
    rep.fairness_bound = options.fairness_bound;

    std::vector<Node> nodes;
    std::vector<std::vector<int>> edges;
    std::vector<bool> expanded;
    std::unordered_map<std::string, int> seen;
    nodes.push_back({Fair{initial, std::vector<int>(k, 0)}, -1, {}, 0});
    edges.emplace_back();
    expanded.push_back(false);
    if (options.dedup != Dedup::none)
        seen.emplace(eng.key(nodes[0].at), 0);

    bool frontier_left = false;
    std::vector<Successor> succ;
    std::vector<int> layer{0};
    for (int depth = 0; !layer.empty(); ++depth)
    {
        rep.max_depth = depth;
        std::vector<int> next_layer;
        for (int id : layer)
        {
            if (eng.goal(nodes[id].at.state))
                continue;
            if (depth >= options.depth)
            {
                frontier_left = true;
                continue;
            }
            Violation err;
            StepChoice failing;
            if (!eng.successors(nodes[id].at, succ, err, failing))
            {
                rep.outcome = ExploreOutcome::counterexample;
                rep.kind = CounterexampleKind::violation;
                rep.violations = {err};
                rep.trace = tree_path(nodes, id);
                rep.trace.push_back(failing);
                rep.states_visited = nodes.size();
                return rep;
            }
            expanded[id] = true;
            if (succ.empty())
            {
                rep.outcome = ExploreOutcome::counterexample;
                rep.kind = CounterexampleKind::deadlock;
                rep.violations = {{"deadlock", "no robot can move and the goal is not reached"}};
                rep.trace = tree_path(nodes, id);
                rep.loop_start = rep.trace.size();
                rep.states_visited = nodes.size();
                return rep;
            }
            for (auto& sc : succ)
            {
                auto v = eng.check(nodes[id].at.state, sc.next.state);
                if (!v.empty())
                {
                    rep.outcome = ExploreOutcome::counterexample;
                    rep.kind = CounterexampleKind::violation;
                    rep.violations = std::move(v);
                    rep.trace = tree_path(nodes, id);
                    rep.trace.push_back(pin(sc.choice, sc.next.state));
                    rep.states_visited = nodes.size();
                    return rep;
                }
                int target = -1;
                std::string key;
                if (options.dedup != Dedup::none)
                {
                    key = eng.key(sc.next);
                    auto it = seen.find(key);
                    if (it != seen.end())
                        target = it->second;
                }
                if (target < 0)
                {
                    target = static_cast<int>(nodes.size());
                    nodes.push_back({std::move(sc.next), id, std::move(sc.choice), depth + 1});
                    edges.emplace_back();
                    expanded.push_back(false);
                    if (options.dedup != Dedup::none)
                        seen.emplace(std::move(key), target);
                    next_layer.push_back(target);
                    if (nodes.size() > options.max_states)
                        throw FeasibilityError("exploration exceeded " + std::to_string(options.max_states) +
                                               " states");
                }
                edges[id].push_back(target);
            }
        }
        layer = std::move(next_layer);
    }
    rep.states_visited = nodes.size();

    if (options.dedup != Dedup::none)
    {
        const auto cyc = find_cycle(edges);
        if (!cyc.empty())
        {
            rep.outcome = ExploreOutcome::counterexample;
            rep.kind = CounterexampleKind::livelock;
            rep.violations = {{"livelock", "fair cycle of " + std::to_string(cyc.size()) +
                                               " states that never reaches the goal"}};
            rep.trace = tree_path(nodes, cyc.front());
            rep.loop_start = rep.trace.size();
            // Walk the cycle on a concrete state, carrying each edge over by the automorphism
            // that relates the concrete state to the stored one.
            Fair cur = nodes[cyc.front()].at;
            for (std::size_t i = 0; i < cyc.size(); ++i)
            {
                const int u = cyc[i];
                const int v = cyc[(i + 1) % cyc.size()];
                const auto key_v = eng.key(nodes[v].at);
                Violation err;
                StepChoice failing;
                eng.successors(nodes[u].at, succ, err, failing);
                const Successor* hit = nullptr;
                for (const auto& sc : succ)
                    if (eng.key(sc.next) == key_v)
                    {
                        hit = &sc;
                        break;
                    }
                const auto m = eng.match(cur, nodes[u].at);
                if (!hit || !m)
                    throw ModelViolation("livelock trace reconstruction failed");
                const auto& [sigma, pi] = *m;
                const Automorphism inv = sigma.inverse();
                StepChoice mapped;
                for (const auto& a : pin(hit->choice, hit->next.state))
                {
                    Activation b = a;
                    b.robot = pi[a.robot];
                    if (b.destination)
                        b.destination = inv.apply(*b.destination, cur.state.dims);
                    mapped.push_back(b);
                }
                std::sort(mapped.begin(), mapped.end(),
                          [](const Activation& x, const Activation& y) { return x.robot < y.robot; });
                Fair nxt;
                nxt.state = step(cur.state, mapped, eng.decider());
                nxt.gaps = cur.gaps;
                std::vector<bool> active(nxt.gaps.size(), false);
                for (const auto& a : mapped)
                    active[a.robot] = true;
                for (std::size_t r = 0; r < nxt.gaps.size(); ++r)
                    nxt.gaps[r] = active[r] ? 0 : nxt.gaps[r] + 1;
                rep.trace.push_back(std::move(mapped));
                cur = std::move(nxt);
            }
            return rep;
        }
    }
    rep.outcome = frontier_left ? ExploreOutcome::depth_bound : ExploreOutcome::all_gathered;
    return rep;
}

ExploreSystem align_system(const Occupancy& initial, int li, int lk)
{
    check_align_precondition(initial, li, lk);
    const auto& dims = initial.dims();
    ExploreSystem sys;
    sys.decider = [li, lk](const Snapshot& s) {
        MoveDecision d;
        d.label = classify(s.occupancy).label;
        d.alternatives = moves_for(align_enabled(s.occupancy, li, lk), s.self, s.self_multiplicity);
        return d;
    };
    sys.goal = [li, lk](const SimState& s) {
        for (const auto& r : s.robots)
            if (r.pending)
                return false;
        return aligned(s.occupancy(), li, lk);
    };
    const bool no_towers = initial.nb_ring(li) == 3 || initial.nb_ring(li) == 5;
    const auto lk_nodes = initial.ring_positions(lk);
    sys.check = [no_towers, lk, lk_nodes](const SimState&, const SimState& after) {
        std::vector<Violation> out;
        const Config cfg = after.config();
        if (no_towers && cfg.has_multiplicity())
            out.push_back({"tower", "Align created a tower"});
        if (cfg.occupancy().ring_positions(lk) != lk_nodes)
            out.push_back({"conservation", "a robot of the reference ring moved"});
        return out;
    };
    for (const auto& sigma : Automorphism::all(dims))
        if (sigma.apply(Coord{li, 0}, dims).ring == li && sigma.apply(Coord{lk, 0}, dims).ring == lk)
            sys.symmetries.push_back(sigma);
    return sys;
}

void write_counterexample(std::ostream& out, const ExploreReport& report, const Decider& decider)
{
    TraceWriter w(out);
    w.header(report.initial, SchedulerPolicy{SchedulerKind::exhaustive_branch, 0, report.fairness_bound});
    SimState s = report.initial;
    for (const auto& choice : report.trace)
    {
        StepRecord rec;
        try
        {
            s = step(s, choice, decider, &rec);
        }
        catch (const GatherError&)
        {
            break;
        }
        w.record(rec);
    }
}

} // namespace tgather
