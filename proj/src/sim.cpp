#include "tgather/sim.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "tgather/view.hpp"

namespace tgather
{

using nlohmann::json;

SimState SimState::initial(const TorusDims& dims, const std::vector<Coord>& robots)
{
    SimState s;
    s.dims = dims;
    for (std::size_t i = 0; i < robots.size(); ++i)
    {
        if (!valid(robots[i], dims))
            throw PreconditionError("robot outside the torus: " + to_string(robots[i]));
        s.robots.push_back(RobotState{static_cast<int>(i), robots[i], std::nullopt, 0});
    }
    return s;
}

Config SimState::config() const
{
    Config c(dims);
    for (const auto& r : robots)
        c.add(r.at);
    return c;
}

bool SimState::gathered() const
{
    if (robots.empty())
        return false;
    for (const auto& r : robots)
        if (r.pending || !(r.at == robots.front().at))
            return false;
    return true;
}

namespace
{

std::vector<std::array<int, 3>> sparse_occupancy(const SimState& s)
{
    std::map<Coord, int> counts;
    for (const auto& r : s.robots)
        ++counts[r.at];
    std::vector<std::array<int, 3>> out;
    for (const auto& [c, n] : counts)
        out.push_back({c.ring, c.pos, n});
    return out;
}

} // namespace

SimState step(const SimState& state, const StepChoice& choice, const Decider& decider, StepRecord* record)
{
    SimState next = state;
    next.step = state.step + 1;
    const Config cfg = state.config();
    const Occupancy occ = cfg.occupancy();
    std::vector<bool> seen(state.robots.size(), false);
    std::vector<ActivationRecord> acts;
    for (const auto& a : choice)
    {
        if (a.robot < 0 || a.robot >= state.k() || seen[a.robot])
            throw PreconditionError("bad robot id in scheduler choice: " + std::to_string(a.robot));
        seen[a.robot] = true;
        const RobotState& r = state.robots[a.robot];
        RobotState& out = next.robots[a.robot];
        ActivationRecord rec{a.robot, a.action, r.at, std::nullopt, SetLabel::gathered};
        if (a.action == ActionKind::look)
        {
            if (r.pending)
                throw PreconditionError("robot " + std::to_string(a.robot) + " looked with a move pending");
            MoveDecision d = decider(Snapshot{occ, r.at, cfg.count(r.at) > 1});
            rec.label = d.label;
            if (a.scripted)
            {
                const bool ok = a.destination ? std::find(d.alternatives.begin(), d.alternatives.end(),
                                                          *a.destination) != d.alternatives.end()
                                              : d.stays();
                if (!ok)
                    throw PreconditionError("scripted look of robot " + std::to_string(a.robot) +
                                            " disagrees with the protocol");
                if (a.destination)
                {
                    out.pending = MoveDecision{{*a.destination}, d.label};
                    rec.to = a.destination;
                }
            }
            else if (!d.stays())
            {
                const Coord to = d.alternatives[a.alternative % d.alternatives.size()];
                out.pending = MoveDecision{{to}, d.label};
                rec.to = to;
            }
        }
        else
        {
            if (!r.pending)
                throw PreconditionError("robot " + std::to_string(a.robot) + " moved with nothing pending");
            const Coord to = r.pending->alternatives.front();
            if (!adjacent(r.at, to, state.dims))
                throw ModelViolation("pending destination " + to_string(to) + " is not adjacent to " + to_string(r.at));
            out.at = to;
            out.pending.reset();
            rec.to = to;
            rec.label = r.pending->label;
        }
        out.last_activated = next.step;
        acts.push_back(rec);
    }
    if (record)
    {
        record->step = next.step;
        record->activations = std::move(acts);
        record->occupancy = sparse_occupancy(next);
    }
    return next;
}

// ---------------------------------------------------------------------------------------
// Invariant hooks

bool legal_transition(SetLabel from, SetLabel to)
{
    using L = SetLabel;
    if (from == to || from == L::not_unique)
        return true;
    const int pf = phase_of(from), pt = phase_of(to);
    if (pf == 2 && pt == 1)
        return false;
    if (to == L::not_unique)
        return false;
    auto rank = [](L l) {
        switch (l)
        {
        case L::pr: return 0;
        case L::ls: return 1;
        case L::sp1: return 2;
        case L::sp2: return 3;
        case L::sp3: return 4;
        case L::sp4: return 5;
        case L::gathered: return 6;
        default: return -1;
        }
    };
    // A C_sp-2 ring of two 1.blocks of two can collapse into a 2.block of three, which is
    // handed back to Align under C_ls.
    if (from == L::sp2 && to == L::ls)
        return true;
    // C_sp-2 is tested before C_pr, so it can hold robots off both rings; its moves then fall
    // back to C_pr.
    if (from == L::sp2 && to == L::pr)
        return true;
    if (pf == 2)
        return rank(to) > rank(from);
    if (pt == 2)
        return true;
    switch (from)
    {
    case L::semi_empty:
    case L::semi_oriented:
    case L::undefined: return to == L::oriented1 || to == L::oriented2;
    case L::oriented2: return to == L::oriented1;
    default: return false;
    }
}

namespace
{

// Multiplicity on a ring of a phase-1 configuration: the ring misses one node, two robots
// share the node, and the node ends the 1.block of ell-1 robots.
bool ring_multiplicity_ok(const Config& cfg, const Occupancy& occ, Coord c)
{
    const int ell = cfg.dims().ell;
    if (occ.nb_ring(c.ring) != ell - 1 || cfg.count(c) != 2)
        return false;
    return !occ.at(c.ring, wrap(c.pos + 1, ell)) || !occ.at(c.ring, wrap(c.pos - 1, ell));
}

} // namespace

std::vector<Violation> invariant_hooks(const SimState& before, const SimState& after)
{
    std::vector<Violation> out;
    if (before.k() != after.k())
        out.push_back({"conservation", "robot count changed"});
    for (std::size_t i = 0; i < after.robots.size(); ++i)
    {
        const Coord a = before.robots[i].at, b = after.robots[i].at;
        if (!valid(b, after.dims))
            out.push_back({"conservation", "robot off the torus"});
        else if (!(a == b) && !adjacent(a, b, after.dims))
            out.push_back({"conservation", "robot jumped from " + to_string(a) + " to " + to_string(b)});
    }
    const Config cb = before.config(), ca = after.config();
    const Occupancy ob = cb.occupancy(), oa = ca.occupancy();
    if (ob == oa)
        return out;

    Classification clb, cla;
    try
    {
        clb = classify(ob);
        cla = classify(oa);
    }
    catch (const GatherError& e)
    {
        out.push_back({"classification", e.what()});
        return out;
    }

    if (!legal_transition(clb.label, cla.label))
        out.push_back({"transition", to_string(clb.label) + " -> " + to_string(cla.label)});
    if (phase_of(clb.label) == 2 && phase_of(cla.label) == 1)
        out.push_back({"phase_regression", to_string(clb.label) + " -> " + to_string(cla.label)});

    const auto maxb = maximal_rings(ob), maxa = maximal_rings(oa);
    if (maxb.size() == 1 && maxa.size() > 1)
        out.push_back({"max_rings", "maximal rings went from 1 to " + std::to_string(maxa.size())});

    if (clb.label == SetLabel::not_unique && ob.nb_ring(maxb[0]) == before.dims.ell)
    {
        if (!is_rigid(oa))
            out.push_back({"rigidity", "leaving a full maximal ring produced a non-rigid configuration"});
        if (maxa.size() >= maxb.size() && oa.nb_ring(maxa[0]) == before.dims.ell)
            out.push_back({"rigidity", "full maximal rings did not decrease"});
    }

    if (phase_of(cla.label) == 1 && cla.label != SetLabel::not_unique)
    {
        std::vector<int> per_ring(after.dims.big_l, 0);
        for (const auto& c : oa.occupied())
        {
            if (ca.count(c) < 2)
                continue;
            ++per_ring[c.ring];
            // The placement conditions hold where Unique first becomes true. Later phase-1
            // procedures gather rings onto one node and build towers of any size.
            if (clb.label == SetLabel::not_unique && !ring_multiplicity_ok(ca, oa, c))
                out.push_back({"multiplicity", "multiplicity at " + to_string(c) + " breaks the ring conditions"});
        }
        for (int r = 0; r < after.dims.big_l; ++r)
            if (per_ring[r] > 1)
                out.push_back({"multiplicity", "ring " + std::to_string(r) + " hosts several multiplicities"});
    }
    if (cla.pred.target &&
        (cla.label == SetLabel::pr || cla.label == SetLabel::ls || cla.label == SetLabel::sp2 ||
         cla.label == SetLabel::sp3))
    {
        const auto& t = *cla.pred.target;
        for (int p = 0; p < after.dims.ell; ++p)
        {
            const Coord c{t.max_ring, p};
            if (ca.count(c) > 1 && p != t.v_target.pos)
                out.push_back({"multiplicity", "multiplicity on the maximal ring away from v_target at " + to_string(c)});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------------------
// Schedulers

std::string to_string(SchedulerKind kind)
{
    switch (kind)
    {
    case SchedulerKind::random_adversary: return "random";
    case SchedulerKind::greedy_all: return "greedy";
    case SchedulerKind::exhaustive_branch: return "exhaustive";
    case SchedulerKind::scripted: return "scripted";
    }
    return "?";
}

std::optional<SchedulerKind> parse_scheduler_kind(const std::string& text)
{
    for (auto k : {SchedulerKind::random_adversary, SchedulerKind::greedy_all, SchedulerKind::exhaustive_branch,
                   SchedulerKind::scripted})
        if (to_string(k) == text)
            return k;
    return std::nullopt;
}

namespace
{

Activation activation_for(const RobotState& r, std::uint64_t alt)
{
    return Activation{r.id, r.pending ? ActionKind::move : ActionKind::look, alt, false, std::nullopt};
}

} // namespace

RandomAdversary::RandomAdversary(std::uint64_t seed, int fairness_bound) : rng_(seed), bound_(fairness_bound)
{
    if (fairness_bound < 1)
        throw PreconditionError("fairness bound must be positive");
}

std::optional<StepChoice> RandomAdversary::next(const SimState& state)
{
    const int k = state.k();
    const long window = static_cast<long>(bound_) * k;
    std::vector<bool> pick(k, false);
    // Draws use raw engine output so the schedule is identical on every platform.
    switch (rng_() % 4)
    {
    case 0: pick[rng_() % k] = true; break;
    case 1:
        for (int i = 0; i < k; ++i)
            pick[i] = (rng_() & 1) != 0;
        break;
    case 2: std::fill(pick.begin(), pick.end(), true); break;
    default:
    {
        std::vector<int> waiting;
        for (const auto& r : state.robots)
            if (r.pending)
                waiting.push_back(r.id);
        if (waiting.empty())
            pick[rng_() % k] = true;
        else
            pick[waiting[rng_() % waiting.size()]] = true;
    }
    }
    for (const auto& r : state.robots)
        if (state.step + 1 - r.last_activated >= window)
            pick[r.id] = true;
    if (std::none_of(pick.begin(), pick.end(), [](bool b) { return b; }))
        pick[rng_() % k] = true;
    StepChoice choice;
    for (const auto& r : state.robots)
        if (pick[r.id])
            choice.push_back(activation_for(r, rng_()));
    return choice;
}

std::optional<StepChoice> GreedyAll::next(const SimState& state)
{
    StepChoice choice;
    for (const auto& r : state.robots)
        choice.push_back(activation_for(r, 0));
    return choice;
}

std::optional<StepChoice> ScriptedScheduler::next(const SimState&)
{
    if (at_ >= script_.size())
        return std::nullopt;
    return script_[at_++];
}

std::unique_ptr<Scheduler> make_scheduler(const SchedulerPolicy& policy)
{
    switch (policy.kind)
    {
    case SchedulerKind::random_adversary:
        return std::make_unique<RandomAdversary>(policy.seed, policy.fairness_bound);
    case SchedulerKind::greedy_all: return std::make_unique<GreedyAll>();
    default: throw PreconditionError(to_string(policy.kind) + " scheduler cannot drive a single run");
    }
}

// ---------------------------------------------------------------------------------------
// Traces

namespace
{

json coord_json(Coord c) { return json::array({c.ring, c.pos}); }

Coord coord_from(const json& j)
{
    if (!j.is_array() || j.size() != 2)
        throw ParseError("coordinate must be [ring, pos]");
    return Coord{j[0].get<int>(), j[1].get<int>()};
}

const char* action_name(ActionKind a) { return a == ActionKind::look ? "look" : "move"; }

} // namespace

void TraceWriter::header(const SimState& initial, const SchedulerPolicy& policy)
{
    json robots = json::array();
    for (const auto& r : initial.robots)
        robots.push_back(coord_json(r.at));
    json h{{"type", "header"},
           {"dims", json::array({initial.dims.ell, initial.dims.big_l})},
           {"robots", robots},
           {"scheduler",
            {{"kind", to_string(policy.kind)}, {"seed", policy.seed}, {"fairness_bound", policy.fairness_bound}}}};
    *out_ << h.dump() << '\n';
}

void TraceWriter::record(const StepRecord& rec)
{
    json acts = json::array();
    for (const auto& a : rec.activations)
        acts.push_back({{"robot_id", a.robot},
                        {"action", action_name(a.action)},
                        {"from", coord_json(a.from)},
                        {"to", a.to ? coord_json(*a.to) : json(nullptr)},
                        {"set_label", to_string(a.label)}});
    json occ = json::array();
    for (const auto& o : rec.occupancy)
        occ.push_back(json::array({o[0], o[1], o[2]}));
    *out_ << json{{"step", rec.step}, {"activations", acts}, {"occupancy", occ}}.dump() << '\n';
}

Trace read_trace(std::istream& in)
{
    Trace t;
    std::string line;
    bool have_header = false;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (line.empty())
            continue;
        try
        {
            const json j = json::parse(line);
            if (!have_header)
            {
                if (j.value("type", "") != "header")
                    throw ParseError("first trace line must be the header");
                const auto& d = j.at("dims");
                std::vector<Coord> robots;
                for (const auto& r : j.at("robots"))
                    robots.push_back(coord_from(r));
                t.initial = SimState::initial(TorusDims::make(d.at(0).get<int>(), d.at(1).get<int>()), robots);
                const auto& s = j.at("scheduler");
                auto kind = parse_scheduler_kind(s.at("kind").get<std::string>());
                if (!kind)
                    throw ParseError("unknown scheduler kind");
                t.policy = SchedulerPolicy{*kind, s.at("seed").get<std::uint64_t>(), s.at("fairness_bound").get<int>()};
                have_header = true;
                continue;
            }
            StepRecord rec;
            rec.step = j.at("step").get<long>();
            for (const auto& a : j.at("activations"))
            {
                ActivationRecord ar;
                ar.robot = a.at("robot_id").get<int>();
                const auto act = a.at("action").get<std::string>();
                if (act != "look" && act != "move")
                    throw ParseError("unknown action " + act);
                ar.action = act == "look" ? ActionKind::look : ActionKind::move;
                ar.from = coord_from(a.at("from"));
                if (!a.at("to").is_null())
                    ar.to = coord_from(a.at("to"));
                auto label = parse_set_label(a.at("set_label").get<std::string>());
                if (!label)
                    throw ParseError("unknown set label");
                ar.label = *label;
                rec.activations.push_back(ar);
            }
            for (const auto& o : j.at("occupancy"))
                rec.occupancy.push_back({o.at(0).get<int>(), o.at(1).get<int>(), o.at(2).get<int>()});
            t.steps.push_back(std::move(rec));
        }
        catch (const json::exception& e)
        {
            throw ParseError("trace line " + std::to_string(lineno) + ": " + e.what());
        }
        catch (const GatherError& e)
        {
            throw ParseError("trace line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (!have_header)
        throw ParseError("empty trace");
    return t;
}

std::vector<StepChoice> script_from_trace(const Trace& trace)
{
    std::vector<StepChoice> script;
    for (const auto& rec : trace.steps)
    {
        StepChoice c;
        for (const auto& a : rec.activations)
            c.push_back(Activation{a.robot, a.action, 0, true, a.to});
        script.push_back(std::move(c));
    }
    return script;
}

SimState replay(const Trace& trace, const Decider& decider)
{
    SimState s = trace.initial;
    const auto script = script_from_trace(trace);
    for (std::size_t i = 0; i < script.size(); ++i)
    {
        StepRecord rec;
        s = step(s, script[i], decider, &rec);
        if (rec.occupancy != trace.steps[i].occupancy)
            throw ParseError("replay diverged at step " + std::to_string(trace.steps[i].step));
    }
    return s;
}

// ---------------------------------------------------------------------------------------
// Runs

void check_initial(const SimState& state, bool allow_nonrigid, bool strict_dims)
{
    try
    {
        TorusDims::make(state.dims.ell, state.dims.big_l, strict_dims);
    }
    catch (const InvalidDims& e)
    {
        throw InputRejected(e.what());
    }
    if (state.k() < 3)
        throw InputRejected("at least three robots are needed");
    const Config cfg = state.config();
    if (cfg.has_multiplicity())
        throw InputRejected("the initial configuration has a multiplicity");
    if (!allow_nonrigid && !is_rigid(cfg.occupancy()))
        throw InputRejected("the initial configuration is not rigid");
}

RunResult run(SimState state, Scheduler& scheduler, const RunOptions& options)
{
    RunResult res;
    res.label_steps.assign(static_cast<int>(SetLabel::undefined) + 1, 0);
    if (!state.gathered())
        check_initial(state, options.allow_nonrigid, options.strict_dims);
    std::optional<Occupancy> last_occ;
    SetLabel last_label = SetLabel::gathered;
    while (true)
    {
        if (state.gathered())
        {
            res.status = RunStatus::gathered;
            res.node = state.robots.front().at;
            break;
        }
        if (res.steps >= options.max_steps)
        {
            res.status = RunStatus::timeout;
            break;
        }
        auto choice = scheduler.next(state);
        if (!choice)
        {
            res.status = RunStatus::timeout;
            break;
        }
        const Occupancy occ = state.occupancy();
        if (!last_occ || !(occ == *last_occ))
        {
            try
            {
                last_label = classify(occ).label;
            }
            catch (const GatherError& e)
            {
                res.status = RunStatus::violation;
                res.violations.push_back({"classification", e.what()});
                break;
            }
            last_occ = occ;
        }
        ++res.label_steps[static_cast<int>(last_label)];
        StepRecord rec;
        SimState next;
        try
        {
            next = step(state, *choice, options.decider, &rec);
        }
        catch (const GatherError& e)
        {
            res.status = RunStatus::violation;
            res.violations.push_back({"model", e.what()});
            break;
        }
        ++res.steps;
        if (options.trace)
            options.trace->record(rec);
        if (options.hooks)
        {
            auto v = invariant_hooks(state, next);
            if (!v.empty())
            {
                state = std::move(next);
                res.status = RunStatus::violation;
                res.violations = std::move(v);
                break;
            }
        }
        if (options.fairness_bound > 0)
        {
            const long window = static_cast<long>(options.fairness_bound) * next.k();
            for (const auto& r : next.robots)
                if (next.step - r.last_activated > window)
                {
                    res.violations.push_back({"fairness", "robot " + std::to_string(r.id) + " starved"});
                }
            if (!res.violations.empty())
            {
                state = std::move(next);
                res.status = RunStatus::violation;
                break;
            }
        }
        state = std::move(next);
    }
    res.final_state = std::move(state);
    return res;
}

} // namespace tgather
