// torus-gather: simulation, enumeration, campaigns and exhaustive checks.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tgather/classify.hpp"
#include "tgather/explore.hpp"
#include "tgather/scenario.hpp"
#include "tgather/sim.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace tgather;

namespace
{

enum Exit
{
    exit_ok = 0,
    exit_timeout = 2,
    exit_violation = 3,
    exit_rejected = 4,
    exit_usage = 64,
};

constexpr std::uint64_t enum_guard = 5'000'000;

json coord_json(Coord c) { return json::array({c.ring, c.pos}); }

std::uint64_t seed_or_env(std::uint64_t seed)
{
    if (const char* env = std::getenv("GATHER_SEED"))
        return std::strtoull(env, nullptr, 10);
    return seed;
}

int status_exit(RunStatus s)
{
    switch (s)
    {
    case RunStatus::gathered: return exit_ok;
    case RunStatus::timeout: return exit_timeout;
    case RunStatus::violation: return exit_violation;
    }
    return exit_violation;
}

std::string status_name(RunStatus s)
{
    switch (s)
    {
    case RunStatus::gathered: return "gathered";
    case RunStatus::timeout: return "timeout";
    case RunStatus::violation: return "violation";
    }
    return "?";
}

json violations_json(const std::vector<Violation>& vs)
{
    json out = json::array();
    for (const auto& v : vs)
        out.push_back({{"invariant", v.invariant}, {"message", v.message}});
    return out;
}

// ---------------------------------------------------------------------------------------

struct SimArgs
{
    std::string scenario;
    long max_steps = 10000;
    std::string trace;
    std::optional<bool> hooks;
    std::optional<std::string> scheduler;
    std::optional<std::uint64_t> seed;
    std::optional<int> fairness;
    bool allow_nonrigid = false;
};

int cmd_sim(const SimArgs& a)
{
    const Scenario sc = load_scenario(a.scenario);
    SchedulerPolicy policy = sc.scheduler.value_or(SchedulerPolicy{});
    if (a.scheduler)
    {
        auto k = parse_scheduler_kind(*a.scheduler);
        if (!k)
            throw ParseError("unknown scheduler '" + *a.scheduler + "'");
        policy.kind = *k;
    }
    if (a.seed)
        policy.seed = *a.seed;
    policy.seed = seed_or_env(policy.seed);
    if (a.fairness)
        policy.fairness_bound = *a.fairness;

    RunOptions opt;
    opt.max_steps = a.max_steps;
    opt.hooks = a.hooks.value_or(sc.hooks);
    opt.allow_nonrigid = a.allow_nonrigid;
    opt.strict_dims = sc.strict_dims;
    opt.fairness_bound = policy.fairness_bound;

    const SimState init = sc.initial();
    if (!init.gathered())
        check_initial(init, opt.allow_nonrigid, opt.strict_dims);
    auto scheduler = make_scheduler(policy);
    std::ofstream trace_file;
    std::optional<TraceWriter> writer;
    if (!a.trace.empty())
    {
        trace_file.open(a.trace);
        if (!trace_file)
            throw ParseError("cannot write " + a.trace);
        writer.emplace(trace_file);
        writer->header(init, policy);
        opt.trace = &*writer;
    }
    const RunResult r = run(init, *scheduler, opt);
    json out{{"status", status_name(r.status)}, {"steps", r.steps}};
    if (r.node)
        out["node"] = coord_json(*r.node);
    if (!r.violations.empty())
        out["violations"] = violations_json(r.violations);
    std::cout << out.dump() << '\n';
    return status_exit(r.status);
}

// ---------------------------------------------------------------------------------------

struct EnumArgs
{
    int ell = 6;
    int big_l = 5;
    int k = 3;
    bool rigid_only = false;
    bool canonical = false;
    std::string emit;
    bool force = false;
};

std::vector<std::vector<Coord>> enumerate_checked(const EnumArgs& a)
{
    const TorusDims dims = TorusDims::make(a.ell, a.big_l);
    const auto total = binomial(dims.size(), a.k);
    if (total > enum_guard && !a.force)
        throw FeasibilityError("C(" + std::to_string(dims.size()) + "," + std::to_string(a.k) + ") = " +
                               std::to_string(total) + " subsets is over the enumeration guard");
    return enumerate_configs(dims, a.k, a.rigid_only, a.canonical);
}

int cmd_enum(const EnumArgs& a)
{
    const TorusDims dims = TorusDims::make(a.ell, a.big_l);
    const auto configs = enumerate_checked(a);
    if (!a.emit.empty())
    {
        fs::create_directories(a.emit);
        std::size_t i = 0;
        for (const auto& cs : configs)
        {
            char name[32];
            std::snprintf(name, sizeof name, "cfg_%06zu.scn", i++);
            std::ofstream f(fs::path(a.emit) / name);
            write_scenario(f, Scenario{dims, cs, std::nullopt, true, true});
        }
    }
    json out{{"dims", {a.ell, a.big_l}},
             {"k", a.k},
             {"subsets", binomial(dims.size(), a.k)},
             {"rigid_only", a.rigid_only},
             {"canonical", a.canonical},
             {"count", configs.size()}};
    std::cout << out.dump() << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------------------------------

struct CampaignArgs
{
    std::string from;
    EnumArgs gen;
    int schedules = 20;
    std::uint64_t seed = 1;
    long max_steps = 10000;
    int fairness = 3;
    unsigned threads = 0;
    std::string out = "counterexamples";
};

std::string bucket(long steps)
{
    long lo = 0, hi = 1;
    while (steps >= hi)
    {
        lo = hi;
        hi *= 2;
    }
    return "[" + std::to_string(lo) + "," + std::to_string(hi) + ")";
}

int cmd_campaign(CampaignArgs a)
{
    std::vector<Scenario> scenarios;
    std::vector<std::string> names;
    if (!a.from.empty())
    {
        if (!fs::is_directory(a.from))
            throw ParseError("no scenario directory " + a.from);
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(a.from))
            if (e.is_regular_file())
                files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files)
        {
            scenarios.push_back(load_scenario(f.string()));
            names.push_back(f.filename().string());
        }
    }
    else
    {
        a.gen.rigid_only = true;
        const TorusDims dims = TorusDims::make(a.gen.ell, a.gen.big_l);
        std::size_t i = 0;
        for (auto& cs : enumerate_checked(a.gen))
        {
            scenarios.push_back(Scenario{dims, std::move(cs), std::nullopt, true, true});
            names.push_back("cfg_" + std::to_string(i++));
        }
    }
    if (scenarios.empty())
        throw ParseError("no scenarios to run");
    const std::uint64_t base_seed = seed_or_env(a.seed);
    for (const auto& sc : scenarios)
    {
        const SimState s = sc.initial();
        if (!s.gathered())
            check_initial(s, false, sc.strict_dims);
    }

    struct Outcome
    {
        RunResult result;
        std::uint64_t seed = 0;
    };
    const std::size_t total = scenarios.size() * static_cast<std::size_t>(a.schedules);
    std::vector<Outcome> outcomes(total);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job; (job = next++) < total;)
        {
            const auto& sc = scenarios[job / a.schedules];
            const std::uint64_t seed = base_seed + job % a.schedules;
            RandomAdversary adv(seed, a.fairness);
            RunOptions opt;
            opt.max_steps = a.max_steps;
            opt.hooks = sc.hooks;
            opt.strict_dims = sc.strict_dims;
            opt.fairness_bound = a.fairness;
            outcomes[job] = {run(sc.initial(), adv, opt), seed};
            outcomes[job].result.final_state = {};
        }
    };
    const unsigned n = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();

    long gathered = 0, timeouts = 0, violations = 0;
    std::map<long, long> hist;
    std::vector<long> label_steps(static_cast<int>(SetLabel::undefined) + 1, 0);
    json failures = json::array();
    for (std::size_t job = 0; job < total; ++job)
    {
        const auto& o = outcomes[job];
        for (std::size_t l = 0; l < label_steps.size(); ++l)
            label_steps[l] += o.result.label_steps[l];
        switch (o.result.status)
        {
        case RunStatus::gathered:
        {
            ++gathered;
            long hi = 1;
            while (o.result.steps >= hi)
                hi *= 2;
            ++hist[hi];
            break;
        }
        case RunStatus::timeout: ++timeouts; break;
        case RunStatus::violation:
        {
            ++violations;
            // Rerun with a trace writer to persist the counterexample.
            const auto& sc = scenarios[job / a.schedules];
            fs::create_directories(a.out);
            const auto path = fs::path(a.out) / (names[job / a.schedules] + "_seed" + std::to_string(o.seed) + ".jsonl");
            std::ofstream f(path);
            TraceWriter w(f);
            SchedulerPolicy policy{SchedulerKind::random_adversary, o.seed, a.fairness};
            w.header(sc.initial(), policy);
            RandomAdversary adv(o.seed, a.fairness);
            RunOptions opt;
            opt.max_steps = a.max_steps;
            opt.strict_dims = sc.strict_dims;
            opt.fairness_bound = a.fairness;
            opt.trace = &w;
            run(sc.initial(), adv, opt);
            failures.push_back({{"scenario", names[job / a.schedules]},
                                {"seed", o.seed},
                                {"violations", violations_json(o.result.violations)},
                                {"trace", path.string()}});
            break;
        }
        }
    }
    json h = json::object();
    for (const auto& [hi, c] : hist)
        h[bucket(hi / 2 == 0 ? 0 : hi / 2)] = c;
    json labels = json::object();
    for (std::size_t l = 0; l < label_steps.size(); ++l)
        if (label_steps[l] > 0)
            labels[to_string(static_cast<SetLabel>(l))] = label_steps[l];
    json out{{"scenarios", scenarios.size()},
             {"runs", total},
             {"gathered", gathered},
             {"timeouts", timeouts},
             {"violations", violations},
             {"steps_histogram", h},
             {"label_steps", labels}};
    if (!failures.empty())
        out["failures"] = failures;
    std::cout << out.dump(2) << '\n';
    if (violations > 0)
        return exit_violation;
    return timeouts > 0 ? exit_timeout : exit_ok;
}

// ---------------------------------------------------------------------------------------

struct CheckArgs
{
    std::string scenario;
    int depth = 200;
    int fairness = 2;
    std::string dedup = "symmetry";
    bool override_guard = false;
    bool allow_nonrigid = false;
    std::string trace;
};

int cmd_check(const CheckArgs& a)
{
    const Scenario sc = load_scenario(a.scenario);
    const SimState init = sc.initial();
    if (!init.gathered())
        check_initial(init, a.allow_nonrigid, sc.strict_dims);
    ExploreOptions opt;
    opt.depth = a.depth;
    opt.fairness_bound = a.fairness;
    opt.override_guard = a.override_guard;
    if (a.dedup == "symmetry")
        opt.dedup = Dedup::symmetry;
    else if (a.dedup == "exact")
        opt.dedup = Dedup::exact;
    else if (a.dedup == "none")
        opt.dedup = Dedup::none;
    else
        throw ParseError("unknown dedup mode '" + a.dedup + "'");
    ExploreSystem sys;
    if (!sc.hooks)
        sys.check = [](const SimState&, const SimState&) { return std::vector<Violation>{}; };
    const ExploreReport r = explore(init, opt, sys);
    json out{{"outcome", to_string(r.outcome)}, {"states_visited", r.states_visited}, {"max_depth", r.max_depth}};
    if (r.kind)
    {
        out["kind"] = to_string(*r.kind);
        out["violations"] = violations_json(r.violations);
        out["trace_length"] = r.trace.size();
        if (r.loop_start)
            out["loop_start"] = *r.loop_start;
        if (!a.trace.empty())
        {
            std::ofstream f(a.trace);
            write_counterexample(f, r);
            out["trace"] = a.trace;
        }
    }
    std::cout << out.dump() << '\n';
    switch (r.outcome)
    {
    case ExploreOutcome::all_gathered: return exit_ok;
    case ExploreOutcome::depth_bound: return exit_timeout;
    case ExploreOutcome::counterexample: return exit_violation;
    }
    return exit_violation;
}

// ---------------------------------------------------------------------------------------

std::string shape_name(GammaShape s)
{
    switch (s)
    {
    case GammaShape::rigid: return "rigid";
    case GammaShape::single_axis: return "single_axis";
    case GammaShape::multi: return "multi";
    }
    return "?";
}

std::string crossing_name(CrossingKind k)
{
    switch (k)
    {
    case CrossingKind::node_node: return "node-node";
    case CrossingKind::node_edge: return "node-edge";
    case CrossingKind::edge_edge: return "edge-edge";
    }
    return "?";
}

int cmd_classify(const std::string& path)
{
    const Scenario sc = load_scenario(path);
    const Occupancy occ = sc.initial().occupancy();
    const ClassTag tag = class_tag(occ);
    const Classification cls = classify(occ);
    json out{{"label", to_string(cls.label)},
             {"phase", phase_of(cls.label)},
             {"rigid", tag.rigid},
             {"rigid_by_symmetry", rigid_by_symmetry(occ)},
             {"periodic", tag.periodic}};
    json axes = json::array();
    for (const auto& ax : tag.axes)
        axes.push_back(to_string(ax));
    out["axes"] = axes;
    if (tag.unique_max)
        out["max_ring"] = *tag.unique_max;
    if (const auto& t = tag.target ? tag.target : cls.pred.target)
        out["target"] = {{"max_ring", t->max_ring},
                         {"target_ring", t->target_ring},
                         {"secondary_ring", t->secondary_ring},
                         {"v_target", coord_json(t->v_target)},
                         {"nb_target", t->nb_target}};
    if (cls.roles)
    {
        out["roles"] = {{"max_ring", cls.roles->max_ring}, {"li", cls.roles->li}, {"lk", cls.roles->lk}};
        if (cls.label == SetLabel::undefined)
        {
            const int li = cls.roles->li, lk = cls.roles->lk;
            const bool equal = occ.nb_ring(li) == occ.nb_ring(lk);
            const GammaConfig g = equal ? GammaConfig{occ, {li, lk}} : gamma(occ, li, lk);
            const GammaAnalysis ga =
                analyze_gamma(g.occupancy(), equal ? std::vector<int>{li, lk} : std::vector<int>{li});
            json gj{{"ignored_rings", g.ignored_rings}, {"shape", shape_name(ga.shape)}};
            if (ga.axis)
            {
                gj["axis"] = to_string(*ga.axis);
                gj["crossing"] = crossing_name(axis_ring_intersection(*ga.axis, occ.dims().ell).kind);
            }
            out["gamma"] = gj;
        }
    }
    std::cout << out.dump(2) << '\n';
    return exit_ok;
}

int cmd_replay(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    const Trace tr = read_trace(in);
    const SimState fin = replay(tr);
    json robots = json::array();
    for (const auto& r : fin.robots)
        robots.push_back(coord_json(r.at));
    std::cout << json{{"steps", tr.steps.size()}, {"gathered", fin.gathered()}, {"robots", robots}}.dump() << '\n';
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Gathering of oblivious robots on an unoriented torus"};
    app.require_subcommand(1);

    SimArgs sim;
    auto* s = app.add_subcommand("sim", "Run one simulation");
    s->add_option("scenario", sim.scenario, "Scenario file")->required();
    s->add_option("--max-steps", sim.max_steps, "Step budget");
    s->add_option("--trace", sim.trace, "Write a JSON-lines trace here");
    s->add_flag("--hooks,!--no-hooks", sim.hooks, "Run the invariant hooks");
    s->add_option("--scheduler", sim.scheduler, "random or greedy");
    s->add_option("--seed", sim.seed, "Adversary seed (GATHER_SEED overrides)");
    s->add_option("--fairness", sim.fairness, "Fairness bound B")->check(CLI::PositiveNumber);
    s->add_flag("--allow-nonrigid", sim.allow_nonrigid, "Accept a non-rigid start");

    EnumArgs en;
    auto* e = app.add_subcommand("enum", "Enumerate initial configurations");
    e->add_option("--ell", en.ell)->required();
    e->add_option("--L", en.big_l)->required();
    e->add_option("--k", en.k)->required();
    e->add_flag("--rigid-only", en.rigid_only);
    e->add_flag("--canonical", en.canonical, "One configuration per automorphism class");
    e->add_option("--emit", en.emit, "Write one scenario file per configuration here");
    e->add_flag("--force", en.force, "Ignore the enumeration size guard");

    CampaignArgs ca;
    auto* c = app.add_subcommand("campaign", "Run many seeded simulations");
    c->add_option("--from", ca.from, "Directory of scenario files");
    c->add_option("--ell", ca.gen.ell);
    c->add_option("--L", ca.gen.big_l);
    c->add_option("--k", ca.gen.k);
    c->add_flag("--canonical", ca.gen.canonical, "With --ell/--L/--k: one start per automorphism class");
    c->add_option("--schedules", ca.schedules, "Adversaries per scenario")->check(CLI::PositiveNumber);
    c->add_option("--seed", ca.seed, "First adversary seed (GATHER_SEED overrides)");
    c->add_option("--max-steps", ca.max_steps);
    c->add_option("--fairness", ca.fairness)->check(CLI::PositiveNumber);
    c->add_option("--threads", ca.threads, "Worker threads (0: all cores)");
    c->add_option("--out", ca.out, "Where counterexample traces go");

    CheckArgs ch;
    auto* k = app.add_subcommand("check", "Explore every fair schedule of a scenario");
    k->add_option("scenario", ch.scenario)->required();
    k->add_option("--depth", ch.depth);
    k->add_option("--fairness", ch.fairness)->check(CLI::PositiveNumber);
    k->add_option("--dedup", ch.dedup, "symmetry, exact or none");
    k->add_flag("--override", ch.override_guard, "Lift the k <= 4, n <= 35 guard");
    k->add_flag("--allow-nonrigid", ch.allow_nonrigid);
    k->add_option("--trace", ch.trace, "Write the counterexample trace here");

    std::string classify_path;
    auto* cl = app.add_subcommand("classify", "Print what the classifier sees");
    cl->add_option("scenario", classify_path)->required();

    std::string replay_path;
    auto* rp = app.add_subcommand("replay", "Replay a trace and print the final state");
    rp->add_option("trace", replay_path)->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& err)
    {
        const int code = app.exit(err);
        return code == 0 ? 0 : exit_usage;
    }

    try
    {
        if (*s)
            return cmd_sim(sim);
        if (*e)
            return cmd_enum(en);
        if (*c)
            return cmd_campaign(ca);
        if (*k)
            return cmd_check(ch);
        if (*cl)
            return cmd_classify(classify_path);
        if (*rp)
            return cmd_replay(replay_path);
    }
    catch (const InputRejected& err)
    {
        std::cerr << "rejected: " << err.what() << '\n';
        return exit_rejected;
    }
    catch (const FeasibilityError& err)
    {
        std::cerr << "infeasible: " << err.what() << '\n';
        return exit_rejected;
    }
    catch (const ParseError& err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return exit_usage;
    }
    catch (const InvalidDims& err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return exit_usage;
    }
    catch (const GatherError& err)
    {
        std::cerr << "error: " << err.what() << '\n';
        return exit_violation;
    }
    return exit_usage;
}
