#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tgather/protocol.hpp"

namespace tgather
{

struct RobotState
{
    int id = 0;
    Coord at;
    // Decision of the last Look with the adversary choice already resolved: exactly one
    // alternative. Absent when the robot is between cycles.
    std::optional<MoveDecision> pending;
    long last_activated = 0;

    bool operator==(const RobotState& o) const
    {
        return id == o.id && at == o.at && last_activated == o.last_activated &&
               pending.has_value() == o.pending.has_value() &&
               (!pending || pending->alternatives == o.pending->alternatives);
    }
};

struct SimState
{
    TorusDims dims;
    std::vector<RobotState> robots;
    long step = 0;

    static SimState initial(const TorusDims& dims, const std::vector<Coord>& robots);
    Config config() const;
    Occupancy occupancy() const { return config().occupancy(); }
    int k() const { return static_cast<int>(robots.size()); }
    // All robots on one node and none of them holding a move.
    bool gathered() const;
    bool operator==(const SimState&) const = default;
};

enum class ActionKind
{
    look,
    move,
};

struct Activation
{
    int robot = 0;
    ActionKind action = ActionKind::look;
    // Look only: index into the decision's alternatives, taken modulo their number.
    std::uint64_t alternative = 0;
    // Look only, for replays: the decision must be exactly `destination` (nullopt = Stay).
    bool scripted = false;
    std::optional<Coord> destination;
};

using StepChoice = std::vector<Activation>;

// What one activation did, in trace terms.
struct ActivationRecord
{
    int robot = 0;
    ActionKind action = ActionKind::look;
    Coord from;
    std::optional<Coord> to;
    SetLabel label = SetLabel::gathered;
};

struct StepRecord
{
    long step = 0;
    std::vector<ActivationRecord> activations;
    std::vector<std::array<int, 3>> occupancy; // [ring, pos, count], sorted
};

using Decider = std::function<MoveDecision(const Snapshot&)>;

// Applies one scheduler decision. Looks see the pre-step configuration; all moves land
// together. Throws PreconditionError on an illegal choice and lets the decider's
// exceptions through.
SimState step(const SimState& state, const StepChoice& choice, const Decider& decider = decide,
              StepRecord* record = nullptr);

struct Violation
{
    std::string invariant;
    std::string message;
};

// Per-transition checks. Returns every finding.
std::vector<Violation> invariant_hooks(const SimState& before, const SimState& after);

// Whether the set-label transition from -> to can occur in one step.
bool legal_transition(SetLabel from, SetLabel to);

enum class SchedulerKind
{
    random_adversary,
    greedy_all,
    exhaustive_branch,
    scripted,
};

std::string to_string(SchedulerKind kind);
std::optional<SchedulerKind> parse_scheduler_kind(const std::string& text);

struct SchedulerPolicy
{
    SchedulerKind kind = SchedulerKind::random_adversary;
    std::uint64_t seed = 1;
    int fairness_bound = 3;
};

class Scheduler
{
public:
    virtual ~Scheduler() = default;
    // Next step's activations, or nullopt when the schedule is over.
    virtual std::optional<StepChoice> next(const SimState& state) = 0;
};

// Seeded adversary. Robots left idle for B*k - 1 steps are always activated.
class RandomAdversary : public Scheduler
{
public:
    RandomAdversary(std::uint64_t seed, int fairness_bound);
    std::optional<StepChoice> next(const SimState& state) override;

private:
    std::mt19937_64 rng_;
    int bound_;
};

// Activates every robot at every step, first alternative.
class GreedyAll : public Scheduler
{
public:
    std::optional<StepChoice> next(const SimState& state) override;
};

class ScriptedScheduler : public Scheduler
{
public:
    explicit ScriptedScheduler(std::vector<StepChoice> script) : script_(std::move(script)) {}
    std::optional<StepChoice> next(const SimState& state) override;

private:
    std::vector<StepChoice> script_;
    std::size_t at_ = 0;
};

std::unique_ptr<Scheduler> make_scheduler(const SchedulerPolicy& policy);

// JSON-lines trace: one header line then one line per step.
class TraceWriter
{
public:
    explicit TraceWriter(std::ostream& out) : out_(&out) {}
    void header(const SimState& initial, const SchedulerPolicy& policy);
    void record(const StepRecord& rec);

private:
    std::ostream* out_;
};

struct Trace
{
    SimState initial;
    SchedulerPolicy policy;
    std::vector<StepRecord> steps;
};

Trace read_trace(std::istream& in);
// Rebuilds the scheduler decisions recorded in a trace.
std::vector<StepChoice> script_from_trace(const Trace& trace);

enum class RunStatus
{
    gathered,
    timeout,
    violation,
};

struct RunResult
{
    RunStatus status = RunStatus::timeout;
    long steps = 0;
    std::optional<Coord> node;
    SimState final_state;
    std::vector<Violation> violations;
    // Steps spent in each set label, indexed by SetLabel.
    std::vector<long> label_steps;
};

struct RunOptions
{
    long max_steps = 10000;
    bool hooks = true;
    TraceWriter* trace = nullptr;
    bool allow_nonrigid = false;
    bool strict_dims = true;
    // When positive, a robot left idle for more than fairness_bound * k steps is a violation.
    int fairness_bound = 0;
    Decider decider = decide;
};

// Throws InputRejected when the initial configuration is not a valid start.
void check_initial(const SimState& state, bool allow_nonrigid, bool strict_dims = true);

RunResult run(SimState state, Scheduler& scheduler, const RunOptions& options);

// Replays a recorded trace and returns the final state.
SimState replay(const Trace& trace, const Decider& decider = decide);

} // namespace tgather
