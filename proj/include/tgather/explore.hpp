#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tgather/sim.hpp"

namespace tgather
{

enum class ExploreOutcome
{
    all_gathered,
    counterexample,
    depth_bound,
};

enum class CounterexampleKind
{
    violation,
    // A fair cycle that never reaches the goal.
    livelock,
    // No robot can do anything and the goal is not reached.
    deadlock,
};

std::string to_string(ExploreOutcome outcome);
std::string to_string(CounterexampleKind kind);

enum class Dedup
{
    // Canonical keys under the system's automorphisms.
    symmetry,
    // Identical robot multisets only.
    exact,
    // Plain tree search. Cycles go unnoticed.
    none,
};

// What is explored: the decision function, the goal and the per-step checks. Defaults give
// the full protocol, Gathered and the simulator's invariant hooks.
struct ExploreSystem
{
    Decider decider = decide;
    std::function<bool(const SimState&)> goal;
    std::function<std::vector<Violation>(const SimState&, const SimState&)> check;
    // Automorphisms the decider commutes with. Empty means all of them.
    std::vector<Automorphism> symmetries;
};

struct ExploreOptions
{
    int depth = 200;
    int fairness_bound = 2;
    Dedup dedup = Dedup::symmetry;
    // Lifts the k <= 4, n <= 35 guard.
    bool override_guard = false;
    std::size_t max_states = 20'000'000;
};

struct ExploreReport
{
    std::size_t states_visited = 0;
    int max_depth = 0;
    int fairness_bound = 0;
    ExploreOutcome outcome = ExploreOutcome::depth_bound;
    std::optional<CounterexampleKind> kind;
    std::vector<Violation> violations;
    SimState initial;
    // Counterexample schedule from `initial`, with scripted looks.
    std::vector<StepChoice> trace;
    // Livelocks: index in `trace` where the repeated part starts.
    std::optional<std::size_t> loop_start;
};

// Explores every B-fair schedule from `initial` up to the depth bound. Throws
// FeasibilityError when the instance is over the guard or the state budget.
ExploreReport explore(const SimState& initial, const ExploreOptions& options, const ExploreSystem& system = {});

// The two-ring Align subsystem: robots on li follow Align(li, lk), the goal is
// aligned(li, lk) with no move pending, and towers are violations when nb(li) is 3 or 5.
ExploreSystem align_system(const Occupancy& initial, int li, int lk);

// Writes the counterexample as a simulator trace (header plus one line per step).
void write_counterexample(std::ostream& out, const ExploreReport& report, const Decider& decider = decide);

} // namespace tgather
