#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tgather/sim.hpp"

namespace tgather
{

// Line-oriented initial condition:
//
//   dims 6 5
//   robot 0 1          (ring, position)
//   scheduler random 7 3
//   flags strict_dims=1 hooks=1
//
// Blank lines and lines starting with '#' are ignored.
struct Scenario
{
    TorusDims dims;
    std::vector<Coord> robots;
    std::optional<SchedulerPolicy> scheduler;
    bool strict_dims = true;
    bool hooks = true;

    SimState initial() const { return SimState::initial(dims, robots); }
};

// Throws ParseError on malformed text or a robot placed twice, unless every robot is on
// the same node.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);
void write_scenario(std::ostream& out, const Scenario& scenario);

std::uint64_t binomial(int n, int k);

// Every k-subset of nodes in lexicographic order of node indices. With canonical set, only
// the lexicographically smallest member of each automorphism class is kept.
std::vector<std::vector<Coord>> enumerate_configs(const TorusDims& dims, int k, bool rigid_only, bool canonical);

} // namespace tgather
