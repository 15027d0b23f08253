#pragma once

#include <initializer_list>
#include <vector>

#include "tgather/torus.hpp"

namespace tgather::test
{

inline Occupancy occ_of(const TorusDims& d, std::initializer_list<Coord> nodes)
{
    Occupancy o(d);
    for (auto c : nodes)
        o.set(c, true);
    return o;
}

inline Occupancy occ_of(const TorusDims& d, const std::vector<Coord>& nodes)
{
    Occupancy o(d);
    for (auto c : nodes)
        o.set(c, true);
    return o;
}

} // namespace tgather::test
