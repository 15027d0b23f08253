#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tgather/torus.hpp"

namespace tgather
{

enum class AxisOrientation
{
    ring_parallel,      // reflection ring -> anchor2 - ring
    ring_perpendicular, // reflection pos -> anchor2 - pos
};

// An axial reflection of the grid. anchor2 is twice the position of the first crossing
// locus and lies in [0, ell) or [0, big_l); the second locus is half a turn away.
struct SymmetryAxis
{
    AxisOrientation orientation = AxisOrientation::ring_perpendicular;
    int anchor2 = 0;

    Automorphism as_automorphism() const;
    bool operator==(const SymmetryAxis&) const = default;
};

std::string to_string(const SymmetryAxis& axis);

bool is_periodic(const Occupancy& occ);
std::vector<SymmetryAxis> symmetry_axes(const Occupancy& occ);

// Rigidity as the paper defines it: every occupied node has a distinct view.
bool is_rigid(const Occupancy& occ);
bool is_rigid(const Config& cfg);
// Rigidity read as "no reflection axis and no translation". The two readings differ on
// some configurations (point reflections, robots sitting on their own axis).
bool rigid_by_symmetry(const Occupancy& occ);

enum class CrossingKind
{
    node_node,
    node_edge,
    edge_edge,
};

// Where a ring-perpendicular axis crosses an ell-ring. The crossing does not depend on
// which ring is inspected.
struct AxisCrossing
{
    CrossingKind kind = CrossingKind::node_node;
    std::vector<int> nodes;                // positions lying on the axis
    std::vector<std::array<int, 2>> edges; // crossed edges as (pos, pos+1)
    // Edge-edge only: (u[0],u[1]) and (u[2],u[3]) are the crossed edges and u[0], u[2]
    // lie on the same side.
    std::array<int, 4> u{};

    // Edge-edge only: 0 for the side holding u[0] and u[2], 1 for the other side,
    // -1 for a position of u itself.
    int side_of(int pos, int ell) const;
};

AxisCrossing axis_ring_intersection(const SymmetryAxis& axis, int ell);

// C_target descriptor.
struct TargetInfo
{
    int max_ring = 0;
    int target_ring = 0;
    int secondary_ring = 0;
    Coord v_target;
    int nb_target = 0;

    // Ring direction from target_ring towards max_ring.
    int up(const TorusDims& dims) const
    {
        return wrap(target_ring + 1, dims.big_l) == max_ring ? +1 : -1;
    }
};

struct Predicates
{
    bool unique = false;
    std::optional<int> max_ring;
    std::optional<TargetInfo> target;
    bool empty = false;   // C_target and only ell_max, ell_target occupied
    bool partial = false; // C_target and some third ring occupied
};

// Landmark of a ring: its single node, the middle of a 2.block of two, or the middle of a
// 1.block of three. nullopt for any other pattern.
std::optional<int> mark_position(const Occupancy& occ, int ring);
// The node v on the smaller ring of an sp-1 configuration that the robots gather on, or
// nullopt when the configuration is not sp-1.
std::optional<Coord> sp1_target(const Occupancy& occ);

Predicates predicates(const Occupancy& occ);

enum class SetLabel
{
    gathered,
    sp4,
    sp3,
    sp2,
    sp1,
    pr,
    ls,
    not_unique,
    empty,
    semi_empty,
    oriented1,
    oriented2,
    semi_oriented,
    undefined,
};

std::string to_string(SetLabel label);
std::optional<SetLabel> parse_set_label(const std::string& text);
int phase_of(SetLabel label);

// Rings adjacent to ell_max, named as in the preparation-phase sets. For C_Semi-Empty li is
// the empty ring, for C_Oriented li holds the single occupied node, for C_Undefined li holds
// no more nodes than lk.
struct PrepRoles
{
    int max_ring = 0;
    int li = 0;
    int lk = 0;
};

struct Classification
{
    SetLabel label = SetLabel::not_unique;
    Predicates pred;
    std::optional<PrepRoles> roles;
};

// Total classification; exactly one label per non-empty occupancy.
Classification classify(const Occupancy& occ);
SetLabel phase_and_set(const Occupancy& occ);

// Everything the classifier knows about a configuration.
struct ClassTag
{
    bool rigid = false;
    std::vector<SymmetryAxis> axes;
    bool periodic = false;
    std::optional<int> unique_max;
    std::optional<TargetInfo> target;
};

ClassTag class_tag(const Occupancy& occ);

// A configuration with some rings blanked out.
struct GammaConfig
{
    Occupancy base;
    std::vector<int> ignored_rings;

    Occupancy occupancy() const;
};

// Blanks li and lk when at least four rings are occupied, only li when three are.
GammaConfig gamma(const Occupancy& occ, int li, int lk);

enum class GammaShape
{
    rigid,       // the nodes of the watched rings are pairwise distinguishable
    single_axis, // exactly one reflection, keeping every watched ring in place
    multi,       // anything else: several axes, translations, swaps of watched rings
};

struct GammaAnalysis
{
    GammaShape shape = GammaShape::rigid;
    std::optional<SymmetryAxis> axis; // set for single_axis
};

// Symmetry of a Gamma occupancy restricted to what it does to the watched rings.
GammaAnalysis analyze_gamma(const Occupancy& gamma_occ, const std::vector<int>& watched);

} // namespace tgather
