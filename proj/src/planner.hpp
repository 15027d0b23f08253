#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tgather/classify.hpp"
#include "tgather/protocol.hpp"
#include "tgather/view.hpp"

namespace tgather::detail
{

// Computes the enabled set of one configuration. Every rule reads the occupancy only through
// ring/column relations and node views, so the result commutes with torus automorphisms.
class Planner
{
public:
    Planner(const Occupancy& occ, const Classification& cls);

    EnabledSet preparation();
    EnabledSet gathering();
    EnabledSet align(int li, int lk);

    int select_edge_edge_ring(int li, int lk);

private:
    int ell() const { return dims_.ell; }
    int big_l() const { return dims_.big_l; }
    bool at(Coord c) const { return occ_.at(normalize(c, dims_)); }
    bool at(int ring, int pos) const { return at(Coord{ring, pos}); }
    int nb(int ring) const { return occ_.nb_ring(wrap(ring, big_l())); }
    int pgap(int a, int b) const { return cyclic_gap(a, b, ell()); }
    int rgap(int a, int b) const { return cyclic_gap(a, b, big_l()); }
    Coord node(int ring, int pos) const { return normalize(Coord{ring, pos}, dims_); }
    std::vector<int> pos_steps(int from, int to) const;
    std::vector<int> ring_steps(int from, int to) const;
    std::vector<Coord> robots_on(int ring) const;
    std::vector<Coord> empty_ring_neighbors(Coord c) const;
    // Direction (+1/-1) from ring a to its adjacent ring b.
    int ring_dir(int a, int b) const { return wrap(a + 1, big_l()) == wrap(b, big_l()) ? +1 : -1; }

    const std::vector<std::uint8_t>& view(Coord c);
    std::vector<Coord> best(std::vector<Coord> cands);
    Coord elect(std::vector<Coord> cands);
    std::vector<Coord> closest_to(const std::vector<Coord>& cands, Coord target) const;

    void emit(Coord from, const std::vector<Coord>& tos, bool single_only = false);
    void emit(Coord from, Coord to, bool single_only = false) { emit(from, std::vector<Coord>{to}, single_only); }
    void step_ring_toward(Coord from, int target_pos, bool single_only = false);
    void step_column_toward(Coord from, int target_ring);
    EnabledSet finish();

    void align_two(int li, int m);
    void align_three(int li, int m);
    void align_four(int li, int m);
    void align_five(int li, int m);
    void fill_sides(int li, int m, const std::vector<int>& offsets);
    std::vector<int> offsets_from(int li, int m) const;

    void prep_not_unique();
    void prep_full_rings();
    void prep_fill_empty();
    void leave_to_empty_ring(const std::vector<Coord>& cands);
    void prep_empty();
    void prep_semi_empty();
    void prep_oriented1();
    void prep_oriented2();
    void prep_semi_oriented();
    void undefined_unequal(int li, int lk);
    void undefined_equal(int li, int lk);
    void gather_on(int ring, int u);
    void node_edge_equal(int li, int lk, int a);
    void node_node_on_ring(int ring, const AxisCrossing& cr);
    void node_node_equal(int li, int lk, const AxisCrossing& cr);
    void edge_edge_on_ring(int ring, const AxisCrossing& cr);
    void reduce_gamma_axes(const std::vector<int>& ignored, const std::vector<int>& watched);

    void gath_pr();
    void gath_ls();
    void gath_sp1();
    void gath_sp2();
    void gath_sp3();
    void gath_sp4();

    Occupancy moved(Coord from, Coord to) const;

    // Edge-edge helpers; sides and U membership follow AxisCrossing.
    int side_step(const AxisCrossing& cr, int pos, int target) const;
    bool free_between(int ring, const AxisCrossing& cr, int a, int b) const;

    const Occupancy& occ_;
    TorusDims dims_;
    Classification cls_;
    std::vector<std::optional<std::vector<std::uint8_t>>> views_;
    EnabledSet out_;
    // Set by select_edge_edge_ring when the first rung fired: the U node to move from and to.
    std::optional<std::pair<Coord, Coord>> rung_one_move_;
};

} // namespace tgather::detail
