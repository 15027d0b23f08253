#include "tgather/classify.hpp"

#include <algorithm>

#include "tgather/view.hpp"

namespace tgather
{

Automorphism SymmetryAxis::as_automorphism() const
{
    if (orientation == AxisOrientation::ring_perpendicular)
        return Automorphism{false, true, 0, anchor2};
    return Automorphism{true, false, anchor2, 0};
}

std::string to_string(const SymmetryAxis& axis)
{
    std::string o = axis.orientation == AxisOrientation::ring_parallel ? "ring-parallel" : "ring-perpendicular";
    std::string anchor = std::to_string(axis.anchor2 / 2) + (axis.anchor2 % 2 ? ".5" : "");
    return o + "@" + anchor;
}

bool is_periodic(const Occupancy& occ)
{
    const auto& dims = occ.dims();
    for (int sr = 0; sr < dims.big_l; ++sr)
        for (int sp = 0; sp < dims.ell; ++sp)
        {
            if (sr == 0 && sp == 0)
                continue;
            if (Automorphism{false, false, sr, sp}.apply(occ) == occ)
                return true;
        }
    return false;
}

std::vector<SymmetryAxis> symmetry_axes(const Occupancy& occ)
{
    const auto& dims = occ.dims();
    std::vector<SymmetryAxis> out;
    for (int a = 0; a < dims.big_l; ++a)
    {
        SymmetryAxis ax{AxisOrientation::ring_parallel, a};
        if (ax.as_automorphism().apply(occ) == occ)
            out.push_back(ax);
    }
    for (int a = 0; a < dims.ell; ++a)
    {
        SymmetryAxis ax{AxisOrientation::ring_perpendicular, a};
        if (ax.as_automorphism().apply(occ) == occ)
            out.push_back(ax);
    }
    return out;
}

bool is_rigid(const Occupancy& occ)
{
    return views_distinct(occ);
}

bool is_rigid(const Config& cfg)
{
    return views_distinct(cfg.occupancy());
}

bool rigid_by_symmetry(const Occupancy& occ)
{
    return symmetry_axes(occ).empty() && !is_periodic(occ);
}

int AxisCrossing::side_of(int pos, int ell) const
{
    if (kind != CrossingKind::edge_edge)
        throw PreconditionError("sides are only defined for edge-edge crossings");
    for (int x : u)
        if (x == pos)
            return -1;
    // Side 0 runs from u[2] to u[0] in the +pos direction.
    int span = wrap(u[0] - u[2], ell);
    int off = wrap(pos - u[2], ell);
    return off <= span ? 0 : 1;
}

AxisCrossing axis_ring_intersection(const SymmetryAxis& axis, int ell)
{
    if (axis.orientation != AxisOrientation::ring_perpendicular)
        throw PreconditionError("only ring-perpendicular axes cross an ell-ring");
    AxisCrossing out;
    const int a = wrap(axis.anchor2, ell);
    for (int p = 0; p < ell; ++p)
    {
        if (wrap(2 * p - a, ell) == 0)
            out.nodes.push_back(p);
        if (wrap(2 * p + 1 - a, ell) == 0)
            out.edges.push_back({p, wrap(p + 1, ell)});
    }
    if (out.nodes.size() == 2)
        out.kind = CrossingKind::node_node;
    else if (out.edges.size() == 2)
    {
        out.kind = CrossingKind::edge_edge;
        const int p = out.edges[0][0];
        const int q = out.edges[1][0];
        // u1 = p and u3 = q+1 both lie on the arc q+1 .. p.
        out.u = {p, wrap(p + 1, ell), wrap(q + 1, ell), q};
    }
    else
        out.kind = CrossingKind::node_edge;
    return out;
}

namespace
{

// Middle position of a 2.block of size 2 on a ring with exactly two occupied nodes.
std::optional<int> two_block_middle(const std::vector<int>& pos, int ell)
{
    if (pos.size() != 2 || ell <= 4)
        return std::nullopt;
    if (wrap(pos[1] - pos[0], ell) == 2)
        return wrap(pos[0] + 1, ell);
    if (wrap(pos[0] - pos[1], ell) == 2)
        return wrap(pos[1] + 1, ell);
    return std::nullopt;
}

// Middle position when the ring holds exactly one 1.block of size 3 and nothing else.
std::optional<int> three_block_middle(const Occupancy& occ, int ring)
{
    if (occ.nb_ring(ring) != 3)
        return std::nullopt;
    auto bl = blocks(occ, ring, 1);
    if (bl.size() != 1 || bl[0].size != 3)
        return std::nullopt;
    return bl[0].pos_at(1, occ.dims().ell);
}


bool ring_is(const Occupancy& occ, int ring, std::initializer_list<int> offsets, int centre)
{
    const int ell = occ.dims().ell;
    if (occ.nb_ring(ring) != static_cast<int>(offsets.size()))
        return false;
    for (int o : offsets)
        if (!occ.at(ring, wrap(centre + o, ell)))
            return false;
    return true;
}

bool is_sp4(const Occupancy& occ)
{
    if (occ.occupied_rings() != 1)
        return false;
    int ring = maximal_rings(occ)[0];
    int nb = occ.nb_ring(ring);
    if (nb != 2 && nb != 3)
        return false;
    auto bl = blocks(occ, ring, 1);
    return bl.size() == 1 && bl[0].size == nb;
}

bool is_sp3(const Occupancy& occ, const Predicates& p)
{
    if (!p.target || !p.empty || p.target->nb_target != 1)
        return false;
    const auto& t = *p.target;
    const int v = t.v_target.pos;
    return ring_is(occ, t.max_ring, {-1, 0, 1}, v) || ring_is(occ, t.max_ring, {-1, 1}, v);
}

bool is_sp2(const Occupancy& occ, const Predicates& p)
{
    if (!p.target || p.target->nb_target != 1)
        return false;
    const auto& t = *p.target;
    const int ell = occ.dims().ell;
    const int v = t.v_target.pos;
    const int m = t.max_ring;
    if (ring_is(occ, m, {-2, -1, 1, 2}, v) || ring_is(occ, m, {-2, -1, 0, 1, 2}, v))
        return true;
    // A 1.block of three whose extremity next to the single hole sits above v_target, the
    // lone node two steps beyond that extremity.
    if (occ.nb_ring(m) != 4 || !occ.at(m, v))
        return false;
    for (int dir : {+1, -1})
        if (occ.at(m, wrap(v + dir, ell)) && occ.at(m, wrap(v + 2 * dir, ell)) &&
            !occ.at(m, wrap(v - dir, ell)) && occ.at(m, wrap(v - 2 * dir, ell)))
            return true;
    return false;
}

// Candidate positions of u on ring li for the sp-1 pattern. Two 2.blocks on a ring of six
// leave two single holes, so there can be two.
std::vector<int> sp1_centres(const Occupancy& occ, int li)
{
    const int nb = occ.nb_ring(li);
    const int ell = occ.dims().ell;
    auto bl = blocks(occ, li, 1);
    if (nb == 3 && bl.size() == 1 && bl[0].size == 3)
        return {bl[0].pos_at(1, ell)};
    if (nb == 5 && bl.size() == 1 && bl[0].size == 5)
        return {bl[0].pos_at(2, ell)};
    std::vector<int> out;
    if (nb == 4 && bl.size() == 2 && bl[0].size == 2 && bl[1].size == 2)
        for (int b = 0; b < 2; ++b)
        {
            int end = bl[b].pos_at(1, ell);
            if (bl[1 - b].start.pos == wrap(end + 2, ell))
                out.push_back(wrap(end + 1, ell));
        }
    return out;
}

bool sp1_matches(const Occupancy& occ, int lj, int u)
{
    const auto& dims = occ.dims();
    const int nbj = occ.nb_ring(lj);
    if (nbj == 3)
        return three_block_middle(occ, lj) == u;
    if (nbj == 2)
    {
        auto pos = occ.ring_positions(lj);
        if (two_block_middle(pos, dims.ell) == u)
            return true;
        auto bl = blocks(occ, lj, 1);
        if (bl.size() == 1 && bl[0].size == 2)
            return bl[0].pos_at(0, dims.ell) == u || bl[0].pos_at(1, dims.ell) == u;
    }
    return false;
}

} // namespace

std::optional<Coord> sp1_target(const Occupancy& occ)
{
    if (occ.occupied_rings() != 2)
        return std::nullopt;
    const auto& dims = occ.dims();
    std::vector<int> rings;
    for (int r = 0; r < dims.big_l; ++r)
        if (occ.nb_ring(r) > 0)
            rings.push_back(r);
    int li = rings[0], lj = rings[1];
    if (occ.nb_ring(lj) > occ.nb_ring(li))
        std::swap(li, lj);
    if (occ.nb_ring(lj) >= occ.nb_ring(li) || cyclic_gap(li, lj, dims.big_l) != 1)
        return std::nullopt;
    for (int u : sp1_centres(occ, li))
        if (sp1_matches(occ, lj, u))
            return Coord{lj, u};
    return std::nullopt;
}

namespace
{

bool is_sp1(const Occupancy& occ)
{
    return sp1_target(occ).has_value();
}

} // namespace

std::optional<int> mark_position(const Occupancy& occ, int ring)
{
    const int nb = occ.nb_ring(ring);
    auto pos = occ.ring_positions(ring);
    if (nb == 1)
        return pos[0];
    if (nb == 2)
        return two_block_middle(pos, occ.dims().ell);
    if (nb == 3)
        return three_block_middle(occ, ring);
    return std::nullopt;
}

Predicates predicates(const Occupancy& occ)
{
    Predicates p;
    auto maxr = maximal_rings(occ);
    if (maxr.size() != 1 || occ.nb_ring(maxr[0]) == 0)
        return p;
    p.unique = true;
    p.max_ring = maxr[0];
    const auto& dims = occ.dims();
    auto adj = adjacent_rings(maxr[0], dims);
    for (int s = 0; s < 2; ++s)
    {
        int secondary = adj[s], target = adj[1 - s];
        if (occ.nb_ring(secondary) != 0 || occ.nb_ring(target) == 0)
            continue;
        auto mark = mark_position(occ, target);
        if (!mark)
            continue;
        TargetInfo t{maxr[0], target, secondary, Coord{target, *mark}, occ.nb_ring(target)};
        p.target = t;
        p.empty = occ.occupied_rings() == 2;
        p.partial = !p.empty;
        break;
    }
    return p;
}

std::string to_string(SetLabel label)
{
    switch (label)
    {
    case SetLabel::gathered: return "Gathered";
    case SetLabel::sp4: return "C_sp-4";
    case SetLabel::sp3: return "C_sp-3";
    case SetLabel::sp2: return "C_sp-2";
    case SetLabel::sp1: return "C_sp-1";
    case SetLabel::pr: return "C_pr";
    case SetLabel::ls: return "C_ls";
    case SetLabel::not_unique: return "NotUnique";
    case SetLabel::empty: return "C_Empty";
    case SetLabel::semi_empty: return "C_Semi-Empty";
    case SetLabel::oriented1: return "C_Oriented-1";
    case SetLabel::oriented2: return "C_Oriented-2";
    case SetLabel::semi_oriented: return "C_Semi-Oriented";
    case SetLabel::undefined: return "C_Undefined";
    }
    return "?";
}

std::optional<SetLabel> parse_set_label(const std::string& text)
{
    for (int i = 0; i <= static_cast<int>(SetLabel::undefined); ++i)
        if (to_string(static_cast<SetLabel>(i)) == text)
            return static_cast<SetLabel>(i);
    return std::nullopt;
}

int phase_of(SetLabel label)
{
    switch (label)
    {
    case SetLabel::gathered:
    case SetLabel::sp4:
    case SetLabel::sp3:
    case SetLabel::sp2:
    case SetLabel::sp1:
    case SetLabel::pr:
    case SetLabel::ls: return 2;
    default: return 1;
    }
}

Classification classify(const Occupancy& occ)
{
    Classification c;
    const int nodes = occ.occupied_nodes();
    if (nodes == 0)
        throw PreconditionError("cannot classify an empty configuration");
    c.pred = predicates(occ);
    if (nodes == 1)
    {
        c.label = SetLabel::gathered;
        return c;
    }
    if (is_sp4(occ))
        c.label = SetLabel::sp4;
    else if (is_sp3(occ, c.pred))
        c.label = SetLabel::sp3;
    else if (is_sp2(occ, c.pred))
        c.label = SetLabel::sp2;
    else if (is_sp1(occ))
        c.label = SetLabel::sp1;
    else if (c.pred.target && c.pred.partial)
        c.label = SetLabel::pr;
    else if (c.pred.target && c.pred.empty)
        c.label = SetLabel::ls;
    if (phase_of(c.label) == 2 && c.label != SetLabel::not_unique)
        return c;
    if (!c.pred.unique)
    {
        c.label = SetLabel::not_unique;
        return c;
    }

    const auto& dims = occ.dims();
    const int m = *c.pred.max_ring;
    auto adj = adjacent_rings(m, dims);
    int a = adj[0], b = adj[1];
    int na = occ.nb_ring(a), nb = occ.nb_ring(b);
    if (na > nb)
    {
        std::swap(a, b);
        std::swap(na, nb);
    }
    PrepRoles roles{m, a, b};
    if (na == 0 && nb == 0)
        c.label = SetLabel::empty;
    else if (na == 0 && nb > 1)
        c.label = SetLabel::semi_empty;
    else if (na == 1 && nb > 1)
    {
        const int col = occ.ring_positions(a)[0];
        auto mark = mark_position(occ, b);
        bool aligned = (nb == 2 || nb == 3) && mark && *mark == col;
        c.label = aligned ? SetLabel::oriented1 : SetLabel::oriented2;
    }
    else if (na == 1 && nb == 1)
        c.label = SetLabel::semi_oriented;
    else if (na > 1)
        c.label = SetLabel::undefined;
    else
        throw ModelViolation("configuration fits no set (adjacent rings hold " + std::to_string(na) +
                             " and " + std::to_string(nb) + " nodes)");
    c.roles = roles;
    return c;
}

SetLabel phase_and_set(const Occupancy& occ)
{
    return classify(occ).label;
}

ClassTag class_tag(const Occupancy& occ)
{
    ClassTag t;
    t.rigid = is_rigid(occ);
    t.axes = symmetry_axes(occ);
    t.periodic = is_periodic(occ);
    auto p = predicates(occ);
    t.unique_max = p.max_ring;
    t.target = p.target;
    return t;
}

Occupancy GammaConfig::occupancy() const
{
    Occupancy out = base;
    const int ell = base.dims().ell;
    for (int r : ignored_rings)
        for (int j = 0; j < ell; ++j)
            out.set(Coord{r, j}, false);
    return out;
}

GammaConfig gamma(const Occupancy& occ, int li, int lk)
{
    const int rings = occ.occupied_rings();
    if (rings < 3)
        throw PreconditionError("Gamma needs at least three occupied rings");
    if (rings >= 4)
        return GammaConfig{occ, {li, lk}};
    return GammaConfig{occ, {li}};
}

GammaAnalysis analyze_gamma(const Occupancy& gamma_occ, const std::vector<int>& watched)
{
    const auto& dims = gamma_occ.dims();
    std::vector<int> sorted_watched = watched;
    std::sort(sorted_watched.begin(), sorted_watched.end());
    GammaAnalysis out;
    std::optional<int> reflection;
    bool multi = false;
    for (const auto& g : Automorphism::all(dims))
    {
        // Keep only symmetries that map the watched ring set onto itself.
        std::vector<int> image;
        bool fixes_each = true;
        for (int r : watched)
        {
            int r2 = g.apply(Coord{r, 0}, dims).ring;
            image.push_back(r2);
            fixes_each = fixes_each && r2 == r;
        }
        std::sort(image.begin(), image.end());
        if (image != sorted_watched)
            continue;
        const bool pos_identity = !g.flip_pos && wrap(g.shift_pos, dims.ell) == 0;
        if (fixes_each && pos_identity)
            continue;
        if (g.apply(gamma_occ) != gamma_occ)
            continue;
        if (fixes_each && g.flip_pos)
        {
            int a = wrap(g.shift_pos, dims.ell);
            if (!reflection || *reflection == a)
            {
                reflection = a;
                continue;
            }
        }
        multi = true;
    }
    if (multi)
        out.shape = GammaShape::multi;
    else if (reflection)
    {
        out.shape = GammaShape::single_axis;
        out.axis = SymmetryAxis{AxisOrientation::ring_perpendicular, *reflection};
    }
    return out;
}

} // namespace tgather
