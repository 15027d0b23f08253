#include "tgather/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "tgather/classify.hpp"

namespace tgather
{

namespace
{

[[noreturn]] void fail(int line, const std::string& what)
{
    throw ParseError("scenario line " + std::to_string(line) + ": " + what);
}

bool parse_flag(const std::string& value, int line)
{
    if (value == "1" || value == "true" || value == "on")
        return true;
    if (value == "0" || value == "false" || value == "off")
        return false;
    fail(line, "bad flag value '" + value + "'");
}

} // namespace

Scenario parse_scenario(std::istream& in)
{
    Scenario sc;
    std::optional<std::pair<int, int>> dims;
    std::vector<std::pair<Coord, int>> robots;
    std::string text;
    int line = 0;
    while (std::getline(in, text))
    {
        ++line;
        std::istringstream ls(text);
        std::string word;
        if (!(ls >> word) || word[0] == '#')
            continue;
        if (word == "dims")
        {
            int ell = 0, big_l = 0;
            if (!(ls >> ell >> big_l))
                fail(line, "dims needs two integers");
            dims = {ell, big_l};
        }
        else if (word == "robot")
        {
            Coord c;
            if (!(ls >> c.ring >> c.pos))
                fail(line, "robot needs two integers");
            robots.push_back({c, line});
        }
        else if (word == "scheduler")
        {
            std::string kind;
            SchedulerPolicy p;
            if (!(ls >> kind))
                fail(line, "scheduler needs a kind");
            auto k = parse_scheduler_kind(kind);
            if (!k)
                fail(line, "unknown scheduler '" + kind + "'");
            p.kind = *k;
            if (ls >> p.seed)
            {
                if (!(ls >> p.fairness_bound))
                    p.fairness_bound = SchedulerPolicy{}.fairness_bound;
            }
            if (p.fairness_bound < 1)
                fail(line, "fairness bound must be positive");
            sc.scheduler = p;
        }
        else if (word == "flags")
        {
            std::string kv;
            while (ls >> kv)
            {
                const auto eq = kv.find('=');
                const std::string key = kv.substr(0, eq);
                const bool value = eq == std::string::npos ? true : parse_flag(kv.substr(eq + 1), line);
                if (key == "strict_dims")
                    sc.strict_dims = value;
                else if (key == "hooks")
                    sc.hooks = value;
                else
                    fail(line, "unknown flag '" + key + "'");
            }
        }
        else
            fail(line, "unknown keyword '" + word + "'");
        std::string extra;
        if (word != "flags" && (ls >> extra))
            fail(line, "trailing text '" + extra + "'");
    }
    if (!dims)
        throw ParseError("scenario has no dims line");
    try
    {
        sc.dims = TorusDims::make(dims->first, dims->second);
    }
    catch (const InvalidDims& e)
    {
        throw ParseError(std::string("scenario dims: ") + e.what());
    }
    // Robots share a node only in an already gathered scenario.
    const bool one_node = std::all_of(robots.begin(), robots.end(),
                                      [&](const auto& r) { return r.first == robots.front().first; });
    std::set<Coord> seen;
    for (const auto& [c, l] : robots)
    {
        if (!valid(c, sc.dims))
            fail(l, "robot " + to_string(c) + " is off the torus");
        if (!seen.insert(c).second && !one_node)
            fail(l, "two robots on " + to_string(c));
        sc.robots.push_back(c);
    }
    if (sc.robots.empty())
        throw ParseError("scenario has no robots");
    return sc;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    return parse_scenario(in);
}

void write_scenario(std::ostream& out, const Scenario& sc)
{
    out << "dims " << sc.dims.ell << ' ' << sc.dims.big_l << '\n';
    for (const auto& c : sc.robots)
        out << "robot " << c.ring << ' ' << c.pos << '\n';
    if (sc.scheduler)
        out << "scheduler " << to_string(sc.scheduler->kind) << ' ' << sc.scheduler->seed << ' '
            << sc.scheduler->fairness_bound << '\n';
    if (!sc.strict_dims || !sc.hooks)
        out << "flags strict_dims=" << (sc.strict_dims ? 1 : 0) << " hooks=" << (sc.hooks ? 1 : 0) << '\n';
}

std::uint64_t binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return r;
}

std::vector<std::vector<Coord>> enumerate_configs(const TorusDims& dims, int k, bool rigid_only, bool canonical)
{
    const int n = dims.size();
    std::vector<std::vector<Coord>> out;
    if (k < 1 || k > n)
        return out;
    const auto syms = canonical ? Automorphism::all(dims) : std::vector<Automorphism>{};
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i)
        idx[i] = i;
    while (true)
    {
        std::vector<Coord> cs;
        Occupancy occ(dims);
        for (int i : idx)
        {
            cs.push_back(coord_of(i, dims));
            occ.set(cs.back(), true);
        }
        bool keep = !rigid_only || is_rigid(occ);
        if (keep && canonical)
            for (const auto& s : syms)
            {
                std::vector<int> img;
                for (const auto& c : cs)
                    img.push_back(index_of(s.apply(c, dims), dims));
                std::sort(img.begin(), img.end());
                if (img < idx)
                {
                    keep = false;
                    break;
                }
            }
        if (keep)
            out.push_back(std::move(cs));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i)
            --i;
        if (i < 0)
            break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j)
            idx[j] = idx[j - 1] + 1;
    }
    return out;
}

} // namespace tgather
