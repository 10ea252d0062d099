#include "cycloid/error.hpp"
#include "cycloid/semantics.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cycloid {

namespace {

// Flattened view of one net for the search: nodes are indexed, adjacency
// lists are sorted, and every node carries an initial invariant of
// (is_place, out-degree, in-degree, token count).
struct SearchGraph {
    std::vector<NodeId> nodes;
    std::vector<bool> place;
    std::vector<Int> tokens;
    std::vector<std::vector<int>> out, in;

    static SearchGraph build(const Net& net, const Marking* marking) {
        SearchGraph g;
        g.nodes.reserve(net.transitions.size() + net.places.size());
        for (const NodeId& t : net.transitions) g.nodes.push_back(t);
        for (const NodeId& p : net.places) g.nodes.push_back(p);
        std::map<NodeId, int> index;
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            index.emplace(g.nodes[i], static_cast<int>(i));
        g.place.resize(g.nodes.size());
        g.tokens.assign(g.nodes.size(), 0);
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            g.place[i] = is_place(g.nodes[i].kind);
            if (marking && g.place[i]) g.tokens[i] = marking->at(g.nodes[i]);
        }
        g.out.resize(g.nodes.size());
        g.in.resize(g.nodes.size());
        for (const auto& [from, to] : net.arcs) {
            g.out[index.at(from)].push_back(index.at(to));
            g.in[index.at(to)].push_back(index.at(from));
        }
        for (auto& v : g.out) std::sort(v.begin(), v.end());
        for (auto& v : g.in) std::sort(v.begin(), v.end());
        return g;
    }

    bool has_edge(int from, int to) const {
        return std::binary_search(out[from].begin(), out[from].end(), to);
    }
};

// Shared color dictionary so that colors are comparable across both nets.
struct ColorTable {
    std::map<std::vector<Int>, int> dict;
    int intern(std::vector<Int> key) {
        auto [it, inserted] = dict.emplace(std::move(key), static_cast<int>(dict.size()));
        return it->second;
    }
};

std::vector<int> initial_colors(const SearchGraph& g, ColorTable& table) {
    std::vector<int> colors(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        colors[i] = table.intern({g.place[i] ? 1 : 0, static_cast<Int>(g.out[i].size()),
                                  static_cast<Int>(g.in[i].size()), g.tokens[i]});
    return colors;
}

std::vector<int> refine_colors(const SearchGraph& g, const std::vector<int>& colors,
                               ColorTable& table) {
    std::vector<int> next(colors.size());
    for (std::size_t i = 0; i < colors.size(); ++i) {
        std::vector<Int> key{colors[i]};
        std::vector<Int> neigh;
        for (int w : g.out[i]) neigh.push_back(colors[w]);
        std::sort(neigh.begin(), neigh.end());
        key.push_back(-1);
        key.insert(key.end(), neigh.begin(), neigh.end());
        neigh.clear();
        for (int w : g.in[i]) neigh.push_back(colors[w]);
        std::sort(neigh.begin(), neigh.end());
        key.push_back(-2);
        key.insert(key.end(), neigh.begin(), neigh.end());
        next[i] = table.intern(std::move(key));
    }
    return next;
}

std::map<int, int> histogram(const std::vector<int>& colors) {
    std::map<int, int> h;
    for (int c : colors) ++h[c];
    return h;
}

struct Matcher {
    const SearchGraph& a;
    const SearchGraph& b;
    const std::vector<int>& ca;
    const std::vector<int>& cb;
    std::vector<int> fa, fb; // partial bijection, -1 = unmapped
    std::size_t steps = 0;
    std::size_t step_limit;

    Matcher(const SearchGraph& a_, const SearchGraph& b_, const std::vector<int>& ca_,
            const std::vector<int>& cb_, std::size_t limit)
        : a(a_), b(b_), ca(ca_), cb(cb_), fa(a_.nodes.size(), -1), fb(b_.nodes.size(), -1),
          step_limit(limit) {}

    bool feasible(int u, int v) const {
        if (ca[u] != cb[v]) return false;
        for (int w : a.out[u])
            if (fa[w] != -1 && !b.has_edge(v, fa[w])) return false;
        for (int w : a.in[u])
            if (fa[w] != -1 && !b.has_edge(fa[w], v)) return false;
        for (int x : b.out[v])
            if (fb[x] != -1 && !a.has_edge(u, fb[x])) return false;
        for (int x : b.in[v])
            if (fb[x] != -1 && !a.has_edge(fb[x], u)) return false;
        return true;
    }

    // Unmapped node with the fewest feasible images, preferring nodes
    // touching the mapped region.
    int pick(std::vector<int>& candidates) const {
        int best = -1;
        bool best_adjacent = false;
        std::size_t best_count = 0;
        std::vector<int> current;
        for (std::size_t u = 0; u < a.nodes.size(); ++u) {
            if (fa[u] != -1) continue;
            bool adjacent = false;
            for (int w : a.out[u])
                if (fa[w] != -1) { adjacent = true; break; }
            if (!adjacent)
                for (int w : a.in[u])
                    if (fa[w] != -1) { adjacent = true; break; }
            if (best != -1 && best_adjacent && !adjacent) continue;
            current.clear();
            for (std::size_t v = 0; v < b.nodes.size(); ++v)
                if (fb[v] == -1 && feasible(static_cast<int>(u), static_cast<int>(v)))
                    current.push_back(static_cast<int>(v));
            const bool better = best == -1 || (adjacent && !best_adjacent) ||
                                (adjacent == best_adjacent && current.size() < best_count);
            if (better) {
                best = static_cast<int>(u);
                best_adjacent = adjacent;
                best_count = current.size();
                candidates = current;
                if (adjacent && best_count <= 1) break;
            }
        }
        return best;
    }

    bool solve() {
        if (++steps > step_limit)
            throw resource_error("isomorphism search exceeded the step limit");
        std::vector<int> candidates;
        const int u = pick(candidates);
        if (u == -1) return true; // everything mapped
        for (int v : candidates) {
            fa[u] = v;
            fb[v] = u;
            if (solve()) return true;
            fa[u] = -1;
            fb[v] = -1;
        }
        return false;
    }
};

} // namespace

PropertyReport isomorphic(const Net& a, const Net& b,
                          const std::optional<std::pair<Marking, Marking>>& markings,
                          std::size_t node_limit) {
    PropertyReport r;
    r.property = PropertyReport::Property::isomorphic;

    const std::size_t na = a.transitions.size() + a.places.size();
    const std::size_t nb = b.transitions.size() + b.places.size();
    if (na > node_limit || nb > node_limit) {
        std::ostringstream os;
        os << "net too large for the isomorphism search (" << std::max(na, nb) << " > "
           << node_limit << " nodes)";
        throw resource_error(os.str());
    }
    if (a.transitions.size() != b.transitions.size() || a.places.size() != b.places.size() ||
        a.arcs.size() != b.arcs.size()) {
        r.holds = false;
        r.conclusive = true;
        std::ostringstream os;
        os << "node/arc counts differ: " << a.transitions.size() << "+" << a.places.size() << "/"
           << a.arcs.size() << " vs " << b.transitions.size() << "+" << b.places.size() << "/"
           << b.arcs.size();
        r.note = os.str();
        return r;
    }

    const SearchGraph ga = SearchGraph::build(a, markings ? &markings->first : nullptr);
    const SearchGraph gb = SearchGraph::build(b, markings ? &markings->second : nullptr);

    ColorTable table;
    std::vector<int> ca = initial_colors(ga, table);
    std::vector<int> cb = initial_colors(gb, table);
    while (true) {
        if (histogram(ca) != histogram(cb)) {
            r.holds = false;
            r.conclusive = true;
            r.note = "degree/token signature histograms differ";
            return r;
        }
        std::vector<int> ra = refine_colors(ga, ca, table);
        std::vector<int> rb = refine_colors(gb, cb, table);
        const std::size_t before = histogram(ca).size();
        const std::size_t after = histogram(ra).size();
        ca = std::move(ra);
        cb = std::move(rb);
        if (after == before) break;
    }
    if (histogram(ca) != histogram(cb)) {
        r.holds = false;
        r.conclusive = true;
        r.note = "refined signature histograms differ";
        return r;
    }

    Matcher matcher(ga, gb, ca, cb, 5'000'000);
    const bool found = matcher.solve();
    r.states_explored = matcher.steps;
    r.conclusive = true;
    if (!found) {
        r.holds = false;
        r.note = "no arc-preserving bijection exists";
        return r;
    }

    // Validate the witness arc by arc before reporting it.
    for (std::size_t u = 0; u < ga.nodes.size(); ++u) {
        const int v = matcher.fa[u];
        if (v < 0 || ga.place[u] != gb.place[v] || ga.tokens[u] != gb.tokens[v])
            throw std::logic_error("isomorphism witness violates node invariants");
        for (int w : ga.out[u])
            if (!gb.has_edge(v, matcher.fa[w]))
                throw std::logic_error("isomorphism witness drops an arc");
    }
    for (std::size_t u = 0; u < ga.nodes.size(); ++u)
        r.witness_mapping.emplace_back(ga.nodes[u], gb.nodes[matcher.fa[u]]);
    std::sort(r.witness_mapping.begin(), r.witness_mapping.end());
    r.holds = true;
    return r;
}

} // namespace cycloid
