#include "cycloid/semantics.hpp"

#include "cycloid/error.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cycloid {

namespace {

using Dense = std::vector<std::uint16_t>;

Dense to_dense(const Net& net, const Marking& m) {
    Dense d(net.places.size(), 0);
    for (const auto& [id, count] : m.counts) {
        auto it = net.place_index.find(id);
        if (it == net.place_index.end())
            throw std::domain_error("marking names unknown place " + to_string(id));
        if (count > 0xffff) throw std::domain_error("token count exceeds representable range");
        d[it->second] = static_cast<std::uint16_t>(count);
    }
    return d;
}

Marking from_dense(const std::vector<NodeId>& order, const Dense& d) {
    Marking m;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] != 0) m.add(order[i], d[i]);
    return m;
}

bool enabled_dense(const Net& net, const Dense& d, std::uint32_t t, FiringRule rule) {
    for (std::uint32_t p : net.pre_places[t])
        if (d[p] == 0) return false;
    if (rule == FiringRule::contact_free)
        for (std::uint32_t p : net.post_places[t])
            if (d[p] != 0) return false;
    return true;
}

void fire_dense(const Net& net, Dense& d, std::uint32_t t) {
    for (std::uint32_t p : net.pre_places[t]) --d[p];
    for (std::uint32_t p : net.post_places[t]) ++d[p];
}

struct DenseHash {
    std::size_t operator()(const Dense& d) const {
        std::size_t h = 1469598103934665603ull;
        for (std::uint16_t v : d) {
            h ^= v;
            h *= 1099511628211ull;
        }
        return h;
    }
};

} // namespace

std::vector<NodeId> enabled_set(const Net& net, const Marking& m, FiringRule rule) {
    const Dense d = to_dense(net, m);
    std::vector<NodeId> out;
    for (std::uint32_t t = 0; t < net.transitions.size(); ++t)
        if (enabled_dense(net, d, t, rule)) out.push_back(net.transitions[t]);
    return out;
}

Marking fire(const Net& net, const Marking& m, const NodeId& t, FiringRule rule) {
    auto it = net.transition_index.find(t);
    if (it == net.transition_index.end())
        throw std::domain_error("unknown transition " + to_string(t));
    const std::uint32_t ti = it->second;
    for (std::uint32_t p : net.pre_places[ti])
        if (m.at(net.places[p]) == 0)
            throw std::domain_error(to_string(t) + " is not enabled: " +
                                    to_string(net.places[p]) + " is empty");
    if (rule == FiringRule::contact_free)
        for (std::uint32_t p : net.post_places[ti])
            if (m.at(net.places[p]) != 0)
                throw std::domain_error(to_string(t) + " is not enabled under contact rule: " +
                                        to_string(net.places[p]) + " is marked");
    Marking out = m;
    for (std::uint32_t p : net.pre_places[ti]) out.add(net.places[p], -1);
    for (std::uint32_t p : net.post_places[ti]) out.add(net.places[p], 1);
    return out;
}

Marking replay(const Net& net, Marking m, const std::vector<NodeId>& sequence, FiringRule rule) {
    for (const NodeId& t : sequence) m = fire(net, m, t, rule);
    return m;
}

Marking ReachabilityGraph::marking_of(std::uint32_t state) const {
    return from_dense(place_order, states.at(state));
}

std::vector<NodeId> ReachabilityGraph::path_to(std::uint32_t state) const {
    std::vector<NodeId> seq;
    while (state != initial) {
        const auto& [parent, t] = discovery.at(state);
        seq.push_back(transition_order[t]);
        state = parent;
    }
    std::reverse(seq.begin(), seq.end());
    return seq;
}

ReachabilityGraph reachability(const Net& net, const Marking& m0, FiringRule rule,
                               std::size_t max_states) {
    if (max_states == 0) throw std::domain_error("max_states must be positive");
    ReachabilityGraph rg;
    rg.place_order = net.places;
    rg.transition_order = net.transitions;
    std::unordered_map<Dense, std::uint32_t, DenseHash> index;
    index.reserve(1024);
    rg.states.push_back(to_dense(net, m0));
    index.emplace(rg.states.front(), 0);
    rg.discovery.emplace_back(0, 0);

    bool bounded = false;
    for (std::uint32_t s = 0; s < rg.states.size() && !bounded; ++s) {
        const Dense current = rg.states[s]; // states vector may grow below
        for (std::uint32_t t = 0; t < net.transitions.size(); ++t) {
            if (!enabled_dense(net, current, t, rule)) continue;
            Dense succ = current;
            fire_dense(net, succ, t);
            auto it = index.find(succ);
            std::uint32_t target;
            if (it == index.end()) {
                if (rg.states.size() >= max_states) {
                    bounded = true;
                    break;
                }
                target = static_cast<std::uint32_t>(rg.states.size());
                index.emplace(succ, target);
                rg.states.push_back(std::move(succ));
                rg.discovery.emplace_back(s, t);
            } else {
                target = it->second;
            }
            rg.edges.push_back({s, t, target});
        }
    }
    rg.complete = !bounded;
    return rg;
}

PropertyReport check_safety(const ReachabilityGraph& rg) {
    PropertyReport r;
    r.property = PropertyReport::Property::safe;
    r.states_explored = rg.states.size();
    for (std::uint32_t s = 0; s < rg.states.size(); ++s) {
        const auto& d = rg.states[s];
        for (std::size_t p = 0; p < d.size(); ++p) {
            if (d[p] <= 1) continue;
            r.holds = false;
            r.conclusive = true;
            r.witness_firing = rg.path_to(s);
            r.witness_marking = rg.marking_of(s);
            r.offenders = {rg.place_order[p]};
            std::ostringstream os;
            os << to_string(rg.place_order[p]) << " holds " << d[p] << " tokens after "
               << r.witness_firing.size() << " firings";
            r.note = os.str();
            return r;
        }
    }
    if (!rg.complete) {
        r.holds = false;
        r.conclusive = false;
        r.note = "state bound hit; no violation within the explored prefix";
        return r;
    }
    r.holds = true;
    r.conclusive = true;
    return r;
}

namespace {

// Iterative Tarjan over the state graph.
std::vector<std::uint32_t> strongly_connected_components(std::size_t n,
                                                         const std::vector<std::vector<std::uint32_t>>& adj,
                                                         std::uint32_t& scc_count) {
    constexpr std::uint32_t kUnset = 0xffffffffu;
    std::vector<std::uint32_t> comp(n, kUnset), low(n, 0), num(n, kUnset), stack;
    std::vector<bool> on_stack(n, false);
    std::uint32_t counter = 0;
    scc_count = 0;
    struct Frame {
        std::uint32_t v;
        std::size_t child;
    };
    std::vector<Frame> call;
    for (std::uint32_t root = 0; root < n; ++root) {
        if (num[root] != kUnset) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [v, child] = call.back();
            if (child == 0) {
                num[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (child < adj[v].size()) {
                std::uint32_t w = adj[v][child++];
                if (num[w] == kUnset)
                    call.push_back({w, 0});
                else if (on_stack[w])
                    low[v] = std::min(low[v], num[w]);
            } else {
                if (low[v] == num[v]) {
                    while (true) {
                        std::uint32_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = false;
                        comp[w] = scc_count;
                        if (w == v) break;
                    }
                    ++scc_count;
                }
                std::uint32_t finished = v;
                call.pop_back();
                if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[finished]);
            }
        }
    }
    return comp;
}

} // namespace

PropertyReport check_liveness(const ReachabilityGraph& rg, const std::vector<NodeId>& transitions) {
    PropertyReport r;
    r.property = PropertyReport::Property::live;
    r.states_explored = rg.states.size();
    if (!rg.complete) {
        r.holds = false;
        r.conclusive = false;
        r.note = "state bound hit; liveness needs the complete graph";
        return r;
    }

    std::vector<std::uint32_t> wanted;
    for (const NodeId& t : transitions) {
        auto it = std::lower_bound(rg.transition_order.begin(), rg.transition_order.end(), t);
        if (it == rg.transition_order.end() || *it != t)
            throw std::domain_error("unknown transition " + to_string(t));
        wanted.push_back(static_cast<std::uint32_t>(it - rg.transition_order.begin()));
    }

    const std::size_t n = rg.states.size();
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (const auto& e : rg.edges) adj[e.from].push_back(e.to);
    std::uint32_t scc_count = 0;
    std::vector<std::uint32_t> comp = strongly_connected_components(n, adj, scc_count);

    std::vector<bool> terminal(scc_count, true);
    for (const auto& e : rg.edges)
        if (comp[e.from] != comp[e.to]) terminal[comp[e.from]] = false;

    // Transition labels occurring inside each terminal component.
    std::vector<std::vector<bool>> fires(scc_count);
    for (std::uint32_t c = 0; c < scc_count; ++c)
        if (terminal[c]) fires[c].assign(rg.transition_order.size(), false);
    for (const auto& e : rg.edges)
        if (terminal[comp[e.from]] && comp[e.from] == comp[e.to])
            fires[comp[e.from]][e.transition] = true;

    std::vector<std::uint32_t> scc_witness_state(scc_count, 0xffffffffu);
    for (std::uint32_t s = 0; s < n; ++s)
        if (scc_witness_state[comp[s]] == 0xffffffffu) scc_witness_state[comp[s]] = s;

    bool first_offender = true;
    for (std::uint32_t t : wanted) {
        for (std::uint32_t c = 0; c < scc_count; ++c) {
            if (!terminal[c] || fires[c][t]) continue;
            r.offenders.push_back(rg.transition_order[t]);
            if (first_offender) {
                first_offender = false;
                const std::uint32_t s = scc_witness_state[c];
                r.witness_firing = rg.path_to(s);
                r.witness_marking = rg.marking_of(s);
                r.note = to_string(rg.transition_order[t]) +
                         " can never fire again from the witness marking";
            }
            break;
        }
    }
    std::sort(r.offenders.begin(), r.offenders.end());
    r.offenders.erase(std::unique(r.offenders.begin(), r.offenders.end()), r.offenders.end());
    r.holds = r.offenders.empty();
    r.conclusive = true;
    return r;
}

PropertyReport check_fold_bisimulation(const Net& base, const Marking& m0, const Net& folded,
                                       FiringRule rule, std::size_t max_states) {
    if (!folded.fold) throw std::domain_error("second net is not a folding");
    if (!(base.spec == folded.spec) || base.transitions != folded.transitions)
        throw std::domain_error("folding does not belong to the given cycloid");

    // Place projection: a folded marking is always the pointwise image of
    // the base marking, so only base states need to be enumerated.
    std::vector<std::uint32_t> project(base.places.size());
    for (std::size_t p = 0; p < base.places.size(); ++p) {
        const NodeId& id = base.places[p];
        auto it = folded.class_of.find(id);
        const NodeId target = it == folded.class_of.end() ? id : it->second;
        project[p] = folded.place_index.at(target);
    }
    auto project_dense = [&](const Dense& d) {
        Dense out(folded.places.size(), 0);
        for (std::size_t p = 0; p < d.size(); ++p) out[project[p]] += d[p];
        return out;
    };

    PropertyReport r;
    r.property = PropertyReport::Property::bisimilar;

    std::vector<Dense> states{to_dense(base, m0)};
    std::vector<std::pair<std::uint32_t, std::uint32_t>> discovery{{0, 0}};
    std::unordered_map<Dense, std::uint32_t, DenseHash> index;
    index.emplace(states.front(), 0);

    auto path_to = [&](std::uint32_t s) {
        std::vector<NodeId> seq;
        while (s != 0) {
            seq.push_back(base.transitions[discovery[s].second]);
            s = discovery[s].first;
        }
        std::reverse(seq.begin(), seq.end());
        return seq;
    };

    for (std::uint32_t s = 0; s < states.size(); ++s) {
        const Dense current = states[s];
        const Dense image = project_dense(current);
        std::vector<std::uint32_t> base_enabled, folded_enabled;
        for (std::uint32_t t = 0; t < base.transitions.size(); ++t) {
            if (enabled_dense(base, current, t, rule)) base_enabled.push_back(t);
            if (enabled_dense(folded, image, t, rule)) folded_enabled.push_back(t);
        }
        if (base_enabled != folded_enabled) {
            r.holds = false;
            r.conclusive = true;
            r.states_explored = states.size();
            r.witness_firing = path_to(s);
            r.witness_marking = from_dense(base.places, current);
            std::vector<std::uint32_t> diff;
            std::set_symmetric_difference(base_enabled.begin(), base_enabled.end(),
                                          folded_enabled.begin(), folded_enabled.end(),
                                          std::back_inserter(diff));
            for (std::uint32_t t : diff) r.offenders.push_back(base.transitions[t]);
            std::ostringstream os;
            os << "enabled sets diverge after " << r.witness_firing.size() << " firings (base "
               << base_enabled.size() << " vs folding " << folded_enabled.size()
               << " transitions)";
            r.note = os.str();
            return r;
        }
        for (std::uint32_t t : base_enabled) {
            Dense succ = current;
            fire_dense(base, succ, t);
            auto it = index.find(succ);
            if (it == index.end()) {
                if (states.size() >= max_states) {
                    r.holds = false;
                    r.conclusive = false;
                    r.states_explored = states.size();
                    r.note = "state bound hit before lockstep exploration finished";
                    return r;
                }
                index.emplace(succ, static_cast<std::uint32_t>(states.size()));
                states.push_back(std::move(succ));
                discovery.emplace_back(s, t);
            }
        }
    }
    r.holds = true;
    r.conclusive = true;
    r.states_explored = states.size();
    return r;
}

PropertyReport stop_scenario(Int g, Int c, Int s) { return stop_scenario_detail(g, c, s).summary; }

StopScenarioResult stop_scenario_detail(Int g, Int c, Int s) {
    if (c < 2) throw std::domain_error("the scenario needs at least two processes (c > 1)");
    if (s <= 0 || s >= c) throw std::domain_error("the number of stops must satisfy 0 < s < c");

    StopScenarioResult result;
    bool holds = true;
    bool conclusive = true;
    std::size_t states = 0;
    std::ostringstream note;

    for (Int iter = 0; iter < s; ++iter) {
        const Int gi = g + iter;
        const Int ci = c - iter;
        const CycloidSpec from{gi, ci, ci, ci};
        Net net = stop_resilient(gi, ci);
        Marking m = fold_marking(net, regular_marking(from, 0));
        m = fire(net, m, stop_transition_node(ci - 1));
        for (Int j = ci - 2; j >= 0; --j)
            m = fire(net, m, net.node_of({RegularCoordinate::Kind::transition, j, j}));
        Net survivor = delete_process(net, ci - 1);

        const CycloidSpec to{gi + 1, ci - 1, ci - 1, ci - 1};
        const bool degenerate = (ci - 1 == 1);
        Net target = degenerate
                         ? synthesize(to)
                         : backward_fold(attach_regular_labels(synthesize(to)), total_fold(to));
        Marking target_marking =
            degenerate ? regular_marking(to, 1) : fold_marking(target, regular_marking(to, 1));

        PropertyReport iso = isomorphic(survivor, target, std::make_pair(m, target_marking));
        ReachabilityGraph rg = reachability(survivor, m);
        PropertyReport safety = check_safety(rg);
        PropertyReport liveness = check_liveness(rg, survivor.transitions);

        holds = holds && iso.holds && safety.holds;
        conclusive = conclusive && iso.conclusive && safety.conclusive;
        states += rg.states.size();
        if (iter) note << "; ";
        note << to_string(from) << " -> " << to_string(to) << (degenerate ? " (degenerate)" : "")
             << ": iso=" << (iso.holds ? "yes" : "no") << " safe=" << (safety.holds ? "yes" : "no");

        result.steps.push_back({from, to, degenerate, std::move(iso), std::move(safety),
                                std::move(liveness), std::move(survivor), std::move(m)});
    }

    result.summary.property = PropertyReport::Property::isomorphic;
    result.summary.holds = holds;
    result.summary.conclusive = conclusive;
    result.summary.states_explored = states;
    result.summary.note = note.str();
    return result;
}

} // namespace cycloid
