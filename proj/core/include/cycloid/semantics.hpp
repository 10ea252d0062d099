#pragma once

#include "cycloid/net.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cycloid {

/// plain: a transition is enabled iff every input place holds a token.
/// contact_free: additionally every output place must be empty.
enum class FiringRule : std::uint8_t { plain, contact_free };

/// Enabled transitions in canonical order.
std::vector<NodeId> enabled_set(const Net& net, const Marking& m,
                                FiringRule rule = FiringRule::plain);

/// One token-game step: decrement every input place, increment every
/// output place.
Marking fire(const Net& net, const Marking& m, const NodeId& t,
             FiringRule rule = FiringRule::plain);

/// Fires a whole sequence; throws if any step is disabled.
Marking replay(const Net& net, Marking m, const std::vector<NodeId>& sequence,
               FiringRule rule = FiringRule::plain);

/// Exhaustive breadth-first unfolding of the token game.  State numbering
/// is deterministic: discovery order with successor transitions taken in
/// canonical order.
struct ReachabilityGraph {
    struct Edge {
        std::uint32_t from = 0;
        std::uint32_t transition = 0; // index into transition_order
        std::uint32_t to = 0;
        friend bool operator==(const Edge&, const Edge&) = default;
    };

    std::vector<NodeId> place_order;      // marking layout of states
    std::vector<NodeId> transition_order; // edge labels
    std::vector<std::vector<std::uint16_t>> states;
    std::vector<Edge> edges;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> discovery; // (parent state, transition)
    std::uint32_t initial = 0;
    bool complete = true;

    Marking marking_of(std::uint32_t state) const;
    /// Firing sequence from the initial state to the given state.
    std::vector<NodeId> path_to(std::uint32_t state) const;

    friend bool operator==(const ReachabilityGraph&, const ReachabilityGraph&) = default;
};

ReachabilityGraph reachability(const Net& net, const Marking& m0,
                               FiringRule rule = FiringRule::plain,
                               std::size_t max_states = 1'000'000);

struct PropertyReport {
    enum class Property : std::uint8_t { safe, live, bisimilar, isomorphic };

    Property property = Property::safe;
    bool holds = false;
    /// false when a state bound was hit and the verdict is not informative.
    bool conclusive = true;
    std::size_t states_explored = 0;

    std::vector<NodeId> witness_firing;
    std::optional<Marking> witness_marking;
    std::vector<std::pair<NodeId, NodeId>> witness_mapping;
    /// Offending nodes: the overfull place, the dead transitions, or the
    /// transitions whose enabledness diverges.
    std::vector<NodeId> offenders;
    std::string note;
};

/// Every reachable marking holds at most one token per place; the witness
/// of a violation is a shortest firing sequence to an offending marking.
PropertyReport check_safety(const ReachabilityGraph& rg);

/// A transition is live iff every terminal strongly connected component
/// of the graph contains a state enabling it.
PropertyReport check_liveness(const ReachabilityGraph& rg,
                              const std::vector<NodeId>& transitions);

/// Lockstep comparison of a cycloid and one of its backward foldings:
/// the enabled sets must coincide at every paired reachable state.
PropertyReport check_fold_bisimulation(const Net& base, const Marking& m0, const Net& folded,
                                       FiringRule rule = FiringRule::plain,
                                       std::size_t max_states = 1'000'000);

/// Backtracking search for a bijection preserving the place/transition
/// split and all arcs, with color-refinement pruning.  With markings the
/// bijection must also map token counts exactly.
PropertyReport isomorphic(const Net& a, const Net& b,
                          const std::optional<std::pair<Marking, Marking>>& markings = std::nullopt,
                          std::size_t node_limit = 200);

/// One stop-and-delete round of the resilience scenario.
struct StopScenarioStep {
    CycloidSpec from;
    CycloidSpec to;
    bool degenerate_target = false; // single surviving process, unfoldable
    PropertyReport iso;
    PropertyReport safety;
    PropertyReport liveness;
    Net result;
    Marking result_marking;
};

struct StopScenarioResult {
    std::vector<StopScenarioStep> steps;
    PropertyReport summary;
};

/// Repeats s times on the stop-resilient cycloid of (g,c): fire one stop
/// transition, cascade the remaining processes to the first follower
/// marking, delete the stopped process, and compare against the next
/// stop-resilient shape at its first follower marking.
StopScenarioResult stop_scenario_detail(Int g, Int c, Int s);
PropertyReport stop_scenario(Int g, Int c, Int s);

} // namespace cycloid
