#pragma once

#include "cycloid/algebra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace cycloid {

enum class NodeKind : std::uint8_t {
    transition,      // t(xi,eta)
    fwd_place,       // sf(xi,eta)
    bwd_place,       // sb(xi,eta)
    class_place,     // SB{i}: fused backward places
    stop_transition, // tstop[j]
};

constexpr bool is_place(NodeKind k) {
    return k == NodeKind::fwd_place || k == NodeKind::bwd_place || k == NodeKind::class_place;
}

/// Value-based node identity.  Grid nodes carry their canonical point
/// (a normalize fixed point of the owning spec); class places carry the
/// fold-class index, stop transitions the process index.  The identity is
/// stable across foldings and deletions.
struct NodeId {
    NodeKind kind = NodeKind::transition;
    Point pt{};
    Int index = 0;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline NodeId transition_node(Point pt) { return {NodeKind::transition, pt, 0}; }
inline NodeId fwd_place_node(Point pt) { return {NodeKind::fwd_place, pt, 0}; }
inline NodeId bwd_place_node(Point pt) { return {NodeKind::bwd_place, pt, 0}; }
inline NodeId class_place_node(Int i) { return {NodeKind::class_place, {}, i}; }
inline NodeId stop_transition_node(Int j) { return {NodeKind::stop_transition, {}, j}; }

std::string to_string(const NodeId& id); // t(0,0) sf(2,-1) sb(3,0) SB{4} tstop[2]
NodeId parse_node_id(std::string_view s);

/// Token multiset over places.  Entries are strictly positive; absent
/// means zero.
struct Marking {
    std::map<NodeId, Int> counts;

    Int at(const NodeId& id) const;
    void add(const NodeId& id, Int delta);
    Int total() const;
    friend bool operator==(const Marking&, const Marking&) = default;
};

/// The set D of back indices selecting which processes share their
/// backward places.
struct FoldSpec {
    std::vector<Int> back_indices; // sorted, unique, subset of [0,beta)
    bool total(Int beta) const { return static_cast<Int>(back_indices.size()) == beta; }
    friend bool operator==(const FoldSpec&, const FoldSpec&) = default;
};

FoldSpec total_fold(const CycloidSpec& spec);

struct FoldClass {
    Int index = 0;
    std::vector<NodeId> members; // original backward places, sorted
};

/// Bijection between grid nodes of a regular cycloid and their
/// per-process coordinates.
struct RegularLabels {
    std::map<NodeId, RegularCoordinate> by_node;
    std::map<RegularCoordinate, NodeId> by_coord;
    friend bool operator==(const RegularLabels&, const RegularLabels&) = default;
};

struct Net {
    CycloidSpec spec;
    std::vector<NodeId> transitions; // canonical order
    std::vector<NodeId> places;      // canonical order
    std::vector<std::pair<NodeId, NodeId>> arcs; // canonical order
    std::optional<RegularLabels> labels;
    std::optional<FoldSpec> fold;

    // Derived lookup structure, built by assemble().
    std::map<NodeId, std::uint32_t> transition_index;
    std::map<NodeId, std::uint32_t> place_index;
    std::vector<std::vector<std::uint32_t>> pre_places;       // per transition
    std::vector<std::vector<std::uint32_t>> post_places;      // per transition
    std::vector<std::vector<std::uint32_t>> pre_transitions;  // per place
    std::vector<std::vector<std::uint32_t>> post_transitions; // per place
    std::map<NodeId, NodeId> class_of; // member backward place -> class place

    static Net assemble(CycloidSpec spec, std::vector<NodeId> transitions,
                        std::vector<NodeId> places, std::vector<std::pair<NodeId, NodeId>> arcs,
                        std::optional<RegularLabels> labels, std::optional<FoldSpec> fold);

    bool has_place(const NodeId& id) const { return place_index.count(id) != 0; }
    bool has_transition(const NodeId& id) const { return transition_index.count(id) != 0; }

    /// Node for a regular coordinate; requires labels.
    NodeId node_of(const RegularCoordinate& rc) const;
    /// Regular coordinate of a node; requires labels.
    RegularCoordinate label_of(const NodeId& id) const;

    /// Structural equality on spec, nodes, arcs, labels and fold.
    friend bool operator==(const Net& a, const Net& b);
};

/// Materializes the quotient net: one transition per canonical point, a
/// forward and a backward output place per transition, every place with
/// exactly one input and one output transition.
Net synthesize(const CycloidSpec& spec);

/// beta forward and alpha backward tokens placed by the defining
/// inequalities beta*xi + alpha*eta in (-beta,0] resp. (-alpha,0].
Marking standard_marking(const CycloidSpec& spec);

/// k = 0: tokens on sf(-1,i) for 0 >= i > -beta and sb(i,-beta) for
/// 0 <= i < alpha (canonicalized); defined for every spec.  k > 0 is the
/// k-th follower marking of a regular spec, reachable in k*beta firings.
Marking regular_marking(const CycloidSpec& spec, Int k = 0);

/// Attaches the coordinate bijection to an unfolded regular cycloid.
Net attach_regular_labels(Net net);

/// The p fold classes of D; backward places outside every class stay
/// singletons.
std::vector<FoldClass> fold_classes(const CycloidSpec& spec, const FoldSpec& fold);

/// Fuses each fold class into one class place inheriting the union of the
/// member arcs; transitions and forward places are untouched.
Net backward_fold(const Net& net, const FoldSpec& fold);

/// Pointwise image of a marking of the unfolded net in the folded net.
Marking fold_marking(const Net& folded, const Marking& m);

struct BfPath {
    std::vector<NodeId> nodes;
    std::vector<NodeId> shared_places; // one forward place per process a_j, j >= 1
};

/// The alternating path that visits every member of fold class i of a
/// total folding, from [s'_i,a_0] to a transition of process a_0.
BfPath bf_path(const CycloidSpec& spec, Int i);

/// C(alpha+1, beta-1, p-(alpha+1), beta-1): one process less, same
/// process length.
CycloidSpec reduced_spec(const CycloidSpec& spec);

/// Removes all transitions and forward places of process a_j and every
/// stop transition; class places keep their identity and lose the
/// corresponding member arcs.
Net delete_process(const Net& net, Int j);

/// Removes the stop transitions (and their arcs) only.
Net strip_stop_transitions(const Net& net);

/// Total folding of C(g,c,c,c) extended with one stop transition per
/// process: tstop[j] consumes the control token of a_j and emits the
/// permit token its next regular step would have produced.
Net stop_resilient(Int g, Int c);

/// force = true admits the total folding of any regular spec.
Net stop_resilient(const CycloidSpec& spec, bool force);

/// Marking-level stop of process a_j on any folded regular cycloid:
/// consumes [s_{j-1},a_j] and produces the (class of the) backward output
/// place of [t_j,a_j].
Marking stop_process(const Net& folded, const Marking& m, Int j);

/// Firing sequence taking regular_marking(0) to regular_marking(k);
/// round r fires [t_{(j+r) mod p}, a_j] for j = beta-1 down to 0.
std::vector<NodeId> regular_cascade(const CycloidSpec& spec, Int k);

} // namespace cycloid
