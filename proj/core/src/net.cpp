#include "cycloid/net.hpp"

#include "cycloid/error.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace cycloid {

std::string to_string(const NodeId& id) {
    std::ostringstream os;
    switch (id.kind) {
    case NodeKind::transition: os << "t(" << id.pt.xi << ',' << id.pt.eta << ')'; break;
    case NodeKind::fwd_place: os << "sf(" << id.pt.xi << ',' << id.pt.eta << ')'; break;
    case NodeKind::bwd_place: os << "sb(" << id.pt.xi << ',' << id.pt.eta << ')'; break;
    case NodeKind::class_place: os << "SB{" << id.index << '}'; break;
    case NodeKind::stop_transition: os << "tstop[" << id.index << ']'; break;
    }
    return os.str();
}

namespace {

bool consume(std::string_view& s, std::string_view prefix) {
    if (s.substr(0, prefix.size()) != prefix) return false;
    s.remove_prefix(prefix.size());
    return true;
}

bool consume_int(std::string_view& s, Int& out) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    auto res = std::from_chars(begin, end, out);
    if (res.ec != std::errc()) return false;
    s.remove_prefix(static_cast<std::size_t>(res.ptr - begin));
    return true;
}

} // namespace

NodeId parse_node_id(std::string_view s) {
    std::string_view rest = s;
    auto fail = [&]() -> NodeId {
        throw parse_error("unrecognized node id '" + std::string(s) + "'");
    };
    auto point_node = [&](NodeKind kind) {
        Point pt;
        if (!consume_int(rest, pt.xi) || !consume(rest, ",") || !consume_int(rest, pt.eta) ||
            !consume(rest, ")") || !rest.empty())
            return fail();
        return NodeId{kind, pt, 0};
    };
    if (consume(rest, "tstop[")) {
        Int j = 0;
        if (!consume_int(rest, j) || !consume(rest, "]") || !rest.empty()) return fail();
        return stop_transition_node(j);
    }
    if (consume(rest, "t(")) return point_node(NodeKind::transition);
    if (consume(rest, "sf(")) return point_node(NodeKind::fwd_place);
    if (consume(rest, "sb(")) return point_node(NodeKind::bwd_place);
    if (consume(rest, "SB{")) {
        Int i = 0;
        if (!consume_int(rest, i) || !consume(rest, "}") || !rest.empty()) return fail();
        return class_place_node(i);
    }
    return fail();
}

Int Marking::at(const NodeId& id) const {
    auto it = counts.find(id);
    return it == counts.end() ? 0 : it->second;
}

void Marking::add(const NodeId& id, Int delta) {
    Int next = at(id) + delta;
    if (next < 0)
        throw std::domain_error("marking of " + to_string(id) + " would become negative");
    if (next == 0)
        counts.erase(id);
    else
        counts[id] = next;
}

Int Marking::total() const {
    Int sum = 0;
    for (const auto& [id, c] : counts) sum += c;
    return sum;
}

FoldSpec total_fold(const CycloidSpec& spec) {
    FoldSpec f;
    for (Int j = 0; j < spec.beta; ++j) f.back_indices.push_back(j);
    return f;
}

namespace {

void validate_fold(const CycloidSpec& spec, const FoldSpec& fold) {
    if (!spec.regular())
        throw std::domain_error("backward foldings require a regular cycloid (beta | delta)");
    if (spec.beta < 2) throw std::domain_error("backward foldings require beta > 1");
    if (fold.back_indices.size() < 2)
        throw std::domain_error("the set of back indices needs |D| > 1");
    Int prev = -1;
    for (Int j : fold.back_indices) {
        if (j <= prev) throw std::domain_error("back indices must be sorted and unique");
        if (j < 0 || j >= spec.beta)
            throw std::domain_error("back index out of range [0,beta)");
        prev = j;
    }
}

} // namespace

Net Net::assemble(CycloidSpec spec, std::vector<NodeId> transitions, std::vector<NodeId> places,
                  std::vector<std::pair<NodeId, NodeId>> arcs,
                  std::optional<RegularLabels> labels, std::optional<FoldSpec> fold) {
    Net net{spec, std::move(transitions), std::move(places), std::move(arcs),
            std::move(labels), std::move(fold),
            {}, {}, {}, {}, {}, {}, {}};
    std::sort(net.transitions.begin(), net.transitions.end());
    std::sort(net.places.begin(), net.places.end());
    std::sort(net.arcs.begin(), net.arcs.end());
    if (std::adjacent_find(net.transitions.begin(), net.transitions.end()) !=
            net.transitions.end() ||
        std::adjacent_find(net.places.begin(), net.places.end()) != net.places.end() ||
        std::adjacent_find(net.arcs.begin(), net.arcs.end()) != net.arcs.end())
        throw std::domain_error("duplicate node or arc");

    for (std::size_t i = 0; i < net.transitions.size(); ++i) {
        if (is_place(net.transitions[i].kind))
            throw std::domain_error("place id listed as transition");
        net.transition_index[net.transitions[i]] = static_cast<std::uint32_t>(i);
    }
    for (std::size_t i = 0; i < net.places.size(); ++i) {
        if (!is_place(net.places[i].kind))
            throw std::domain_error("transition id listed as place");
        net.place_index[net.places[i]] = static_cast<std::uint32_t>(i);
    }

    net.pre_places.resize(net.transitions.size());
    net.post_places.resize(net.transitions.size());
    net.pre_transitions.resize(net.places.size());
    net.post_transitions.resize(net.places.size());
    for (const auto& [from, to] : net.arcs) {
        const bool from_place = is_place(from.kind);
        if (from_place == is_place(to.kind))
            throw std::domain_error("arcs must connect a place and a transition");
        if (from_place) {
            auto p = net.place_index.find(from);
            auto t = net.transition_index.find(to);
            if (p == net.place_index.end() || t == net.transition_index.end())
                throw std::domain_error("arc endpoint is not a node of the net");
            net.pre_places[t->second].push_back(p->second);
            net.post_transitions[p->second].push_back(t->second);
        } else {
            auto t = net.transition_index.find(from);
            auto p = net.place_index.find(to);
            if (p == net.place_index.end() || t == net.transition_index.end())
                throw std::domain_error("arc endpoint is not a node of the net");
            net.post_places[t->second].push_back(p->second);
            net.pre_transitions[p->second].push_back(t->second);
        }
    }

    if (net.fold) {
        for (const FoldClass& cls : fold_classes(net.spec, *net.fold))
            for (const NodeId& member : cls.members)
                net.class_of.emplace(member, class_place_node(cls.index));
    }
    return net;
}

NodeId Net::node_of(const RegularCoordinate& rc) const {
    if (!labels) throw std::domain_error("net carries no regular labels");
    auto it = labels->by_coord.find(rc);
    if (it == labels->by_coord.end())
        throw std::domain_error("no node labelled " + to_string(rc));
    return it->second;
}

RegularCoordinate Net::label_of(const NodeId& id) const {
    if (!labels) throw std::domain_error("net carries no regular labels");
    auto it = labels->by_node.find(id);
    if (it == labels->by_node.end())
        throw std::domain_error("node " + to_string(id) + " carries no regular label");
    return it->second;
}

bool operator==(const Net& a, const Net& b) {
    return a.spec == b.spec && a.transitions == b.transitions && a.places == b.places &&
           a.arcs == b.arcs && a.labels == b.labels && a.fold == b.fold;
}

Net synthesize(const CycloidSpec& spec) {
    std::vector<NodeId> transitions;
    std::vector<NodeId> places;
    std::vector<std::pair<NodeId, NodeId>> arcs;
    for (Point pt : fundamental_transitions(spec)) {
        transitions.push_back(transition_node(pt));
        places.push_back(fwd_place_node(pt));
        places.push_back(bwd_place_node(pt));
        arcs.emplace_back(transition_node(pt), fwd_place_node(pt));
        arcs.emplace_back(transition_node(pt), bwd_place_node(pt));
        arcs.emplace_back(fwd_place_node(pt),
                          transition_node(normalize(spec, {pt.xi + 1, pt.eta}).representative));
        arcs.emplace_back(bwd_place_node(pt),
                          transition_node(normalize(spec, {pt.xi, pt.eta + 1}).representative));
    }
    return Net::assemble(spec, std::move(transitions), std::move(places), std::move(arcs),
                         std::nullopt, std::nullopt);
}

Marking standard_marking(const CycloidSpec& spec) {
    // beta*xi + alpha*eta shifts by multiples of the area across a node's
    // equivalence class, so membership in the defining half-open windows
    // (-beta,0] and (-alpha,0] is decided by the residue.
    const Int a = spec.area();
    Marking m;
    for (Point pt : fundamental_transitions(spec)) {
        const Int r = floor_mod(spec.beta * pt.xi + spec.alpha * pt.eta, a);
        if (r == 0 || r > a - spec.beta) m.add(fwd_place_node(pt), 1);
        if (r == 0 || r > a - spec.alpha) m.add(bwd_place_node(pt), 1);
    }
    return m;
}

Marking regular_marking(const CycloidSpec& spec, Int k) {
    Marking m;
    if (k == 0) {
        for (Int i = 0; i > -spec.beta; --i)
            m.add(fwd_place_node(normalize(spec, {-1, i}).representative), 1);
        for (Int i = 0; i < spec.alpha; ++i)
            m.add(bwd_place_node(normalize(spec, {i, -spec.beta}).representative), 1);
        return m;
    }
    if (!spec.regular())
        throw std::domain_error("follower markings require a regular cycloid (beta | delta)");
    const Int p = spec.process_len();
    if (k < 0 || k >= p) throw std::domain_error("follower index k must satisfy 0 <= k < p");
    auto fwd = [&](Int i, Int j) {
        return fwd_place_node(stand(spec, {RegularCoordinate::Kind::transition, i, j}));
    };
    auto bwd = [&](Int i, Int j) {
        return bwd_place_node(stand(spec, {RegularCoordinate::Kind::transition, i, j}));
    };
    m.add(fwd(floor_mod(p - 1 + k, p), 0), 1);
    for (Int i = 0; i < spec.beta - 1; ++i) m.add(fwd(floor_mod(i + k, p), i + 1), 1);
    for (Int i = p - spec.alpha; i < p; ++i) m.add(bwd(floor_mod(i + k, p), 0), 1);
    return m;
}

Net attach_regular_labels(Net net) {
    if (!net.spec.regular())
        throw std::domain_error("regular labels require a regular cycloid (beta | delta)");
    if (net.fold || net.labels)
        throw std::domain_error("labels attach to the plain unfolded cycloid");
    const Int p = net.spec.process_len();
    RegularLabels labels;
    auto put = [&](NodeId id, RegularCoordinate rc) {
        if (!labels.by_node.emplace(id, rc).second || !labels.by_coord.emplace(rc, id).second)
            throw std::logic_error("regular labelling is not a bijection");
    };
    for (Int j = 0; j < net.spec.beta; ++j) {
        for (Int i = 0; i < p; ++i) {
            Point pt = stand(net.spec, {RegularCoordinate::Kind::transition, i, j});
            put(transition_node(pt), {RegularCoordinate::Kind::transition, i, j});
            put(fwd_place_node(pt), {RegularCoordinate::Kind::fwd_place, i, j});
            put(bwd_place_node(pt), {RegularCoordinate::Kind::bwd_place, i, j});
        }
    }
    if (labels.by_node.size() != net.transitions.size() + net.places.size())
        throw std::logic_error("regular labelling does not cover the net");
    return Net::assemble(net.spec, std::move(net.transitions), std::move(net.places),
                         std::move(net.arcs), std::move(labels), std::nullopt);
}

std::vector<FoldClass> fold_classes(const CycloidSpec& spec, const FoldSpec& fold) {
    validate_fold(spec, fold);
    const Int p = spec.process_len();
    const Int n = spec.n();
    const bool with_zero =
        std::find(fold.back_indices.begin(), fold.back_indices.end(), 0) !=
        fold.back_indices.end();
    auto bwd = [&](Int i, Int j) {
        return bwd_place_node(stand(spec, {RegularCoordinate::Kind::transition, i, j}));
    };
    std::vector<FoldClass> classes;
    classes.reserve(static_cast<std::size_t>(p));
    for (Int i = 0; i < p; ++i) {
        FoldClass cls{i, {}};
        if (with_zero) {
            cls.members.push_back(bwd(i, 0));
            for (Int j : fold.back_indices)
                if (j != 0) cls.members.push_back(bwd(floor_mod(i + n, p), j));
        } else {
            for (Int j : fold.back_indices) cls.members.push_back(bwd(floor_mod(i + n, p), j));
        }
        std::sort(cls.members.begin(), cls.members.end());
        classes.push_back(std::move(cls));
    }
    return classes;
}

Net backward_fold(const Net& net, const FoldSpec& fold) {
    if (net.fold) throw std::domain_error("net is already folded");
    if (!net.labels)
        throw std::domain_error("backward foldings require regular labels on the cycloid");
    validate_fold(net.spec, fold);

    std::map<NodeId, NodeId> member_to_class;
    for (const FoldClass& cls : fold_classes(net.spec, fold))
        for (const NodeId& member : cls.members)
            member_to_class.emplace(member, class_place_node(cls.index));

    std::vector<NodeId> places;
    for (const NodeId& pl : net.places)
        if (!member_to_class.count(pl)) places.push_back(pl);
    for (Int i = 0; i < net.spec.process_len(); ++i) places.push_back(class_place_node(i));

    auto image = [&](const NodeId& id) {
        auto it = member_to_class.find(id);
        return it == member_to_class.end() ? id : it->second;
    };
    std::vector<std::pair<NodeId, NodeId>> arcs;
    arcs.reserve(net.arcs.size());
    for (const auto& [from, to] : net.arcs) arcs.emplace_back(image(from), image(to));
    std::sort(arcs.begin(), arcs.end());
    arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());

    RegularLabels labels;
    for (const auto& [id, rc] : net.labels->by_node) {
        if (member_to_class.count(id)) continue;
        labels.by_node.emplace(id, rc);
        labels.by_coord.emplace(rc, id);
    }
    return Net::assemble(net.spec, net.transitions, std::move(places), std::move(arcs),
                         std::move(labels), fold);
}

Marking fold_marking(const Net& folded, const Marking& m) {
    if (!folded.fold) throw std::domain_error("target net carries no folding");
    Marking out;
    for (const auto& [id, count] : m.counts) {
        auto it = folded.class_of.find(id);
        const NodeId target = it == folded.class_of.end() ? id : it->second;
        if (!folded.has_place(target))
            throw std::domain_error("marking names unknown place " + to_string(id));
        out.add(target, count);
    }
    return out;
}

BfPath bf_path(const CycloidSpec& spec, Int i) {
    if (!spec.regular() || spec.beta < 2)
        throw std::domain_error("the path is defined on total foldings (regular, beta > 1)");
    const Int p = spec.process_len();
    if (i < 0 || i >= p) throw std::domain_error("class index out of range [0,p)");
    const Int m = floor_mod(i + spec.n() - 1, p);
    const Int m1 = floor_mod(i + spec.n(), p);
    auto node = [&](NodeKind kind, Int idx, Int j) {
        Point pt = stand(spec, {RegularCoordinate::Kind::transition, idx, j});
        return NodeId{kind, pt, 0};
    };
    BfPath path;
    path.nodes.push_back(node(NodeKind::bwd_place, i, 0));
    path.nodes.push_back(node(NodeKind::transition, m, spec.beta - 1));
    for (Int j = spec.beta - 1; j >= 1; --j) {
        path.nodes.push_back(node(NodeKind::fwd_place, m, j));
        path.shared_places.push_back(node(NodeKind::fwd_place, m, j));
        path.nodes.push_back(node(NodeKind::transition, m1, j));
        path.nodes.push_back(node(NodeKind::bwd_place, m1, j));
        path.nodes.push_back(node(NodeKind::transition, m, j - 1));
    }
    return path;
}

CycloidSpec reduced_spec(const CycloidSpec& spec) {
    if (!spec.regular())
        throw std::domain_error("process elimination requires a regular cycloid");
    if (spec.beta < 2) throw std::domain_error("process elimination requires beta > 1");
    const Int p = spec.process_len();
    if (p <= spec.alpha + 1)
        throw std::domain_error("process length too short: p - (alpha+1) must stay positive");
    return {spec.alpha + 1, spec.beta - 1, p - (spec.alpha + 1), spec.beta - 1};
}

namespace {

Net remove_nodes(const Net& net, const std::vector<NodeId>& doomed_transitions,
                 const std::vector<NodeId>& doomed_places) {
    auto doomed = [&](const NodeId& id) {
        return std::binary_search(doomed_transitions.begin(), doomed_transitions.end(), id) ||
               std::binary_search(doomed_places.begin(), doomed_places.end(), id);
    };
    std::vector<NodeId> transitions;
    for (const NodeId& t : net.transitions)
        if (!doomed(t)) transitions.push_back(t);
    std::vector<NodeId> places;
    for (const NodeId& pl : net.places)
        if (!doomed(pl)) places.push_back(pl);
    std::vector<std::pair<NodeId, NodeId>> arcs;
    for (const auto& [from, to] : net.arcs)
        if (!doomed(from) && !doomed(to)) arcs.emplace_back(from, to);
    std::optional<RegularLabels> labels;
    if (net.labels) {
        labels.emplace();
        for (const auto& [id, rc] : net.labels->by_node) {
            if (doomed(id)) continue;
            labels->by_node.emplace(id, rc);
            labels->by_coord.emplace(rc, id);
        }
    }
    return Net::assemble(net.spec, std::move(transitions), std::move(places), std::move(arcs),
                         std::move(labels), net.fold);
}

} // namespace

Net delete_process(const Net& net, Int j) {
    if (!net.fold) throw std::domain_error("process deletion acts on a folded cycloid");
    if (!net.labels) throw std::domain_error("process deletion requires regular labels");
    if (net.spec.beta < 2) throw std::domain_error("process deletion requires beta > 1");
    if (j < 0 || j >= net.spec.beta)
        throw std::domain_error("process index out of range [0,beta)");
    std::vector<NodeId> doomed_transitions;
    std::vector<NodeId> doomed_places;
    for (const NodeId& t : net.transitions)
        if (t.kind == NodeKind::stop_transition || net.label_of(t).j == j)
            doomed_transitions.push_back(t);
    for (const NodeId& pl : net.places)
        if (pl.kind == NodeKind::fwd_place && net.label_of(pl).j == j)
            doomed_places.push_back(pl);
    return remove_nodes(net, doomed_transitions, doomed_places);
}

Net strip_stop_transitions(const Net& net) {
    std::vector<NodeId> doomed;
    for (const NodeId& t : net.transitions)
        if (t.kind == NodeKind::stop_transition) doomed.push_back(t);
    return remove_nodes(net, doomed, {});
}

Net stop_resilient(Int g, Int c) { return stop_resilient(CycloidSpec{g, c, c, c}, false); }

Net stop_resilient(const CycloidSpec& spec, bool force) {
    if (spec.cars() < 2)
        throw std::domain_error("stop resilience requires at least two processes (c > 1)");
    if (!force && !(spec.gamma == spec.beta && spec.delta == spec.beta))
        throw std::domain_error("expected the C(g,c,c,c) shape; force admits other regular specs");
    if (!spec.regular())
        throw std::domain_error("stop resilience requires a regular cycloid (beta | delta)");
    Net folded = backward_fold(attach_regular_labels(synthesize(spec)), total_fold(spec));
    const Int p = spec.process_len();
    std::vector<NodeId> transitions = folded.transitions;
    std::vector<std::pair<NodeId, NodeId>> arcs = folded.arcs;
    for (Int j = 0; j < spec.cars(); ++j) {
        const NodeId stop = stop_transition_node(j);
        const NodeId control =
            folded.node_of({RegularCoordinate::Kind::fwd_place, floor_mod(j - 1, p), j});
        const NodeId permit = folded.class_of.at(
            bwd_place_node(stand(spec, {RegularCoordinate::Kind::transition, j, j})));
        transitions.push_back(stop);
        arcs.emplace_back(control, stop);
        arcs.emplace_back(stop, permit);
    }
    return Net::assemble(spec, std::move(transitions), folded.places, std::move(arcs),
                         folded.labels, folded.fold);
}

Marking stop_process(const Net& folded, const Marking& m, Int j) {
    if (!folded.fold) throw std::domain_error("stopping acts on a folded cycloid");
    if (!folded.labels) throw std::domain_error("stopping requires regular labels");
    if (j < 0 || j >= folded.spec.cars())
        throw std::domain_error("process index out of range [0,c)");
    const Int p = folded.spec.process_len();
    const NodeId control =
        folded.node_of({RegularCoordinate::Kind::fwd_place, floor_mod(j - 1, p), j});
    if (m.at(control) == 0)
        throw std::domain_error("control token of the process is not on " + to_string(control));
    const NodeId raw =
        bwd_place_node(stand(folded.spec, {RegularCoordinate::Kind::transition, j, j}));
    auto it = folded.class_of.find(raw);
    const NodeId permit = it == folded.class_of.end() ? raw : it->second;
    Marking out = m;
    out.add(control, -1);
    out.add(permit, 1);
    return out;
}

std::vector<NodeId> regular_cascade(const CycloidSpec& spec, Int k) {
    if (!spec.regular())
        throw std::domain_error("the cascade is defined for regular cycloids only");
    const Int p = spec.process_len();
    if (k < 0 || k >= p) throw std::domain_error("follower index k must satisfy 0 <= k < p");
    std::vector<NodeId> seq;
    for (Int r = 0; r < k; ++r)
        for (Int j = spec.beta - 1; j >= 0; --j)
            seq.push_back(transition_node(
                stand(spec, {RegularCoordinate::Kind::transition, floor_mod(j + r, p), j})));
    return seq;
}

} // namespace cycloid
