#include "cycloid/io.hpp"

#include "cycloid/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace cycloid {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string kind_name(NodeKind kind) {
    switch (kind) {
    case NodeKind::transition: return "transition";
    case NodeKind::fwd_place: return "forward-place";
    case NodeKind::bwd_place: return "backward-place";
    case NodeKind::class_place: return "class-place";
    case NodeKind::stop_transition: return "stop-transition";
    }
    return "?";
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '&')
            out += "&amp;";
        else if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else
            out += c;
    }
    return out;
}

std::string alias_of(const Net& net, const NodeId& id) {
    if (!net.labels) return {};
    auto it = net.labels->by_node.find(id);
    if (it == net.labels->by_node.end()) return {};
    return to_string(it->second);
}

std::string format_pos(double x, double y) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(1);
    os << x << ',' << y << '!';
    return os.str();
}

std::string to_dot(const Net& net, const Marking& m) {
    std::ostringstream os;
    os << "digraph \"" << to_string(net.spec) << "\" {\n";
    os << "  node [fontsize=10];\n";
    for (const NodeId& t : net.transitions) {
        os << "  \"" << to_string(t) << "\" [shape=box";
        if (t.kind == NodeKind::transition)
            os << ", pos=\"" << format_pos(double(t.pt.xi), double(t.pt.eta)) << '"';
        if (std::string alias = alias_of(net, t); !alias.empty())
            os << ", comment=\"" << alias << '"';
        os << "];\n";
    }
    for (const NodeId& p : net.places) {
        os << "  \"" << to_string(p) << "\" [shape=circle";
        if (p.kind == NodeKind::fwd_place)
            os << ", pos=\"" << format_pos(double(p.pt.xi) + 0.5, double(p.pt.eta)) << '"';
        else if (p.kind == NodeKind::bwd_place)
            os << ", pos=\"" << format_pos(double(p.pt.xi), double(p.pt.eta) + 0.5) << '"';
        if (Int tokens = m.at(p); tokens > 0)
            os << ", label=\"" << to_string(p) << " [" << tokens << "]\"";
        if (std::string alias = alias_of(net, p); !alias.empty())
            os << ", comment=\"" << alias << '"';
        os << "];\n";
    }
    for (const auto& [from, to] : net.arcs)
        os << "  \"" << to_string(from) << "\" -> \"" << to_string(to) << "\";\n";
    os << "}\n";
    return os.str();
}

std::string to_pnml(const Net& net, const Marking& m) {
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n";
    os << "  <net id=\"cycloid_" << net.spec.alpha << '_' << net.spec.beta << '_'
       << net.spec.gamma << '_' << net.spec.delta
       << "\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n";
    os << "    <page id=\"page0\">\n";
    for (const NodeId& p : net.places) {
        os << "      <place id=\"" << to_string(p) << "\">\n";
        std::string name = alias_of(net, p);
        if (name.empty()) name = to_string(p);
        os << "        <name><text>" << xml_escape(name) << "</text></name>\n";
        if (Int tokens = m.at(p); tokens > 0)
            os << "        <initialMarking><text>" << tokens << "</text></initialMarking>\n";
        os << "      </place>\n";
    }
    for (const NodeId& t : net.transitions) {
        os << "      <transition id=\"" << to_string(t) << "\">\n";
        std::string name = alias_of(net, t);
        if (name.empty()) name = to_string(t);
        os << "        <name><text>" << xml_escape(name) << "</text></name>\n";
        os << "      </transition>\n";
    }
    std::size_t arc_no = 0;
    for (const auto& [from, to] : net.arcs)
        os << "      <arc id=\"arc" << arc_no++ << "\" source=\"" << to_string(from)
           << "\" target=\"" << to_string(to) << "\"/>\n";
    os << "    </page>\n  </net>\n</pnml>\n";
    return os.str();
}

std::string to_json(const Net& net, const Marking& m) {
    ordered_json j;
    j["spec"] = {{"alpha", net.spec.alpha},
                 {"beta", net.spec.beta},
                 {"gamma", net.spec.gamma},
                 {"delta", net.spec.delta}};
    if (net.fold) j["fold"] = net.fold->back_indices;
    ordered_json nodes = ordered_json::array();
    for (const NodeId& t : net.transitions)
        nodes.push_back({{"id", to_string(t)}, {"kind", kind_name(t.kind)}});
    for (const NodeId& p : net.places)
        nodes.push_back({{"id", to_string(p)}, {"kind", kind_name(p.kind)}});
    j["nodes"] = std::move(nodes);
    ordered_json arcs = ordered_json::array();
    for (const auto& [from, to] : net.arcs)
        arcs.push_back({to_string(from), to_string(to)});
    j["arcs"] = std::move(arcs);
    ordered_json marking = ordered_json::object();
    for (const auto& [id, count] : m.counts) marking[to_string(id)] = count;
    j["marking"] = std::move(marking);
    ordered_json labels = ordered_json::object();
    if (net.labels)
        for (const auto& [id, rc] : net.labels->by_node) labels[to_string(id)] = to_string(rc);
    j["labels"] = std::move(labels);
    return j.dump(2) + "\n";
}

RegularCoordinate parse_regular_coordinate(const std::string& s, const std::string& path) {
    RegularCoordinate rc;
    std::size_t open;
    if (s.rfind("s'[", 0) == 0) {
        rc.kind = RegularCoordinate::Kind::bwd_place;
        open = 3;
    } else if (s.rfind("s[", 0) == 0) {
        rc.kind = RegularCoordinate::Kind::fwd_place;
        open = 2;
    } else if (s.rfind("t[", 0) == 0) {
        rc.kind = RegularCoordinate::Kind::transition;
        open = 2;
    } else {
        throw parse_error(path + ": unrecognized label '" + s + "'");
    }
    const std::size_t comma = s.find(',', open);
    if (comma == std::string::npos || s.back() != ']')
        throw parse_error(path + ": unrecognized label '" + s + "'");
    try {
        rc.i = std::stoll(s.substr(open, comma - open));
        rc.j = std::stoll(s.substr(comma + 1, s.size() - comma - 2));
    } catch (const std::exception&) {
        throw parse_error(path + ": unrecognized label '" + s + "'");
    }
    return rc;
}

const ordered_json& require(const ordered_json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(path + ": missing key '" + key + "'");
    return *it;
}

Int require_int(const ordered_json& j, const std::string& path) {
    if (!j.is_number_integer()) throw parse_error(path + ": expected an integer");
    return j.get<Int>();
}

} // namespace

SerializedNet export_net(const Net& net, const Marking& m, ExportFormat format) {
    for (const auto& [id, count] : m.counts)
        if (!net.has_place(id))
            throw std::domain_error("marking names unknown place " + to_string(id));
    switch (format) {
    case ExportFormat::dot: return {format, to_dot(net, m)};
    case ExportFormat::pnml: return {format, to_pnml(net, m)};
    case ExportFormat::json: return {format, to_json(net, m)};
    }
    throw std::domain_error("unknown export format");
}

std::pair<Net, Marking> import_json(std::string_view payload) {
    ordered_json j;
    try {
        j = ordered_json::parse(payload);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("$: ") + e.what());
    }
    if (!j.is_object()) throw parse_error("$: expected an object");

    const ordered_json& jspec = require(j, "spec", "$");
    if (!jspec.is_object()) throw parse_error("$.spec: expected an object");
    Int alpha = require_int(require(jspec, "alpha", "$.spec"), "$.spec.alpha");
    Int beta = require_int(require(jspec, "beta", "$.spec"), "$.spec.beta");
    Int gamma = require_int(require(jspec, "gamma", "$.spec"), "$.spec.gamma");
    Int delta = require_int(require(jspec, "delta", "$.spec"), "$.spec.delta");
    if (alpha < 1 || beta < 1 || gamma < 1 || delta < 1)
        throw parse_error("$.spec: parameters must be positive");
    CycloidSpec spec{alpha, beta, gamma, delta};

    std::optional<FoldSpec> fold;
    if (auto it = j.find("fold"); it != j.end()) {
        if (!it->is_array()) throw parse_error("$.fold: expected an array");
        FoldSpec f;
        for (std::size_t i = 0; i < it->size(); ++i)
            f.back_indices.push_back(
                require_int((*it)[i], "$.fold[" + std::to_string(i) + "]"));
        fold = std::move(f);
    }

    const ordered_json& jnodes = require(j, "nodes", "$");
    if (!jnodes.is_array()) throw parse_error("$.nodes: expected an array");
    std::vector<NodeId> transitions;
    std::vector<NodeId> places;
    for (std::size_t i = 0; i < jnodes.size(); ++i) {
        const std::string path = "$.nodes[" + std::to_string(i) + "]";
        const ordered_json& entry = jnodes[i];
        if (!entry.is_object()) throw parse_error(path + ": expected an object");
        const ordered_json& jid = require(entry, "id", path);
        if (!jid.is_string()) throw parse_error(path + ".id: expected a string");
        NodeId id;
        try {
            id = parse_node_id(jid.get<std::string>());
        } catch (const parse_error& e) {
            throw parse_error(path + ".id: " + e.what());
        }
        const ordered_json& jkind = require(entry, "kind", path);
        if (!jkind.is_string() || jkind.get<std::string>() != kind_name(id.kind))
            throw parse_error(path + ".kind: does not match id '" + jid.get<std::string>() + "'");
        if (is_place(id.kind))
            places.push_back(id);
        else
            transitions.push_back(id);
    }

    const ordered_json& jarcs = require(j, "arcs", "$");
    if (!jarcs.is_array()) throw parse_error("$.arcs: expected an array");
    std::vector<std::pair<NodeId, NodeId>> arcs;
    for (std::size_t i = 0; i < jarcs.size(); ++i) {
        const std::string path = "$.arcs[" + std::to_string(i) + "]";
        const ordered_json& pair = jarcs[i];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
            throw parse_error(path + ": expected [from, to]");
        try {
            arcs.emplace_back(parse_node_id(pair[0].get<std::string>()),
                              parse_node_id(pair[1].get<std::string>()));
        } catch (const parse_error& e) {
            throw parse_error(path + ": " + e.what());
        }
    }

    std::optional<RegularLabels> labels;
    if (auto it = j.find("labels"); it != j.end()) {
        if (!it->is_object()) throw parse_error("$.labels: expected an object");
        if (!it->empty()) {
            labels.emplace();
            for (const auto& [key, value] : it->items()) {
                const std::string path = "$.labels." + key;
                if (!value.is_string()) throw parse_error(path + ": expected a string");
                NodeId id;
                try {
                    id = parse_node_id(key);
                } catch (const parse_error& e) {
                    throw parse_error(path + ": " + e.what());
                }
                RegularCoordinate rc = parse_regular_coordinate(value.get<std::string>(), path);
                if (!labels->by_node.emplace(id, rc).second ||
                    !labels->by_coord.emplace(rc, id).second)
                    throw parse_error(path + ": labels are not a bijection");
            }
        }
    }

    Net net = [&] {
        try {
            return Net::assemble(spec, std::move(transitions), std::move(places),
                                 std::move(arcs), std::move(labels), std::move(fold));
        } catch (const std::domain_error& e) {
            throw parse_error(std::string("$: ") + e.what());
        }
    }();

    Marking m;
    const ordered_json& jmarking = require(j, "marking", "$");
    if (!jmarking.is_object()) throw parse_error("$.marking: expected an object");
    for (const auto& [key, value] : jmarking.items()) {
        const std::string path = "$.marking." + key;
        NodeId id;
        try {
            id = parse_node_id(key);
        } catch (const parse_error& e) {
            throw parse_error(path + ": " + e.what());
        }
        if (!net.has_place(id)) throw parse_error(path + ": not a place of the net");
        const Int count = require_int(value, path);
        if (count < 1) throw parse_error(path + ": counts must be positive");
        m.add(id, count);
    }
    return {std::move(net), std::move(m)};
}

} // namespace cycloid
