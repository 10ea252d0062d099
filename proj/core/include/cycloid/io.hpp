#pragma once

#include "cycloid/net.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

namespace cycloid {

enum class ExportFormat : std::uint8_t { dot, pnml, json };

struct SerializedNet {
    ExportFormat format = ExportFormat::json;
    std::string payload;
};

/// Byte-deterministic serialization; nodes appear in canonical order.
/// dot: bipartite digraph (transitions as boxes, places as circles) with
/// grid positions derived from the coordinates; pnml: place/transition
/// core subset with canonical node ids; json: the documented schema
/// {spec, fold?, nodes[], arcs[], marking{}, labels{}}.
SerializedNet export_net(const Net& net, const Marking& m, ExportFormat format);

/// Inverse of the json export.  Schema violations raise parse_error with
/// the offending JSON path.
std::pair<Net, Marking> import_json(std::string_view payload);

} // namespace cycloid
