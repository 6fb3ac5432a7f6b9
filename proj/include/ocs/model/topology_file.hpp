// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "ocs/model/types.hpp"

namespace ocs::model {

/// Parses a topology document ({"switches":[..],"terminals":[..],"links":[..]}).
/// Accepts JSON first, then the YAML rendering of the same schema.
/// Throws NbiError(InvalidRange) on malformed input.
Topology parse_topology_text(const std::string& text);

/// Same schema from an already-parsed JSON document.
Topology parse_topology_doc(const json& doc);

json topology_to_doc(const Topology& t);

}  // namespace ocs::model
