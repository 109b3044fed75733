#pragma once

#include "cxdim/string_spec.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace cxdim::cli {

/// Named example strings as JSON spec documents, in a fixed order.
const std::vector<std::pair<std::string, nlohmann::json>>& builtin_specs();

/// Throws InvalidSpec for an unknown name.
SelfSimilarStringSpec builtin_spec(const std::string& name);

}  // namespace cxdim::cli
