#pragma once

#include <string>

#include "json.hpp"

namespace rgbethe {

using ojson = nlohmann::ordered_json;

// Serializes with fixed field order and every double printed with 17
// significant digits, so that output is byte-stable and round-trips.
std::string dump_json(const ojson& value, int indent = 2);

std::string format_double(double v);

}  // namespace rgbethe
