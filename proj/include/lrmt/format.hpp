#pragma once

#include <string>

namespace lrmt {

/// Shortest printf rendering at 17 significant digits; round-trips any
/// finite double exactly.
std::string format_g17(double v);

std::string json_escape(const std::string& s);

}  // namespace lrmt
