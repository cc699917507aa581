#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

namespace ergotor::cli {

/// Line (1-based) on which each value of a well-formed JSON document starts,
/// keyed by JSON pointer ("" for the root, "/T_grid/2", ...).
std::map<std::string, std::size_t> value_lines(std::string_view text);

/// Line of `pointer`, or of its nearest ancestor present in `lines`.
std::size_t line_of(const std::map<std::string, std::size_t>& lines,
                    std::string pointer);

/// "~" -> "~0", "/" -> "~1".
std::string escape_pointer_token(std::string_view token);

}  // namespace ergotor::cli
