#pragma once

#include <string>

namespace ergotor {

/// Shortest decimal text that reads back to the same double ("." decimal
/// point, no grouping, independent of the C locale).
std::string format_double(double x);

}  // namespace ergotor
