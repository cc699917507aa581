#include "ergotor/format.hpp"

#include <array>
#include <charconv>

namespace ergotor {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

}  // namespace ergotor
