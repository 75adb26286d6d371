#include "vsi/format.hpp"

#include <charconv>
#include <system_error>

namespace vsi {

std::string to_shortest(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, ptr);
}

}  // namespace vsi
