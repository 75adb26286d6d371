#pragma once

#include <string>

namespace vsi {

// Shortest decimal form that parses back to the exact same double. Keeps CSV
// exports and config round trips byte-stable across runs and platforms.
std::string to_shortest(double value);

}  // namespace vsi
