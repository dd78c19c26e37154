#pragma once

#include <string>

namespace rqbm {

/// Shortest decimal string that parses back to exactly `v`.
std::string shortest_repr(double v);

} // namespace rqbm
