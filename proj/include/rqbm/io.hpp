#pragma once

#include <filesystem>
#include <string_view>

#include "json.hpp"

#include "rqbm/spaces.hpp"

namespace rqbm {

using Json = nlohmann::ordered_json;

/// Finite doubles as numbers; inf, -inf and nan as strings.
Json json_number(double v);
/// Inverse of json_number; throws SpaceError naming `where` on mismatch.
double number_from_json(const Json& j, std::string_view where);

/// The space file schema. Finite spaces may carry an optional "continuum"
/// list of {lo, hi} intervals.
Json space_to_json(const Space& space);
Space space_from_json(const Json& j);

/// Parse errors carry the byte offset; schema errors carry a JSON pointer.
Space parse_space(std::string_view text);
Space load_space(const std::filesystem::path& path);

} // namespace rqbm
