#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qmc/lhs.hpp"

namespace qmc::detail {

using Json = nlohmann::ordered_json;

Json label_to_json(const Label& l, const std::vector<std::string>& variables);
Label label_from_json(const Json& j, const std::vector<std::string>& variables, const std::string& where);
ExtRat ext_from_json(const Json& j, const std::string& where);
Rational rational_from_json(const Json& j, const std::string& where);
const Json& field(const Json& j, const char* key, const std::string& where);
Json parse_json(std::string_view text);

}  // namespace qmc::detail
