#pragma once

#include "kyle/penalty.hpp"

#include <json.hpp>

#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kyle::io {

/// Bad user input (malformed JSON, unknown kind, missing field).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// {"kind":"quadratic","alpha":0.125} and friends. Tabulated points are
/// [x, value, jump] or [x, value, jump, right_value]; a jump without an
/// explicit right value takes the next point's value.
Penalty penalty_from_json(const nlohmann::json& j);
nlohmann::json penalty_to_json(const Penalty& p);

/// Inline JSON, or a path to a JSON file.
Penalty parse_penalty(const std::string& text_or_path);

/// "%.17g", so values round-trip exactly.
std::string format_double(double x);

void write_csv(std::ostream& os, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

} // namespace kyle::io
