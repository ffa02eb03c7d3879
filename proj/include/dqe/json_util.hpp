#pragma once

#include <initializer_list>
#include <string>

#include "json.hpp"

#include "dqe/numeric.hpp"
#include "dqe/value.hpp"

namespace dqe {

using Json = nlohmann::json;

// Cell <-> JSON, with the column kind known from context (schema files,
// rule files). Decimals travel as canonical strings so exactness
// survives; integers as JSON integers; timestamps as ISO strings.
Json cell_to_json(const Cell& cell);
Cell cell_from_json(const Json& j, Kind kind, const std::string& context);

// Self-describing form for cleansing logs, where the reader may not have
// the schema at hand: null or {"kind": ..., "value": ...}.
Json tagged_cell_to_json(const Cell& cell);
Cell tagged_cell_from_json(const Json& j, const std::string& context);

// Rational <-> JSON. Emits a plain number when that number reads back to
// the same rational; otherwise a string ("0.125" or "1/3"). Accepts
// numbers, decimal strings, and "n/d" strings.
Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j, const std::string& context);

// Strict-object helpers: typo'd keys in metadata files are defects, not
// extensions.
void require_object(const Json& j, const std::string& context);
void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const std::string& context);
const Json& require_key(const Json& j, const std::string& key,
                        const std::string& context);
std::string get_string(const Json& j, const std::string& key,
                       const std::string& context);
bool get_bool(const Json& j, const std::string& key, const std::string& context,
              bool fallback);
// Accepts unsigned or signed-but-non-negative numbers.
std::uint64_t get_uint(const Json& j, const std::string& key,
                       const std::string& context);

}  // namespace dqe
