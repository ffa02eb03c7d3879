#include "dqe/json_util.hpp"

#include <algorithm>

#include "dqe/error.hpp"

namespace dqe {

Json cell_to_json(const Cell& cell) {
  if (cell.is_null()) return nullptr;
  switch (*cell.kind()) {
    case Kind::Text: return cell.as_text();
    case Kind::Integer: return cell.as_integer();
    case Kind::Decimal: return cell.as_decimal().to_string();
    case Kind::Timestamp: return cell.as_timestamp().to_string();
    case Kind::Flag: return cell.as_flag();
  }
  return nullptr;
}

Cell cell_from_json(const Json& j, Kind kind, const std::string& context) {
  if (j.is_null()) return Cell::null();
  switch (kind) {
    case Kind::Text:
      if (j.is_string()) return Cell{j.get<std::string>()};
      break;
    case Kind::Integer:
      if (j.is_number_integer()) return Cell{j.get<std::int64_t>()};
      break;
    case Kind::Decimal: {
      if (j.is_number_integer()) {
        return Cell{Decimal::from_int(j.get<std::int64_t>())};
      }
      if (j.is_number_float()) {
        // Recover the decimal the author wrote via shortest round-trip.
        auto r = Rational::from_double_text(j.get<double>());
        if (r) {
          auto d = Decimal::parse(r->to_string());
          if (d) return Cell{*d};
        }
        break;
      }
      if (j.is_string()) {
        auto d = Decimal::parse(j.get<std::string>());
        if (d) return Cell{*d};
      }
      break;
    }
    case Kind::Timestamp: {
      if (j.is_string()) {
        auto ts = Timestamp::parse(j.get<std::string>());
        if (ts) return Cell{*ts};
      }
      break;
    }
    case Kind::Flag:
      if (j.is_boolean()) return Cell{j.get<bool>()};
      break;
  }
  throw ParseError(context + ": cannot read " + j.dump() + " as " + kind_name(kind));
}

Json tagged_cell_to_json(const Cell& cell) {
  if (cell.is_null()) return nullptr;
  return Json{{"kind", kind_name(*cell.kind())}, {"value", cell_to_json(cell)}};
}

Cell tagged_cell_from_json(const Json& j, const std::string& context) {
  if (j.is_null()) return Cell::null();
  require_object(j, context);
  reject_unknown_keys(j, {"kind", "value"}, context);
  auto kind = kind_from_name(get_string(j, "kind", context));
  if (!kind) throw ParseError(context + ": unknown cell kind");
  return cell_from_json(require_key(j, "value", context), *kind, context);
}

Json rational_to_json(const Rational& r) {
  std::string text = r.to_string();
  if (text.find('/') == std::string::npos) {
    Json as_number = Json::parse(text);
    auto back = as_number.is_number_integer()
                    ? std::optional<Rational>(Rational::from_int(as_number.get<std::int64_t>()))
                    : Rational::from_double_text(as_number.get<double>());
    if (back && *back == r) return as_number;
  }
  return text;
}

Rational rational_from_json(const Json& j, const std::string& context) {
  if (j.is_number_integer()) return Rational::from_int(j.get<std::int64_t>());
  if (j.is_number_float()) {
    auto r = Rational::from_double_text(j.get<double>());
    if (r) return *r;
    throw ParseError(context + ": number " + j.dump() +
                     " is not exactly representable; write it as a string");
  }
  if (j.is_string()) {
    std::string text = j.get<std::string>();
    auto slash = text.find('/');
    if (slash != std::string::npos) {
      auto n = Decimal::parse(text.substr(0, slash));
      auto d = Decimal::parse(text.substr(slash + 1));
      if (n && d && n->scale == 0 && d->scale == 0 && d->unscaled > 0) {
        return Rational::from_counts(n->unscaled, d->unscaled);
      }
    } else if (auto d = Decimal::parse(text)) {
      return Rational::from_decimal(*d);
    }
    throw ParseError(context + ": cannot read '" + text + "' as a number");
  }
  throw ParseError(context + ": expected a number");
}

void require_object(const Json& j, const std::string& context) {
  if (!j.is_object()) throw ParseError(context + ": expected a JSON object");
}

void reject_unknown_keys(const Json& j, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  for (const auto& [key, value] : j.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(),
                             [&](const char* a) { return key == a; });
    if (!known) throw ParseError(context + ": unknown key '" + key + "'");
  }
}

const Json& require_key(const Json& j, const std::string& key,
                        const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(context + ": missing key '" + key + "'");
  return *it;
}

std::string get_string(const Json& j, const std::string& key,
                       const std::string& context) {
  const Json& v = require_key(j, key, context);
  if (!v.is_string()) throw ParseError(context + ": key '" + key + "' must be a string");
  return v.get<std::string>();
}

bool get_bool(const Json& j, const std::string& key, const std::string& context,
              bool fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_boolean()) {
    throw ParseError(context + ": key '" + key + "' must be a boolean");
  }
  return it->get<bool>();
}

std::uint64_t get_uint(const Json& j, const std::string& key,
                       const std::string& context) {
  const Json& v = require_key(j, key, context);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ParseError(context + ": key '" + key + "' must be a non-negative integer");
}

}  // namespace dqe
