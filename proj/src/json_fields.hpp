#pragma once

// Field accessors for config documents. Every failure names the offending
// field by its path, e.g. "parameters[2].count".

#include <cmath>
#include <initializer_list>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "rpd/errors.hpp"

namespace rpd::detail {

inline std::string field_path(std::string_view parent, std::string_view key) {
    if (parent.empty()) return std::string(key);
    return std::string(parent) + "." + std::string(key);
}

inline std::string index_path(std::string_view parent, std::size_t i) {
    return std::string(parent) + "[" + std::to_string(i) + "]";
}

inline const nlohmann::json& require_object(const nlohmann::json& j, std::string_view path) {
    if (!j.is_object()) throw ParseError(std::string(path) + ": expected an object");
    return j;
}

inline const nlohmann::json& require_array(const nlohmann::json& j, std::string_view path) {
    if (!j.is_array()) throw ParseError(std::string(path) + ": expected an array");
    return j;
}

inline void reject_unknown_keys(const nlohmann::json& obj, std::string_view path,
                                std::initializer_list<std::string_view> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (auto name : allowed) known = known || item.key() == name;
        if (!known) {
            throw ParseError(field_path(path, item.key()) + ": unknown key");
        }
    }
}

inline const nlohmann::json& require_field(const nlohmann::json& obj, std::string_view path,
                                           std::string_view key) {
    auto it = obj.find(std::string(key));
    if (it == obj.end()) throw ParseError(field_path(path, key) + ": missing");
    return *it;
}

inline double require_number(const nlohmann::json& obj, std::string_view path, std::string_view key) {
    const auto& v = require_field(obj, path, key);
    if (!v.is_number()) throw ParseError(field_path(path, key) + ": expected a number");
    double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(field_path(path, key) + ": not finite");
    return x;
}

inline std::string require_string(const nlohmann::json& obj, std::string_view path, std::string_view key) {
    const auto& v = require_field(obj, path, key);
    if (!v.is_string()) throw ParseError(field_path(path, key) + ": expected a string");
    return v.get<std::string>();
}

inline long long require_integer(const nlohmann::json& obj, std::string_view path, std::string_view key) {
    const auto& v = require_field(obj, path, key);
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
        double x = v.get<double>();
        if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 9.0e15) {
            return static_cast<long long>(x);
        }
    }
    throw ParseError(field_path(path, key) + ": expected an integer");
}

inline bool require_bool(const nlohmann::json& obj, std::string_view path, std::string_view key) {
    const auto& v = require_field(obj, path, key);
    if (!v.is_boolean()) throw ParseError(field_path(path, key) + ": expected true or false");
    return v.get<bool>();
}

inline nlohmann::json parse_document(std::string_view text) {
    try {
        return nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

}  // namespace rpd::detail
