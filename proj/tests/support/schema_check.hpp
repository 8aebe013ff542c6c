#pragma once

// Minimal structural validator for the subset of JSON Schema the shipped
// schemas use: type, properties, required, items, enum, minimum.

#include <json.hpp>

#include <string>
#include <vector>

namespace colorseg::testing {

inline void collect_schema_errors(const nlohmann::json& schema, const nlohmann::json& value,
                                  const std::string& path, std::vector<std::string>& errors) {
    using nlohmann::json;
    if (schema.contains("enum")) {
        bool hit = false;
        for (const auto& candidate : schema["enum"]) hit = hit || candidate == value;
        if (!hit) errors.push_back(path + ": not in enum");
    }
    if (schema.contains("type")) {
        const std::string t = schema["type"];
        const bool ok = (t == "object" && value.is_object()) || (t == "array" && value.is_array()) ||
                        (t == "string" && value.is_string()) || (t == "boolean" && value.is_boolean()) ||
                        (t == "integer" && value.is_number_integer()) || (t == "number" && value.is_number());
        if (!ok) {
            errors.push_back(path + ": expected " + t);
            return;
        }
    }
    if (schema.contains("minimum") && value.is_number() &&
        value.get<double>() < schema["minimum"].get<double>()) {
        errors.push_back(path + ": below minimum");
    }
    if (schema.contains("required") && value.is_object()) {
        for (const auto& key : schema["required"]) {
            if (!value.contains(key.get<std::string>())) {
                errors.push_back(path + ": missing required key " + key.get<std::string>());
            }
        }
    }
    if (schema.contains("properties") && value.is_object()) {
        for (const auto& [key, sub] : schema["properties"].items()) {
            if (value.contains(key)) collect_schema_errors(sub, value.at(key), path + "." + key, errors);
        }
    }
    if (schema.contains("items") && value.is_array()) {
        int i = 0;
        for (const auto& element : value) {
            collect_schema_errors(schema["items"], element, path + "[" + std::to_string(i++) + "]", errors);
        }
    }
}

inline std::vector<std::string> schema_errors(const nlohmann::json& schema, const nlohmann::json& value) {
    std::vector<std::string> errors;
    collect_schema_errors(schema, value, "$", errors);
    return errors;
}

}  // namespace colorseg::testing
