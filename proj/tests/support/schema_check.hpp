#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace testsupport {

// Enough of draft-07 for the shipped schemas: type, enum, required, properties,
// additionalProperties, patternProperties, items, min/max, exclusiveMinimum,
// minLength, pattern, minItems, and $ref to local definitions or sibling files.
class SchemaChecker {
public:
    explicit SchemaChecker(std::filesystem::path schema_dir);

    // Empty when `doc` conforms to the named schema file.
    std::vector<std::string> check(const std::string& schema_file, const nlohmann::json& doc) const;

private:
    void walk(const nlohmann::json& schema, const nlohmann::json& root, const nlohmann::json& doc,
              const std::string& where, std::vector<std::string>& errors) const;
    const nlohmann::json& load(const std::string& file) const;

    std::filesystem::path dir_;
    mutable std::vector<std::pair<std::string, nlohmann::json>> cache_;
};

}  // namespace testsupport
