#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "denmpipe/errors.hpp"

namespace denmpipe {

/// Extracts the first JSON object embedded in free-form model text.
/// Surrounding prose and Markdown code fences are ignored; the object is
/// located by brace matching that respects string literals and escapes.
inline nlohmann::json parse_structured_output(
    const std::string& text, const std::vector<std::string>& required_keys) {
    for (std::size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (in_string) {
                if (escaped)
                    escaped = false;
                else if (c == '\\')
                    escaped = true;
                else if (c == '"')
                    in_string = false;
                continue;
            }
            if (c == '"') {
                in_string = true;
            } else if (c == '{') {
                ++depth;
            } else if (c == '}') {
                if (--depth == 0) {
                    const std::string candidate = text.substr(start, i - start + 1);
                    nlohmann::json doc =
                        nlohmann::json::parse(candidate, nullptr,
                                              /*allow_exceptions=*/false);
                    if (doc.is_discarded()) break;  // try the next '{'
                    std::vector<std::string> missing;
                    for (const auto& key : required_keys)
                        if (!doc.contains(key)) missing.push_back(key);
                    if (!missing.empty()) {
                        std::string joined;
                        for (const auto& k : missing) {
                            if (!joined.empty()) joined += ", ";
                            joined += k;
                        }
                        throw Error(Errc::missing_keys,
                                    "required keys absent: " + joined, joined);
                    }
                    return doc;
                }
            }
        }
    }
    throw Error(Errc::no_json_found, "no JSON object found in model output");
}

}  // namespace denmpipe
