#include "matchbench/instance_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "matchbench/errors.hpp"

namespace matchbench {

using nlohmann::json;

std::string instance_to_json(const Instance& inst) {
    const std::size_t n = inst.size();
    json rows = json::array();
    for (std::size_t a = 0; a < n; ++a) {
        json row = json::array();
        for (std::size_t i = 0; i < n; ++i) row.push_back(inst.value(a, i));
        rows.push_back(std::move(row));
    }
    json doc;
    doc["n"] = n;
    doc["class"] = to_string(inst.preference_class());
    doc["values"] = std::move(rows);
    return doc.dump();
}

Instance instance_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance file is not valid JSON: ") +
                         e.what());
    }
    if (!doc.is_object()) throw ParseError("top level must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "n" && key != "class" && key != "values") {
            throw ParseError("unexpected top-level key \"" + key + "\"");
        }
    }
    if (!doc.contains("n") || !doc["n"].is_number_unsigned()) {
        throw ParseError("field \"n\" missing or not a positive integer");
    }
    if (!doc.contains("class") || !doc["class"].is_string()) {
        throw ParseError("field \"class\" missing or not a string");
    }
    if (!doc.contains("values") || !doc["values"].is_array()) {
        throw ParseError("field \"values\" missing or not an array");
    }
    const auto n = doc["n"].get<std::size_t>();
    const PreferenceClass cls =
        preference_class_from_string(doc["class"].get<std::string>());
    const json& rows = doc["values"];
    if (rows.size() != n) {
        throw ParseError("field \"values\" has " +
                         std::to_string(rows.size()) + " rows, expected " +
                         std::to_string(n));
    }
    std::vector<double> flat;
    flat.reserve(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        const json& row = rows[a];
        if (!row.is_array() || row.size() != n) {
            throw ParseError("values[" + std::to_string(a) +
                             "] must be an array of " + std::to_string(n) +
                             " numbers");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (!row[i].is_number()) {
                throw ParseError("values[" + std::to_string(a) + "][" +
                                 std::to_string(i) + "] is not a number");
            }
            flat.push_back(row[i].get<double>());
        }
    }
    return Instance(n, std::move(flat), cls); // class invariant re-checked here
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    out << instance_to_json(inst) << '\n';
    if (!out) throw ParseError("failed writing " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return instance_from_json(buf.str());
}

} // namespace matchbench
