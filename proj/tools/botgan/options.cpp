#include "options.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace botgan::cli {

namespace {

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        throw UsageError(what + ": '" + text + "' is not a non-negative integer");
    }
    if (pos != text.size()) {
        throw UsageError(what + ": '" + text + "' is not a non-negative integer");
    }
    return v;
}

double parse_real(const std::string& text, const std::string& what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw UsageError(what + ": '" + text + "' is not a number");
    }
    if (pos != text.size() || !std::isfinite(v)) {
        throw UsageError(what + ": '" + text + "' is not a finite number");
    }
    return v;
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

}  // namespace

nlohmann::json parse_value(const OptionDef& def, const std::string& text) {
    const std::string what = "--" + def.name;
    switch (def.kind) {
        case OptionKind::uint: return parse_uint(text, what);
        case OptionKind::real: return parse_real(text, what);
        case OptionKind::text: return text;
        case OptionKind::flag: return text == "true" || text == "1";
        case OptionKind::uint_list: {
            auto out = nlohmann::json::array();
            for (const auto& part : split_commas(text)) {
                const auto dots = part.find("..");
                if (dots == std::string::npos) {
                    out.push_back(parse_uint(part, what));
                    continue;
                }
                const auto lo = parse_uint(part.substr(0, dots), what);
                const auto hi = parse_uint(part.substr(dots + 2), what);
                if (hi < lo) throw UsageError(what + ": empty range '" + part + "'");
                for (auto v = lo; v <= hi; ++v) out.push_back(v);
            }
            if (out.empty()) throw UsageError(what + ": empty list");
            return out;
        }
        case OptionKind::real_list: {
            auto out = nlohmann::json::array();
            for (const auto& part : split_commas(text)) out.push_back(parse_real(part, what));
            if (out.empty()) throw UsageError(what + ": empty list");
            return out;
        }
    }
    return nullptr;
}

nlohmann::json check_value(const OptionDef& def, const nlohmann::json& value,
                           const std::string& source) {
    const std::string what = source + ": key '" + def.name + "'";
    auto bad = [&](const char* expected) {
        return UsageError(what + " must be " + expected + ", got " + value.dump());
    };
    switch (def.kind) {
        case OptionKind::uint:
            if (!value.is_number_unsigned()) throw bad("a non-negative integer");
            return value;
        case OptionKind::real:
            if (!value.is_number()) throw bad("a number");
            return value.get<double>();
        case OptionKind::text:
            if (!value.is_string()) throw bad("a string");
            return value;
        case OptionKind::flag:
            if (!value.is_boolean()) throw bad("a boolean");
            return value;
        case OptionKind::uint_list:
            if (value.is_string()) return parse_value(def, value.get<std::string>());
            if (!value.is_array() || value.empty()) throw bad("a non-empty array of integers");
            for (const auto& v : value) {
                if (!v.is_number_unsigned()) throw bad("a non-empty array of integers");
            }
            return value;
        case OptionKind::real_list: {
            if (value.is_string()) return parse_value(def, value.get<std::string>());
            if (!value.is_array() || value.empty()) throw bad("a non-empty array of numbers");
            auto out = nlohmann::json::array();
            for (const auto& v : value) {
                if (!v.is_number()) throw bad("a non-empty array of numbers");
                out.push_back(v.get<double>());
            }
            return out;
        }
    }
    return value;
}

nlohmann::json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("--config: cannot open '" + path + "'");
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw UsageError("--config: '" + path + "' is not valid JSON (" + e.what() + ")");
    }
    if (doc.is_object() && doc.contains("config") && doc["config"].is_object()) {
        return doc["config"];
    }
    if (!doc.is_object()) {
        throw UsageError("--config: '" + path + "' must hold a JSON object");
    }
    return doc;
}

bool Resolved::has(const std::string& key) const {
    return values_.contains(key) && !values_[key].is_null();
}

const nlohmann::json& Resolved::at(const std::string& key) const {
    if (!has(key)) {
        throw UsageError("missing required option --" + key);
    }
    return values_[key];
}

std::uint64_t Resolved::u(const std::string& key) const { return at(key).get<std::uint64_t>(); }
std::size_t Resolved::size(const std::string& key) const { return at(key).get<std::size_t>(); }
double Resolved::d(const std::string& key) const { return at(key).get<double>(); }
std::string Resolved::s(const std::string& key) const { return at(key).get<std::string>(); }
bool Resolved::b(const std::string& key) const { return has(key) && values_[key].get<bool>(); }

std::vector<std::size_t> Resolved::sizes(const std::string& key) const {
    return at(key).get<std::vector<std::size_t>>();
}

std::vector<double> Resolved::reals(const std::string& key) const {
    return at(key).get<std::vector<double>>();
}

std::string Resolved::path(const std::string& key) const {
    const auto v = s(key);
    if (v.empty()) throw UsageError("option --" + key + " must not be empty");
    return v;
}

Resolved resolve(const std::vector<OptionDef>& defs,
                 const std::map<std::string, std::string>& flag_values,
                 const std::map<std::string, bool>& flag_switches,
                 const std::optional<std::string>& config_path) {
    nlohmann::json file = nlohmann::json::object();
    if (config_path) {
        file = load_config_file(*config_path);
        for (const auto& [key, value] : file.items()) {
            bool known = false;
            for (const auto& def : defs) known = known || def.name == key;
            if (!known) {
                throw UsageError("--config: unknown key '" + key + "' in '" + *config_path + "'");
            }
        }
    }

    nlohmann::json out = nlohmann::json::object();
    for (const auto& def : defs) {
        if (def.kind == OptionKind::flag) {
            const auto it = flag_switches.find(def.name);
            if (it != flag_switches.end() && it->second) {
                out[def.name] = true;
                continue;
            }
        } else if (const auto it = flag_values.find(def.name); it != flag_values.end()) {
            out[def.name] = parse_value(def, it->second);
            continue;
        }
        if (file.contains(def.name) && !file[def.name].is_null()) {
            out[def.name] = check_value(def, file[def.name], "--config '" + *config_path + "'");
            continue;
        }
        if (def.name == "seed") {
            if (const char* env = std::getenv("BOTGAN_SEED"); env != nullptr && *env != '\0') {
                out[def.name] = parse_uint(env, "BOTGAN_SEED");
                continue;
            }
        }
        out[def.name] = def.fallback;
    }
    return Resolved(std::move(out));
}

}  // namespace botgan::cli
