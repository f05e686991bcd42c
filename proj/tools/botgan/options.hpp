#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace botgan::cli {

enum class OptionKind { uint, real, text, flag, uint_list, real_list };

struct OptionDef {
    std::string name;  // long flag without dashes; also the config-file key
    OptionKind kind;
    std::string help;
    nlohmann::json fallback;  // null means "no default"
};

/// Thrown for bad flags, config keys or values; maps to exit code 1.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the textual form of a flag value. Lists accept "1,2,3" and, for
/// unsigned lists, inclusive ranges such as "1..10".
nlohmann::json parse_value(const OptionDef& def, const std::string& text);

/// Checks a config-file value against the option kind.
nlohmann::json check_value(const OptionDef& def, const nlohmann::json& value,
                           const std::string& source);

/// A JSON config file, or a run manifest (its "config" member is used).
nlohmann::json load_config_file(const std::string& path);

class Resolved {
public:
    Resolved() = default;
    explicit Resolved(nlohmann::json values) : values_(std::move(values)) {}

    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] std::uint64_t u(const std::string& key) const;
    [[nodiscard]] std::size_t size(const std::string& key) const;
    [[nodiscard]] double d(const std::string& key) const;
    [[nodiscard]] std::string s(const std::string& key) const;
    [[nodiscard]] bool b(const std::string& key) const;
    [[nodiscard]] std::vector<std::size_t> sizes(const std::string& key) const;
    [[nodiscard]] std::vector<double> reals(const std::string& key) const;
    /// Requires a non-empty string value, naming the flag otherwise.
    [[nodiscard]] std::string path(const std::string& key) const;

    [[nodiscard]] const nlohmann::json& json() const { return values_; }

private:
    const nlohmann::json& at(const std::string& key) const;
    nlohmann::json values_ = nlohmann::json::object();
};

/// flags > config file > BOTGAN_SEED (seed only) > defaults.
Resolved resolve(const std::vector<OptionDef>& defs,
                 const std::map<std::string, std::string>& flag_values,
                 const std::map<std::string, bool>& flag_switches,
                 const std::optional<std::string>& config_path);

}  // namespace botgan::cli
