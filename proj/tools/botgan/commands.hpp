#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "botgan/report.hpp"
#include "options.hpp"

namespace botgan::cli {

struct Context {
    std::string command;
    Resolved cfg;
    std::uint64_t seed = 0;
    std::filesystem::path out_dir;
    report::Format format = report::Format::csv;
    std::vector<std::string> outputs;

    /// Path inside the output directory, recorded in the run manifest.
    std::filesystem::path artifact(const std::string& name);
    void write_report(const std::string& stem, const report::Table& table);
};

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<OptionDef> options;
    std::function<void(Context&)> run;
};

const std::vector<CommandSpec>& commands();

}  // namespace botgan::cli
