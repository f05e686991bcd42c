// botgan command-line entry point.
//
// Exit codes: 0 success, 1 usage error, 2 data or format error, 3 numeric failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "botgan/error.hpp"
#include "commands.hpp"
#include "options.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct Bound {
    const botgan::cli::CommandSpec* spec = nullptr;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> switches;
    std::string config;
};

void write_manifest(const botgan::cli::Context& ctx) {
    const nlohmann::json manifest{{"tool", "botgan"},
                                  {"version", "0.1.0"},
                                  {"command", ctx.command},
                                  {"seed", ctx.seed},
                                  {"config", ctx.cfg.json()},
                                  {"outputs", ctx.outputs}};
    const auto path = ctx.out_dir / (ctx.command + ".manifest.json");
    std::ofstream out(path);
    if (!out) throw botgan::Error("cannot write run manifest " + path.string());
    out << manifest.dump(2) << '\n';
}

int run(Bound& b) {
    using namespace botgan::cli;
    std::optional<std::string> config;
    if (!b.config.empty()) config = b.config;
    Context ctx;
    ctx.command = b.spec->name;
    ctx.cfg = resolve(b.spec->options, b.values, b.switches, config);
    if (!ctx.cfg.has("seed")) {
        throw UsageError("a seed is required: pass --seed, set it in --config, or export BOTGAN_SEED");
    }
    ctx.seed = ctx.cfg.u("seed");
    try {
        ctx.format = botgan::report::format_from_string(ctx.cfg.s("format"));
    } catch (const botgan::ConfigError& e) {
        throw UsageError(std::string("--format: ") + e.what());
    }
    ctx.out_dir = ctx.cfg.s("out");
    std::filesystem::create_directories(ctx.out_dir);
    b.spec->run(ctx);
    write_manifest(ctx);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dropout-GAN bot detection toolkit"};
    app.require_subcommand(1);
    std::vector<Bound> bound;
    bound.reserve(botgan::cli::commands().size());
    for (const auto& spec : botgan::cli::commands()) {
        Bound& b = bound.emplace_back();
        b.spec = &spec;
        b.app = app.add_subcommand(spec.name, spec.help);
        b.app->add_option("--config", b.config, "JSON config file or run manifest (flags win)");
        for (const auto& def : spec.options) {
            std::string help = def.help;
            if (!def.fallback.is_null()) help += " [" + def.fallback.dump() + "]";
            if (def.kind == botgan::cli::OptionKind::flag) {
                b.app->add_flag("--" + def.name, b.switches[def.name], help);
            } else {
                b.app->add_option("--" + def.name, b.values[def.name], help);
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    for (auto& b : bound) {
        if (!b.app->parsed()) continue;
        // Unset options must not shadow config values.
        for (auto it = b.values.begin(); it != b.values.end();) {
            it = b.app->get_option("--" + it->first)->count() == 0 ? b.values.erase(it)
                                                                     : std::next(it);
        }
        try {
            return run(b);
        } catch (const botgan::cli::UsageError& e) {
            std::cerr << "usage error: " << e.what() << '\n';
            return kExitUsage;
        } catch (const botgan::ConfigError& e) {
            std::cerr << "configuration error: " << e.what() << '\n';
            return kExitUsage;
        } catch (const botgan::NumericError& e) {
            std::cerr << "numeric error: " << e.what() << '\n';
            return kExitNumeric;
        } catch (const botgan::Error& e) {
            std::cerr << "data error: " << e.what() << '\n';
            return kExitData;
        } catch (const std::filesystem::filesystem_error& e) {
            std::cerr << "data error: " << e.what() << '\n';
            return kExitData;
        } catch (const nlohmann::json::exception& e) {
            std::cerr << "data error: " << e.what() << '\n';
            return kExitData;
        }
    }
    return kExitUsage;
}
