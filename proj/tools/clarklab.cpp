#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "runner.hpp"

namespace {

struct SubcommandState {
    std::string name;
    CLI::App* app = nullptr;
    std::string config_file;
    std::map<std::string, std::string> values;
};

}  // namespace

int main(int argc, char** argv) {
    using namespace clark::tools;

    CLI::App app{"clarklab: numerical experiments on the Clark model problem"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "clarklab 0.1.0");

    std::vector<SubcommandState> subs(experiment_names().size());
    for (std::size_t i = 0; i < subs.size(); ++i) {
        auto& s = subs[i];
        s.name = experiment_names()[i];
        s.app = app.add_subcommand(s.name, "run the " + s.name + " experiment");
        s.app->add_option("--config", s.config_file, "flat key = value config file");
        s.app->add_option_function<std::string>(
            "--out", [&s](const std::string& v) { s.values["out"] = v; }, "output directory (default out)");
        s.app->add_option_function<std::string>(
            "--seed", [&s](const std::string& v) { s.values["seed"] = v; }, "RNG seed (default 1)");
        s.app->add_option_function<std::string>(
            "--threads", [&s](const std::string& v) { s.values["threads"] = v; }, "worker threads (default 1)");
        for (const auto& key : experiment_keys(s.name)) {
            const std::string name = key.name;
            s.app->add_option_function<std::string>(
                "--" + name, [&s, name](const std::string& v) { s.values[name] = v; },
                key.help + " (default " + (key.default_value.empty() ? "none" : key.default_value) + ")");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    for (const auto& s : subs) {
        if (!s.app->parsed()) continue;
        try {
            std::map<std::string, std::string> file;
            if (!s.config_file.empty()) file = read_config_file(s.config_file);
            const auto cfg = resolve_config(s.name, file, s.values);
            return run(cfg, std::cerr);
        } catch (const UsageError& e) {
            std::cerr << "usage error: " << e.what() << "\n\n" << s.app->help();
            return kUsage;
        }
    }
    return kUsage;
}
