// Command-line front end: run a configuration, list presets, validate a file.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lpsflow/app/config.hpp"
#include "lpsflow/app/driver.hpp"

namespace {

using namespace lpsflow;
using namespace lpsflow::app;

RunConfig load(const std::string& path, const std::vector<std::string>& overrides) {
    ConfigTree tree = read_config_file(path);
    for (const auto& o : overrides) apply_override(tree, o);
    return resolve_config(tree);
}

int cmd_run(const std::string& path, const std::vector<std::string>& overrides) {
    RunConfig rc;
    try {
        rc = load(path, overrides);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
    try {
        RunOptions opt;
        opt.log = &std::cout;
        const RunOutcome out = run_simulation(rc, opt);
        std::cout << "output written to " << out.output_dir << '\n';
        if (out.exit_code != kExitOk) std::cerr << "error: " << out.message << '\n';
        return out.exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitAbort;
    }
}

int cmd_check(const std::string& path, const std::vector<std::string>& overrides) {
    try {
        const RunConfig rc = load(path, overrides);
        std::cout << to_ini(rc);
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App cli{"lpsflow: high-order incompressible flow solver"};
    cli.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    auto* run = cli.add_subcommand("run", "run a configuration file");
    run->add_option("config", config_path, "INI configuration file")->required();
    run->add_option("--set", overrides, "override section.key=value (repeatable)");

    auto* list = cli.add_subcommand("presets", "print the built-in presets");
    bool show_ini = false;
    list->add_flag("--ini", show_ini, "print the full INI text of each preset");

    std::string check_path;
    std::vector<std::string> check_overrides;
    auto* check = cli.add_subcommand("check-config", "validate a configuration and print it fully resolved");
    check->add_option("config", check_path, "INI configuration file")->required();
    check->add_option("--set", check_overrides, "override section.key=value (repeatable)");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = cli.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    if (*run) return cmd_run(config_path, overrides);
    if (*check) return cmd_check(check_path, check_overrides);
    for (const auto& p : presets()) {
        std::cout << p.name << ": " << p.description << '\n';
        if (show_ini) std::cout << p.ini << '\n';
    }
    return kExitOk;
}
