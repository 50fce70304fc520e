#include "rtnrt/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

rtnrt::ScenarioConfig resolve_config(const std::string& arg) {
    if (std::filesystem::exists(arg)) return rtnrt::load_config(arg);
    for (const auto& name : rtnrt::preset_names())
        if (name == arg) return rtnrt::config_from_json(rtnrt::preset_config(name));
    std::string known;
    for (const auto& n : rtnrt::preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw rtnrt::parameter_error("'" + arg + "' is neither a config file nor a preset (" +
                                 known + ")");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Range-test / no-response-test obstacle reconstruction for the 2D Laplace "
                 "problem on the unit disk"};
    app.require_subcommand(1);

    std::string config_arg;
    std::string out_dir = "out";
    int threads = 1;
    bool verbose = false;
    app.add_option("--out-dir", out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", threads, "worker threads for the sweep")->capture_default_str();
    app.add_flag("--verbose", verbose, "log validation warnings and progress");

    auto* cmd_run = app.add_subcommand("run", "run a scenario and write its outputs");
    cmd_run->add_option("config", config_arg, "config file or preset name")->required();

    auto* cmd_validate = app.add_subcommand("validate", "check a config against the schema");
    cmd_validate->add_option("config", config_arg, "config file or preset name")->required();

    auto* cmd_oracle = app.add_subcommand("oracle", "emit oracle Cauchy data only");
    cmd_oracle->add_option("config", config_arg, "config file or preset name")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        const rtnrt::ScenarioConfig cfg = resolve_config(config_arg);
        if (cmd_validate->parsed()) {
            const auto rep = rtnrt::validate(cfg);
            for (const auto& v : rep.violations) std::cout << "violation: " << v << '\n';
            for (const auto& w : rep.warnings) std::cout << "warning: " << w << '\n';
            if (rep.ok()) std::cout << "config ok\n";
            return rep.ok() ? 0 : 2;
        }
        if (cmd_oracle->parsed()) {
            const int rc = rtnrt::run_oracle(cfg, out_dir);
            if (rc == 0) std::cout << "wrote " << out_dir << "/cauchy.csv\n";
            else std::cerr << "oracle emission failed (is the scenario concentric?)\n";
            return rc;
        }
        const auto out = rtnrt::run_scenario(cfg, out_dir, threads, verbose, &std::cerr);
        if (out.exit_code == 0) {
            std::size_t positives = 0;
            for (const auto& r : out.results)
                if (r.positive(cfg.method == rtnrt::Method::nrt ? rtnrt::Method::nrt
                                                                : rtnrt::Method::rt))
                    ++positives;
            std::cout << out.results.size() << " domains, " << positives << " positive\n";
            for (const auto& f : out.files) std::cout << "wrote " << f << '\n';
        } else {
            std::cerr << "run failed with exit code " << out.exit_code << " (see " << out_dir
                      << ")\n";
        }
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
