// Experiment runner. Exit codes: 0 success, 1 config error, 2 numerical
// failure or tolerance breach.

#include "nlcorr/nlcorr.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <string>

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

int exit_code(nlc_status status) {
    switch (status) {
    case NLC_OK:
        return 0;
    case NLC_ERR_NUMERICAL:
    case NLC_ERR_INTERNAL:
        return kExitNumerical;
    default:
        return kExitConfig;
    }
}

const std::map<std::string, std::string> kDescriptions{
    {"figure2", "two-spin averages with local switching-off at detection"},
    {"figure3", "two-spin averages with projection at the first detection"},
    {"entropy-sweep", "Renyi and Tsallis entropies over a parameter range"},
    {"locality-check", "particle #1 reduced state against partner strength and detection time"},
    {"teleport-demo", "mean field of Bob's beam under pre- and post-selection"},
    {"history-check", "two evaluations of random multi-time histories"},
    {"qvn", "q-deformed von Neumann flow of a qubit; trace and spectrum drift"},
};

int fail(nlc_status status) {
    std::cerr << "nlcorr: " << nlc_status_name(status) << ": " << nlc_last_error() << "\n";
    return exit_code(status);
}

struct ConfigDeleter {
    void operator()(nlc_config *c) const { nlc_config_destroy(c); }
};
struct ResultDeleter {
    void operator()(nlc_result *r) const { nlc_result_destroy(r); }
};

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multiple-time correlations in linear and nonlinear quantum mechanics"};
    app.set_version_flag("--version", std::string(nlc_version()));
    app.require_subcommand(1);

    std::string config_file;
    std::map<std::string, std::string> overrides;
    for (std::size_t i = 0; i < nlc_experiment_count(); ++i) {
        const std::string name = nlc_experiment_name(i);
        const auto d = kDescriptions.find(name);
        CLI::App *sub = app.add_subcommand(name, d == kDescriptions.end() ? "" : d->second);
        sub->add_option("--config", config_file, "flat key = value file; flags override it");
        for (std::size_t k = 0; k < nlc_config_key_count(); ++k) {
            const std::string key = nlc_config_key_name(k);
            sub->add_option_function<std::string>(
                "--" + key, [&overrides, key](const std::string &v) { overrides[key] = v; });
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    const std::string experiment = app.get_subcommands().front()->get_name();

    nlc_config *raw_config = nullptr;
    if (const auto s = nlc_config_create(&raw_config); s != NLC_OK) {
        return fail(s);
    }
    std::unique_ptr<nlc_config, ConfigDeleter> config(raw_config);
    if (!config_file.empty()) {
        if (const auto s = nlc_config_load_file(config.get(), config_file.c_str()); s != NLC_OK) {
            return fail(s);
        }
    }
    for (const auto &[key, value] : overrides) {
        if (const auto s = nlc_config_set(config.get(), key.c_str(), value.c_str()); s != NLC_OK) {
            return fail(s);
        }
    }

    nlc_result *raw_result = nullptr;
    if (const auto s = nlc_run(experiment.c_str(), config.get(), &raw_result); s != NLC_OK) {
        return fail(s);
    }
    std::unique_ptr<nlc_result, ResultDeleter> result(raw_result);

    const char *out = nlc_config_get(config.get(), "out");
    if (out && *out) {
        if (const auto s = nlc_result_write_csv(result.get(), out); s != NLC_OK) {
            return fail(s);
        }
    } else {
        std::fputs(nlc_result_csv(result.get()), stdout);
    }
    for (std::size_t i = 0; i < nlc_result_summary_count(result.get()); ++i) {
        std::cerr << nlc_result_summary_line(result.get(), i) << "\n";
    }
    return nlc_result_passed(result.get()) ? 0 : kExitNumerical;
}
