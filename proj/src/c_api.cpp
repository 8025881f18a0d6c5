#include "nlcorr/nlcorr.h"

#include "nlcorr/error.hpp"
#include "nlcorr/experiments.hpp"

#include <exception>
#include <new>
#include <string>

struct nlc_config {
    nlcorr::ExperimentConfig config;
};

struct nlc_result {
    nlcorr::ResultTable table;
    std::string csv;
};

namespace {

thread_local std::string last_error;

template <class F>
nlc_status guarded(F &&f) noexcept {
    try {
        f();
        last_error.clear();
        return NLC_OK;
    } catch (const nlcorr::ConfigError &e) {
        last_error = e.what();
        return NLC_ERR_CONFIG;
    } catch (const nlcorr::NumericalError &e) {
        last_error = e.what();
        return NLC_ERR_NUMERICAL;
    } catch (const nlcorr::DomainError &e) {
        last_error = e.what();
        return NLC_ERR_DOMAIN;
    } catch (const nlcorr::DimensionError &e) {
        last_error = e.what();
        return NLC_ERR_DIMENSION;
    } catch (const nlcorr::Error &e) {
        last_error = e.what();
        return NLC_ERR_IO;
    } catch (const std::bad_alloc &) {
        last_error = "out of memory";
        return NLC_ERR_INTERNAL;
    } catch (const std::exception &e) {
        last_error = e.what();
        return NLC_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown error";
        return NLC_ERR_INTERNAL;
    }
}

nlc_status invalid(const char *what) {
    last_error = what;
    return NLC_ERR_INVALID_ARGUMENT;
}

const std::string kVersionString(nlcorr::kVersion);

} // namespace

extern "C" {

const char *nlc_version(void) { return kVersionString.c_str(); }

const char *nlc_last_error(void) { return last_error.c_str(); }

const char *nlc_status_name(nlc_status status) {
    switch (status) {
    case NLC_OK:
        return "ok";
    case NLC_ERR_CONFIG:
        return "config error";
    case NLC_ERR_NUMERICAL:
        return "numerical failure";
    case NLC_ERR_DOMAIN:
        return "domain error";
    case NLC_ERR_DIMENSION:
        return "dimension mismatch";
    case NLC_ERR_IO:
        return "i/o error";
    case NLC_ERR_INVALID_ARGUMENT:
        return "invalid argument";
    case NLC_ERR_INTERNAL:
        return "internal error";
    }
    return "unknown status";
}

nlc_status nlc_config_create(nlc_config **out) {
    if (!out) {
        return invalid("nlc_config_create: null output pointer");
    }
    return guarded([&] { *out = new nlc_config{}; });
}

void nlc_config_destroy(nlc_config *config) { delete config; }

nlc_status nlc_config_set(nlc_config *config, const char *key, const char *value) {
    if (!config || !key || !value) {
        return invalid("nlc_config_set: null argument");
    }
    return guarded([&] { config->config.set(key, value); });
}

nlc_status nlc_config_load_file(nlc_config *config, const char *path) {
    if (!config || !path) {
        return invalid("nlc_config_load_file: null argument");
    }
    return guarded([&] { config->config.load_file(path); });
}

const char *nlc_config_get(const nlc_config *config, const char *key) {
    if (!config || !key) {
        return nullptr;
    }
    const auto &entries = config->config.entries();
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : it->second.c_str();
}

size_t nlc_config_key_count(void) { return nlcorr::ExperimentConfig::keys().size(); }

const char *nlc_config_key_name(size_t index) {
    const auto &keys = nlcorr::ExperimentConfig::keys();
    return index < keys.size() ? keys[index].c_str() : nullptr;
}

size_t nlc_experiment_count(void) { return nlcorr::experiment_names().size(); }

const char *nlc_experiment_name(size_t index) {
    const auto &names = nlcorr::experiment_names();
    return index < names.size() ? names[index].c_str() : nullptr;
}

nlc_status nlc_run(const char *experiment, const nlc_config *config, nlc_result **out) {
    if (!experiment || !config || !out) {
        return invalid("nlc_run: null argument");
    }
    *out = nullptr;
    return guarded([&] {
        auto *r = new nlc_result{nlcorr::run_experiment(experiment, config->config), {}};
        r->csv = nlcorr::to_csv(r->table);
        *out = r;
    });
}

void nlc_result_destroy(nlc_result *result) { delete result; }

size_t nlc_result_rows(const nlc_result *result) { return result ? result->table.rows.size() : 0; }

size_t nlc_result_cols(const nlc_result *result) { return result ? result->table.columns.size() : 0; }

const char *nlc_result_column_name(const nlc_result *result, size_t col) {
    if (!result || col >= result->table.columns.size()) {
        return nullptr;
    }
    return result->table.columns[col].c_str();
}

nlc_status nlc_result_value(const nlc_result *result, size_t row, size_t col, double *out) {
    if (!result || !out) {
        return invalid("nlc_result_value: null argument");
    }
    if (row >= result->table.rows.size() || col >= result->table.columns.size()) {
        return invalid("nlc_result_value: index out of range");
    }
    *out = result->table.rows[row][col];
    last_error.clear();
    return NLC_OK;
}

size_t nlc_result_summary_count(const nlc_result *result) {
    return result ? result->table.summary.size() : 0;
}

const char *nlc_result_summary_line(const nlc_result *result, size_t index) {
    if (!result || index >= result->table.summary.size()) {
        return nullptr;
    }
    return result->table.summary[index].c_str();
}

int nlc_result_passed(const nlc_result *result) { return result && result->table.passed ? 1 : 0; }

const char *nlc_result_csv(const nlc_result *result) { return result ? result->csv.c_str() : nullptr; }

nlc_status nlc_result_write_csv(const nlc_result *result, const char *path) {
    if (!result || !path) {
        return invalid("nlc_result_write_csv: null argument");
    }
    return guarded([&] { nlcorr::write_atomically(path, result->csv); });
}

nlc_status nlc_example_correlator(const char *state, double a, double b, double t1, double t2,
                                  const double direction_a[3], const double direction_b[3],
                                  nlc_protocol protocol, int linear, double joint[4]) {
    if (!state || !direction_a || !direction_b || !joint) {
        return invalid("nlc_example_correlator: null argument");
    }
    if (protocol != NLC_PROTOCOL_SWITCHING && protocol != NLC_PROTOCOL_ZENO) {
        return invalid("nlc_example_correlator: unknown protocol");
    }
    return guarded([&] {
        nlcorr::ExperimentConfig c;
        c.set("state", state);
        c.a = a;
        c.b = b;
        c.t1 = t1;
        c.t2 = t2;
        c.linear_mode = linear != 0;
        const nlcorr::Vec3 da{direction_a[0], direction_a[1], direction_a[2]};
        const nlcorr::Vec3 db{direction_b[0], direction_b[1], direction_b[2]};
        const nlcorr::PairSetup setup = c.pair_setup();
        const auto table = protocol == NLC_PROTOCOL_SWITCHING
                               ? nlcorr::switching_correlator(setup, da, db)
                               : nlcorr::zeno_correlator(setup, da, db);
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                joint[2 * i + j] = table.joint[i][j];
            }
        }
    });
}

} // extern "C"
