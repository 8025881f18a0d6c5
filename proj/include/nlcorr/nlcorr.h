/*
 * nlcorr C interface. All handles are opaque; functions that can fail return
 * an nlc_status and leave a message retrievable with nlc_last_error() on the
 * calling thread.
 */
#ifndef NLCORR_NLCORR_H
#define NLCORR_NLCORR_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(NLCORR_BUILDING)
#    define NLC_API __declspec(dllexport)
#  else
#    define NLC_API __declspec(dllimport)
#  endif
#else
#  define NLC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nlc_status {
    NLC_OK = 0,
    NLC_ERR_CONFIG = 1,
    NLC_ERR_NUMERICAL = 2,
    NLC_ERR_DOMAIN = 3,
    NLC_ERR_DIMENSION = 4,
    NLC_ERR_IO = 5,
    NLC_ERR_INVALID_ARGUMENT = 6,
    NLC_ERR_INTERNAL = 7
} nlc_status;

typedef enum nlc_protocol {
    NLC_PROTOCOL_SWITCHING = 0,
    NLC_PROTOCOL_ZENO = 1
} nlc_protocol;

typedef struct nlc_config nlc_config;
typedef struct nlc_result nlc_result;

NLC_API const char *nlc_version(void);
/* Message of the last failure on this thread; empty after success. */
NLC_API const char *nlc_last_error(void);
NLC_API const char *nlc_status_name(nlc_status status);

/* Configuration: flat key/value pairs. */
NLC_API nlc_status nlc_config_create(nlc_config **out);
NLC_API void nlc_config_destroy(nlc_config *config);
NLC_API nlc_status nlc_config_set(nlc_config *config, const char *key, const char *value);
NLC_API nlc_status nlc_config_load_file(nlc_config *config, const char *path);
/* Value of `key` if it was set, otherwise NULL. Valid until the next set. */
NLC_API const char *nlc_config_get(const nlc_config *config, const char *key);
NLC_API size_t nlc_config_key_count(void);
NLC_API const char *nlc_config_key_name(size_t index);

/* Experiments. */
NLC_API size_t nlc_experiment_count(void);
NLC_API const char *nlc_experiment_name(size_t index);
NLC_API nlc_status nlc_run(const char *experiment, const nlc_config *config, nlc_result **out);

NLC_API void nlc_result_destroy(nlc_result *result);
NLC_API size_t nlc_result_rows(const nlc_result *result);
NLC_API size_t nlc_result_cols(const nlc_result *result);
NLC_API const char *nlc_result_column_name(const nlc_result *result, size_t col);
NLC_API nlc_status nlc_result_value(const nlc_result *result, size_t row, size_t col, double *out);
NLC_API size_t nlc_result_summary_count(const nlc_result *result);
NLC_API const char *nlc_result_summary_line(const nlc_result *result, size_t index);
/* 1 when every tolerance check of the experiment held, else 0. */
NLC_API int nlc_result_passed(const nlc_result *result);
/* Full CSV text (metadata, header, rows). Owned by the result. */
NLC_API const char *nlc_result_csv(const nlc_result *result);
NLC_API nlc_status nlc_result_write_csv(const nlc_result *result, const char *path);

/*
 * Joint outcome probabilities of the two-spin example with
 * H_k = strength_k <sigma_z>^2 / 2 (or strength_k sigma_z when `linear` is
 * non-zero). `state` is "singlet", "paper-state" or four comma-separated
 * amplitudes. joint[2*i + j]: outcome i on spin 1, j on spin 2, index 0 = +1.
 */
NLC_API nlc_status nlc_example_correlator(const char *state, double a, double b, double t1,
                                          double t2, const double direction_a[3],
                                          const double direction_b[3], nlc_protocol protocol,
                                          int linear, double joint[4]);

#ifdef __cplusplus
}
#endif

#endif
