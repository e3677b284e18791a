/* SPDX-License-Identifier: Apache-2.0 */
/* C interface to the transient fluid-structure solver. All handles are opaque;
 * every call that can fail returns a tdfsi_status and leaves a message for
 * tdfsi_last_error() on the calling thread. */
#ifndef TDFSI_TDFSI_H
#define TDFSI_TDFSI_H

#include <stddef.h>

#if defined(TDFSI_BUILDING_LIBRARY)
#define TDFSI_API __attribute__((visibility("default")))
#else
#define TDFSI_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tdfsi_status
{
  TDFSI_OK = 0,
  TDFSI_ERR_INVALID_ARGUMENT = 1,
  TDFSI_ERR_GEOMETRY = 2,
  TDFSI_ERR_TOPOLOGY = 3,
  TDFSI_ERR_ASSEMBLY = 4,
  TDFSI_ERR_ACCURACY = 5,
  TDFSI_ERR_SOLVER = 6,
  TDFSI_ERR_STATE = 7,
  TDFSI_ERR_IO = 8,
  TDFSI_ERR_DOMAIN = 9,
  TDFSI_ERR_INTERNAL = 10
} tdfsi_status;

typedef struct tdfsi_config tdfsi_config;
typedef struct tdfsi_result tdfsi_result;

/* Progress messages; user is passed through unchanged. */
typedef void (*tdfsi_log_fn)(const char *message, void *user);

typedef struct tdfsi_level_summary
{
  int n;
  int num_steps;
  double h;
  double dt;
  double st_err_u;
  double st_err_phi;
  double rate_u;   /* NaN on the coarsest level */
  double rate_phi; /* NaN on the coarsest level */
  double seconds;
} tdfsi_level_summary;

TDFSI_API const char *tdfsi_version(void);
TDFSI_API const char *tdfsi_status_name(tdfsi_status status);
/* Message of the last failed call on this thread; empty if none. */
TDFSI_API const char *tdfsi_last_error(void);

TDFSI_API tdfsi_status tdfsi_config_create(tdfsi_config **out);
TDFSI_API void tdfsi_config_destroy(tdfsi_config *cfg);
/* Keys as in the config file format (n, levels, dt_ratio, T, lambda, ...). */
TDFSI_API tdfsi_status tdfsi_config_set(tdfsi_config *cfg, const char *key, const char *value);
TDFSI_API tdfsi_status tdfsi_config_load_file(tdfsi_config *cfg, const char *path);
TDFSI_API tdfsi_status tdfsi_config_validate(const tdfsi_config *cfg);
/* Writes the resolved "key = value" text. *needed receives the size including
 * the terminating NUL; buf may be NULL to query it. */
TDFSI_API tdfsi_status tdfsi_config_resolved(const tdfsi_config *cfg, char *buf, size_t cap,
                                             size_t *needed);

/* Single run or study depending on whether "levels" is set. */
TDFSI_API tdfsi_status tdfsi_run(const tdfsi_config *cfg, tdfsi_log_fn log, void *user,
                                 tdfsi_result **out);
TDFSI_API void tdfsi_result_destroy(tdfsi_result *res);
TDFSI_API int tdfsi_result_num_levels(const tdfsi_result *res);
TDFSI_API tdfsi_status tdfsi_result_level(const tdfsi_result *res, int index,
                                          tdfsi_level_summary *out);

TDFSI_API tdfsi_status tdfsi_set_threads(int threads);
TDFSI_API int tdfsi_have_openmp(void);

#ifdef __cplusplus
}
#endif

#endif /* TDFSI_TDFSI_H */
