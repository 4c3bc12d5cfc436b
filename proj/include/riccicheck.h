/* riccicheck: numerical verification of curvature identities, Ricci-soliton
 * equations, and Hodge self-duality for coordinate metrics.
 *
 * C API of the shared library.  All functions return rck_status; failures
 * leave a message retrievable with rck_last_error() (thread-local, valid
 * until the next failing call on the same thread).  Objects returned through
 * out-parameters are owned by the caller and released with the matching
 * _free function.
 */
#ifndef RICCICHECK_H
#define RICCICHECK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rck_status {
  RCK_OK = 0,
  RCK_ERROR_CONFIG = 1,   /* malformed or inconsistent configuration */
  RCK_ERROR_IO = 2,       /* file could not be read or written */
  RCK_ERROR_DOMAIN = 3,   /* mathematical domain error during evaluation */
  RCK_ERROR_ARGUMENT = 4, /* null handle or invalid argument */
  RCK_ERROR_INTERNAL = 5
} rck_status;

typedef struct rck_config rck_config;  /* parsed run configuration */
typedef struct rck_report rck_report;  /* results of a run or suite */

const char* rck_version(void);
const char* rck_last_error(void);

/* Configuration ----------------------------------------------------------- */

rck_status rck_config_load(const char* path, rck_config** out);
rck_status rck_config_parse(const char* text, rck_config** out);
void rck_config_free(rck_config* cfg);

rck_status rck_config_set_seed(rck_config* cfg, unsigned long long seed);
rck_status rck_config_set_tolerance(rck_config* cfg, const char* check, double tol);

/* Check catalog ------------------------------------------------------------ */

int rck_check_count(void);
/* Static strings; NULL when index is out of range. */
const char* rck_check_name(int index);
const char* rck_check_description(int index);

/* Execution ---------------------------------------------------------------- */

/* Runs every check the configuration requests. */
rck_status rck_run(const rck_config* cfg, rck_report** out);

/* Built-in reproduction suite with fixed seeds; filter may be NULL or a
 * substring of row names (e.g. "walker"). */
rck_status rck_paper_suite(const char* filter, rck_report** out);

/* Reports ------------------------------------------------------------------ */

/* 1 when every non-claim check passed, else 0. */
int rck_report_passed(const rck_report* rep);
int rck_report_check_count(const rck_report* rep);

/* machine != 0 renders the stable machine format (JSON), otherwise the
 * human-readable table.  *out is malloc'd; free with rck_string_free. */
rck_status rck_report_render(const rck_report* rep, int machine, char** out);
rck_status rck_report_write_file(const rck_report* rep, const char* path, int machine);
void rck_report_free(rck_report* rep);

void rck_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* RICCICHECK_H */
