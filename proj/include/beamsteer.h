/* beamsteer C API: image-guided laser steering simulation and control.
 *
 * All entry points return bs_status; BS_OK means success. String outputs
 * follow a query pattern: call with buf == NULL (or a too-small cap) to get
 * the required size (including the NUL terminator) in *len, then call again.
 * bs_last_error() describes the most recent failure on the calling thread.
 */
#ifndef BEAMSTEER_H
#define BEAMSTEER_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bs_status {
    BS_OK = 0,
    BS_ERR_INVALID_ARGUMENT = 1,
    BS_ERR_PARSE = 2,
    BS_ERR_VALIDATION = 3,
    BS_ERR_IO = 4,
    BS_ERR_RUNTIME = 5
} bs_status;

typedef struct bs_scenario bs_scenario; /* opaque scenario configuration */
typedef struct bs_result bs_result;     /* opaque run result */

const char* bs_version(void);
const char* bs_last_error(void);

/* Scenario configs (strict key=value text; unknown keys rejected). */
bs_status bs_scenario_parse(const char* text, bs_scenario** out);
bs_status bs_scenario_load(const char* path, bs_scenario** out);
void bs_scenario_free(bs_scenario* s);
/* Canonical echo of the effective config, defaults included. */
bs_status bs_scenario_echo(const bs_scenario* s, char* buf, size_t cap, size_t* len);

/* Closed-loop runs. */
bs_status bs_scenario_run(const bs_scenario* s, bs_result** out);
void bs_result_free(bs_result* r);
int bs_result_ok(const bs_result* r);         /* 1 unless the run carries a failure tag */
int bs_result_asserts_ok(const bs_result* r); /* embedded assert_* checks */
size_t bs_result_iterations(const bs_result* r);
bs_status bs_result_status(const bs_result* r, char* buf, size_t cap, size_t* len);
bs_status bs_result_summary(const bs_result* r, char* buf, size_t cap, size_t* len);
bs_status bs_result_write_csv(const bs_result* r, const char* path);

/* Reports with run-dependent content (timings) come back as heap strings;
 * release them with bs_string_free. */
void bs_string_free(char* s);

/* Suite runner: one CSV + one summary per scenario under out_dir
 * (out_dir == NULL honors BEAMSTEER_OUT). The report has one line per
 * scenario; *exit_code is nonzero iff an expected-pass scenario failed. */
bs_status bs_suite_run(const char* manifest_path, const char* out_dir, char** report,
                       int* exit_code);

/* Invariant suites; report is one line per check. *failures counts reds. */
bs_status bs_checks_run(char** report, int* failures);

/* Control-step cost benchmarks vs the published reference timings. */
bs_status bs_bench_run(char** report);

#ifdef __cplusplus
}
#endif

#endif /* BEAMSTEER_H */
