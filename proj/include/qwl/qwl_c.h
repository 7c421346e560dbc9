/* C interface to the quantum Wang-Landau toolkit. All entry points are
 * exception-free; failures come back as status codes with a per-handle
 * message available through qwl_experiment_last_error. */
#ifndef QWL_C_H
#define QWL_C_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qwl_experiment qwl_experiment;

typedef enum qwl_status {
    QWL_OK = 0,
    QWL_ERROR_INVALID_ARGUMENT = 1, /* null handle / bad call arguments */
    QWL_ERROR_PARSE = 2,            /* config file or override did not parse */
    QWL_ERROR_VALIDATION = 3,       /* config violates a module guard */
    QWL_ERROR_IO = 4,               /* artifact or config file I/O failed */
    QWL_ERROR_RUNTIME = 5           /* internal failure while running */
} qwl_status;

const char *qwl_version(void);
const char *qwl_status_name(qwl_status status);

/* Allocates a handle. config_path may be NULL for built-in defaults; when a
 * path is given and fails to load, the handle is still returned (so the
 * message can be read) and the status reports the failure. */
qwl_status qwl_experiment_create(const char *config_path, qwl_experiment **out);

/* Applies one "section.key" override with a textual value. */
qwl_status qwl_experiment_set(qwl_experiment *exp, const char *key, const char *value);

/* Message for the most recent failing call on this handle; empty if none. */
const char *qwl_experiment_last_error(const qwl_experiment *exp);

qwl_status qwl_experiment_run_exact(qwl_experiment *exp);
qwl_status qwl_experiment_run_wl(qwl_experiment *exp);
qwl_status qwl_experiment_run_metropolis(qwl_experiment *exp);
qwl_status qwl_experiment_run_compare(qwl_experiment *exp);

/* Runs the consistency battery; *failed_checks receives the failure count. */
qwl_status qwl_experiment_validate(qwl_experiment *exp, int *failed_checks);

void qwl_experiment_destroy(qwl_experiment *exp);

#ifdef __cplusplus
}
#endif

#endif /* QWL_C_H */
