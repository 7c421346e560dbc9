#include "qwl/qwl_c.h"

#include <exception>
#include <iostream>
#include <new>
#include <stdexcept>
#include <string>

#include "qwl/experiment.hpp"

// The handle owns a config plus the last failure message; runs are stateless
// beyond the artifacts they write.
struct qwl_experiment {
    qwl::ExperimentConfig config;
    std::string last_error;
};

namespace {

// File-level failures all carry one of these phrases (see the throw sites);
// anything else from runtime_error is an internal failure.
qwl_status classify_runtime(const std::string& message) {
    for (const char* tag : {"cannot open", "cannot write", "write failed", "cannot create"})
        if (message.find(tag) != std::string::npos) return QWL_ERROR_IO;
    return QWL_ERROR_RUNTIME;
}

// invalid_argument means "did not parse" in parsing contexts and "violates a
// guard" in run contexts, so the caller picks the mapping.
template <class Fn>
qwl_status guarded(qwl_experiment* exp, qwl_status invalid_argument_status, Fn&& fn) {
    if (exp == nullptr) return QWL_ERROR_INVALID_ARGUMENT;
    exp->last_error.clear();
    try {
        fn();
        return QWL_OK;
    } catch (const std::invalid_argument& e) {
        exp->last_error = e.what();
        return invalid_argument_status;
    } catch (const std::domain_error& e) {
        exp->last_error = e.what();
        return QWL_ERROR_RUNTIME;
    } catch (const std::runtime_error& e) {
        exp->last_error = e.what();
        return classify_runtime(exp->last_error);
    } catch (const std::bad_alloc&) {
        exp->last_error = "out of memory";
        return QWL_ERROR_RUNTIME;
    } catch (const std::exception& e) {
        exp->last_error = e.what();
        return QWL_ERROR_RUNTIME;
    } catch (...) {
        exp->last_error = "unknown failure";
        return QWL_ERROR_RUNTIME;
    }
}

}  // namespace

extern "C" {

const char* qwl_version(void) { return qwl::kToolVersion; }

const char* qwl_status_name(qwl_status status) {
    switch (status) {
        case QWL_OK: return "ok";
        case QWL_ERROR_INVALID_ARGUMENT: return "invalid_argument";
        case QWL_ERROR_PARSE: return "parse_error";
        case QWL_ERROR_VALIDATION: return "validation_error";
        case QWL_ERROR_IO: return "io_error";
        case QWL_ERROR_RUNTIME: return "runtime_error";
    }
    return "unknown_status";
}

qwl_status qwl_experiment_create(const char* config_path, qwl_experiment** out) {
    if (out == nullptr) return QWL_ERROR_INVALID_ARGUMENT;
    *out = nullptr;
    qwl_experiment* exp = new (std::nothrow) qwl_experiment();
    if (exp == nullptr) return QWL_ERROR_RUNTIME;
    *out = exp;
    if (config_path == nullptr) return QWL_OK;
    const std::string path(config_path);
    return guarded(exp, QWL_ERROR_PARSE, [&] { exp->config = qwl::load_config(path); });
}

qwl_status qwl_experiment_set(qwl_experiment* exp, const char* key, const char* value) {
    if (exp == nullptr) return QWL_ERROR_INVALID_ARGUMENT;
    if (key == nullptr || value == nullptr) {
        exp->last_error = "key and value must be non-null";
        return QWL_ERROR_INVALID_ARGUMENT;
    }
    const std::string k(key), v(value);
    return guarded(exp, QWL_ERROR_PARSE, [&] { qwl::apply_config_entry(exp->config, k, v); });
}

const char* qwl_experiment_last_error(const qwl_experiment* exp) {
    return exp == nullptr ? "" : exp->last_error.c_str();
}

qwl_status qwl_experiment_run_exact(qwl_experiment* exp) {
    return guarded(exp, QWL_ERROR_VALIDATION, [&] { qwl::run_exact_experiment(exp->config); });
}

qwl_status qwl_experiment_run_wl(qwl_experiment* exp) {
    return guarded(exp, QWL_ERROR_VALIDATION, [&] { qwl::run_wl_experiment(exp->config); });
}

qwl_status qwl_experiment_run_metropolis(qwl_experiment* exp) {
    return guarded(exp, QWL_ERROR_VALIDATION,
                   [&] { qwl::run_metropolis_experiment(exp->config, 0); });
}

qwl_status qwl_experiment_run_compare(qwl_experiment* exp) {
    return guarded(exp, QWL_ERROR_VALIDATION, [&] { qwl::run_compare_experiment(exp->config); });
}

qwl_status qwl_experiment_validate(qwl_experiment* exp, int* failed_checks) {
    if (exp != nullptr && failed_checks == nullptr) {
        exp->last_error = "failed_checks must be non-null";
        return QWL_ERROR_INVALID_ARGUMENT;
    }
    return guarded(exp, QWL_ERROR_VALIDATION, [&] {
        // Battery lines go to stdout; the caller keeps the count.
        *failed_checks = qwl::run_validation_battery(exp->config, std::cout);
    });
}

void qwl_experiment_destroy(qwl_experiment* exp) { delete exp; }

}  // extern "C"
