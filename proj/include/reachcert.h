/*
 * Copyright 2026 reachcert developers.
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to the reachcert library.
 *
 * Every function returns a reachcert_status. On failure the message of the
 * most recent error on the calling thread is available from
 * reachcert_last_error(). Strings returned through char** are owned by the
 * caller and released with reachcert_string_free(). Reports are JSON.
 */
#ifndef REACHCERT_H
#define REACHCERT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define REACHCERT_API __declspec(dllexport)
#else
#define REACHCERT_API __attribute__((visibility("default")))
#endif

typedef enum reachcert_status {
    REACHCERT_OK = 0,
    REACHCERT_INVALID_ARGUMENT = 1,
    REACHCERT_DIMENSION_MISMATCH = 2,
    REACHCERT_NON_FINITE = 3,
    REACHCERT_NON_CONVERGENCE = 4,
    REACHCERT_ILL_CONDITIONED = 5,
    REACHCERT_PRECONDITION = 6,
    REACHCERT_SCHEMA = 7,
    REACHCERT_NO_CERTIFICATE = 8,
    REACHCERT_INSUFFICIENT_DATA = 9,
    REACHCERT_IO = 10,
    REACHCERT_INTERNAL = 11
} reachcert_status;

typedef struct reachcert_system reachcert_system;
typedef struct reachcert_certificate reachcert_certificate;

/* Zero counts select the library defaults. Set struct_size to
 * sizeof(reachcert_options); reachcert_options_init does this. */
typedef struct reachcert_options {
    size_t struct_size;
    double unit_tol;
    double rank_tol;
    uint64_t seed;
    long long samples;
    long long horizon;
    long long trajectories;
    /* target_radius <= 0 keeps the radius from the certificate, the system
     * file, or 1 in that order. */
    double target_radius;
    const double* target_center; /* NULL or state_dim entries */
    size_t target_center_len;
    const double* x0; /* NULL or state_dim entries */
    size_t x0_len;
} reachcert_options;

REACHCERT_API void reachcert_options_init(reachcert_options* options);

REACHCERT_API const char* reachcert_version(void);
REACHCERT_API const char* reachcert_last_error(void);
REACHCERT_API const char* reachcert_status_name(reachcert_status status);
REACHCERT_API void reachcert_string_free(char* s);

/* Systems */
REACHCERT_API reachcert_status reachcert_system_from_json(const char* json,
                                                          reachcert_system** out);
REACHCERT_API reachcert_status reachcert_system_load(const char* path, reachcert_system** out);
REACHCERT_API void reachcert_system_free(reachcert_system* system);
REACHCERT_API reachcert_status reachcert_system_dim(const reachcert_system* system, int* dim);
REACHCERT_API reachcert_status reachcert_system_to_json(const reachcert_system* system,
                                                        char** json);

/* Certificates */
REACHCERT_API reachcert_status reachcert_certificate_from_json(const char* json,
                                                               reachcert_certificate** out);
REACHCERT_API reachcert_status reachcert_certificate_load(const char* path,
                                                          reachcert_certificate** out);
REACHCERT_API void reachcert_certificate_free(reachcert_certificate* cert);
REACHCERT_API reachcert_status reachcert_certificate_to_json(const reachcert_certificate* cert,
                                                             char** json);

/* Commands. `passed` may be NULL. */
REACHCERT_API reachcert_status reachcert_classify(const reachcert_system* system,
                                                  const reachcert_options* options,
                                                  char** report);
REACHCERT_API reachcert_status reachcert_certify(const reachcert_system* system,
                                                 const reachcert_options* options,
                                                 reachcert_certificate** cert, int* passed,
                                                 char** report);
REACHCERT_API reachcert_status reachcert_verify(const reachcert_system* system,
                                                const reachcert_certificate* cert,
                                                const reachcert_options* options, int* passed,
                                                char** report);
REACHCERT_API reachcert_status reachcert_simulate(const reachcert_system* system,
                                                  const reachcert_options* options,
                                                  char** report);
REACHCERT_API reachcert_status reachcert_trajectory_csv(const reachcert_system* system,
                                                        const reachcert_options* options,
                                                        char** csv);
REACHCERT_API reachcert_status reachcert_repro(const char* target,
                                               const reachcert_options* options, int* passed,
                                               char** report);

/* Solves A^T Q A - Q = -I for Schur-stable A; a and q are n x n row-major. */
REACHCERT_API reachcert_status reachcert_lyapunov(const double* a, int n, double* q);

REACHCERT_API reachcert_status reachcert_sha256_file(const char* path, char** hex);

#ifdef __cplusplus
}
#endif

#endif /* REACHCERT_H */
