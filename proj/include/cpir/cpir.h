/* SPDX-License-Identifier: Apache-2.0 */

/* C interface to the coded PIR engine. Handles are opaque; every fallible
 * call returns a cpir_status and, on failure, leaves a message retrievable
 * through cpir_last_error() on the calling thread. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * cpir_string_free(). Record, server and theta indices are 1-based. */

#ifndef CPIR_H
#define CPIR_H

#include <stdint.h>

#if defined(_WIN32)
#  if defined(CPIR_BUILDING)
#    define CPIR_API __declspec(dllexport)
#  else
#    define CPIR_API __declspec(dllimport)
#  endif
#else
#  define CPIR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Values mirror cpir::ErrorCode. */
typedef enum cpir_status {
  CPIR_OK = 0,
  CPIR_DIVISION_BY_ZERO = 1,
  CPIR_DIM_ERROR = 2,
  CPIR_SINGULAR = 3,
  CPIR_FIELD_TOO_SMALL = 4,
  CPIR_BAD_INDEX_SET = 5,
  CPIR_UNSUPPORTED_REGIME = 6,
  CPIR_BAD_CALL = 7,
  CPIR_INTERNAL_INVARIANT = 8,
  CPIR_BAD_QUERY = 9,
  CPIR_UNDECODABLE = 10,
  CPIR_TOO_LARGE = 11,
  CPIR_ENCODE_ERROR = 12,
  CPIR_DECODE_ERROR = 13,
  CPIR_CONNECT_ERROR = 14,
  CPIR_IO_ERROR = 15,
  CPIR_BAD_ARGUMENT = 16,
  CPIR_PROTOCOL_ERROR = 17,
  CPIR_UNKNOWN = 99
} cpir_status;

typedef struct cpir_scheme cpir_scheme;
typedef struct cpir_database cpir_database;
typedef struct cpir_transcript cpir_transcript;

CPIR_API const char* cpir_status_name(cpir_status s);
/* Message of the last failed call on this thread; "" if none. */
CPIR_API const char* cpir_last_error(void);
CPIR_API void cpir_string_free(char* s);

/* modulus 0 selects the default prime. */
CPIR_API cpir_status cpir_scheme_new(int64_t m, int64_t n, int64_t k, uint64_t modulus, cpir_scheme** out);
/* Reads a params file (as written by cpir_scheme_params_json). */
CPIR_API cpir_status cpir_scheme_load(const char* path, cpir_scheme** out);
CPIR_API void cpir_scheme_free(cpir_scheme* s);
CPIR_API cpir_status cpir_scheme_params_json(const cpir_scheme* s, char** out);
CPIR_API cpir_status cpir_scheme_save(const cpir_scheme* s, const char* path);
/* Constraint report; *pass is 1 iff every check holds. */
CPIR_API cpir_status cpir_scheme_verify(const cpir_scheme* s, int* pass, char** report_json);

/* Uniform random records from `seed`. The database keeps a copy of the scheme. */
CPIR_API cpir_status cpir_database_generate(const cpir_scheme* s, uint64_t seed, cpir_database** out);
/* The loaded database carries the Vandermonde scheme for its stored (M,N,K,p). */
CPIR_API cpir_status cpir_database_load(const char* path, cpir_database** out);
CPIR_API void cpir_database_free(cpir_database* db);
CPIR_API cpir_status cpir_database_save(const cpir_database* db, const char* path);
/* Writes share_<i>.json for i = 1..N into `dir`. */
CPIR_API cpir_status cpir_database_write_shares(const cpir_database* db, const char* dir);
/* Copy of the scheme the database was built or loaded with. */
CPIR_API cpir_status cpir_database_scheme(const cpir_database* db, cpir_scheme** out);

/* In-process retrieval. The scheme must share (M,N,K,p) with the database. */
CPIR_API cpir_status cpir_retrieve(const cpir_scheme* s, const cpir_database* db, uint32_t theta, uint64_t seed,
                                   cpir_transcript** out);
/* `endpoints` is "host:port,host:port,..." with server i at position i. */
CPIR_API cpir_status cpir_remote_retrieve(const cpir_scheme* s, const char* endpoints, uint32_t theta,
                                          uint64_t seed, cpir_transcript** out);
CPIR_API void cpir_transcript_free(cpir_transcript* t);
CPIR_API cpir_status cpir_transcript_json(const cpir_transcript* t, char** out);
CPIR_API cpir_status cpir_transcript_save(const cpir_transcript* t, const char* path);
/* Observed metrics against theory. */
CPIR_API cpir_status cpir_transcript_metrics(const cpir_transcript* t, int* pass, char** report_json);
/* *match is 1 iff the decoded record equals record theta of `db`. */
CPIR_API cpir_status cpir_transcript_matches(const cpir_transcript* t, const cpir_database* db, int* match);

/* Rank conditions for every theta and the privacy check; report JSON is
 * {"ranks": {...}, "privacy": {"mode": ..., "pass": ...}}. */
CPIR_API cpir_status cpir_audit(const cpir_scheme* s, uint64_t seed, int* pass, char** report_json);

/* Golden comparison of Examples 1-3; NULL dir selects the installed data. */
CPIR_API cpir_status cpir_verify_examples(const char* dir, int* pass, char** report_json);

typedef void (*cpir_ready_fn)(uint16_t port, void* user);
/* Serves one share until the process ends. expected_id 0 skips the check
 * that the share belongs to that server. `ready` fires once listening. */
CPIR_API cpir_status cpir_serve(const char* share_path, uint16_t port, uint32_t expected_id, cpir_ready_fn ready,
                                void* user);

#ifdef __cplusplus
}
#endif

#endif /* CPIR_H */
