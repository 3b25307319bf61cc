/* Copyright 2026 The bcsse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BCSSE_BCSSE_H_
#define BCSSE_BCSSE_H_

/* C interface to libbcsse.
 *
 * Every call returns a bcsse_status. Text results are returned through a
 * char** out parameter as a NUL-terminated string owned by the caller and
 * released with bcsse_free. On failure *out is left NULL and
 * bcsse_last_error() describes the failure on the calling thread. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BCSSE_API __declspec(dllexport)
#else
#define BCSSE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bcsse_status {
  BCSSE_OK = 0,
  BCSSE_E_PARAM = 1,
  BCSSE_E_AUTH = 2,
  BCSSE_E_PAYLOAD_TOO_LARGE = 3,
  BCSSE_E_NOT_FOUND = 4,
  BCSSE_E_CORRUPT_CHAIN = 5,
  BCSSE_E_INTEGRITY = 6,
  BCSSE_E_FUNDING = 7,
  BCSSE_E_TIMEOUT = 8,
  BCSSE_E_CANNOT_ABORT = 9,
  BCSSE_E_CONFIG = 10,
  BCSSE_E_CLAIM_REJECTED = 11,
  BCSSE_E_REJECTED = 12,
  BCSSE_E_VALIDATION = 13,
  BCSSE_E_IO = 14,
  BCSSE_E_LOCKED = 15,
  BCSSE_E_ABORTED = 16,
  BCSSE_E_INTERNAL = 100
} bcsse_status;

typedef struct bcsse_workspace bcsse_workspace;

BCSSE_API const char* bcsse_version(void);
BCSSE_API const char* bcsse_status_str(bcsse_status status);
/* Message of the last failure on this thread; "" if none. */
BCSSE_API const char* bcsse_last_error(void);
BCSSE_API void bcsse_free(char* text);

/* Opens (creating if needed) the workspace directory at `path` and takes
 * its lock. `options` holds n_options "name=value" strings with the same
 * names as the command-line flags (seed, scheme, iota, p-bits,
 * security-bits, max-delay, fee, faucet); they override environment
 * variables and the workspace config file. */
BCSSE_API bcsse_status bcsse_workspace_open(const char* path, const char* const* options, size_t n_options,
                                            bcsse_workspace** out);
BCSSE_API void bcsse_workspace_close(bcsse_workspace* ws);

BCSSE_API bcsse_status bcsse_keygen(bcsse_workspace* ws, char** out);
/* `manifest` may be NULL. */
BCSSE_API bcsse_status bcsse_ingest(bcsse_workspace* ws, const char* dir, const char* manifest, char** out);
/* `scheme` is "A", "B" or NULL for the configured scheme. */
BCSSE_API bcsse_status bcsse_index(bcsse_workspace* ws, const char* scheme, char** out);
/* `deadline` is an absolute clock value or "+D" ticks from now. */
BCSSE_API bcsse_status bcsse_ask(bcsse_workspace* ws, const char* keyword, uint64_t deposit, const char* deadline,
                                 char** out);
BCSSE_API bcsse_status bcsse_fulfill(bcsse_workspace* ws, const char* offer, char** out);
BCSSE_API bcsse_status bcsse_refund(bcsse_workspace* ws, const char* offer, char** out);
BCSSE_API bcsse_status bcsse_abort(bcsse_workspace* ws, const char* offer, char** out);
BCSSE_API bcsse_status bcsse_mine(bcsse_workspace* ws, uint64_t blocks, char** out);
/* `txid` (hex) may be NULL to list every transaction. */
BCSSE_API bcsse_status bcsse_inspect(bcsse_workspace* ws, const char* txid, char** out);
BCSSE_API bcsse_status bcsse_decrypt(bcsse_workspace* ws, const char* offer, char** out);
/* Runs a party script on a fresh in-memory ledger; *out is the JSON-lines
 * transcript. */
BCSSE_API bcsse_status bcsse_run_scenario(bcsse_workspace* ws, const char* script, char** out);

/* Tab-separated benchmark table. `pair_counts` is a comma-separated list
 * or NULL for 100,200,400,800. Needs no workspace. */
BCSSE_API bcsse_status bcsse_bench(const char* pair_counts, char** out);

#ifdef __cplusplus
}
#endif

#endif /* BCSSE_BCSSE_H_ */
