// Copyright 2026 The Narrev Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the narrev library. Handles are opaque; every call that
 * can fail returns a narrev_status and records a message retrievable with
 * narrev_last_error() on the calling thread. Strings returned through out
 * parameters are owned by the caller and released with narrev_string_free().
 */

#ifndef NARREV_NARREV_H_
#define NARREV_NARREV_H_

#include <stddef.h>

#if defined(_WIN32)
#define NARREV_API __declspec(dllexport)
#else
#define NARREV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum narrev_status {
  NARREV_OK = 0,
  NARREV_INVALID_ARGUMENT = 1,
  NARREV_IO_ERROR = 2,
  NARREV_PARSE_ERROR = 3,
  NARREV_VALIDATION_ERROR = 4,
  NARREV_UNDEFINED_SCORE = 5,
  NARREV_RUNTIME_ERROR = 6,
} narrev_status;

typedef struct narrev_pipeline narrev_pipeline;
typedef struct narrev_knowledge narrev_knowledge;

NARREV_API const char *narrev_version(void);

/* Message of the last failed call on this thread; "" when none. */
NARREV_API const char *narrev_last_error(void);

NARREV_API void narrev_string_free(char *s);

/* Process exit code for a status: 0 ok, 1 validation failure, 2 runtime. */
NARREV_API int narrev_exit_code(narrev_status status);

/* Pipeline configured from a JSON document. */
NARREV_API narrev_status narrev_pipeline_create(const char *config_json,
                                                narrev_pipeline **out);
NARREV_API void narrev_pipeline_destroy(narrev_pipeline *pipeline);

/* The effective configuration as JSON. */
NARREV_API narrev_status narrev_pipeline_config(const narrev_pipeline *pipeline,
                                                char **config_json);

/* Runs one command: "validate", "seed", "bootstrap", "extract", "cloze" or
 * "stats". The JSON report is stored in *report when the command ran, even
 * if it found invalid input (NARREV_VALIDATION_ERROR). */
NARREV_API narrev_status narrev_pipeline_run(narrev_pipeline *pipeline,
                                             const char *command, char **report);

/* Event knowledge from a saved count table. */
NARREV_API narrev_status narrev_knowledge_load(const char *counts_path,
                                               narrev_knowledge **out);
NARREV_API void narrev_knowledge_destroy(narrev_knowledge *knowledge);
/* PMI at distance d (1..3). */
NARREV_API narrev_status narrev_knowledge_pmi(const narrev_knowledge *knowledge,
                                              const char *a, const char *b,
                                              int d, double *out);
/* Weighted causal potential of an observed consecutive pair. */
NARREV_API narrev_status narrev_knowledge_cp(const narrev_knowledge *knowledge,
                                             const char *a, const char *b,
                                             double *out);
/* Score of a chain of n events (3 <= n <= 5). */
NARREV_API narrev_status narrev_knowledge_chain(const narrev_knowledge *knowledge,
                                                const char *const *events,
                                                size_t n, double *out);

/* Writes a generated corpus with planted labels: JSONL documents to
 * corpus_path and "id<TAB>kind<TAB>narrative" lines to truth_path.
 * options_json may be NULL; keys: documents, paragraphs_per_document, seed. */
NARREV_API narrev_status narrev_generate_synthetic(const char *options_json,
                                                   const char *corpus_path,
                                                   const char *truth_path);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  /* NARREV_NARREV_H_ */
