#ifndef PUSHOPT_PUSHOPT_H
#define PUSHOPT_PUSHOPT_H

/* C interface to the pushopt library: evolved Push programs used as
 * black-box optimisers. All objects are opaque handles owned by the caller
 * and released with the matching *_free function. Every fallible call
 * returns a pushopt_status; on failure pushopt_last_error() describes the
 * cause until the next call on the same thread. Strings returned through
 * char** out-parameters are released with pushopt_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PUSHOPT_BUILDING)
#    define PUSHOPT_API __declspec(dllexport)
#  else
#    define PUSHOPT_API __declspec(dllimport)
#  endif
#else
#  define PUSHOPT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pushopt_status {
  PUSHOPT_OK = 0,
  PUSHOPT_ERR_INVALID_ARGUMENT = 1,
  PUSHOPT_ERR_PARSE = 2,
  PUSHOPT_ERR_CONFIG = 3,
  PUSHOPT_ERR_IO = 4,
  PUSHOPT_ERR_UNSUPPORTED_FUNCTION = 5,
  PUSHOPT_ERR_EMPTY_POOL = 6,
  PUSHOPT_ERR_INTERNAL = 7
} pushopt_status;

typedef struct pushopt_program pushopt_program;
typedef struct pushopt_problem pushopt_problem;
typedef struct pushopt_pool pushopt_pool;
typedef struct pushopt_result pushopt_result;

typedef struct pushopt_run_options {
  size_t swarm_size;
  size_t moves;
  size_t execution_limit;
  uint64_t seed;
  /* Nonzero keeps one record per member-move for pushopt_result_trajectory_csv. */
  int record_trajectory;
} pushopt_run_options;

PUSHOPT_API const char* pushopt_version(void);
PUSHOPT_API const char* pushopt_status_name(pushopt_status status);
/* Message for the last failed call on this thread; "" when none. */
PUSHOPT_API const char* pushopt_last_error(void);
PUSHOPT_API void pushopt_string_free(char* s);

/* Programs use the parenthesised text form, e.g. "(vector.rand vector.+)". */
PUSHOPT_API pushopt_status pushopt_program_parse(const char* text, pushopt_program** out);
PUSHOPT_API pushopt_status pushopt_program_load(const char* path, pushopt_program** out);
PUSHOPT_API pushopt_status pushopt_program_print(const pushopt_program* program, char** out);
PUSHOPT_API size_t pushopt_program_size(const pushopt_program* program);
PUSHOPT_API void pushopt_program_free(pushopt_program* program);

/* A benchmark function ("F1", "F9", "F12", "F13", "F14") without instance transform. */
PUSHOPT_API pushopt_status pushopt_problem_create(const char* function, size_t dim, uint64_t function_seed,
                                                  pushopt_problem** out);
/* A problem descriptor in JSON; a random transform is drawn as repeat `repeat` under `seed`. */
PUSHOPT_API pushopt_status pushopt_problem_from_json(const char* descriptor, uint64_t seed, size_t repeat,
                                                     pushopt_problem** out);
PUSHOPT_API size_t pushopt_problem_dim(const pushopt_problem* problem);
/* lo and hi must each hold pushopt_problem_dim() values. */
PUSHOPT_API pushopt_status pushopt_problem_bounds(const pushopt_problem* problem, double* lo, double* hi);
PUSHOPT_API pushopt_status pushopt_problem_evaluate(const pushopt_problem* problem, const double* x, size_t n,
                                                    double* error);
PUSHOPT_API void pushopt_problem_free(pushopt_problem* problem);

PUSHOPT_API void pushopt_run_options_default(pushopt_run_options* options);
PUSHOPT_API pushopt_status pushopt_run(const pushopt_program* program, const pushopt_problem* problem,
                                       const pushopt_run_options* options, pushopt_result** out);

PUSHOPT_API pushopt_status pushopt_pool_create(pushopt_pool** out);
PUSHOPT_API pushopt_status pushopt_pool_add(pushopt_pool* pool, const pushopt_program* program, double fitness);
PUSHOPT_API size_t pushopt_pool_size(const pushopt_pool* pool);
PUSHOPT_API void pushopt_pool_free(pushopt_pool* pool);
/* persistent == 0 draws a program per member and move; nonzero fixes one per member. */
PUSHOPT_API pushopt_status pushopt_run_hybrid(const pushopt_pool* pool, const pushopt_problem* problem,
                                              const pushopt_run_options* options, int persistent,
                                              pushopt_result** out);

PUSHOPT_API double pushopt_result_pbest(const pushopt_result* result);
PUSHOPT_API size_t pushopt_result_evaluations(const pushopt_result* result);
PUSHOPT_API size_t pushopt_result_trajectory_size(const pushopt_result* result);
/* out must hold pushopt_problem_dim() values of the problem that was run. */
PUSHOPT_API pushopt_status pushopt_result_pbest_point(const pushopt_result* result, double* out, size_t n);
PUSHOPT_API pushopt_status pushopt_result_trajectory_csv(const pushopt_result* result, char** out);
PUSHOPT_API void pushopt_result_free(pushopt_result* result);

/* Runs a workflow command ("evolve", "run", "hybrid", "usage", "simplify",
 * "reevaluate") from a JSON request and writes its outputs plus a manifest.
 * On success *manifest (if non-null) receives the manifest JSON. */
PUSHOPT_API pushopt_status pushopt_command(const char* command, const char* request, char** manifest);
/* Re-runs a manifest; out_dir may be null to reuse the recorded output paths. */
PUSHOPT_API pushopt_status pushopt_replay(const char* manifest_path, const char* out_dir, char** manifest);

#ifdef __cplusplus
}
#endif

#endif
