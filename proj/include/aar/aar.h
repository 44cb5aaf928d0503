/* C interface to the aar docking simulation library. */
#ifndef AAR_H
#define AAR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#  ifdef AAR_BUILDING
#    define AAR_API __declspec(dllexport)
#  else
#    define AAR_API __declspec(dllimport)
#  endif
#else
#  define AAR_API __attribute__((visibility("default")))
#endif

typedef enum aar_status {
    AAR_OK = 0,
    AAR_ERR_ARGUMENT = 1,
    AAR_ERR_CONFIG = 2,
    AAR_ERR_IO = 3,
    AAR_ERR_DOMAIN = 4,
    AAR_ERR_BEHIND_CAMERA = 5,
    AAR_ERR_DIVERGED = 6,
    AAR_ERR_UNSTABILIZABLE = 7,
    AAR_ERR_SOLVER = 8,
    AAR_ERR_SYNTHESIS = 9,
    AAR_ERR_INTERNAL = 10
} aar_status;

typedef enum aar_controller { AAR_CONTROLLER_IBVS = 0, AAR_CONTROLLER_PBVS = 1 } aar_controller;

typedef enum aar_failure {
    AAR_FAILURE_NONE = 0,
    AAR_FAILURE_TIMEOUT = 1,
    AAR_FAILURE_OVERSHOOT = 2,
    AAR_FAILURE_VISUAL_LOSS = 3,
    AAR_FAILURE_DIVERGED = 4
} aar_failure;

typedef struct aar_outcome {
    int success;
    int crossed;
    double miss_distance;
    double closing_speed;
    double time_of_contact;
    aar_failure failure_reason;
    int closing_ok;
    double peak_error;
    size_t steps;
    size_t saturated_steps;
} aar_outcome;

typedef struct aar_batch_summary {
    size_t runs;
    size_t successes;
    size_t errors;
    double success_rate;
    double miss_mean;
    double miss_median;
    double miss_min;
    double miss_max;
} aar_batch_summary;

typedef struct aar_scenario aar_scenario;
typedef struct aar_result aar_result;
typedef struct aar_batch aar_batch;

AAR_API const char* aar_version(void);
AAR_API const char* aar_status_name(aar_status status);
/* Message of the last failing call on this thread; empty when none. */
AAR_API const char* aar_last_error(void);

AAR_API aar_status aar_scenario_default(aar_scenario** out);
AAR_API aar_status aar_scenario_load(const char* path, aar_scenario** out);
AAR_API void aar_scenario_free(aar_scenario* scenario);

AAR_API aar_status aar_scenario_set_controller(aar_scenario* scenario, aar_controller controller);
/* level: 0 off, 1 or 2 */
AAR_API aar_status aar_scenario_set_turbulence(aar_scenario* scenario, int level);
AAR_API aar_status aar_scenario_set_seed(aar_scenario* scenario, uint64_t seed);
AAR_API aar_status aar_scenario_set_bow_wave(aar_scenario* scenario, int enabled);
AAR_API aar_status aar_scenario_set_pose_error(aar_scenario* scenario, double x, double y, double z);
/* table: 1 or 2 */
AAR_API aar_status aar_scenario_set_gain_table(aar_scenario* scenario, int table);
/* Pointer stays valid until the scenario is freed. */
AAR_API aar_status aar_scenario_name(const aar_scenario* scenario, const char** name);
AAR_API aar_status aar_scenario_seed(const aar_scenario* scenario, uint64_t* seed);

AAR_API aar_status aar_scenario_run(const aar_scenario* scenario, aar_result** out);
AAR_API void aar_result_free(aar_result* result);
AAR_API aar_status aar_result_outcome(const aar_result* result, aar_outcome* out);
AAR_API aar_status aar_result_write_csv(const aar_result* result, const char* path, const char* provenance);
AAR_API aar_status aar_result_write_outcome(const aar_result* result, const char* path, const char* provenance);

AAR_API aar_status aar_batch_create(aar_batch** out);
AAR_API void aar_batch_free(aar_batch* batch);
AAR_API aar_status aar_batch_add(aar_batch* batch, uint64_t seed, const aar_result* result);
AAR_API aar_status aar_batch_add_error(aar_batch* batch, uint64_t seed, const char* message);
/* Runs every seed without keeping logs. */
AAR_API aar_status aar_batch_run(const aar_scenario* scenario, const uint64_t* seeds, size_t n, aar_batch** out);
AAR_API aar_status aar_batch_summary_get(const aar_batch* batch, aar_batch_summary* out);
AAR_API aar_status aar_batch_write_summary(const aar_batch* batch, const char* path, const char* provenance);

/* Gain synthesis report for a scenario file, a bare Riccati problem file, or the
   shipped default when path is NULL. Free the report with aar_string_free. */
AAR_API aar_status aar_synth_file(const char* path, char** report);
AAR_API void aar_string_free(char* s);

/* Row-major 2x6 interaction matrix at normalized image point (x, y) and depth z. */
AAR_API aar_status aar_interaction_matrix(double x, double y, double z, double out[12]);
/* Row-major A (n x n), B (n x m), Q (n x n), R (m x m); writes P (n x n) and K (m x n). */
AAR_API aar_status aar_solve_care(size_t n, size_t m, const double* A, const double* B, const double* Q,
                                  const double* R, double* P, double* K);

#ifdef __cplusplus
}
#endif

#endif
