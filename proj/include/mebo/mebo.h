/* C interface to the mebo outlier recognizer.
 *
 * Every object is an opaque handle released by its matching *_free function.
 * Functions that can fail return a mebo_status; on failure the thread's last
 * error message is available from mebo_last_error(). Pointers returned by
 * accessors stay valid until the owning handle is freed.
 */
#ifndef MEBO_H
#define MEBO_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MEBO_BUILDING)
#    define MEBO_API __declspec(dllexport)
#  else
#    define MEBO_API __declspec(dllimport)
#  endif
#else
#  define MEBO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mebo_status {
    MEBO_OK = 0,
    MEBO_ERR_INVALID_PARAMS = 1,
    MEBO_ERR_DEGENERATE_DATASET = 2,
    MEBO_ERR_EMPTY_SUBSET = 3,
    MEBO_ERR_OUT_OF_RANGE = 4,
    MEBO_ERR_INSTANCE_TOO_LARGE = 5,
    MEBO_ERR_SPEC_INFEASIBLE = 6,
    MEBO_ERR_INVALID_ARGUMENT = 7,
    MEBO_ERR_PARSE = 8,
    MEBO_ERR_IO = 9,
    MEBO_ERR_INTERNAL = 10
} mebo_status;

typedef struct mebo_dataset mebo_dataset;
typedef struct mebo_labels mebo_labels;
typedef struct mebo_result mebo_result;
typedef struct mebo_peel_result mebo_peel_result;

typedef struct mebo_params {
    double gamma;
    double epsilon;
    double delta;
    double mu;
    uint64_t meb_iters; /* 0 selects ceil(1/epsilon^2) */
    uint64_t forest_size;
    uint64_t sequential_rounds;
    uint64_t seed;
    uint32_t threads;
} mebo_params;

typedef struct mebo_derived {
    uint64_t height;
    uint64_t top_k;
    uint64_t sample_size;
    uint64_t inliers;
    uint64_t meb_iters;
} mebo_derived;

typedef struct mebo_f1 {
    double precision;
    double recall;
    double f1;
    int empty_prediction;
} mebo_f1;

MEBO_API const char* mebo_version(void);
MEBO_API const char* mebo_status_string(mebo_status status);
MEBO_API const char* mebo_last_error(void);

MEBO_API void mebo_params_init(mebo_params* params);
/* Range checks that need no data. With for_peeling set, gamma may be 0 and
 * the (1+delta)*gamma < 1 bound is not applied. */
MEBO_API mebo_status mebo_params_validate(const mebo_params* params, int for_peeling);
MEBO_API mebo_status mebo_derive_params(const mebo_params* params, size_t n, mebo_derived* out);

/* Datasets: dense row-major n x d. */
MEBO_API mebo_status mebo_dataset_create(const double* values, size_t n, size_t d, mebo_dataset** out);
MEBO_API mebo_status mebo_dataset_read_csv(const char* path, mebo_dataset** out);
MEBO_API mebo_status mebo_dataset_write_csv(const mebo_dataset* ds, const char* path);
MEBO_API size_t mebo_dataset_size(const mebo_dataset* ds);
MEBO_API size_t mebo_dataset_dim(const mebo_dataset* ds);
MEBO_API const double* mebo_dataset_values(const mebo_dataset* ds);
MEBO_API void mebo_dataset_free(mebo_dataset* ds);

/* Labels: 0 = outlier, j >= 1 = inlier class j. */
MEBO_API mebo_status mebo_labels_create(const int32_t* values, size_t n, mebo_labels** out);
MEBO_API mebo_status mebo_labels_read_csv(const char* path, mebo_labels** out);
MEBO_API mebo_status mebo_labels_write_csv(const mebo_labels* labels, const char* path);
MEBO_API size_t mebo_labels_size(const mebo_labels* labels);
MEBO_API const int32_t* mebo_labels_values(const mebo_labels* labels);
MEBO_API void mebo_labels_free(mebo_labels* labels);

/* Synthetic data with ground truth. */
MEBO_API mebo_status mebo_generate_toy2d(uint64_t seed, mebo_dataset** points, mebo_labels** labels);
MEBO_API mebo_status mebo_generate_highdim(size_t n, size_t d, double gamma, uint64_t seed, mebo_dataset** points,
                                           mebo_labels** labels);
MEBO_API mebo_status mebo_generate_multiclass(size_t n, size_t d, const double* fractions, size_t classes,
                                              double gamma, uint64_t seed, mebo_dataset** points,
                                              mebo_labels** labels);

/* Single-ball recognition. */
MEBO_API mebo_status mebo_recognize(const mebo_dataset* ds, const mebo_params* params, mebo_result** out);
MEBO_API size_t mebo_result_dim(const mebo_result* r);
MEBO_API const double* mebo_result_center(const mebo_result* r);
MEBO_API double mebo_result_radius(const mebo_result* r);
MEBO_API size_t mebo_result_inlier_count(const mebo_result* r);
MEBO_API const size_t* mebo_result_inliers(const mebo_result* r);
MEBO_API double mebo_result_score(const mebo_result* r);
MEBO_API size_t mebo_result_candidates(const mebo_result* r);
MEBO_API void mebo_result_derived(const mebo_result* r, mebo_derived* out);
MEBO_API void mebo_result_free(mebo_result* r);

/* Greedy peeling over several inlier classes. Class results are owned by the
 * peel result and must not be freed individually. */
MEBO_API mebo_status mebo_peel(const mebo_dataset* ds, const double* fractions, size_t classes,
                               const mebo_params* params, mebo_peel_result** out);
MEBO_API size_t mebo_peel_result_classes(const mebo_peel_result* r);
MEBO_API const mebo_result* mebo_peel_result_class(const mebo_peel_result* r, size_t j);
MEBO_API void mebo_peel_result_free(mebo_peel_result* r);

/* Evaluation against ground truth. */
MEBO_API mebo_status mebo_f1_score(const size_t* predicted, size_t predicted_count, const size_t* truth,
                                   size_t truth_count, size_t n, mebo_f1* out);
/* Best one-to-one pairing of predicted classes with labels 1..L. matched_label
 * and per_class hold `classes` entries; a 0 label means unmatched. */
MEBO_API mebo_status mebo_match_classes(const size_t* const* predicted, const size_t* sizes, size_t classes,
                                        const mebo_labels* labels, int32_t* matched_label, mebo_f1* per_class,
                                        double* average_f1);

#ifdef __cplusplus
}
#endif

#endif /* MEBO_H */
