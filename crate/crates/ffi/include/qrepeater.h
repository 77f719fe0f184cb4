#ifndef QREPEATER_H
#define QREPEATER_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define QR_LEVEL_G 0

#define QR_LEVEL_E 1

#define QR_LEVEL_F 2

#define QR_LABEL_PSI 0

#define QR_LABEL_PSI_P 1

#define QR_LABEL_PSI_PP 2

#define QR_LABEL_PSI_PPP 3

/**
 * Number of stage-one coefficients written by [`qr_stage_one_coefficients`].
 */
#define QR_STAGE_ONE_LEN 13

/**
 * Number of stage-two coefficients written by [`qr_stage_two_coefficients`].
 */
#define QR_STAGE_TWO_LEN 6

/**
 * Number of two-atom amplitudes written by [`qr_final_pair_amplitudes`].
 */
#define QR_PAIR_LEN 9

typedef enum QrStatus {
  QR_STATUS_OK = 0,
  QR_STATUS_NULL_POINTER = 1,
  QR_STATUS_INVALID_ARGUMENT = 2,
  QR_STATUS_ZERO_NORM = 3,
  QR_STATUS_DEGENERATE_DENOMINATOR = 4,
  QR_STATUS_CONVERGENCE_FAILURE = 5,
  QR_STATUS_NOT_NORMALIZED = 6,
  QR_STATUS_CAPACITY = 7,
  QR_STATUS_PANIC = 8,
  QR_STATUS_OTHER = 9,
} QrStatus;

/**
 * Opaque result of a full protocol run.
 */
typedef struct QrFinalPair QrFinalPair;

/**
 * Opaque model parameters (couplings, detunings, dissipations).
 */
typedef struct QrParams QrParams;

typedef struct QrComplex {
  double re;
  double im;
} QrComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static description of a status code. Unknown codes get a generic text.
 * Never null.
 */
const char *qr_status_message(int32_t status);

/**
 * Detail message of the last failure on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *qr_last_error_message(void);

/**
 * Library version as a NUL-terminated string.
 */
const char *qr_version(void);

/**
 * Create a parameter handle. Release it with [`qr_params_free`].
 *
 * # Safety
 * `out` must be null or valid for writing one pointer.
 */
enum QrStatus qr_params_new(double g1,
                            double g2,
                            double detuning_a,
                            double detuning_b,
                            double dissipation_a,
                            double dissipation_b,
                            struct QrParams **out);

/**
 * # Safety
 * `params` must be null or a handle from [`qr_params_new`] not yet freed.
 */
void qr_params_free(struct QrParams *params);

/**
 * The two effective complex rates.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum QrStatus qr_params_rates(const struct QrParams *params,
                              struct QrComplex *rate_a,
                              struct QrComplex *rate_b);

/**
 * Write the 13 stage-one coefficients at time `t` into `out`.
 *
 * # Safety
 * `out` must hold [`QR_STAGE_ONE_LEN`] elements.
 */
enum QrStatus qr_stage_one_coefficients(const struct QrParams *params,
                                        double t,
                                        struct QrComplex *out);

/**
 * Write the 6 stage-two coefficients of case `case_index` (1..=8).
 *
 * # Safety
 * `out` must hold [`QR_STAGE_TWO_LEN`] elements.
 */
enum QrStatus qr_stage_two_coefficients(const struct QrParams *params,
                                        uint8_t case_index,
                                        double t,
                                        double tau,
                                        struct QrComplex *out);

/**
 * Stage-one labels of numbered case `case_index` (1..=8).
 *
 * # Safety
 * `left` and `right` must be valid for writing.
 */
enum QrStatus qr_case_labels(uint8_t case_index, uint32_t *left, uint32_t *right);

/**
 * Run both stages for the case made of stage-one labels `left` and
 * `right`, post-selecting the middle atoms on (`outcome_a`, `outcome_b`).
 * Release the result with [`qr_final_pair_free`].
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writing one pointer.
 */
enum QrStatus qr_run_protocol(const struct QrParams *params,
                              uint32_t left,
                              uint32_t right,
                              uint32_t outcome_a,
                              uint32_t outcome_b,
                              double t,
                              double tau,
                              struct QrFinalPair **out);

/**
 * # Safety
 * `pair` must be null or a handle from [`qr_run_protocol`] not yet freed.
 */
void qr_final_pair_free(struct QrFinalPair *pair);

/**
 * Negativity of the final pair.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum QrStatus qr_final_pair_negativity(const struct QrFinalPair *pair, double *out);

/**
 * Weight of the selected outcome relative to all stage-two branches.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum QrStatus qr_final_pair_success_probability(const struct QrFinalPair *pair, double *out);

/**
 * Weight of the selected outcome including the stage-one post-selection.
 *
 * # Safety
 * Pointers must be null or valid.
 */
enum QrStatus qr_final_pair_absolute_probability(const struct QrFinalPair *pair, double *out);

/**
 * Normalized two-atom amplitudes, index `3*x + y` for levels x, y.
 *
 * # Safety
 * `out` must hold [`QR_PAIR_LEN`] elements.
 */
enum QrStatus qr_final_pair_amplitudes(const struct QrFinalPair *pair, struct QrComplex *out);

/**
 * Negativity of `a|xy> + b|yx>` for distinct x, y.
 *
 * # Safety
 * `out` must be null or valid.
 */
enum QrStatus qr_negativity_sector(struct QrComplex a, struct QrComplex b, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QREPEATER_H */
