#ifndef OCTABILL_H
#define OCTABILL_H

/* Generated by cbindgen. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ObOp {
  OB_OP_ADD = 0,
  OB_OP_SUB = 1,
  OB_OP_MUL = 2,
  OB_OP_DIV = 3,
} ObOp;

typedef enum ObStatus {
  OB_STATUS_OK = 0,
  OB_STATUS_NULL_POINTER = 1,
  OB_STATUS_PARSE = 2,
  OB_STATUS_DIVISION_BY_ZERO = 3,
  OB_STATUS_UNDEFINED_ON_LINE = 4,
  OB_STATUS_INSIDE_TABLE = 5,
  OB_STATUS_ON_CELL_BOUNDARY = 6,
  OB_STATUS_OUTSIDE_DOMAIN = 7,
  OB_STATUS_CAP_EXCEEDED = 8,
  OB_STATUS_INVALID = 9,
  OB_STATUS_BUFFER_TOO_SMALL = 10,
  OB_STATUS_PANIC = 11,
} ObStatus;

/**
 * The compressed octagon system with its atlas and renormalization.
 */
typedef struct ObDynamics ObDynamics;

/**
 * An element a + b√2 of Q(√2).
 */
typedef struct ObQuad ObQuad;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread. Valid until the next failing call.
 */
const char *ob_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ob_string_free(char *s);

/**
 * Parses text such as `1/3+2*r2` or `-r2`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum ObStatus ob_quad_parse(const char *text, struct ObQuad **out);

/**
 * a + b√2 from integers.
 *
 * # Safety
 * `out` must be writable.
 */
enum ObStatus ob_quad_from_ints(int64_t a, int64_t b, struct ObQuad **out);

/**
 * # Safety
 * `q` must be null or a handle from this library that has not been freed.
 */
void ob_quad_free(struct ObQuad *q);

/**
 * `out = a op b`.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum ObStatus ob_quad_arith(enum ObOp op,
                            const struct ObQuad *a,
                            const struct ObQuad *b,
                            struct ObQuad **out);

/**
 * Exact comparison: writes -1, 0 or 1.
 *
 * # Safety
 * `a` and `b` must be live handles; `out` must be writable.
 */
enum ObStatus ob_quad_cmp(const struct ObQuad *a, const struct ObQuad *b, int32_t *out);

/**
 * # Safety
 * `q` must be a live handle; `out` must be writable.
 */
enum ObStatus ob_quad_to_f64(const struct ObQuad *q, double *out);

/**
 * Text form, freed with [`ob_string_free`]. Null on a null handle.
 *
 * # Safety
 * `q` must be null or a live handle.
 */
char *ob_quad_to_string(const struct ObQuad *q);

/**
 * # Safety
 * `out` must be writable.
 */
enum ObStatus ob_dynamics_new(struct ObDynamics **out);

/**
 * # Safety
 * `d` must be null or a live handle.
 */
void ob_dynamics_free(struct ObDynamics *d);

/**
 * Centre of the big octagon renormalized `level` times, the seed of the period-3^level orbit.
 *
 * # Safety
 * `d` must be a live handle; `out_x` and `out_y` must be writable.
 */
enum ObStatus ob_dynamics_tile_center(const struct ObDynamics *d,
                                      uint32_t level,
                                      struct ObQuad **out_x,
                                      struct ObQuad **out_y);

/**
 * One step of the compressed map from (x, y): the image, its region and parity bit.
 *
 * # Safety
 * Handles must be live; all out-pointers must be writable.
 */
enum ObStatus ob_dynamics_step(const struct ObDynamics *d,
                               const struct ObQuad *x,
                               const struct ObQuad *y,
                               struct ObQuad **out_x,
                               struct ObQuad **out_y,
                               uint32_t *out_region,
                               uint8_t *out_parity);

/**
 * Writes `len` symbols of the orbit code into `buf`.
 *
 * # Safety
 * Handles must be live; `buf` must hold `len` values.
 */
enum ObStatus ob_dynamics_orbit_code(const struct ObDynamics *d,
                                     const struct ObQuad *x,
                                     const struct ObQuad *y,
                                     size_t len,
                                     uint32_t *buf);

/**
 * Period of (x, y) from the renormalization descent, or 0 when `cap` levels do not decide it.
 *
 * # Safety
 * Handles must be live; `out_period` must be writable.
 */
enum ObStatus ob_dynamics_period(const struct ObDynamics *d,
                                 const struct ObQuad *x,
                                 const struct ObQuad *y,
                                 uint32_t cap,
                                 uint64_t *out_period);

/**
 * Expands `word` through `steps` substitution rounds into `buf`.
 *
 * `out_len` always receives the full length; when it exceeds `cap` nothing
 * is written and `OB_STATUS_BUFFER_TOO_SMALL` is returned.
 *
 * # Safety
 * `word` must hold `word_len` values and `buf` must hold `cap`.
 */
enum ObStatus ob_substitution_expand(const uint32_t *word,
                                     size_t word_len,
                                     uint32_t steps,
                                     uint32_t *buf,
                                     size_t cap,
                                     size_t *out_len);

/**
 * Runs verification check `id` (1..=17). `out_detail` may be null; otherwise it
 * receives a string to free with [`ob_string_free`].
 *
 * # Safety
 * `out_pass` must be writable; `out_detail` null or writable.
 */
enum ObStatus ob_verify(uint32_t id, bool *out_pass, char **out_detail);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* OCTABILL_H */
